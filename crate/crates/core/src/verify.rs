//! Randomized invariant suites. Each case function returns the measured
//! defect for one instance; [`run_suite`] aggregates them into a report.

use num_complex::Complex;

use crate::composite::{conjugate, heisenberg_evolve, HeisenbergConvention};
use crate::error::Result;
use crate::evolution::{
    evolution_speed, fast_flip_residual, fs_angle, propagate, ray_distance, spin_flip_closed_form,
    spin_flip_hamiltonian, FlipConvention, SpinFlipParams,
};
use crate::linalg::{eig, eigh, expm, spectrum_distance, sqrtm_pd, vector, SquareMatrix};
use crate::metric::{hermitize, MetricOperator};
use crate::qsystem::{
    measurement_distribution, validate_observable, PhysicalConstants, QuantumSystem, Ray,
};
use crate::random::{derive_seed, QuasiHermitianInstance, Sampler};
use crate::report::ExperimentReport;
use crate::scalar::{Real, C};

/// Worst observed value of one property against its threshold.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub threshold: f64,
    pub worst: f64,
    pub cases: usize,
    pub failures: usize,
}

impl Check {
    pub fn new(name: &'static str, threshold: f64) -> Self {
        Self {
            name,
            threshold,
            worst: 0.0,
            cases: 0,
            failures: 0,
        }
    }

    pub fn record(&mut self, value: f64) {
        self.cases += 1;
        if value.is_nan() || value > self.threshold {
            self.failures += 1;
        }
        if value.is_nan() || value > self.worst {
            self.worst = value;
        }
    }

    /// A numerical error counts as a failed case.
    pub fn record_result<T: Real>(&mut self, value: Result<T>) {
        match value {
            Ok(v) => self.record(v.to_f64_lossy()),
            Err(_) => self.record(f64::NAN),
        }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures == 0
    }

    pub fn write_to(&self, report: &mut ExperimentReport) {
        report.scalars.insert(
            format!("{}.worst", self.name),
            crate::report::ScalarValue::Real(self.worst),
        );
        report.int(&format!("{}.cases", self.name), self.cases as i64);
        report.flag(self.name, self.passed());
    }
}

fn metric_of<T: Real>(inst: &QuasiHermitianInstance<T>, tol: T) -> Result<MetricOperator<T>> {
    MetricOperator::new(inst.metric.clone(), tol)
}

/// `(relative hermiticity defect of h, spectrum distance between h and H)`.
pub fn hermitization_case<T: Real>(inst: &QuasiHermitianInstance<T>, tol: T) -> Result<(T, T)> {
    let eta = metric_of(inst, tol)?;
    let (_, h) = hermitize(&inst.hamiltonian, &eta, tol)?;
    let spec_h: Vec<C<T>> = eigh(&h)?
        .values
        .iter()
        .map(|&x| Complex::new(x, T::zero()))
        .collect();
    let spec_big = eig(&inst.hamiltonian, tol)?.values;
    Ok((
        h.hermiticity_defect(),
        spectrum_distance(&spec_h, &spec_big),
    ))
}

/// `(max per-outcome gap, |sum P - 1|, max gap under psi -> c psi)` between
/// the metric measurement rule for `H` and the Euclidean Born rule for the
/// Hermitized pair.
pub fn measurement_case<T: Real>(
    inst: &QuasiHermitianInstance<T>,
    psi: &[C<T>],
    factor: C<T>,
    tol: T,
) -> Result<(T, T, T)> {
    let eta = metric_of(inst, tol)?;
    let (map, h) = hermitize(&inst.hamiltonian, &eta, tol)?;
    let sys = QuantumSystem::closed(
        inst.hamiltonian.clone(),
        eta,
        PhysicalConstants::natural(),
        tol,
    )?;
    let obs = validate_observable(&inst.hamiltonian, &sys, tol)?;
    let dist = measurement_distribution(&obs, &sys, &Ray::new(psi.to_vec())?)?;
    let scaled = measurement_distribution(&obs, &sys, &Ray::new(vector::scale(psi, factor))?)?;

    let mapped = map.map_vector(psi)?;
    let mapped_norm = vector::norm_sqr(&mapped);
    let he = eigh(&h)?;
    let mut gap = T::zero();
    for (k, out) in dist.outcomes.iter().enumerate() {
        let born = vector::dot(&he.vector(k), &mapped).norm_sqr() / mapped_norm;
        gap = gap.max((born - out.probability).abs());
    }
    let scale_gap = dist
        .probabilities()
        .iter()
        .zip(scaled.probabilities())
        .fold(T::zero(), |m, (a, b)| m.max((*a - b).abs()));
    Ok((gap, (dist.total_probability() - T::one()).abs(), scale_gap))
}

/// `|fs_angle(eta, psi, phi) - fs_angle(I, rho psi, rho phi)|`.
pub fn isometry_case<T: Real>(
    inst: &QuasiHermitianInstance<T>,
    psi: &[C<T>],
    phi: &[C<T>],
    tol: T,
) -> Result<T> {
    let eta = metric_of(inst, tol)?;
    let (map, _) = hermitize(&inst.hamiltonian, &eta, tol)?;
    let a = fs_angle(&eta, psi, phi)?;
    let b = fs_angle(
        &MetricOperator::identity(eta.dim()),
        &map.map_vector(psi)?,
        &map.map_vector(phi)?,
    )?;
    Ok((a - b).abs())
}

/// Largest relative metric-norm drift on a grid of `samples` times with
/// `||H|| t / hbar` up to `horizon`.
pub fn eta_unitarity_case<T: Real>(
    inst: &QuasiHermitianInstance<T>,
    psi: &[C<T>],
    horizon: T,
    samples: usize,
    tol: T,
) -> Result<T> {
    let eta = metric_of(inst, tol)?;
    let sys = QuantumSystem::closed(
        inst.hamiltonian.clone(),
        eta,
        PhysicalConstants::natural(),
        tol,
    )?;
    let n0 = sys.metric().norm_sqr(psi)?;
    let t_max = horizon / inst.hamiltonian.norm();
    let mut worst = T::zero();
    for k in 1..=samples {
        let t = t_max * T::lit(k as f64) / T::lit(samples as f64);
        let v = propagate(&sys, psi, t)?;
        worst = worst.max((sys.metric().norm_sqr(&v)? - n0).abs() / n0);
    }
    Ok(worst)
}

/// Gap between the one-sided finite-difference angle rate at `t = 0` and
/// `Delta H / hbar`.
pub fn speed_case<T: Real>(
    inst: &QuasiHermitianInstance<T>,
    psi: &[C<T>],
    step: T,
    tol: T,
) -> Result<T> {
    let eta = metric_of(inst, tol)?;
    let sys = QuantumSystem::closed(
        inst.hamiltonian.clone(),
        eta,
        PhysicalConstants::natural(),
        tol,
    )?;
    let speed = evolution_speed(&sys, psi)?;
    let moved = propagate(&sys, psi, step)?;
    let rate = fs_angle(sys.metric(), psi, &moved)? / step;
    Ok((rate - speed).abs())
}

/// Ray distance between the propagated spin-flip state and the closed form.
pub fn closed_form_case<T: Real>(p: &SpinFlipParams<T>, tol: T) -> Result<T> {
    let h = spin_flip_hamiltonian(p.energy, p.coupling, FlipConvention::Lower);
    let sys = QuantumSystem::euclidean(h, PhysicalConstants::new(p.hbar)?, tol)?;
    let e1 = [
        Complex::new(T::one(), T::zero()),
        Complex::new(T::zero(), T::zero()),
    ];
    let v = propagate(&sys, &e1, p.time)?;
    ray_distance(
        &MetricOperator::identity(2),
        &v,
        spin_flip_closed_form(p).representative(),
    )
}

/// `|residual - (1 + (a t / hbar)^2)^{-1/2}|`.
pub fn residual_law_case<T: Real>(p: &SpinFlipParams<T>) -> Result<T> {
    let (_, residual) = fast_flip_residual(p)?;
    let exact = T::one() / T::one().hypot(p.drive());
    Ok((residual - exact).abs())
}

/// `||expm(M) expm(-M) - I||`.
pub fn expm_inverse_case<T: Real>(m: &SquareMatrix<T>) -> Result<T> {
    let p = &expm(m)? * &expm(&-m)?;
    Ok(p.distance(&SquareMatrix::identity(m.dim())))
}

/// `||sqrtm(M)^2 - M|| / ||M||`.
pub fn sqrtm_case<T: Real>(m: &SquareMatrix<T>, tol: T) -> Result<T> {
    let r = sqrtm_pd(m, tol)?;
    Ok((&r * &r).distance(m) / m.norm())
}

/// Spectrum distance between a random conjugate and its base.
pub fn conjugation_case<T: Real>(h: &SquareMatrix<T>, g: &SquareMatrix<T>, tol: T) -> Result<T> {
    let e = conjugate(h, g, tol)?;
    e.isospectrality_defect()
}

/// `||H(t) - H|| / ||H||` under similarity Heisenberg evolution.
pub fn heisenberg_fixed_point_case<T: Real>(h: &SquareMatrix<T>, t: T) -> Result<T> {
    let ht = heisenberg_evolve(h, h, t, HeisenbergConvention::Similarity, T::one())?;
    Ok(ht.distance(h) / h.norm())
}

/// Runs every suite on `cases` random instances whose dimensions cycle
/// through `2..=max_dim`.
pub fn run_suite(max_dim: usize, cases: usize, seed: u64, tol: f64) -> Result<ExperimentReport> {
    let max_dim = max_dim.max(2);
    let mut s = Sampler::<f64>::new(derive_seed(seed, 0));

    let mut checks = [
        Check::new("linalg.expm_inverse", 1e-10),
        Check::new("linalg.sqrtm_square", 1e-10),
        Check::new("linalg.adjoint_involution", 0.0),
        Check::new("metric.hermitization_defect", 1e-10),
        Check::new("metric.hermitization_spectrum", 1e-8),
        Check::new("qsystem.measurement_equivalence", 1e-10),
        Check::new("qsystem.probability_sum", 1e-12),
        Check::new("qsystem.scale_invariance", 1e-12),
        Check::new("evolution.eta_unitarity", 1e-8),
        Check::new("evolution.isometry", 1e-12),
        Check::new("evolution.speed_identity", 1e-6),
        Check::new("evolution.closed_form", 1e-10),
        Check::new("evolution.residual_law", 1e-12),
        Check::new("composite.isospectrality", 1e-8),
        Check::new("composite.heisenberg_fixed_point", 1e-10),
    ];

    for k in 0..cases {
        let n = 2 + k % (max_dim - 1);
        let g = s.ginibre(n);
        checks[0].record_result(expm_inverse_case(&g));
        let m = s.metric(n, 100.0);
        checks[1].record_result(sqrtm_case(&m, tol));
        checks[2].record(g.adjoint().adjoint().distance(&g));

        let inst = s.quasi_hermitian(n);
        match hermitization_case(&inst, tol) {
            Ok((d, sp)) => {
                checks[3].record(d);
                checks[4].record(sp);
            }
            Err(_) => {
                checks[3].record(f64::NAN);
                checks[4].record(f64::NAN);
            }
        }
        let psi = s.vector(n);
        let phi = s.vector(n);
        let factor = s.nonzero_scale();
        match measurement_case(&inst, &psi, factor, tol) {
            Ok((gap, sum, scale)) => {
                checks[5].record(gap);
                checks[6].record(sum);
                checks[7].record(scale);
            }
            Err(_) => (5..8).for_each(|i| checks[i].record(f64::NAN)),
        }
        checks[8].record_result(eta_unitarity_case(&inst, &psi, 20.0, 8, tol));
        checks[9].record_result(isometry_case(&inst, &psi, &phi, tol));
        checks[10].record_result(speed_case(&inst, &psi, 1e-5, tol));

        let p = SpinFlipParams::new(
            s.uniform(-5.0, 5.0),
            s.uniform(-50.0, 50.0),
            s.uniform(0.0, 2.0),
            1.0,
        )?;
        checks[11].record_result(closed_form_case(&p, tol));
        let p = SpinFlipParams::new(
            0.0,
            s.uniform(0.5, 1e3),
            s.uniform(1e-3, 1.0),
            s.uniform(0.5, 2.0),
        )?;
        checks[12].record_result(residual_law_case(&p));

        let u = s.invertible(n, 100.0);
        checks[13].record_result(conjugation_case(&inst.hermitian, &u, tol));
        checks[14].record_result(heisenberg_fixed_point_case(
            &inst.hamiltonian,
            s.uniform(0.1, 5.0),
        ));
    }

    let mut report = ExperimentReport::new("verify");
    for c in &checks {
        c.write_to(&mut report);
    }
    report
        .int("cases", cases as i64)
        .int("max_dim", max_dim as i64);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let r = run_suite(4, 12, 11, 1e-10).unwrap();
        assert!(r.all_pass(), "{:?}", r.failed_flags());
    }

    #[test]
    fn check_counts_errors_as_failures() {
        let mut c = Check::new("x", 1.0);
        c.record(0.5);
        c.record_result::<f64>(Err(crate::error::Error::Singular));
        assert_eq!(c.failures, 1);
        assert!(!c.passed());
    }
}
