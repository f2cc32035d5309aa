//! Experiments on the composite scheme, in which an operator is identified
//! with its conjugacy class `{g h g^-1}` and measured through a Hermitian
//! member of that class while the dynamics is generated by a non-Hermitian
//! member.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{propagator, spin_flip_hamiltonian, FlipConvention, Trajectory};
use crate::linalg::{eigenvalues, eigh, expm, inverse, spectrum_distance, vector, SquareMatrix};
use crate::metric::{quasi_hermiticity_defect, MetricOperator};
use crate::qsystem::{
    measurement_distribution, validate_observable, MeasurementDistribution, PhysicalConstants,
    QuantumSystem, Ray,
};
use crate::random::{derive_seed, rng_from_seed};
use crate::report::{ExperimentReport, Series};
use crate::scalar::{Real, C};

/// `g h g^-1` together with its ingredients.
#[derive(Clone, Debug)]
pub struct ConjugacyElement<T> {
    pub base: SquareMatrix<T>,
    pub transform: SquareMatrix<T>,
    pub element: SquareMatrix<T>,
}

impl<T: Real> ConjugacyElement<T> {
    /// Multiset distance between the spectra of `element` and `base`.
    pub fn isospectrality_defect(&self) -> Result<T> {
        let a = eigenvalues(&self.element)?;
        let b: Vec<C<T>> = eigh(&self.base)?
            .values
            .iter()
            .map(|&x| Complex::new(x, T::zero()))
            .collect();
        Ok(spectrum_distance(&a, &b))
    }
}

/// `g h g^-1` for Hermitian `h` and invertible `g`.
pub fn conjugate<T: Real>(
    h: &SquareMatrix<T>,
    g: &SquareMatrix<T>,
    tol: T,
) -> Result<ConjugacyElement<T>> {
    h.check_same_dim(g)?;
    let defect = h.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitianBase(defect.to_f64_lossy()));
    }
    let g_inv = inverse(g).map_err(|_| Error::SingularTransform)?;
    let cond = g.norm() * g_inv.norm();
    if !cond.is_finite() || cond * T::epsilon() >= T::one() {
        return Err(Error::SingularTransform);
    }
    Ok(ConjugacyElement {
        base: h.clone(),
        transform: g.clone(),
        element: &(g * h) * &g_inv,
    })
}

/// Distinct Hermitian members `u h u^-1` over the probe transforms.
/// Two members are distinct when their Frobenius distance exceeds
/// `tol * ||h||`.
pub fn hermitian_members<T: Real>(
    h: &SquareMatrix<T>,
    probes: &[SquareMatrix<T>],
    tol: T,
) -> Result<Vec<SquareMatrix<T>>> {
    let scale = h.norm();
    let mut members: Vec<SquareMatrix<T>> = Vec::new();
    for u in probes {
        let m = conjugate(h, u, tol)?.element;
        if !m.is_hermitian(tol) {
            continue;
        }
        if members.iter().all(|k| k.distance(&m) > tol * scale) {
            members.push(m);
        }
    }
    Ok(members)
}

/// How an operator is carried along by a non-Hermitian generator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeisenbergConvention {
    /// `e^{iHt} O e^{-iHt}`: spectrum preserving.
    #[default]
    Similarity,
    /// `e^{iH^H t} O e^{-iHt}`: reproduces Euclidean expectation values.
    Adjoint,
}

pub fn heisenberg_evolve<T: Real>(
    o: &SquareMatrix<T>,
    h: &SquareMatrix<T>,
    t: T,
    convention: HeisenbergConvention,
    hbar: T,
) -> Result<SquareMatrix<T>> {
    o.check_same_dim(h)?;
    if !(hbar > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let phase = Complex::new(T::zero(), t / hbar);
    let forward = expm(&h.scale(-phase))?;
    let back = match convention {
        HeisenbergConvention::Similarity => expm(&h.scale(phase))?,
        HeisenbergConvention::Adjoint => forward.adjoint(),
    };
    Ok(&(&back * o) * &forward)
}

fn relative_drift<T: Real>(values: &[T], scale: T) -> T {
    let x0 = values[0];
    let denom = x0.abs().max(scale);
    if denom == T::zero() {
        return T::zero();
    }
    values
        .iter()
        .fold(T::zero(), |m, &x| m.max((x - x0).abs() / denom))
}

/// Tracks `<H>_eta` and the Euclidean `<h>` along the same `H`-evolution.
///
/// Drifts are `max_t |x(t) - x(0)| / max(|x(0)|, ||op||)`.
#[allow(clippy::too_many_arguments)]
pub fn energy_conservation_audit<T: Real>(
    hamiltonian: &SquareMatrix<T>,
    hermitian: &SquareMatrix<T>,
    eta: &MetricOperator<T>,
    psi0: &[C<T>],
    t_final: T,
    steps: usize,
    hbar: T,
    tol: T,
) -> Result<ExperimentReport> {
    hamiltonian.check_same_dim(hermitian)?;
    let defect = hermitian.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitianBase(defect.to_f64_lossy()));
    }
    let qh = quasi_hermiticity_defect(hamiltonian, eta)?;
    if qh > tol {
        return Err(Error::NotQuasiHermitian(qh.to_f64_lossy()));
    }
    let sys = QuantumSystem::closed(
        hamiltonian.clone(),
        eta.clone(),
        PhysicalConstants::new(hbar)?,
        tol,
    )?;
    let traj = Trajectory::sample(&sys, psi0, t_final, steps)?;

    let mut eta_energy = Vec::with_capacity(traj.len());
    let mut euclid_energy = Vec::with_capacity(traj.len());
    let mut series = Series::new(&["t", "eta_energy", "euclidean_hermitian_energy"]);
    for (t, v) in traj.times.iter().zip(&traj.vectors) {
        let e = eta.inner(v, &hamiltonian.apply(v))?.re / eta.norm_sqr(v)?;
        let u = vector::dot(v, &hermitian.apply(v)).re / vector::norm_sqr(v);
        series.push(vec![t.to_f64_lossy(), e.to_f64_lossy(), u.to_f64_lossy()]);
        eta_energy.push(e);
        euclid_energy.push(u);
    }
    let eta_drift = relative_drift(&eta_energy, hamiltonian.norm());
    let euclid_drift = relative_drift(&euclid_energy, hermitian.norm());

    let mut report = ExperimentReport::new("energy_audit");
    report
        .real("eta_energy_drift", eta_drift)
        .real("euclidean_energy_drift", euclid_drift)
        .real("commutator_norm", hermitian.commutator(hamiltonian).norm())
        .real("final_time", t_final)
        .int("samples", traj.len() as i64)
        .flag("eta_energy_conserved", eta_drift <= T::lit(1e-8));
    report.series = series;
    Ok(report)
}

/// Generator used between the two measurements.
#[derive(Clone, Debug)]
pub enum Dynamics<T> {
    Fixed(SquareMatrix<T>),
    /// Jordan-block generator with coupling `a = c hbar / delta_t`, so that
    /// `a delta_t / hbar = c` for every interval.
    ScaledFlip {
        energy: T,
        c: T,
        convention: FlipConvention,
    },
}

impl<T: Real> Dynamics<T> {
    pub fn hamiltonian(&self, delta_t: T, hbar: T) -> SquareMatrix<T> {
        match self {
            Dynamics::Fixed(h) => h.clone(),
            Dynamics::ScaledFlip {
                energy,
                c,
                convention,
            } => spin_flip_hamiltonian(*energy, *c * hbar / delta_t, *convention),
        }
    }

    pub fn is_scaled(&self) -> bool {
        matches!(self, Dynamics::ScaledFlip { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub eigenvalue: f64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatedMeasurementReport {
    pub delta_t: f64,
    pub trials: u64,
    pub repeat_probability: f64,
    /// Exact agreement probability of the protocol.
    pub expected_repeat_probability: f64,
    /// Outcomes of the second measurement.
    pub outcome_histogram: Vec<HistogramBin>,
    pub repeats: u64,
    pub seed: u64,
    pub scale_coupling: bool,
}

impl RepeatedMeasurementReport {
    /// Binomial standard error at the exact agreement probability.
    pub fn sigma(&self) -> f64 {
        let p = self.expected_repeat_probability;
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Whether the observed frequency lies within `k` standard errors of the
    /// exact probability.
    pub fn within_sigmas(&self, k: f64) -> bool {
        (self.repeat_probability - self.expected_repeat_probability).abs() <= k * self.sigma()
    }
}

/// Measure `h` on `psi0` (Euclidean Born rule), evolve the collapsed state
/// for `delta_t`, measure `h` again; repeated `trials` times with per-trial
/// seeds derived from `seed`.
#[allow(clippy::too_many_arguments)]
pub fn repeated_measurement_experiment<T: Real>(
    dynamics: &Dynamics<T>,
    hermitian: &SquareMatrix<T>,
    psi0: &[C<T>],
    delta_t: T,
    trials: u64,
    seed: u64,
    hbar: T,
    tol: T,
) -> Result<RepeatedMeasurementReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if !(delta_t > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "delta_t must be positive, got {delta_t}"
        )));
    }
    let defect = hermitian.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitianBase(defect.to_f64_lossy()));
    }
    let constants = PhysicalConstants::new(hbar)?;
    let measured = QuantumSystem::euclidean(hermitian.clone(), constants, tol)?;
    let observable = validate_observable(hermitian, &measured, tol)?;
    if observable.is_degenerate() {
        return Err(Error::DegenerateObservable);
    }
    let generator = dynamics.hamiltonian(delta_t, hbar);
    generator.check_same_dim(hermitian)?;
    let evolving = QuantumSystem::euclidean(generator, constants, tol)?;
    let step = propagator(&evolving, delta_t)?;

    let first = measurement_distribution(&observable, &measured, &Ray::new(psi0.to_vec())?)?;
    let second: Vec<MeasurementDistribution<T>> = first
        .outcomes
        .iter()
        .map(|o| {
            let evolved = Ray::new(step.apply(o.post.representative()))?;
            measurement_distribution(&observable, &measured, &evolved)
        })
        .collect::<Result<_>>()?;

    let expected: T = first
        .outcomes
        .iter()
        .enumerate()
        .map(|(k, o)| o.probability * second[k].outcomes[k].probability)
        .sum();

    let mut counts = vec![0u64; first.outcomes.len()];
    let mut repeats = 0u64;
    for trial in 0..trials {
        let mut rng = rng_from_seed(derive_seed(seed, trial));
        let i = first.select(T::lit(rng.random::<f64>()));
        let j = second[i].select(T::lit(rng.random::<f64>()));
        counts[j] += 1;
        if i == j {
            repeats += 1;
        }
    }
    Ok(RepeatedMeasurementReport {
        delta_t: delta_t.to_f64_lossy(),
        trials,
        repeat_probability: repeats as f64 / trials as f64,
        expected_repeat_probability: expected.to_f64_lossy(),
        outcome_histogram: first
            .outcomes
            .iter()
            .zip(&counts)
            .map(|(o, &count)| HistogramBin {
                eigenvalue: o.omega.to_f64_lossy(),
                count,
            })
            .collect(),
        repeats,
        seed,
        scale_coupling: dynamics.is_scaled(),
    })
}
