//! Schrödinger evolution, Fubini-Study geometry and travel-time analysis.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{expm, vector, SquareMatrix};
use crate::metric::{hermitize, metric_from_spectrum, pt_family, EquivalenceMap, MetricOperator};
use crate::qsystem::{QuantumSystem, Ray};
use crate::report::{ExperimentReport, Series};
use crate::scalar::{Real, C};

/// Largest `||H|| dt / hbar` allowed between trajectory samples by default.
pub const DEFAULT_MAX_PHASE_STEP: f64 = 0.1;

/// `exp(-i H t / hbar)`.
pub fn propagator<T: Real>(sys: &QuantumSystem<T>, t: T) -> Result<SquareMatrix<T>> {
    let factor = Complex::new(T::zero(), -t / sys.hbar());
    expm(&sys.hamiltonian().scale(factor))
}

/// `psi(t) = exp(-i H t / hbar) psi0`.
pub fn propagate<T: Real>(sys: &QuantumSystem<T>, psi0: &[C<T>], t: T) -> Result<Vec<C<T>>> {
    vector::check_dim(psi0, sys.dim())?;
    if vector::is_zero(psi0) {
        return Err(Error::ZeroVector);
    }
    if t == T::zero() {
        return Ok(psi0.to_vec());
    }
    Ok(propagator(sys, t)?.apply(psi0))
}

/// Sampled solution of the Schrödinger equation on a uniform time grid.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub vectors: Vec<Vec<C<T>>>,
    pub eta_norms: Vec<T>,
    pub euclid_norms: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    /// Samples `[0, t_final]` with at least `steps` intervals, refined so
    /// that `||H|| dt / hbar <= 0.1`.
    pub fn sample(sys: &QuantumSystem<T>, psi0: &[C<T>], t_final: T, steps: usize) -> Result<Self> {
        Self::sample_with_step(sys, psi0, t_final, steps, T::lit(DEFAULT_MAX_PHASE_STEP))
    }

    pub fn sample_with_step(
        sys: &QuantumSystem<T>,
        psi0: &[C<T>],
        t_final: T,
        steps: usize,
        max_phase_step: T,
    ) -> Result<Self> {
        if !(t_final >= T::zero()) || !t_final.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "final time must be nonnegative, got {t_final}"
            )));
        }
        if !(max_phase_step > T::zero()) {
            return Err(Error::InvalidParameter(
                "phase step must be positive".into(),
            ));
        }
        let needed = (sys.hamiltonian().norm() * t_final / (sys.hbar() * max_phase_step))
            .ceil()
            .to_usize()
            .unwrap_or(usize::MAX);
        let n = if t_final == T::zero() {
            0
        } else {
            steps.max(needed).max(1)
        };
        let mut traj = Trajectory {
            times: Vec::with_capacity(n + 1),
            vectors: Vec::with_capacity(n + 1),
            eta_norms: Vec::with_capacity(n + 1),
            euclid_norms: Vec::with_capacity(n + 1),
        };
        for k in 0..=n {
            let t = if n == 0 {
                T::zero()
            } else {
                t_final * T::lit(k as f64) / T::lit(n as f64)
            };
            let psi = propagate(sys, psi0, t)?;
            traj.eta_norms.push(sys.metric().norm(&psi)?);
            traj.euclid_norms.push(vector::norm(&psi));
            traj.times.push(t);
            traj.vectors.push(psi);
        }
        Ok(traj)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Which triangle of the two-level Jordan-block generator carries the
/// coupling. `Lower` drives `(1, 0)` toward `(0, 1)`; under `Upper` the state
/// `(1, 0)` is an eigenvector and does not move.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FlipConvention {
    #[default]
    Lower,
    Upper,
}

/// `[[E, 0], [a, E]]` (lower) or `[[E, a], [0, E]]` (upper).
pub fn spin_flip_hamiltonian<T: Real>(
    energy: T,
    coupling: T,
    convention: FlipConvention,
) -> SquareMatrix<T> {
    let e = Complex::new(energy, T::zero());
    let a = Complex::new(coupling, T::zero());
    let z = Complex::new(T::zero(), T::zero());
    match convention {
        FlipConvention::Lower => SquareMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => e,
            (1, 0) => a,
            _ => z,
        }),
        FlipConvention::Upper => SquareMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => e,
            (0, 1) => a,
            _ => z,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinFlipParams<T> {
    pub energy: T,
    pub coupling: T,
    pub time: T,
    pub hbar: T,
}

impl<T: Real> SpinFlipParams<T> {
    pub fn new(energy: T, coupling: T, time: T, hbar: T) -> Result<Self> {
        if !(hbar > T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self {
            energy,
            coupling,
            time,
            hbar,
        })
    }

    /// Dimensionless drive `a t / hbar`.
    pub fn drive(&self) -> T {
        self.coupling * self.time / self.hbar
    }
}

/// Normalized state reached from `(1, 0)` under the Jordan-block generator:
/// `(i (1 + x^2)^{-1/2}, x (1 + x^2)^{-1/2})` with `x = a t / hbar`, up to a
/// global phase, which is fixed to one. `x = 0` gives `(1, 0)`.
pub fn spin_flip_closed_form<T: Real>(p: &SpinFlipParams<T>) -> Ray<T> {
    let x = p.drive();
    let zero = Complex::new(T::zero(), T::zero());
    if x == T::zero() {
        return Ray::new(vec![Complex::new(T::one(), T::zero()), zero]).expect("nonzero");
    }
    let r = T::one().hypot(x);
    Ray::new(vec![
        Complex::new(T::zero(), T::one() / r),
        Complex::new(x / r, T::zero()),
    ])
    .expect("nonzero")
}

/// `(epsilon, residual)` with `epsilon = hbar / (|a| t)` and `residual` the
/// ray distance from the closed-form state to the flipped state `(0, 1)`.
pub fn fast_flip_residual<T: Real>(p: &SpinFlipParams<T>) -> Result<(T, T)> {
    if p.coupling == T::zero() || !(p.time > T::zero()) {
        return Err(Error::DegenerateTime {
            a: p.coupling.to_f64_lossy(),
            t: p.time.to_f64_lossy(),
        });
    }
    let eps = p.hbar / (p.coupling.abs() * p.time);
    let state = spin_flip_closed_form(p);
    let flipped = [
        Complex::new(T::zero(), T::zero()),
        Complex::new(T::one(), T::zero()),
    ];
    let residual = ray_distance(
        &MetricOperator::identity(2),
        state.representative(),
        &flipped,
    )?;
    Ok((eps, residual))
}

type VectorPair<T> = (Vec<C<T>>, Vec<C<T>>);

fn unit_pair<T: Real>(
    eta: &MetricOperator<T>,
    psi: &[C<T>],
    phi: &[C<T>],
) -> Result<VectorPair<T>> {
    vector::check_dim(psi, eta.dim())?;
    vector::check_dim(phi, eta.dim())?;
    let np = eta.norm(psi)?;
    let nf = eta.norm(phi)?;
    if np == T::zero() || nf == T::zero() {
        return Err(Error::ZeroVector);
    }
    Ok((
        psi.iter().map(|z| z / np).collect(),
        phi.iter().map(|z| z / nf).collect(),
    ))
}

/// `(cos, sin)` of the Fubini-Study angle. The sine is the metric norm of
/// the component of `phi` orthogonal to `psi`, which stays accurate for
/// nearly equal rays.
fn fs_cos_sin<T: Real>(eta: &MetricOperator<T>, psi: &[C<T>], phi: &[C<T>]) -> Result<(T, T)> {
    let (p, f) = unit_pair(eta, psi, phi)?;
    let ov = eta.inner(&p, &f)?;
    let resid = vector::sub(&f, &vector::scale(&p, ov));
    let sin = eta.norm(&resid)?.min(T::one());
    let cos = ov.norm().min(T::one());
    Ok((cos, sin))
}

/// Fubini-Study angle `arccos(|<<psi, phi>>| / (||psi|| ||phi||))` in
/// `[0, pi/2]` for the metric inner product.
pub fn fs_angle<T: Real>(eta: &MetricOperator<T>, psi: &[C<T>], phi: &[C<T>]) -> Result<T> {
    let (cos, sin) = fs_cos_sin(eta, psi, phi)?;
    Ok(sin.atan2(cos))
}

/// Sine of the Fubini-Study angle; zero iff the rays coincide.
pub fn ray_distance<T: Real>(eta: &MetricOperator<T>, psi: &[C<T>], phi: &[C<T>]) -> Result<T> {
    fs_cos_sin(eta, psi, phi).map(|(_, s)| s)
}

/// Energy uncertainty `sqrt(<H^2> - <H>^2)` in the metric inner product.
pub fn energy_spread<T: Real>(sys: &QuantumSystem<T>, psi: &[C<T>]) -> Result<T> {
    if !sys.is_closed() {
        return Err(Error::NotClosedSystem);
    }
    vector::check_dim(psi, sys.dim())?;
    let eta = sys.metric();
    let norm2 = eta.norm_sqr(psi)?;
    if norm2 == T::zero() {
        return Err(Error::ZeroVector);
    }
    let hpsi = sys.hamiltonian().apply(psi);
    let mean = eta.inner(psi, &hpsi)?.re / norm2;
    let centered = vector::sub(&hpsi, &vector::scale(psi, Complex::new(mean, T::zero())));
    Ok((eta.norm_sqr(&centered)? / norm2).sqrt())
}

/// Rate of change of the Fubini-Study angle, `Delta H / hbar`.
pub fn evolution_speed<T: Real>(sys: &QuantumSystem<T>, psi: &[C<T>]) -> Result<T> {
    Ok(energy_spread(sys, psi)? / sys.hbar())
}

/// Relative drifts `(eta, euclidean)` of the state norm along a trajectory,
/// both measured as `max_k |n_k / n_0 - 1|`.
pub fn eta_norm_audit<T: Real>(traj: &Trajectory<T>, sys: &QuantumSystem<T>) -> Result<(T, T)> {
    let first = traj
        .vectors
        .first()
        .ok_or(Error::InvalidParameter("empty trajectory".into()))?;
    let eta = sys.metric();
    let e0 = eta.norm(first)?;
    let u0 = vector::norm(first);
    if e0 == T::zero() || u0 == T::zero() {
        return Err(Error::ZeroVector);
    }
    let mut eta_drift = T::zero();
    let mut euclid_drift = T::zero();
    for v in &traj.vectors {
        eta_drift = eta_drift.max((eta.norm(v)? / e0 - T::one()).abs());
        euclid_drift = euclid_drift.max((vector::norm(v) / u0 - T::one()).abs());
    }
    Ok((eta_drift, euclid_drift))
}

/// Kinematic travel-time analysis of the evolution from `psi_i` over `[0, T]`.
///
/// Scalars: the metric angle between the endpoints, the Euclidean angle
/// between their images under `rho`, the angle actually covered, the time
/// integral of the speed, the remaining angle to `psi_f`, and the minimal time
/// `hbar * angle / Delta H` any evolution with this energy spread needs.
/// Flags: `isometry` (the two endpoint angles agree within 1e-12) and
/// `speed_bound` (covered angle never exceeds the integrated speed by more
/// than 1e-8).
pub fn travel_time_report<T: Real>(
    sys: &QuantumSystem<T>,
    psi_i: &[C<T>],
    psi_f: &[C<T>],
    t_final: T,
    steps: usize,
) -> Result<ExperimentReport> {
    if !sys.is_closed() {
        return Err(Error::NotClosedSystem);
    }
    let eta = sys.metric();
    let (map, _) = hermitize(sys.hamiltonian(), eta, sys.tol())?;
    let euclid = MetricOperator::identity(sys.dim());

    let angle_eta = fs_angle(eta, psi_i, psi_f)?;
    let angle_mapped = fs_angle(&euclid, &map.map_vector(psi_i)?, &map.map_vector(psi_f)?)?;

    let traj = Trajectory::sample(sys, psi_i, t_final, steps)?;
    let mut series = Series::new(&[
        "t",
        "angle_from_initial",
        "integrated_speed",
        "speed",
        "eta_norm",
    ]);
    let mut integral = T::zero();
    let mut prev_speed = None;
    let mut bound_ok = true;
    let slack = T::lit(1e-8);
    for k in 0..traj.len() {
        let v = &traj.vectors[k];
        let speed = evolution_speed(sys, v)?;
        if let Some(ps) = prev_speed {
            let dt = traj.times[k] - traj.times[k - 1];
            integral += (ps + speed) * dt * T::lit(0.5);
        }
        prev_speed = Some(speed);
        let covered = fs_angle(eta, psi_i, v)?;
        bound_ok &= integral >= covered - slack;
        series.push(vec![
            traj.times[k].to_f64_lossy(),
            covered.to_f64_lossy(),
            integral.to_f64_lossy(),
            speed.to_f64_lossy(),
            traj.eta_norms[k].to_f64_lossy(),
        ]);
    }
    let last = traj.vectors.last().expect("nonempty trajectory");
    let spread = energy_spread(sys, psi_i)?;

    let mut report = ExperimentReport::new("travel_time");
    report
        .real("angle_eta", angle_eta)
        .real("angle_mapped_euclidean", angle_mapped)
        .real("isometry_gap", (angle_eta - angle_mapped).abs())
        .real("angle_covered", fs_angle(eta, psi_i, last)?)
        .real("integrated_speed", integral)
        .real("angle_to_target_at_end", fs_angle(eta, last, psi_f)?)
        .real("energy_spread", spread)
        .real("final_time", t_final);
    if spread > T::zero() {
        report.real("min_travel_time", sys.hbar() * angle_eta / spread);
    }
    report
        .flag(
            "isometry",
            (angle_eta - angle_mapped).abs() <= T::lit(1e-12),
        )
        .flag("speed_bound", bound_ok);
    report.series = series;
    Ok(report)
}

/// First time in `[0, t_max]` at which the evolved ray is closest to `psi_f`,
/// from a grid scan refined by golden-section search. Returns `(t, distance)`.
pub fn arrival_time<T: Real>(
    sys: &QuantumSystem<T>,
    psi_i: &[C<T>],
    psi_f: &[C<T>],
    t_max: T,
    grid: usize,
) -> Result<(T, T)> {
    let eta = sys.metric();
    let grid = grid.max(2);
    let dist = |t: T| -> Result<T> { ray_distance(eta, &propagate(sys, psi_i, t)?, psi_f) };
    let h = t_max / T::lit(grid as f64);
    let mut best = (T::zero(), dist(T::zero())?);
    for k in 1..=grid {
        let t = h * T::lit(k as f64);
        let d = dist(t)?;
        if d < best.1 - T::lit(1e-9) {
            best = (t, d);
        }
    }
    let mut lo = (best.0 - h).max(T::zero());
    let mut hi = (best.0 + h).min(t_max);
    let g = T::lit(0.5 * (5f64.sqrt() - 1.0));
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = dist(x1)?;
    let mut f2 = dist(x2)?;
    for _ in 0..200 {
        if hi - lo <= T::epsilon() * t_max.max(T::one()) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = dist(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = dist(x2)?;
        }
    }
    let t = (lo + hi) * T::lit(0.5);
    let d = dist(t)?;
    Ok(if d <= best.1 { (t, d) } else { best })
}

/// One member of the PT-family sweep.
#[derive(Clone, Debug)]
pub struct AnisotropyPoint<T> {
    pub theta: T,
    pub metric_condition: T,
    /// Metric angle between the basis rays `(1, 0)` and `(0, 1)`.
    pub eta_angle: T,
    /// Euclidean angle between their images under `rho`.
    pub mapped_angle: T,
}

/// Sweeps `pt_family(r, s, theta)` over `thetas`. As `theta` approaches the
/// exceptional point `|r sin(theta)| = |s|` the metric grows anisotropic and
/// the physical angle between the two basis states closes.
pub fn pt_anisotropy_sweep<T: Real>(
    r: T,
    s: T,
    thetas: &[T],
    tol: T,
) -> Result<Vec<AnisotropyPoint<T>>> {
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let e1 = [one, zero];
    let e2 = [zero, one];
    let euclid = MetricOperator::identity(2);
    thetas
        .iter()
        .map(|&theta| {
            let h = pt_family(r, s, theta);
            let eta = metric_from_spectrum(&h, tol)?;
            let map = EquivalenceMap::from_metric(&eta)?;
            Ok(AnisotropyPoint {
                theta,
                metric_condition: eta.condition()?,
                eta_angle: fs_angle(&eta, &e1, &e2)?,
                mapped_angle: fs_angle(&euclid, &map.map_vector(&e1)?, &map.map_vector(&e2)?)?,
            })
        })
        .collect()
}
