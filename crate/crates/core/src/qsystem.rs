//! Quantum systems, states and measurements under a metric inner product.
//!
//! A system is a Hamiltonian together with the metric that defines its
//! physical inner product. States are rays, so every quantity computed here is
//! invariant under `psi -> c psi` for nonzero complex `c`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{eig, vector, EigenDecomposition, SquareMatrix};
use crate::metric::{quasi_hermiticity_defect, MetricOperator};
use crate::random::rng_from_seed;
use crate::scalar::{Real, C};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants<T> {
    hbar: T,
}

impl<T: Real> PhysicalConstants<T> {
    pub fn new(hbar: T) -> Result<Self> {
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        Ok(Self { hbar })
    }

    /// `hbar = 1`.
    pub fn natural() -> Self {
        Self { hbar: T::one() }
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }
}

/// Hamiltonian plus metric. The system is `closed` when the Hamiltonian is
/// Hermitian with respect to the metric, which makes the evolution unitary in
/// the metric inner product.
#[derive(Clone, Debug)]
pub struct QuantumSystem<T> {
    hamiltonian: SquareMatrix<T>,
    metric: MetricOperator<T>,
    constants: PhysicalConstants<T>,
    closed: bool,
    tol: T,
}

impl<T: Real> QuantumSystem<T> {
    pub fn new(
        hamiltonian: SquareMatrix<T>,
        metric: MetricOperator<T>,
        constants: PhysicalConstants<T>,
        tol: T,
    ) -> Result<Self> {
        if !hamiltonian.is_finite() {
            return Err(Error::InvalidMatrix("non-finite Hamiltonian".into()));
        }
        let closed = quasi_hermiticity_defect(&hamiltonian, &metric)? <= tol;
        Ok(Self {
            hamiltonian,
            metric,
            constants,
            closed,
            tol,
        })
    }

    /// Like [`QuantumSystem::new`] but fails with `NotClosedSystem` unless the
    /// Hamiltonian is Hermitian with respect to the metric.
    pub fn closed(
        hamiltonian: SquareMatrix<T>,
        metric: MetricOperator<T>,
        constants: PhysicalConstants<T>,
        tol: T,
    ) -> Result<Self> {
        let sys = Self::new(hamiltonian, metric, constants, tol)?;
        if !sys.closed {
            return Err(Error::NotClosedSystem);
        }
        Ok(sys)
    }

    /// System with the Euclidean metric.
    pub fn euclidean(
        hamiltonian: SquareMatrix<T>,
        constants: PhysicalConstants<T>,
        tol: T,
    ) -> Result<Self> {
        let metric = MetricOperator::identity(hamiltonian.dim());
        Self::new(hamiltonian, metric, constants, tol)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn hamiltonian(&self) -> &SquareMatrix<T> {
        &self.hamiltonian
    }

    pub fn metric(&self) -> &MetricOperator<T> {
        &self.metric
    }

    pub fn constants(&self) -> PhysicalConstants<T> {
        self.constants
    }

    pub fn hbar(&self) -> T {
        self.constants.hbar
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn tol(&self) -> T {
        self.tol
    }
}

/// One-dimensional subspace spanned by a nonzero representative.
#[derive(Clone, Debug)]
pub struct Ray<T> {
    representative: Vec<C<T>>,
}

impl<T: Real> Ray<T> {
    pub fn new(representative: Vec<C<T>>) -> Result<Self> {
        if representative.is_empty() || vector::is_zero(&representative) {
            return Err(Error::ZeroVector);
        }
        if !representative
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite state vector".into()));
        }
        Ok(Self { representative })
    }

    pub fn representative(&self) -> &[C<T>] {
        &self.representative
    }

    pub fn into_vector(self) -> Vec<C<T>> {
        self.representative
    }

    pub fn dim(&self) -> usize {
        self.representative.len()
    }

    /// Representative with unit metric norm and positive real leading entry.
    pub fn canonical(&self, metric: &MetricOperator<T>) -> Result<Vec<C<T>>> {
        let n = metric.norm(&self.representative)?;
        let mut v: Vec<C<T>> = self.representative.iter().map(|z| z / n).collect();
        vector::fix_phase(&mut v);
        Ok(v)
    }

    /// `sin` of the Euclidean Fubini-Study angle to `other`.
    pub fn distance(&self, other: &Ray<T>) -> Result<T> {
        crate::evolution::ray_distance(
            &MetricOperator::identity(self.dim()),
            &self.representative,
            &other.representative,
        )
    }
}

/// Exact ray equality up to rounding: representatives proportional within a
/// few hundred ulps.
impl<T: Real> PartialEq for Ray<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self
                .distance(other)
                .map(|d| d <= T::epsilon() * T::lit(256.0))
                .unwrap_or(false)
    }
}

/// Observable validated against a system's metric.
#[derive(Clone, Debug)]
pub struct Observable<T> {
    matrix: SquareMatrix<T>,
    certified: bool,
    metric: SquareMatrix<T>,
    spectrum: Option<EigenDecomposition<T>>,
    tol: T,
}

impl<T: Real> Observable<T> {
    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.matrix
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Biorthonormal eigensystem; `None` for degenerate observables.
    pub fn spectrum(&self) -> Option<&EigenDecomposition<T>> {
        self.spectrum.as_ref()
    }

    pub fn is_degenerate(&self) -> bool {
        self.spectrum.is_none()
    }

    fn check_for(&self, sys: &QuantumSystem<T>) -> Result<()> {
        if !self.certified {
            return Err(Error::Uncertified);
        }
        self.matrix.check_same_dim(sys.hamiltonian())?;
        let m = sys.metric().matrix();
        if self.metric.distance(m) > self.tol * m.norm() {
            return Err(Error::Uncertified);
        }
        Ok(())
    }
}

/// Certifies `o` as an observable of `sys`: diagonalizable, with real
/// spectrum, and Hermitian with respect to the system metric.
///
/// Degenerate observables are certified when they are metric-Hermitian (which
/// already implies the other two conditions) but carry no eigensystem, so
/// [`measurement_distribution`] rejects them.
pub fn validate_observable<T: Real>(
    o: &SquareMatrix<T>,
    sys: &QuantumSystem<T>,
    tol: T,
) -> Result<Observable<T>> {
    o.check_same_dim(sys.hamiltonian())?;
    let spectrum = match eig(o, tol) {
        Ok(dec) => {
            let scale = o.norm();
            if let Some(v) = dec.values.iter().find(|v| v.im.abs() > tol * scale) {
                return Err(Error::ComplexSpectrum(format!("{v}")));
            }
            Some(dec)
        }
        Err(Error::Degenerate(_, _)) => None,
        Err(e) => return Err(e),
    };
    let defect = quasi_hermiticity_defect(o, sys.metric())?;
    if defect > tol {
        return Err(Error::NotEtaHermitian(defect.to_f64_lossy()));
    }
    Ok(Observable {
        matrix: o.clone(),
        certified: true,
        metric: sys.metric().matrix().clone(),
        spectrum,
        tol,
    })
}

/// `<<psi, O psi>> / <<psi, psi>>` without discarding the imaginary part.
pub fn expectation_complex<T: Real>(
    o: &Observable<T>,
    sys: &QuantumSystem<T>,
    state: &Ray<T>,
) -> Result<C<T>> {
    o.check_for(sys)?;
    let psi = state.representative();
    vector::check_dim(psi, sys.dim())?;
    let eta = sys.metric();
    let num = eta.inner(psi, &o.matrix.apply(psi))?;
    let den = eta.norm_sqr(psi)?;
    Ok(num / den)
}

/// Expectation value of a certified observable. The imaginary part, zero up
/// to rounding for metric-Hermitian operators, is dropped.
pub fn expectation<T: Real>(
    o: &Observable<T>,
    sys: &QuantumSystem<T>,
    state: &Ray<T>,
) -> Result<T> {
    expectation_complex(o, sys, state).map(|z| z.re)
}

#[derive(Clone, Debug)]
pub struct Outcome<T> {
    pub omega: T,
    pub probability: T,
    pub post: Ray<T>,
}

/// Outcomes sorted by ascending eigenvalue.
#[derive(Clone, Debug)]
pub struct MeasurementDistribution<T> {
    pub outcomes: Vec<Outcome<T>>,
}

impl<T: Real> MeasurementDistribution<T> {
    pub fn total_probability(&self) -> T {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    /// Index of the outcome selected by a uniform variate `u` in `[0, 1)`.
    pub fn select(&self, u: T) -> usize {
        let mut acc = T::zero();
        for (k, o) in self.outcomes.iter().enumerate() {
            acc += o.probability;
            if u < acc {
                return k;
            }
        }
        // rounding left `u` above the cumulative total
        self.outcomes
            .iter()
            .rposition(|o| o.probability > T::zero())
            .unwrap_or(self.outcomes.len() - 1)
    }
}

/// Outcome probabilities
/// `P_w = |<<psi, psi_w>>|^2 / (<<psi, psi>> <<psi_w, psi_w>>)`
/// over the eigenvectors `psi_w` of a non-degenerate certified observable.
pub fn measurement_distribution<T: Real>(
    o: &Observable<T>,
    sys: &QuantumSystem<T>,
    state: &Ray<T>,
) -> Result<MeasurementDistribution<T>> {
    o.check_for(sys)?;
    let dec = o.spectrum.as_ref().ok_or(Error::DegenerateObservable)?;
    let psi = state.representative();
    vector::check_dim(psi, sys.dim())?;
    let eta = sys.metric();
    let psi_norm = eta.norm_sqr(psi)?;
    let mut outcomes = Vec::with_capacity(dec.dim());
    for (value, eigvec) in dec.values.iter().zip(&dec.right) {
        let overlap = eta.inner(psi, eigvec)?;
        let p = overlap.norm_sqr() / (psi_norm * eta.norm_sqr(eigvec)?);
        let post = Ray::new(Ray::new(eigvec.clone())?.canonical(eta)?)?;
        outcomes.push(Outcome {
            omega: value.re,
            probability: p,
            post,
        });
    }
    outcomes.sort_by(|a, b| {
        a.omega
            .partial_cmp(&b.omega)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(MeasurementDistribution { outcomes })
}

/// Samples an outcome with the given RNG.
pub fn collapse_with<T: Real, R: Rng + ?Sized>(
    dist: &MeasurementDistribution<T>,
    rng: &mut R,
) -> (T, Ray<T>) {
    let u: f64 = rng.random();
    let k = dist.select(T::lit(u));
    let o = &dist.outcomes[k];
    (o.omega, o.post.clone())
}

/// Samples an outcome; deterministic in `seed`.
pub fn collapse<T: Real>(dist: &MeasurementDistribution<T>, seed: u64) -> (T, Ray<T>) {
    collapse_with(dist, &mut rng_from_seed(seed))
}
