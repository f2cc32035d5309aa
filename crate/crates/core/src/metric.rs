//! Metric operators and the Hermitizing equivalence map.
//!
//! An inner product `<<psi, phi>> = psi^H eta phi` is represented by its
//! metric `eta`, a Hermitian positive-definite matrix. An operator `H` is
//! quasi-Hermitian when `eta H = H^H eta`; the positive square root
//! `rho = eta^{1/2}` then maps it to the Hermitian `h = rho H rho^{-1}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, eig, eigh, vector, SquareMatrix};
use crate::scalar::{Real, C};

/// Hermitian positive-definite metric, certified at tolerance `tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricOperator<T> {
    eta: SquareMatrix<T>,
    tol: T,
}

impl<T: Real> MetricOperator<T> {
    /// Validates Hermiticity (relative defect at most `tol`) and positivity
    /// (smallest eigenvalue above `tol * ||eta||`).
    pub fn new(eta: SquareMatrix<T>, tol: T) -> Result<Self> {
        if !eta.is_finite() {
            return Err(Error::InvalidMatrix("non-finite metric".into()));
        }
        let defect = eta.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect.to_f64_lossy()));
        }
        let min = eigh(&eta)?.values[0];
        if min <= tol * eta.norm() {
            return Err(Error::NotPositiveDefinite(min.to_f64_lossy()));
        }
        Ok(Self { eta, tol })
    }

    /// Euclidean metric.
    pub fn identity(dim: usize) -> Self {
        Self {
            eta: SquareMatrix::identity(dim),
            tol: T::default_tol(),
        }
    }

    pub fn matrix(&self) -> &SquareMatrix<T> {
        &self.eta
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.eta.dim()
    }

    /// Condition number `lambda_max / lambda_min`.
    pub fn condition(&self) -> Result<T> {
        let e = eigh(&self.eta)?;
        Ok(e.values[e.values.len() - 1] / e.values[0])
    }

    pub fn inner(&self, psi: &[C<T>], phi: &[C<T>]) -> Result<C<T>> {
        inner(self, psi, phi)
    }

    pub fn norm_sqr(&self, psi: &[C<T>]) -> Result<T> {
        Ok(inner(self, psi, psi)?.re.max(T::zero()))
    }

    pub fn norm(&self, psi: &[C<T>]) -> Result<T> {
        self.norm_sqr(psi).map(T::sqrt)
    }
}

/// `<<psi, phi>> = psi^H eta phi`.
pub fn inner<T: Real>(eta: &MetricOperator<T>, psi: &[C<T>], phi: &[C<T>]) -> Result<C<T>> {
    vector::check_dim(psi, eta.dim())?;
    vector::check_dim(phi, eta.dim())?;
    Ok(vector::dot(psi, &eta.eta.apply(phi)))
}

/// `||eta H - H^H eta|| / (||eta|| ||H||)`, zero for `H = 0`.
pub fn quasi_hermiticity_defect<T: Real>(
    h: &SquareMatrix<T>,
    eta: &MetricOperator<T>,
) -> Result<T> {
    h.check_same_dim(&eta.eta)?;
    let scale = eta.eta.norm() * h.norm();
    if scale == T::zero() {
        return Ok(T::zero());
    }
    let lhs = &eta.eta * h;
    let rhs = &h.adjoint() * &eta.eta;
    Ok(lhs.distance(&rhs) / scale)
}

/// Whether `H` is Hermitian with respect to `<<., .>>`.
pub fn is_quasi_hermitian<T: Real>(
    h: &SquareMatrix<T>,
    eta: &MetricOperator<T>,
    tol: T,
) -> Result<bool> {
    Ok(quasi_hermiticity_defect(h, eta)? <= tol)
}

/// Metric `sum_n phi_n phi_n^H` built from the biorthonormal left
/// eigenvectors of `H` (unit-norm right eigenvectors fix the scale).
pub fn metric_from_spectrum<T: Real>(h: &SquareMatrix<T>, tol: T) -> Result<MetricOperator<T>> {
    let weights = vec![T::one(); h.dim()];
    metric_from_spectrum_weighted(h, &weights, tol)
}

/// Metric `sum_n c_n phi_n phi_n^H` for positive weights `c_n`, one per
/// eigenvalue in the order returned by [`linalg::eig`]. Every positive choice
/// yields a valid metric; the unit weights are the canonical one.
pub fn metric_from_spectrum_weighted<T: Real>(
    h: &SquareMatrix<T>,
    weights: &[T],
    tol: T,
) -> Result<MetricOperator<T>> {
    vector::check_dim(weights, h.dim())?;
    if weights.iter().any(|&w| !(w > T::zero()) || !w.is_finite()) {
        return Err(Error::InvalidParameter(
            "metric weights must be positive".into(),
        ));
    }
    let dec = eig(h, tol)?;
    let scale = h.norm();
    if let Some(v) = dec.values.iter().find(|v| v.im.abs() > tol * scale) {
        return Err(Error::ComplexSpectrum(format!("{v}")));
    }
    let n = h.dim();
    let mut eta = SquareMatrix::zeros(n);
    for (phi, &w) in dec.left.iter().zip(weights) {
        eta = &eta + &SquareMatrix::outer(phi, phi).scale_real(w);
    }
    let metric = MetricOperator::new(eta, tol)?;
    let defect = quasi_hermiticity_defect(h, &metric)?;
    if defect > tol {
        return Err(Error::NotQuasiHermitian(defect.to_f64_lossy()));
    }
    Ok(metric)
}

/// Unitary map from the metric Hilbert space onto the Euclidean one.
#[derive(Clone, Debug)]
pub struct EquivalenceMap<T> {
    pub rho: SquareMatrix<T>,
    pub rho_inv: SquareMatrix<T>,
}

impl<T: Real> EquivalenceMap<T> {
    /// `rho = eta^{1/2}`.
    pub fn from_metric(eta: &MetricOperator<T>) -> Result<Self> {
        let (rho, rho_inv) = linalg::sqrtm_pd_with_inverse(&eta.eta, eta.tol)?;
        Ok(Self { rho, rho_inv })
    }

    /// `psi -> rho psi`.
    pub fn map_vector(&self, psi: &[C<T>]) -> Result<Vec<C<T>>> {
        self.rho.try_apply(psi)
    }

    /// `psi -> rho^{-1} psi`.
    pub fn pull_back_vector(&self, psi: &[C<T>]) -> Result<Vec<C<T>>> {
        self.rho_inv.try_apply(psi)
    }

    /// `O -> rho O rho^{-1}`.
    pub fn map_operator(&self, o: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
        o.check_same_dim(&self.rho)?;
        Ok(&(&self.rho * o) * &self.rho_inv)
    }

    /// `o -> rho^{-1} o rho`.
    pub fn pull_back_operator(&self, o: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
        o.check_same_dim(&self.rho)?;
        Ok(&(&self.rho_inv * o) * &self.rho)
    }
}

/// Hermitian representative `h = rho H rho^{-1}` of a quasi-Hermitian `H`.
///
/// The positive square root is used for `rho`; any other choice differs by a
/// unitary factor on the left.
pub fn hermitize<T: Real>(
    h: &SquareMatrix<T>,
    eta: &MetricOperator<T>,
    tol: T,
) -> Result<(EquivalenceMap<T>, SquareMatrix<T>)> {
    let defect = quasi_hermiticity_defect(h, eta)?;
    if defect > tol {
        return Err(Error::NotQuasiHermitian(defect.to_f64_lossy()));
    }
    let map = EquivalenceMap::from_metric(eta)?;
    let herm = map.map_operator(h)?;
    Ok((map, herm))
}

/// Two-level PT-symmetric family `[[r e^{i theta}, s], [s, r e^{-i theta}]]`.
///
/// The spectrum `r cos(theta) +- sqrt(s^2 - r^2 sin^2(theta))` is real when
/// `s^2 > r^2 sin^2(theta)`.
pub fn pt_family<T: Real>(r: T, s: T, theta: T) -> SquareMatrix<T> {
    let d = Complex::from_polar(r, theta);
    let off = Complex::new(s, T::zero());
    SquareMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => d,
        (1, 1) => d.conj(),
        _ => off,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn inner_examples() {
        let id = MetricOperator::<f64>::identity(2);
        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(inner(&id, &e1, &e2).unwrap(), c(0.0, 0.0));
        let d = MetricOperator::new(SquareMatrix::diag_real(&[2.0, 3.0]), 1e-10).unwrap();
        let ones = [c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(inner(&d, &ones, &ones).unwrap(), c(5.0, 0.0));
        assert!(matches!(
            inner(&d, &ones, &[c(1.0, 0.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn metric_validation() {
        assert!(matches!(
            MetricOperator::new(SquareMatrix::<f64>::diag_real(&[1.0, -1.0]), 1e-10),
            Err(Error::NotPositiveDefinite(_))
        ));
        let nh = SquareMatrix::<f64>::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap();
        assert!(matches!(
            MetricOperator::new(nh, 1e-10),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn hermitian_input_has_identity_metric() {
        let h = SquareMatrix::<f64>::diag_real(&[1.0, 2.0]);
        let eta = metric_from_spectrum(&h, 1e-10).unwrap();
        assert!(eta.matrix().distance(&SquareMatrix::identity(2)) < 1e-15);
        let id = MetricOperator::identity(2);
        assert!(is_quasi_hermitian(&h, &id, 1e-10).unwrap());
        let (map, herm) = hermitize(&h, &id, 1e-10).unwrap();
        assert!(map.rho.distance(&SquareMatrix::identity(2)) < 1e-15);
        assert!(herm.distance(&h) < 1e-15);
    }

    #[test]
    fn jordan_block_rejected() {
        for a in [1.0, -2.0, 50.0] {
            let h = SquareMatrix::<f64>::from_real_rows(&[&[0.3, a], &[0.0, 0.3]]).unwrap();
            assert!(!is_quasi_hermitian(&h, &MetricOperator::identity(2), 1e-10).unwrap());
            assert_eq!(
                metric_from_spectrum(&h, 1e-10).unwrap_err(),
                Error::Defective
            );
        }
    }

    #[test]
    fn weights_rescale_the_metric() {
        let h = SquareMatrix::<f64>::from_real_rows(&[&[1.0, 1.0], &[0.0, 2.0]]).unwrap();
        let base = metric_from_spectrum(&h, 1e-10).unwrap();
        let heavy = metric_from_spectrum_weighted(&h, &[1.0, 5.0], 1e-10).unwrap();
        assert!(heavy.matrix().distance(base.matrix()) > 1.0);
        assert!(is_quasi_hermitian(&h, &heavy, 1e-10).unwrap());
        assert!(metric_from_spectrum_weighted(&h, &[1.0, 0.0], 1e-10).is_err());
    }

    #[test]
    fn pt_family_at_zero_angle_is_symmetric() {
        let h = pt_family(1.3f64, 0.7, 0.0);
        assert!(h.hermiticity_defect() == 0.0);
        assert_eq!(h[(0, 1)], h[(1, 0)]);
    }

    #[test]
    fn pt_family_regimes() {
        // s^2 > r^2 sin^2 theta
        let real = pt_family(1.0f64, 1.0, 0.6);
        let eta = metric_from_spectrum(&real, 1e-10).unwrap();
        assert!(is_quasi_hermitian(&real, &eta, 1e-10).unwrap());
        // s^2 < r^2 sin^2 theta
        let broken = pt_family(1.0f64, 0.3, 0.9);
        assert!(matches!(
            metric_from_spectrum(&broken, 1e-10),
            Err(Error::ComplexSpectrum(_))
        ));
    }

    #[test]
    fn hermitize_rejects_non_quasi_hermitian() {
        let h = pt_family(1.0f64, 1.0, 0.6);
        let id = MetricOperator::identity(2);
        assert!(matches!(
            hermitize(&h, &id, 1e-10),
            Err(Error::NotQuasiHermitian(_))
        ));
    }
}
