//! Square root of a Hermitian positive-definite matrix.

use crate::error::{Error, Result};
use crate::linalg::eigen::eigh;
use crate::linalg::SquareMatrix;
use crate::scalar::Real;

/// The unique Hermitian positive-definite `R` with `R R = M`, together with
/// `R^{-1}`, both assembled from one spectral decomposition.
pub fn sqrtm_pd_with_inverse<T: Real>(
    m: &SquareMatrix<T>,
    tol: T,
) -> Result<(SquareMatrix<T>, SquareMatrix<T>)> {
    let defect = m.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian(defect.to_f64_lossy()));
    }
    let e = eigh(m)?;
    let min = e.values[0];
    if min <= tol * m.norm() {
        return Err(Error::NotPositiveDefinite(min.to_f64_lossy()));
    }
    Ok((e.apply_fn(|x| x.sqrt()), e.apply_fn(|x| x.sqrt().recip())))
}

/// Positive square root of a Hermitian positive-definite matrix.
pub fn sqrtm_pd<T: Real>(m: &SquareMatrix<T>, tol: T) -> Result<SquareMatrix<T>> {
    sqrtm_pd_with_inverse(m, tol).map(|(r, _)| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        let i = SquareMatrix::<f64>::identity(3);
        assert!(sqrtm_pd(&i, 1e-10).unwrap().distance(&i) < 1e-15);
        let d = SquareMatrix::<f64>::diag_real(&[4.0, 9.0]);
        let r = sqrtm_pd(&d, 1e-10).unwrap();
        assert!(r.distance(&SquareMatrix::diag_real(&[2.0, 3.0])) < 1e-15);
    }

    #[test]
    fn indefinite_rejected() {
        let d = SquareMatrix::<f64>::diag_real(&[1.0, -1.0]);
        assert!(matches!(
            sqrtm_pd(&d, 1e-10),
            Err(Error::NotPositiveDefinite(_))
        ));
        let z = SquareMatrix::<f64>::zeros(2);
        assert!(matches!(
            sqrtm_pd(&z, 1e-10),
            Err(Error::NotPositiveDefinite(_))
        ));
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = SquareMatrix::<f64>::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap();
        assert!(matches!(sqrtm_pd(&m, 1e-10), Err(Error::NotHermitian(_))));
    }
}
