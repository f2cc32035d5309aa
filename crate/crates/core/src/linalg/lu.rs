//! LU factorization with partial pivoting.

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::{Real, C};

pub struct Lu<T> {
    lu: SquareMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// Factors `a`; fails with `Singular` when a pivot vanishes relative to
    /// the matrix scale.
    pub fn factor(a: &SquareMatrix<T>) -> Result<Self> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        if scale == T::zero() || !scale.is_finite() {
            return Err(Error::Singular);
        }
        let floor = scale * T::epsilon() * T::lit(n as f64);
        for k in 0..n {
            let (p, pmax) =
                (k..n)
                    .map(|i| (i, lu[(i, k)].norm()))
                    .fold(
                        (k, -T::one()),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pmax <= floor {
                return Err(Error::Singular);
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                if f.re == T::zero() && f.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.lu.dim();
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= l * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= u * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &SquareMatrix<T>) -> SquareMatrix<T> {
        let n = b.dim();
        let cols: Vec<Vec<C<T>>> = (0..n).map(|j| self.solve_vec(&b.column(j))).collect();
        SquareMatrix::from_columns(&cols)
    }
}

/// Matrix inverse via LU.
pub fn inverse<T: Real>(a: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
    let lu = Lu::factor(a)?;
    Ok(lu.solve(&SquareMatrix::identity(a.dim())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_small_matrix() {
        let a = SquareMatrix::<f64>::from_f64_rows(&[&[(0., 0.), (2., 1.)], &[(1., 0.), (3., 0.)]])
            .unwrap();
        let inv = inverse(&a).unwrap();
        let prod = &a * &inv;
        assert!(prod.distance(&SquareMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn singular_is_reported() {
        let a = SquareMatrix::<f64>::from_real_rows(&[&[1., 2.], &[2., 4.]]).unwrap();
        assert_eq!(inverse(&a).unwrap_err(), Error::Singular);
        assert_eq!(
            inverse(&SquareMatrix::<f64>::zeros(2)).unwrap_err(),
            Error::Singular
        );
    }
}
