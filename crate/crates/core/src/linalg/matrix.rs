//! Dense square complex matrices.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{is_finite_c, Real, C};

/// Dense `dim x dim` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> SquareMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting empty or non-finite
    /// input.
    pub fn from_vec(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries, found {}",
                dim * dim,
                data.len()
            )));
        }
        if !data.iter().all(is_finite_c) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix("rows must form a square".into()));
        }
        Self::from_vec(dim, rows.iter().flatten().copied().collect())
    }

    /// Convenience constructor from `(re, im)` pairs given as `f64`.
    pub fn from_f64_rows(rows: &[&[(f64, f64)]]) -> Result<Self> {
        let rows: Vec<Vec<C<T>>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(a, b)| Complex::new(T::lit(a), T::lit(b)))
                    .collect()
            })
            .collect();
        Self::from_rows(&rows)
    }

    /// Real-entried matrix.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C<T>>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&a| Complex::new(T::lit(a), T::zero()))
                    .collect()
            })
            .collect();
        Self::from_rows(&rows)
    }

    /// Builds from a closure without validation; callers guarantee finiteness.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        assert!(dim > 0, "dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| C::new(T::zero(), T::zero()))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                C::new(T::one(), T::zero())
            } else {
                C::new(T::zero(), T::zero())
            }
        })
    }

    pub fn diag(values: &[C<T>]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                C::new(T::zero(), T::zero())
            }
        })
    }

    pub fn diag_real(values: &[T]) -> Self {
        let v: Vec<C<T>> = values.iter().map(|&x| C::new(x, T::zero())).collect();
        Self::diag(&v)
    }

    /// Outer product `x y^H`.
    pub fn outer(x: &[C<T>], y: &[C<T>]) -> Self {
        assert_eq!(x.len(), y.len());
        Self::from_fn(x.len(), |i, j| x[i] * y[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C<T>>]) -> Self {
        let n = cols.len();
        Self::from_fn(n, |i, j| cols[j][i])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C<T>> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(is_finite_c)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, a: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * a).collect(),
        }
    }

    pub fn scale_real(&self, a: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * a).collect(),
        }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(C::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    /// Frobenius norm; the default matrix norm for relative tolerances.
    pub fn norm(&self) -> T {
        crate::linalg::vector::norm(&self.data)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].norm()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(x.len(), self.dim, "dimension mismatch in apply");
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(C::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn try_apply(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        crate::linalg::vector::check_dim(x, self.dim)?;
        Ok(self.apply(x))
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Frobenius distance `||A - B||`.
    pub fn distance(&self, other: &Self) -> T {
        (self - other).norm()
    }

    /// `||A - A^H|| / ||A||`, zero for the zero matrix.
    pub fn hermiticity_defect(&self) -> T {
        let n = self.norm();
        if n == T::zero() {
            return T::zero();
        }
        self.distance(&self.adjoint()) / n
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Lossless widening/narrowing between scalar types via `f64`.
    pub fn cast<U: Real>(&self) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| C::new(U::lit(z.re.to_f64_lossy()), U::lit(z.im.to_f64_lossy())))
                .collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for SquareMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for SquareMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn mul(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs[(k, j)];
                    out.data[i * n + j] += a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn add(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn sub(self, rhs: Self) -> SquareMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &SquareMatrix<T> {
    type Output = SquareMatrix<T>;
    fn neg(self) -> SquareMatrix<T> {
        self.map(|z| -z)
    }
}

impl<T: fmt::Debug> fmt::Debug for SquareMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SquareMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in &self.data[i * self.dim..(i + 1) * self.dim] {
                write!(f, "{:?}  ", z)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn adjoint_of_identity_is_identity() {
        let i = SquareMatrix::<f64>::identity(3);
        assert_eq!(i.adjoint(), i);
    }

    #[test]
    fn adjoint_of_raising_entry() {
        let m = SquareMatrix::<f64>::from_f64_rows(&[&[(0., 0.), (0., 1.)], &[(0., 0.), (0., 0.)]])
            .unwrap();
        let expected =
            SquareMatrix::<f64>::from_f64_rows(&[&[(0., 0.), (0., 0.)], &[(0., -1.), (0., 0.)]])
                .unwrap();
        assert_eq!(m.adjoint(), expected);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SquareMatrix::<f64>::from_vec(0, vec![]).is_err());
        assert!(SquareMatrix::<f64>::from_vec(2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(SquareMatrix::<f64>::from_vec(1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(SquareMatrix::<f64>::from_vec(1, vec![c(0.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn product_and_apply_agree() {
        let a =
            SquareMatrix::<f64>::from_f64_rows(&[&[(1., 1.), (2., 0.)], &[(0., -1.), (3., 2.)]])
                .unwrap();
        let x = vec![c(1.0, 0.0), c(0.0, 1.0)];
        let ax = a.apply(&x);
        assert_eq!(ax[0], c(1.0, 3.0));
        assert_eq!(ax[1], c(-2.0, 2.0));
        let sq = &a * &a;
        let want =
            c::<f64>(1.0, 1.0) * c::<f64>(1.0, 1.0) + c::<f64>(2.0, 0.0) * c::<f64>(0.0, -1.0);
        assert_eq!(sq[(0, 0)], want);
    }
}
