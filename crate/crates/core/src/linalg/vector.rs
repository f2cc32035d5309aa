//! Complex vector helpers. Vectors are plain `[Complex<T>]` slices.

use crate::error::{Error, Result};
use crate::scalar::{Real, C};
use num_complex::Complex;

/// Euclidean inner product `<x, y> = x^H y`, conjugate-linear in `x`.
pub fn dot<T: Real>(x: &[C<T>], y: &[C<T>]) -> C<T> {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
            acc + a.conj() * b
        })
}

pub fn norm_sqr<T: Real>(x: &[C<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Euclidean norm with scaling to avoid overflow on large entries.
pub fn norm<T: Real>(x: &[C<T>]) -> T {
    let scale = x
        .iter()
        .fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let s: T = x.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

pub fn scale<T: Real>(x: &[C<T>], a: C<T>) -> Vec<C<T>> {
    x.iter().map(|z| z * a).collect()
}

pub fn sub<T: Real>(x: &[C<T>], y: &[C<T>]) -> Vec<C<T>> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn add<T: Real>(x: &[C<T>], y: &[C<T>]) -> Vec<C<T>> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

/// Unit-norm copy of `x`.
pub fn normalized<T: Real>(x: &[C<T>]) -> Result<Vec<C<T>>> {
    let n = norm(x);
    if n == T::zero() || !n.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok(x.iter().map(|z| z / n).collect())
}

pub fn is_zero<T: Real>(x: &[C<T>]) -> bool {
    x.iter().all(|z| z.re == T::zero() && z.im == T::zero())
}

/// Index of the first component whose modulus exceeds a small fraction of the
/// largest modulus. Used to fix phases canonically.
pub fn leading_index<T: Real>(x: &[C<T>]) -> Option<usize> {
    let max = x.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if max == T::zero() {
        return None;
    }
    let cutoff = max * T::epsilon() * T::lit(64.0);
    x.iter().position(|z| z.norm() > cutoff)
}

/// Rotates `x` by a global phase so its leading component is positive real.
pub fn fix_phase<T: Real>(x: &mut [C<T>]) {
    if let Some(k) = leading_index(x) {
        let p = x[k] / x[k].norm();
        let pc = p.conj();
        for z in x.iter_mut() {
            *z *= pc;
        }
        x[k] = Complex::new(x[k].re, T::zero());
    }
}

pub fn check_dim<T>(x: &[T], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: x.len(),
        });
    }
    Ok(())
}
