//! Eigendecompositions.
//!
//! General matrices go through a complex Schur form (Householder reduction to
//! Hessenberg form, then single-shift QR with Wilkinson shifts). Right
//! eigenvectors come from back-substitution on the triangular factor; left
//! eigenvectors are the right eigenvectors of the adjoint `Q T^H Q^H`,
//! obtained by forward substitution on `T^H`. Hermitian matrices use cyclic
//! Jacobi rotations, which keeps eigenvectors orthonormal to working precision.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::vector;
use crate::linalg::SquareMatrix;
use crate::scalar::{Real, C};

/// Eigenvalues with matched right and left eigenvectors.
///
/// When `biorthonormal` is set, `left[m]^H right[n] = delta_mn` and every
/// right vector has unit Euclidean norm.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    pub values: Vec<C<T>>,
    pub right: Vec<Vec<C<T>>>,
    pub left: Vec<Vec<C<T>>>,
    pub biorthonormal: bool,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `sum_n psi_n phi_n^H`, the identity for a complete biorthonormal system.
    pub fn completeness(&self) -> SquareMatrix<T> {
        let n = self.dim();
        let mut acc = SquareMatrix::zeros(n);
        for (r, l) in self.right.iter().zip(&self.left) {
            acc = &acc + &SquareMatrix::outer(r, l);
        }
        acc
    }

    /// `sum_n lambda_n psi_n phi_n^H`.
    pub fn reconstruct(&self) -> SquareMatrix<T> {
        let n = self.dim();
        let mut acc = SquareMatrix::zeros(n);
        for ((r, l), &v) in self.right.iter().zip(&self.left).zip(&self.values) {
            acc = &acc + &SquareMatrix::outer(r, l).scale(v);
        }
        acc
    }

    /// Largest `||M psi_n - lambda_n psi_n||`.
    pub fn max_residual(&self, m: &SquareMatrix<T>) -> T {
        self.right
            .iter()
            .zip(&self.values)
            .map(|(r, &v)| vector::norm(&vector::sub(&m.apply(r), &vector::scale(r, v))))
            .fold(T::zero(), T::max)
    }
}

/// Result of the Hermitian solver: ascending real eigenvalues and an
/// orthonormal eigenvector matrix (eigenvectors are columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: SquareMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        self.vectors.column(k)
    }

    /// `V f(Lambda) V^H`.
    pub fn apply_fn(&self, f: impl Fn(T) -> T) -> SquareMatrix<T> {
        let n = self.values.len();
        let v = &self.vectors;
        SquareMatrix::from_fn(n, |i, j| {
            (0..n).fold(C::new(T::zero(), T::zero()), |acc, k| {
                acc + v[(i, k)] * v[(j, k)].conj() * f(self.values[k])
            })
        })
    }
}

fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

/// Reduces `a` to upper Hessenberg form `H = Q^H A Q`.
fn hessenberg<T: Real>(a: &SquareMatrix<T>) -> (SquareMatrix<T>, SquareMatrix<T>) {
    let n = a.dim();
    let mut h = a.clone();
    let mut q = SquareMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let two = T::lit(2.0);
    for k in 0..n - 2 {
        let x: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = vector::norm(&x);
        let tail = vector::norm(&x[1..]);
        if xnorm == T::zero() || tail == T::zero() {
            continue;
        }
        let phase = if x[0].norm() == T::zero() {
            C::new(T::one(), T::zero())
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let beta = vector::norm_sqr(&v);
        if beta == T::zero() {
            continue;
        }
        let m = v.len();
        // left: rows k+1.., all columns from k
        for j in k..n {
            let mut s = czero::<T>();
            for t in 0..m {
                s += v[t].conj() * h[(k + 1 + t, j)];
            }
            let f = s * (two / beta);
            for t in 0..m {
                h[(k + 1 + t, j)] -= v[t] * f;
            }
        }
        // right: columns k+1.., all rows
        for i in 0..n {
            let mut s = czero::<T>();
            for t in 0..m {
                s += h[(i, k + 1 + t)] * v[t];
            }
            let f = s * (two / beta);
            for t in 0..m {
                h[(i, k + 1 + t)] -= f * v[t].conj();
            }
        }
        for i in 0..n {
            let mut s = czero::<T>();
            for t in 0..m {
                s += q[(i, k + 1 + t)] * v[t];
            }
            let f = s * (two / beta);
            for t in 0..m {
                q[(i, k + 1 + t)] -= f * v[t].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = czero();
        }
    }
    (h, q)
}

/// Givens pair `(c, s)` such that `[[c, s], [-conj(s), c]] [a; b] = [r; 0]`.
fn givens<T: Real>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let an = a.norm();
    let bn = b.norm();
    if bn == T::zero() {
        return (T::one(), czero());
    }
    if an == T::zero() {
        return (T::zero(), b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

/// Complex Schur decomposition `A = Q T Q^H` with `T` upper triangular.
pub fn schur<T: Real>(a: &SquareMatrix<T>) -> Result<(SquareMatrix<T>, SquareMatrix<T>)> {
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let n = a.dim();
    let (mut h, mut q) = hessenberg(a);
    if n == 1 {
        return Ok((h, q));
    }
    let eps = T::epsilon();
    let anorm = a.norm().max(T::min_positive_value());
    let mut hi = n - 1;
    let mut iter = 0usize;
    let max_iter = 60 * n;
    let mut rot: Vec<(T, C<T>)> = Vec::with_capacity(n);

    while hi > 0 {
        // locate the start of the active unreduced block
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == T::zero() { anorm } else { s };
            if h[(lo, lo - 1)].norm() <= eps * s {
                h[(lo, lo - 1)] = czero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::NoConvergence);
        }

        let shift = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            let ex = h[(hi, hi - 1)].re.abs()
                + if hi >= 2 {
                    h[(hi - 1, hi - 2)].re.abs()
                } else {
                    T::zero()
                };
            h[(hi, hi)] + C::new(ex * T::lit(0.75), T::zero())
        } else {
            let a11 = h[(hi - 1, hi - 1)];
            let a12 = h[(hi - 1, hi)];
            let a21 = h[(hi, hi - 1)];
            let a22 = h[(hi, hi)];
            let half = T::lit(0.5);
            let mean = (a11 + a22) * half;
            let d = (a11 - a22) * half;
            let disc = (d * d + a12 * a21).sqrt();
            let m1 = mean + disc;
            let m2 = mean - disc;
            if (m1 - a22).norm() <= (m2 - a22).norm() {
                m1
            } else {
                m2
            }
        };

        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        rot.clear();
        for k in lo..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((cs, sn));
            for j in k..n {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * cs + sn * y;
                h[(k + 1, j)] = -sn.conj() * x + y * cs;
            }
            h[(k + 1, k)] = czero();
        }
        for (idx, &(cs, sn)) in rot.iter().enumerate() {
            let k = lo + idx;
            let rmax = (k + 1).min(hi);
            for i in 0..=rmax {
                let u = h[(i, k)];
                let v = h[(i, k + 1)];
                h[(i, k)] = u * cs + v * sn.conj();
                h[(i, k + 1)] = -u * sn + v * cs;
            }
            for i in 0..n {
                let u = q[(i, k)];
                let v = q[(i, k + 1)];
                q[(i, k)] = u * cs + v * sn.conj();
                q[(i, k + 1)] = -u * sn + v * cs;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = czero();
        }
    }
    Ok((h, q))
}

/// Eigenvalues (with multiplicity) from the Schur form. No degeneracy checks.
pub fn eigenvalues<T: Real>(a: &SquareMatrix<T>) -> Result<Vec<C<T>>> {
    let (t, _) = schur(a)?;
    Ok(t.diagonal())
}

fn guard<T: Real>(d: C<T>, small: T) -> C<T> {
    if d.norm() < small {
        C::new(small, T::zero())
    } else {
        d
    }
}

/// Right eigenvectors of upper triangular `t` as columns of `Y`.
fn triangular_right<T: Real>(t: &SquareMatrix<T>) -> Vec<Vec<C<T>>> {
    let n = t.dim();
    let small = t.norm().max(T::min_positive_value()) * T::epsilon();
    (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let mut y = vec![czero::<T>(); n];
            y[k] = C::new(T::one(), T::zero());
            for i in (0..k).rev() {
                let mut s = czero::<T>();
                for j in i + 1..=k {
                    s += t[(i, j)] * y[j];
                }
                y[i] = -s / guard(t[(i, i)] - lambda, small);
            }
            y
        })
        .collect()
}

/// Right eigenvectors of `t^H` (lower triangular) for eigenvalue `conj(t_kk)`.
fn triangular_left<T: Real>(t: &SquareMatrix<T>) -> Vec<Vec<C<T>>> {
    let n = t.dim();
    let small = t.norm().max(T::min_positive_value()) * T::epsilon();
    (0..n)
        .map(|k| {
            let mu = t[(k, k)].conj();
            let mut w = vec![czero::<T>(); n];
            w[k] = C::new(T::one(), T::zero());
            for i in k + 1..n {
                let mut s = czero::<T>();
                for j in k..i {
                    s += t[(j, i)].conj() * w[j];
                }
                w[i] = -s / guard(t[(i, i)].conj() - mu, small);
            }
            w
        })
        .collect()
}

/// Number of singular values of `a` at or below `threshold`.
fn nullity<T: Real>(a: &SquareMatrix<T>, threshold: T) -> Result<usize> {
    let gram = &a.adjoint() * a;
    let e = eigh(&gram)?;
    let t2 = threshold * threshold;
    Ok(e.values.iter().filter(|&&s| s <= t2).count())
}

/// Full eigendecomposition with biorthonormal left/right eigenvectors.
///
/// Eigenvalues closer than `tol * ||M||` are treated as coincident; such a
/// cluster is reported as `Degenerate` when the eigenspace is complete and as
/// `Defective` otherwise. An isolated eigenvalue whose left/right overlap
/// `|phi^H psi|` (unit vectors) falls below `sqrt(tol)` is also reported as
/// `Defective`, since it is numerically inseparable from a Jordan block.
pub fn eig<T: Real>(m: &SquareMatrix<T>, tol: T) -> Result<EigenDecomposition<T>> {
    let (t, q) = schur(m)?;
    let n = m.dim();
    let values = t.diagonal();
    let mnorm = m.norm();
    let scale = if mnorm == T::zero() { T::one() } else { mnorm };

    // coincident eigenvalues
    let mut visited = vec![false; n];
    let mut degenerate = None;
    for i in 0..n {
        if visited[i] {
            continue;
        }
        let cluster: Vec<usize> = (i..n)
            .filter(|&j| !visited[j] && (values[j] - values[i]).norm() <= tol * scale)
            .collect();
        for &j in &cluster {
            visited[j] = true;
        }
        if cluster.len() > 1 {
            let k = cluster.len();
            let mean =
                cluster.iter().fold(czero::<T>(), |acc, &j| acc + values[j]) / T::lit(k as f64);
            let shifted = m - &SquareMatrix::identity(n).scale(mean);
            let null = nullity(&shifted, tol.sqrt() * scale)?;
            if null < k {
                return Err(Error::Defective);
            }
            degenerate.get_or_insert(Error::Degenerate(
                format!("{}", values[cluster[0]]),
                format!("{}", values[cluster[1]]),
            ));
        }
    }
    if let Some(err) = degenerate {
        return Err(err);
    }

    let right: Vec<Vec<C<T>>> = triangular_right(&t)
        .into_iter()
        .map(|y| vector::normalized(&q.apply(&y)))
        .collect::<Result<_>>()?;
    let left_raw: Vec<Vec<C<T>>> = triangular_left(&t)
        .into_iter()
        .map(|w| vector::normalized(&q.apply(&w)))
        .collect::<Result<_>>()?;

    let overlap_floor = tol.sqrt();
    let mut left = Vec::with_capacity(n);
    for (phi, psi) in left_raw.into_iter().zip(&right) {
        let s = vector::dot(&phi, psi);
        if s.norm() < overlap_floor {
            return Err(Error::Defective);
        }
        let f = s.conj().inv();
        left.push(vector::scale(&phi, f));
    }

    Ok(EigenDecomposition {
        values,
        right,
        left,
        biorthonormal: true,
    })
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Only the Hermitian part `(A + A^H)/2` is used.
pub fn eigh<T: Real>(a: &SquareMatrix<T>) -> Result<HermitianEigen<T>> {
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    let n = a.dim();
    let half = T::lit(0.5);
    let mut m = SquareMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half);
    for i in 0..n {
        m[(i, i)] = C::new(m[(i, i)].re, T::zero());
    }
    let mut v = SquareMatrix::identity(n);
    let total = m.norm();
    let eps = T::epsilon();

    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * total || off == T::zero() {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&x, &y| {
                m[(x, x)]
                    .re
                    .partial_cmp(&m[(y, y)].re)
                    .unwrap_or(std::cmp::Ordering::Equal)
            });
            let values = order.iter().map(|&k| m[(k, k)].re).collect();
            let vectors = SquareMatrix::from_fn(n, |i, j| v[(i, order[j])]);
            return Ok(HermitianEigen { values, vectors });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g == T::zero() {
                    continue;
                }
                let phase = apq / g;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (g + g);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // U = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q)
                let upq = phase * sn;
                let uqp = -phase.conj() * sn;
                for k in 0..n {
                    let x = m[(k, p)];
                    let y = m[(k, q)];
                    m[(k, p)] = x * cs + y * uqp;
                    m[(k, q)] = x * upq + y * cs;
                }
                for k in 0..n {
                    let x = m[(p, k)];
                    let y = m[(q, k)];
                    m[(p, k)] = x * cs + y * uqp.conj();
                    m[(q, k)] = x * upq.conj() + y * cs;
                }
                m[(p, q)] = czero();
                m[(q, p)] = czero();
                m[(p, p)] = C::new(m[(p, p)].re, T::zero());
                m[(q, q)] = C::new(m[(q, q)].re, T::zero());
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * cs + y * uqp;
                    v[(k, q)] = x * upq + y * cs;
                }
            }
        }
    }
    Err(Error::NoConvergence)
}
