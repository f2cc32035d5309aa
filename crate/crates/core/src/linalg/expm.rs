//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005 selection).
//!
//! No eigendecomposition is involved, so defective inputs such as Jordan
//! blocks are handled like any other matrix.

use crate::error::{Error, Result};
use crate::linalg::lu::Lu;
use crate::linalg::SquareMatrix;
use crate::scalar::Real;

const B3: [f64; 4] = [120., 60., 12., 1.];
const B5: [f64; 6] = [30240., 15120., 3360., 420., 30., 1.];
const B7: [f64; 8] = [
    17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.,
];
const B9: [f64; 10] = [
    17643225600.,
    8821612800.,
    2075673600.,
    302702400.,
    30270240.,
    2162160.,
    110880.,
    3960.,
    90.,
    1.,
];
const B13: [f64; 14] = [
    64764752532480000.,
    32382376266240000.,
    7771770303897600.,
    1187353796428800.,
    129060195264000.,
    10559470521600.,
    670442572800.,
    33522128640.,
    1323241920.,
    40840800.,
    960960.,
    16380.,
    182.,
    1.,
];

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

// 2^MAX_SQUARINGS bounds the admissible scaling.
const MAX_SQUARINGS: i32 = 64;

fn lincomb<T: Real>(terms: &[(f64, &SquareMatrix<T>)], n: usize) -> SquareMatrix<T> {
    terms.iter().fold(SquareMatrix::zeros(n), |acc, (b, m)| {
        &acc + &m.scale_real(T::lit(*b))
    })
}

/// Padé numerator/denominator pieces `(U, V)` for odd degree `m <= 9`.
fn pade_low<T: Real>(
    a: &SquareMatrix<T>,
    powers: &[SquareMatrix<T>],
    b: &[f64],
) -> (SquareMatrix<T>, SquareMatrix<T>) {
    // powers[k] = A^(2k), powers[0] = I
    let n = a.dim();
    let mut u = SquareMatrix::zeros(n);
    let mut v = SquareMatrix::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        u = &u + &p.scale_real(T::lit(b[2 * k + 1]));
        v = &v + &p.scale_real(T::lit(b[2 * k]));
    }
    (a * &u, v)
}

fn pade13<T: Real>(a: &SquareMatrix<T>) -> (SquareMatrix<T>, SquareMatrix<T>) {
    let n = a.dim();
    let id = SquareMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = &B13;
    let inner_u = lincomb(&[(b[13], &a6), (b[11], &a4), (b[9], &a2)], n);
    let u = &(&a6 * &inner_u) + &lincomb(&[(b[7], &a6), (b[5], &a4), (b[3], &a2), (b[1], &id)], n);
    let u = a * &u;
    let inner_v = lincomb(&[(b[12], &a6), (b[10], &a4), (b[8], &a2)], n);
    let v = &(&a6 * &inner_v) + &lincomb(&[(b[6], &a6), (b[4], &a4), (b[2], &a2), (b[0], &id)], n);
    (u, v)
}

/// `exp(M)`.
pub fn expm<T: Real>(m: &SquareMatrix<T>) -> Result<SquareMatrix<T>> {
    let n = m.dim();
    let norm1 = m.norm_one();
    if !norm1.is_finite() {
        return Err(Error::Overflow(norm1.to_f64_lossy()));
    }
    let norm1_f = norm1.to_f64_lossy();

    if let Some(&(deg, _)) = THETA.iter().find(|(_, th)| norm1_f <= *th) {
        let mut powers = vec![SquareMatrix::identity(n), m * m];
        while powers.len() < deg.div_ceil(2) {
            let next = &powers[powers.len() - 1] * &powers[1];
            powers.push(next);
        }
        let b: &[f64] = match deg {
            3 => &B3,
            5 => &B5,
            7 => &B7,
            _ => &B9,
        };
        let (u, v) = pade_low(m, &powers, b);
        return finish(u, v, 0);
    }

    let s = (norm1_f / THETA_13).log2().ceil().max(0.0) as i32;
    if s > MAX_SQUARINGS {
        return Err(Error::Overflow(norm1_f));
    }
    let scaled = m.scale_real(T::lit(2f64.powi(-s)));
    let (u, v) = pade13(&scaled);
    finish(u, v, s)
}

fn finish<T: Real>(
    u: SquareMatrix<T>,
    v: SquareMatrix<T>,
    squarings: i32,
) -> Result<SquareMatrix<T>> {
    let p = &v + &u;
    let q = &v - &u;
    let lu = Lu::factor(&q).map_err(|_| Error::Overflow(f64::INFINITY))?;
    let mut r = lu.solve(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::Overflow(f64::INFINITY));
    }
    Ok(r)
}
