//! Seeded random instances: states, unitaries, metrics and quasi-Hermitian
//! Hamiltonians. Everything derives from a single 64-bit seed.

use std::marker::PhantomData;

use num_complex::Complex;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{vector, SquareMatrix};
use crate::scalar::{Real, C};

/// Child seed for stream `stream` of master seed `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}

/// Deterministic RNG for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A quasi-Hermitian Hamiltonian `H = S^{-1} A S` with its metric `S^H S`.
#[derive(Clone, Debug)]
pub struct QuasiHermitianInstance<T> {
    pub hamiltonian: SquareMatrix<T>,
    pub metric: SquareMatrix<T>,
    pub similarity: SquareMatrix<T>,
    pub hermitian: SquareMatrix<T>,
    pub spectrum: Vec<T>,
}

pub struct Sampler<T> {
    rng: ChaCha8Rng,
    _scalar: PhantomData<T>,
}

impl<T: Real> Sampler<T> {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            _scalar: PhantomData,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn normal(&mut self) -> T {
        let x: f64 = self.rng.sample(StandardNormal);
        T::lit(x)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> T {
        T::lit(self.rng.random_range(lo..hi))
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> C<T> {
        let s = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        Complex::new(self.normal() * s, self.normal() * s)
    }

    /// Nonzero complex scale factor with modulus in `[0.1, 10]`.
    pub fn nonzero_scale(&mut self) -> C<T> {
        let modulus = T::lit(10f64.powf(self.rng.random_range(-1.0..1.0)));
        let phase = self.uniform(0.0, std::f64::consts::TAU);
        Complex::from_polar(modulus, phase)
    }

    pub fn vector(&mut self, n: usize) -> Vec<C<T>> {
        loop {
            let v: Vec<C<T>> = (0..n).map(|_| self.complex_normal()).collect();
            if vector::norm(&v) > T::lit(1e-3) {
                return v;
            }
        }
    }

    pub fn ginibre(&mut self, n: usize) -> SquareMatrix<T> {
        SquareMatrix::from_fn(n, |_, _| self.complex_normal())
    }

    /// Haar-like unitary from Gram-Schmidt (applied twice) on a Ginibre matrix.
    pub fn unitary(&mut self, n: usize) -> SquareMatrix<T> {
        let g = self.ginibre(n);
        let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = g.column(j);
            for _pass in 0..2 {
                for q in &cols {
                    let p = vector::dot(q, &v);
                    v = vector::sub(&v, &vector::scale(q, p));
                }
            }
            cols.push(vector::normalized(&v).expect("Ginibre columns are independent"));
        }
        SquareMatrix::from_columns(&cols)
    }

    /// Ascending spectrum with neighbouring gaps of at least `min_gap`.
    pub fn separated_spectrum(&mut self, n: usize, min_gap: f64) -> Vec<T> {
        let mut x = self.rng.random_range(-2.0..-1.0);
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(T::lit(x));
            x += min_gap + self.rng.random_range(0.0..0.8);
        }
        out
    }

    pub fn hermitian_with_spectrum(&mut self, values: &[T]) -> SquareMatrix<T> {
        let u = self.unitary(values.len());
        &(&u * &SquareMatrix::diag_real(values)) * &u.adjoint()
    }

    /// Hermitian matrix with a well-separated spectrum.
    pub fn hermitian(&mut self, n: usize) -> SquareMatrix<T> {
        let spec = self.separated_spectrum(n, 0.2);
        self.hermitian_with_spectrum(&spec)
    }

    /// Positive-definite metric with condition number at most `cond`.
    pub fn metric(&mut self, n: usize, cond: f64) -> SquareMatrix<T> {
        let half = 0.5 * cond.ln();
        let values: Vec<T> = (0..n)
            .map(|_| T::lit(self.rng.random_range(-half..=half).exp()))
            .collect();
        self.hermitian_with_spectrum(&values)
    }

    /// Invertible `W diag(sigma) V` with singular values within `[1/sqrt(cond), sqrt(cond)]`.
    pub fn invertible(&mut self, n: usize, cond: f64) -> SquareMatrix<T> {
        let half = 0.25 * cond.ln();
        let sigma: Vec<T> = (0..n)
            .map(|_| T::lit(self.rng.random_range(-half..=half).exp()))
            .collect();
        let w = self.unitary(n);
        let v = self.unitary(n);
        &(&w * &SquareMatrix::diag_real(&sigma)) * &v
    }

    /// Random quasi-Hermitian pair. The similarity `S` is not the positive
    /// square root of the metric, so Hermitizing with `sqrt(eta)` exercises a
    /// nontrivial unitary freedom.
    pub fn quasi_hermitian(&mut self, n: usize) -> QuasiHermitianInstance<T> {
        let spectrum = self.separated_spectrum(n, 0.2);
        let a = self.hermitian_with_spectrum(&spectrum);
        let s = self.invertible(n, 16.0);
        let s_inv = crate::linalg::inverse(&s).expect("well-conditioned by construction");
        let h = &(&s_inv * &a) * &s;
        let eta = &s.adjoint() * &s;
        // exact Hermitian symmetrization of the metric
        let eta = SquareMatrix::from_fn(n, |i, j| (eta[(i, j)] + eta[(j, i)].conj()) * T::lit(0.5));
        QuasiHermitianInstance {
            hamiltonian: h,
            metric: eta,
            similarity: s,
            hermitian: a,
            spectrum,
        }
    }
}
