//! Dense complex linear algebra used by every other module.

pub mod eigen;
pub mod expm;
pub mod lu;
pub mod matrix;
pub mod sqrtm;
pub mod vector;

pub use eigen::{eig, eigenvalues, eigh, schur, EigenDecomposition, HermitianEigen};
pub use expm::expm;
pub use lu::inverse;
pub use matrix::SquareMatrix;
pub use sqrtm::{sqrtm_pd, sqrtm_pd_with_inverse};

use crate::scalar::{Real, C};

/// Greedy multiset distance between two spectra: each value in `a` is paired
/// with its nearest unused partner in `b`; returns the largest pair gap.
pub fn spectrum_distance<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    if a.len() != b.len() {
        return T::infinity();
    }
    let mut used = vec![false; b.len()];
    let mut worst = T::zero();
    for x in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, y)| (k, (x - y).norm()))
            .fold((usize::MAX, T::infinity()), |best, cur| {
                if cur.1 < best.1 {
                    cur
                } else {
                    best
                }
            });
        if k == usize::MAX {
            return T::infinity();
        }
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}
