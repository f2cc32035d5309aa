use thiserror::Error;

/// Every failure the toolkit can report.
///
/// Variants that encode a physical consistency requirement say which one in
/// their message, so a rejected observable tells the caller why.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error(
        "matrix is defective (not diagonalizable): observables need a complete set of eigenvectors"
    )]
    Defective,

    #[error("degenerate spectrum: eigenvalues {0} and {1} coincide within tolerance")]
    Degenerate(String, String),

    #[error("complex spectrum: eigenvalue {0} is not real, observables need a real spectrum")]
    ComplexSpectrum(String),

    #[error("matrix is not Hermitian within tolerance (defect {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive-definite: eigenvalue {0:e} below threshold")]
    NotPositiveDefinite(f64),

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("matrix exponential overflow: norm {0:e} too large")]
    Overflow(f64),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("operator is not quasi-Hermitian with respect to the metric (defect {0:e})")]
    NotQuasiHermitian(f64),

    #[error("observable is not Hermitian with respect to the metric, its expectation values are not all real (defect {0:e})")]
    NotEtaHermitian(f64),

    #[error("observable was not certified for this system")]
    Uncertified,

    #[error("zero vector does not represent a state")]
    ZeroVector,

    #[error("system is not closed: Hamiltonian is not Hermitian with respect to its metric")]
    NotClosedSystem,

    #[error("fast-flip limit needs nonzero coupling and positive time (a = {a}, t = {t})")]
    DegenerateTime { a: f64, t: f64 },

    #[error("conjugacy base is not Hermitian (defect {0:e})")]
    NotHermitianBase(f64),

    #[error("conjugating transform is singular")]
    SingularTransform,

    #[error("measured observable has a degenerate spectrum")]
    DegenerateObservable,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
