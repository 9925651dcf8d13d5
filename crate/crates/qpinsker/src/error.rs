use thiserror::Error;

use crate::detection::DetectionResult;

/// Errors for state validation and the numerical operations built on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max |a_ij - conj(a_ji)| = {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue = {0:.3e})")]
    NotPsd(f64),

    #[error("trace out of range: expected 1, got {0}")]
    TraceOutOfRange(f64),

    #[error("cannot build a pure state from the zero vector")]
    ZeroVector,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("negative probability: {0}")]
    NegativeProbability(f64),

    #[error("probabilities do not sum to 1 (sum = {0})")]
    NotNormalized(f64),

    #[error("support violation: supp(rho) is not contained in supp(sigma)")]
    SupportViolation,

    #[error("prior probability must lie in [0, 1], got {0}")]
    InvalidPrior(f64),

    #[error("POVM elements do not sum to identity (max deviation {0:.3e})")]
    IncompleteMeasurement(f64),

    #[error("operation requires uniform key priors")]
    NonUniformPriors,

    #[error("eigendecomposition did not converge")]
    EigenFailed,

    #[error(
        "detection iteration stopped at residual {residual:.3e} after {iters} iterations \
         (requested {tol:.3e}); best POVM found is attached"
    )]
    NoConvergence {
        result: Box<DetectionResult>,
        residual: f64,
        tol: f64,
        iters: usize,
    },

    #[error("guessing-probability chain violated: {0}")]
    SandwichViolation(String),

    #[error("failed to parse input document: {0}")]
    Parse(String),

    #[error("non-finite number in input document")]
    NonFinite,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
