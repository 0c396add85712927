use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not unit Hilbert-Schmidt norm (norm = {norm})")]
    NotUnitNorm { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("columns are not orthonormal (max deviation {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("fourth-moment identity violated (residual {residual:e})")]
    IdentityMismatch { residual: f64 },

    #[error("workload of {required} scalar operations exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("non-finite objective or gradient at start {start}")]
    NonFinite { start: usize },

    #[error("optimizer produced no iterate")]
    NoIterate,

    #[error("gradient validation failed: relative error {error:e} exceeds {tolerance:e}")]
    GradientCheck { error: f64, tolerance: f64 },

    #[error("function is not {lipschitz}-Lipschitz on its domain (pair {i},{j}, excess {excess:e})")]
    NotLipschitz {
        lipschitz: f64,
        i: usize,
        j: usize,
        excess: f64,
    },

    #[error("net covering radius {radius} exceeds {required}")]
    NetTooCoarse { radius: f64, required: f64 },

    #[error("empty point set")]
    EmptyPointSet,

    #[error("rejection sampling exhausted {0} retries")]
    RejectionExhausted(usize),

    #[error("chaining levels invalid: {0}")]
    InvalidLevels(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
