use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("system has no inputs (r = 0)")]
    NoInput,

    #[error("operation requires a {expected} system, got {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("system is unobservable: observability matrix rank {rank} < required {required}")]
    Unobservable { rank: usize, required: usize },

    #[error(
        "measurement data are inconsistent with the model (residual {residual:.3e})"
    )]
    InconsistentData { residual: f64 },

    #[error(
        "target is not reachable: controllability matrix rank {rank} < required {required} \
         and the augmented system is inconsistent (residual {residual:.3e})"
    )]
    UncontrollableTarget {
        rank: usize,
        required: usize,
        residual: f64,
    },

    #[error("degenerate polynomial: {0}")]
    DegeneratePolynomial(String),

    #[error("eigenvalue computation failed to converge")]
    EigenFailure,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("transfer function is identically zero")]
    ZeroTransfer,

    #[error("evaluation at or near a pole (|den(s)| = {0:.3e})")]
    PoleEvaluation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
