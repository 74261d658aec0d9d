use thiserror::Error;

pub type Result<T> = std::result::Result<T, CoreError>;

/// Errors shared across the algebra, module, operator, oracle, and
/// predicate layers. Variants mirror the failure modes of the public
/// operations; carriers hold enough data to reproduce the failure.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("non-finite entry at position {position}")]
    NonFiniteEntry { position: usize },

    #[error("algebra kind mismatch: {left} vs {right}")]
    KindMismatch { left: String, right: String },

    #[error("indexing mismatch: {left} vs {right}")]
    IndexingMismatch { left: String, right: String },

    #[error("index {index} out of range {range}")]
    IndexOutOfRange { index: i64, range: String },

    #[error("element not invertible (inf|a| = {inf_abs:.3e})")]
    NotInvertible { inf_abs: f64 },

    #[error("parse error at position {position}: {message}")]
    ParseError { position: usize, message: String },

    #[error("evaluation error: {message}")]
    EvalError { message: String },

    #[error("kind unsupported: {0}")]
    KindUnsupported(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("witness check failed: {0}")]
    WitnessCheckFailed(String),

    #[error("operator is not self-adjoint at the probed truncation")]
    NotSelfAdjoint,

    #[error("operator is not normal at the probed truncation")]
    NotNormal,

    #[error("rule requires a commutative coefficient algebra: {0}")]
    NotCommutative(String),

    #[error("skew part a - a* is not invertible")]
    SkewPartNotInvertible,

    #[error("difference a1 - a2 is not invertible")]
    DifferenceNotInvertible,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("oracle could not certify the operator bounded below")]
    PreconditionNotCertified,

    #[error("self-adjoint bounds are not in closed form for this operator")]
    BoundsNotClosedForm,

    #[error("invalid configuration: {0}")]
    ConfigError(String),
}
