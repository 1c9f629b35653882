use thiserror::Error;

/// Errors produced by the expansion and simulation pipeline.
#[derive(Debug, Error)]
pub enum SzeError {
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),

    #[error("qubit count {0} exceeds the 64-qubit mask limit")]
    TooManyQubits(usize),

    #[error("dense operations limited to {limit} qubits, got {n_qubits}")]
    DenseLimit { n_qubits: usize, limit: usize },

    #[error("series coefficient at order {order} reached {terms} terms (cap {cap})")]
    TermCap {
        order: usize,
        terms: usize,
        cap: usize,
    },

    #[error("series shape mismatch: {0}")]
    SeriesShape(String),

    #[error("series head is not the identity")]
    NonIdentityHead,

    #[error("extraction residual {residual:.3e} at order {order} exceeds tolerance")]
    ResidualCheck { order: usize, residual: f64 },

    #[error("operator is not Hermitian")]
    NotHermitian,

    #[error("empty operator where a nonempty one is required")]
    EmptyOperator,

    #[error("declared layer is not internally commuting: {0} anticommutes with {1}")]
    NonCommutingLayer(String, String),

    #[error("partition verification failed: {0}")]
    PartitionInvalid(String),

    #[error("unsupported order {order} for {what}")]
    UnsupportedOrder { what: &'static str, order: usize },

    #[error("invalid plan parameters: {0}")]
    InvalidPlan(String),

    #[error("execution mode requires a density matrix state")]
    ModeMismatch,

    #[error("state dimension mismatch")]
    DimensionMismatch,

    #[error("power-law fit needs at least 2 strictly positive points, got {0}")]
    FitPoints(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type SzeResult<T> = Result<T, SzeError>;
