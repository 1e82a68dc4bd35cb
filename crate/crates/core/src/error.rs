use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum SimError {
    /// A caller-supplied argument violated a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Operator dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An input violated a numerical contract (e.g. a Hamiltonian that is
    /// not Hermitian within tolerance, or a state with a significantly
    /// negative eigenvalue).
    #[error("numerical contract violated: {0}")]
    Contract(String),

    /// The requested chain length exceeds the dense-matrix budget.
    #[error("dimension budget exceeded: {0}")]
    Budget(String),

    /// A run-level invariant check failed (strict mode).
    #[error("invariant breach: {0}")]
    InvariantBreach(String),

    #[error("linear algebra backend error: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialization(#[from] serde_json::Error),
}

pub type SimResult<T> = Result<T, SimError>;

impl SimError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        SimError::Io { path: path.into(), source }
    }
}
