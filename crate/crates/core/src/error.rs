//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the laboratory.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or out-of-contract input (dimension zero, non-square where
    /// a square matrix is required, bad JSON, non-finite entries, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A value fell on the branch cut of the principal square root.
    #[error("branch error: {0}")]
    Branch(String),

    /// A parameter left the regime where a formula is valid.
    #[error("precondition violated: {0}")]
    Regime(String),

    /// Gram matrix (or similar) too ill-conditioned to factor.
    #[error("conditioning failure: estimate {cond:.3e} exceeds cap {cap:.3e}")]
    Conditioning { cond: f64, cap: f64 },

    /// Operation not defined for this operator model.
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// An iterative kernel ran out of its iteration budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Requested epsilon cannot be realized by the planned domains.
    #[error(
        "infeasible epsilon: eps1 = {eps1} but dist(boundary G0, boundary Omega1) = {achieved}"
    )]
    InfeasibleEpsilon { eps1: f64, achieved: f64 },

    /// A stage of the shape construction failed; the message records the
    /// margins that were actually achieved.
    #[error("construction failure at stage `{stage}`: {message}")]
    Construction { stage: String, message: String },

    /// A query point sits too close to a sampled boundary to classify.
    #[error("ambiguous near-boundary query: {0}")]
    AmbiguousBoundary(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
