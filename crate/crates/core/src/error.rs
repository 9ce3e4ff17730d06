use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum DunklError {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A power series failed to reach the requested relative tolerance.
    #[error("series did not converge within {max_terms} terms (last |term|/|sum| = {ratio:.3e})")]
    Convergence { max_terms: usize, ratio: f64 },

    /// Two sampled functions live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Real-time harmonic kernel evaluated at a focal point sin(omega T) = 0.
    #[error("caustic: sin(omega T) vanishes at {0}")]
    Caustic(String),

    /// An iterative scheme blew up instead of settling.
    #[error("numerical divergence: {0}")]
    Divergence(String),

    /// The eigensolver exhausted its iteration budget.
    #[error("eigensolver did not converge: {0}")]
    Eigen(String),

    /// Euclidean truncation tail of a spectral sum exceeds the requested tolerance.
    #[error("truncation tail estimate {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    TailBound { estimate: f64, tolerance: f64 },

    /// Invalid run configuration (CLI / config file).
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, DunklError>;
