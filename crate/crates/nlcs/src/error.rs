use thiserror::Error;

/// Library-wide error type. The CLI maps these onto process exit codes:
/// usage errors -> 2, numeric/convergence failures -> 3, truncation leaks -> 4.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("truncation leak: {0}")]
    TruncationLeak(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("singular nonlinearity: |f({level})| < 1e-12, cannot build C = (1/f(n))b over this range")]
    FZero { level: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
