use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Two orbitals that were expected to be a degenerate ±ν pair are not.
    #[error("degeneracy error: {0}")]
    Degeneracy(String),

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("truncation did not converge: K reached {k} (cap {cap}), last relative change {last_change:e} > tol {tol:e}")]
    Truncation {
        k: usize,
        cap: usize,
        last_change: f64,
        tol: f64,
    },

    #[error("unsupported statistics: {0}")]
    UnsupportedStatistics(String),

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_) | Error::Truncation { .. } | Error::Degeneracy(_)
        )
    }
}
