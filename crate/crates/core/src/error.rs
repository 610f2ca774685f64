//! Error types shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// All variants except [`Error::Internal`] indicate invalid or unsupported
/// input; `Internal` means a mathematical invariant that the algorithms
/// guarantee was violated, i.e. a bug.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is rank-deficient: {0}")]
    Rank(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("vector is not generic for the cone/subspace pair: {0}")]
    Genericity(String),
    #[error("vector does not have the required ±1/0 coefficient pattern: {0}")]
    Pattern(String),
    #[error("polytope is not simple at vertex ({0})")]
    NonSimple(String),
    #[error("direction is singular for this generating function (some edge pairs to zero)")]
    SingularDirection,
    #[error("expected an integer, got {0}")]
    Integrality(String),
    #[error("argument outside the valid domain: {0}")]
    Domain(String),
    #[error("degenerate simplex (affinely dependent vertices)")]
    Degenerate,
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors that indicate a bug in this crate rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}
