//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the exact-arithmetic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix entry is not an integer")]
    NonInteger,
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("lattice dimension must be even for the adjoint")]
    OddDimension,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("generator is not lower triangular")]
    NotLowerTriangular,
    #[error("window does not multi-tile by the lattice")]
    NotAMultiTile,
    #[error("multi-tile level is 1, no nonzero packing shift exists")]
    LevelOne,
    #[error("set is unbounded; a truncation window is required")]
    UnboundedSet,
    #[error("lattice is not block lower triangular")]
    NotBlockTriangular,
    #[error("conductor {0} exceeds the configured bound {1}")]
    ConductorOverflow(u64, u64),
    #[error("vanishing held but the tiling level {0} is not an integer")]
    NonIntegerLevel(String),
    #[error("image of the window under the time block is not a box union")]
    NonBoxImage,
    #[error("determinant must be ±1, got {0}")]
    BadDeterminant(String),
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("overlap transforms do not factor per coordinate")]
    NotFactorizable,
    #[error("sample point lies on a translated edge")]
    OnBoundary,
    #[error("invariant violated: {0}")]
    TheoremViolation(&'static str),
    #[error("box is empty or inverted: lo must be < hi in every coordinate")]
    EmptyBox,
    #[error("invalid polygon: {0}")]
    BadPolygon(&'static str),
    #[error("invalid rational literal: {0}")]
    BadRational(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
