use thiserror::Error;

use crate::certify::Interval;
use crate::convex::Vector;

pub type Result<T> = std::result::Result<T, HyperError>;

#[derive(Debug, Clone, Error)]
pub enum HyperError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("a convex set needs at least one generator")]
    EmptyGenerators,

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("basis is not orthonormal (max residual {0:e})")]
    NotOrthonormal(f64),

    #[error("vectors span only the zero subspace")]
    ZeroSpan,

    #[error("solver stopped after {iterations} iterations; residual bound {residual:e}")]
    NonConvergence {
        iterations: usize,
        best: Vector,
        residual: f64,
    },

    #[error("set does not meet the closed ball of radius {radius} (distance from origin {distance})")]
    EmptyIntersection { radius: f64, distance: f64 },

    #[error("Minkowski sum of {0} and {1} is not representable")]
    UnsupportedSum(&'static str, &'static str),

    #[error("hyperplane normal must be nonzero")]
    ZeroNormal,

    #[error("estimate stalled at [{}, {}] before reaching width {target:e}", best.lo, best.hi)]
    Uncertified { best: Interval, target: f64 },

    #[error("subspace is outside the chart neighbourhood (smallest cosine {0:e})")]
    OutsideNeighbourhood(f64),

    #[error("lift is ill-conditioned (condition number {0:e})")]
    IllConditioned(f64),

    #[error("point is {0:e} away from the required subspace")]
    OffSubspace(f64),

    #[error("point family is affinely dependent")]
    AffinelyDependent,

    #[error("point lies {0:e} away from the affine hull")]
    OffAffineHull(f64),

    #[error("set does not contain the origin")]
    MissingOrigin,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid set document: {0}")]
    Schema(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(HyperError::DimensionMismatch { expected, got })
    }
}
