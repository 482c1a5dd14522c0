//! Geometry of the hyperspace of finite-dimensional convex sets.
//!
//! Sets are polytopes (convex hulls of finitely many points), affine flats
//! and linear subspaces of `R^n`. The crate computes metric projections,
//! Hausdorff and Attouch-Wets distances, the gap metric on the
//! Grassmannian, and the local charts that trivialize the hyperspace over
//! the Grassmannian.

pub mod bundle;
pub mod certify;
pub mod convex;
pub mod document;
pub mod error;
pub mod grassmann;
pub mod hypermetrics;
pub mod independence;
pub mod linalg;
pub mod mnp;
pub mod random;
pub mod report;
pub mod suites;
pub mod tolerance;

pub use certify::Interval;
pub use convex::{ConvexSet, Flat, Polytope, Subspace, Vector};
pub use document::{parse_set, serialize, SetDocument};
pub use error::{HyperError, Result};
pub use report::Report;
pub use tolerance::ToleranceConfig;
