//! The dyadic quasi-metric on `[0, 1]`.
//!
//! Points are dyadic rationals `k/2^n` with `k` odd; the endpoints 0 and 1
//! have level 0. Each point of level `n ≥ 1` has a left neighbour
//! `(k−1)/2^n` and a right neighbour `(k+1)/2^n`, both of strictly lower
//! level, and the edge to either neighbour has length `a^n`. The edge
//! `{0, 1}` has length 1. The distance between two points is the length of
//! the V-shaped path that climbs down the right path of the smaller point
//! and the left path of the larger one to where they meet.
//!
//! All arithmetic here is exact.

mod facts;
mod params;
mod point;
mod rho;
mod triangle;

pub use facts::{verify_facts, FactCheck, FactReport};
pub use params::DyadicParams;
pub use point::{Direction, DyadicPoint, MAX_LEVEL};
pub use rho::{
    meet, rho, tent, tent_csv, truncate, truncate_with_limit, v_path, Truncation, DEFAULT_MAX_DEPTH,
};
pub use triangle::{
    is_special_triangle, reduce_triangle, special_defect, special_triangles, SpecialTriangle,
};

use thiserror::Error;

use crate::qcore::SpaceError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("{0} is not a dyadic rational in [0, 1]")]
    NotDyadic(String),
    #[error("level {0} exceeds the supported maximum of {MAX_LEVEL}")]
    LevelTooDeep(u32),
    #[error("endpoints have no neighbours")]
    EndpointHasNoNeighbors,
    #[error("precondition violated: {0}")]
    PrecondViolation(String),
    #[error("paths of {0} and {1} do not intersect")]
    NoIntersection(String, String),
    #[error("paths of {0} and {1} intersect more than once")]
    MultipleIntersections(String, String),
    #[error("distance to the same point {0} is not defined by the path rule")]
    SamePoint(String),
    #[error("index must be at least 1")]
    NonpositiveIndex,
    #[error("parameter a = {0} must lie in (0, 1/2]")]
    InvalidParameter(String),
    #[error("depth {depth} exceeds the limit {limit}")]
    DepthBudgetExceeded { depth: u32, limit: u32 },
    #[error(transparent)]
    Space(#[from] SpaceError),
}
