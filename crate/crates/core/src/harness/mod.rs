//! Experiment drivers over the dyadic truncations, and random spaces for
//! exercising the chain construction.

mod experiments;
mod generate;

pub use experiments::{
    collapse_experiment, ratio_experiment, CollapseReport, CollapseRow, RatioReport,
};
pub use generate::{generate_space, GeneratorKind, GeneratorSpec};

use thiserror::Error;

use crate::dyadic::DyadicError;
use crate::qcore::SpaceError;

/// Depth guards. A depth-`N` truncation has `2^N + 1` points, so the
/// closure costs `O(8^N)` and a triple scan the same.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthLimits {
    pub matrix: u32,
    pub triples: u32,
}

impl Default for DepthLimits {
    fn default() -> Self {
        Self {
            matrix: crate::dyadic::DEFAULT_MAX_DEPTH,
            triples: 8,
        }
    }
}

impl DepthLimits {
    /// No guard below the representable depth.
    pub fn unlimited() -> Self {
        Self {
            matrix: crate::dyadic::MAX_LEVEL,
            triples: crate::dyadic::MAX_LEVEL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("bad generator spec: {0}")]
    BadSpec(String),
    #[error("depth {depth} exceeds the limit {limit}")]
    DepthBudgetExceeded { depth: u32, limit: u32 },
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}
