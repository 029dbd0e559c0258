//! Finite quasi-metric spaces and their constants.

mod analysis;
mod scalar;
mod space;

pub use analysis::{
    classify, mult_triangle_constant, quasi_constant, snowflake, ConstantWitness, SpaceAnalysis,
    Triple,
};
pub use scalar::{IntegerGrid, Mode, Rational, Scalar, DEFAULT_TOLERANCE};
pub use space::{validate_space, AnySpace, QuasiMetricSpace};

use thiserror::Error;

/// Reasons a distance matrix is rejected, or a transform cannot be applied.
///
/// Axiom numbers refer to (1) positivity, (2) symmetry and (3) the
/// `K`-relaxed triangle inequality.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("a space needs at least one point")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
    #[error("entry ({i},{j}) is not a finite number")]
    NonFinite { i: usize, j: usize },
    #[error("axiom (2) violated: rho[{i}][{j}] differs from rho[{j}][{i}]")]
    AsymmetricEntry { i: usize, j: usize },
    #[error("axiom (1) violated: rho[{i}][{i}] is not zero")]
    NonzeroDiagonal { i: usize },
    #[error("axiom (1) violated: rho[{i}][{j}] is negative")]
    NegativeEntry { i: usize, j: usize },
    #[error("axiom (1) violated: rho[{i}][{j}] is zero for distinct points")]
    ZeroOffDiagonal { i: usize, j: usize },
    #[error("exponent must be a positive integer in exact mode")]
    NonIntegerExponentInExactMode,
    #[error("exponent must be positive")]
    NonpositiveExponent,
}
