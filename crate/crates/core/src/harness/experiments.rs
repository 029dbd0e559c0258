use num_traits::Zero;
use serde::Serialize;

use super::{DepthLimits, HarnessError};
use crate::dyadic::{truncate_with_limit, DyadicParams, DyadicPoint};
use crate::metrize::chain_metrize;
use crate::qcore::{mult_triangle_constant, Rational, Scalar};

/// Chain distance between 0 and 1 at one truncation depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseRow {
    pub depth: u32,
    /// `d_N(0, 1)` from the chain closure of the depth-`N` truncation.
    pub distance: Rational,
    /// `(2a)^N`.
    pub upper_bound: Rational,
    /// Edge sum of the chain `0, 1/2^N, 2/2^N, …, 1`, read from the matrix.
    pub uniform_chain_cost: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapseReport {
    pub rows: Vec<CollapseRow>,
    /// `d_N(0,1) ≤ (2a)^N` and the uniform chain costs exactly `(2a)^N`, for every row.
    pub bound_holds: bool,
    /// `d_N(0,1)` never increases with `N`.
    pub nonincreasing: bool,
}

/// Closure of each truncation `1..=max_depth`, tracking `d_N(0, 1)`.
pub fn collapse_experiment(
    params: &DyadicParams,
    max_depth: u32,
    limits: &DepthLimits,
) -> Result<CollapseReport, HarnessError> {
    if max_depth == 0 {
        return Err(HarnessError::BadSpec(
            "collapse needs a depth of at least 1".into(),
        ));
    }
    if max_depth > limits.matrix {
        return Err(HarnessError::DepthBudgetExceeded {
            depth: max_depth,
            limit: limits.matrix,
        });
    }
    let two_a = params.a().clone() * Rational::from_u64(2);
    let mut rows = Vec::new();
    for depth in 1..=max_depth {
        let t = truncate_with_limit(depth, params, limits.matrix)?;
        let last = t.points.len() - 1;
        let closure = chain_metrize(&t.space);
        let uniform_chain_cost =
            (0..last).fold(Rational::zero(), |acc, i| acc + t.space.get(i, i + 1));
        rows.push(CollapseRow {
            depth,
            distance: closure.distance(0, last).clone(),
            upper_bound: two_a.powi(depth),
            uniform_chain_cost,
        });
    }
    let bound_holds = rows
        .iter()
        .all(|r| r.distance <= r.upper_bound && r.uniform_chain_cost == r.upper_bound);
    let nonincreasing = rows.windows(2).all(|w| w[1].distance <= w[0].distance);
    Ok(CollapseReport {
        rows,
        bound_holds,
        nonincreasing,
    })
}

/// Worst triangle ratio `ρ(x,z) / (ρ(x,y) + ρ(y,z))` over one truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub depth: u32,
    #[serde(serialize_with = "ser_rational")]
    pub max_ratio: Rational,
    /// `(x, y, z)` with `y` the middle vertex; `None` below three points.
    #[serde(serialize_with = "ser_triple")]
    pub triple: Option<[DyadicPoint; 3]>,
    /// `(1−a)/a`.
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    pub within_bound: bool,
}

fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_triple<S: serde::Serializer>(v: &Option<[DyadicPoint; 3]>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(t) => s.collect_seq(t.iter().map(|p| p.to_string())),
        None => s.serialize_none(),
    }
}

pub fn ratio_experiment(
    params: &DyadicParams,
    depth: u32,
    limits: &DepthLimits,
) -> Result<RatioReport, HarnessError> {
    if depth > limits.triples {
        return Err(HarnessError::DepthBudgetExceeded {
            depth,
            limit: limits.triples,
        });
    }
    let t = truncate_with_limit(depth, params, limits.matrix.max(depth))?;
    let worst = mult_triangle_constant(&t.space);
    let bound = params.bound_constant();
    Ok(RatioReport {
        depth,
        within_bound: worst.value <= bound,
        max_ratio: worst.value,
        triple: worst
            .triple
            .map(|[x, y, z]| [t.points[x], t.points[y], t.points[z]]),
        bound,
    })
}
