use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use super::{DyadicError, DyadicParams, DyadicPoint};
use crate::qcore::{validate_space, QuasiMetricSpace, Rational};

/// Default truncation depth limit; a depth-`N` matrix has `(2^N + 1)²` entries.
pub const DEFAULT_MAX_DEPTH: u32 = 12;

fn is_base_pair(lo: DyadicPoint, hi: DyadicPoint) -> bool {
    lo == DyadicPoint::ZERO && hi == DyadicPoint::ONE
}

/// The unique common point of the right path of `z` and the left path of
/// `w`, for `z < w` other than the pair `(0, 1)`.
///
/// Uniqueness is checked, not assumed: `NoIntersection` and
/// `MultipleIntersections` can only come from a broken construction.
pub fn meet(z: DyadicPoint, w: DyadicPoint) -> Result<DyadicPoint, DyadicError> {
    if z >= w {
        return Err(DyadicError::PrecondViolation(format!(
            "meet needs z < w, got {z} and {w}"
        )));
    }
    if is_base_pair(z, w) {
        return Err(DyadicError::PrecondViolation(
            "the pair (0, 1) has no meet".into(),
        ));
    }
    let left = w.left_path();
    let mut common = z.right_path().into_iter().filter(|p| left.contains(p));
    match (common.next(), common.next()) {
        (Some(m), None) => Ok(m),
        (None, _) => Err(DyadicError::NoIntersection(z.to_string(), w.to_string())),
        (Some(_), Some(_)) => Err(DyadicError::MultipleIntersections(
            z.to_string(),
            w.to_string(),
        )),
    }
}

fn ordered(z: DyadicPoint, w: DyadicPoint) -> Result<(DyadicPoint, DyadicPoint), DyadicError> {
    match z.cmp(&w) {
        std::cmp::Ordering::Less => Ok((z, w)),
        std::cmp::Ordering::Greater => Ok((w, z)),
        std::cmp::Ordering::Equal => Err(DyadicError::SamePoint(z.to_string())),
    }
}

/// The V-shaped path from the smaller of the two points to the larger one.
pub fn v_path(z: DyadicPoint, w: DyadicPoint) -> Result<Vec<DyadicPoint>, DyadicError> {
    let (lo, hi) = ordered(z, w)?;
    if is_base_pair(lo, hi) {
        return Ok(vec![lo, hi]);
    }
    let m = meet(lo, hi)?;
    let mut out: Vec<_> = lo
        .right_path()
        .into_iter()
        .take_while(|p| *p != m)
        .collect();
    out.push(m);
    let mut back: Vec<_> = hi.left_path().into_iter().take_while(|p| *p != m).collect();
    back.reverse();
    out.extend(back);
    Ok(out)
}

/// Levels of the edges on the V-path; `None` for the base edge `{0, 1}`.
/// Each edge has the length `a^level` of its higher-level endpoint.
fn edge_levels(z: DyadicPoint, w: DyadicPoint) -> Result<Option<Vec<u32>>, DyadicError> {
    let (lo, hi) = ordered(z, w)?;
    if is_base_pair(lo, hi) {
        return Ok(None);
    }
    let m = meet(lo, hi)?;
    let levels = lo
        .right_path()
        .into_iter()
        .take_while(|p| *p != m)
        .chain(hi.left_path().into_iter().take_while(|p| *p != m))
        .map(|p| p.level())
        .collect();
    Ok(Some(levels))
}

/// `ρ(z, w)`: 1 for `{0, 1}`, otherwise the length of the V-path.
pub fn rho(z: DyadicPoint, w: DyadicPoint, params: &DyadicParams) -> Result<Rational, DyadicError> {
    Ok(match edge_levels(z, w)? {
        None => Rational::one(),
        Some(levels) => levels.into_iter().map(|l| params.power(l)).sum(),
    })
}

/// The finite subspace of all points with level at most `depth`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub depth: u32,
    /// Ascending; point `i` is `i / 2^depth`.
    pub points: Vec<DyadicPoint>,
    pub space: QuasiMetricSpace<Rational>,
}

impl Truncation {
    pub fn index_of(&self, z: DyadicPoint) -> Option<usize> {
        (z.level() <= self.depth).then(|| z.index_at_depth(self.depth))
    }

    pub fn rho(&self, z: DyadicPoint, w: DyadicPoint) -> Option<&Rational> {
        Some(self.space.get(self.index_of(z)?, self.index_of(w)?))
    }
}

pub fn truncate(depth: u32, params: &DyadicParams) -> Result<Truncation, DyadicError> {
    truncate_with_limit(depth, params, DEFAULT_MAX_DEPTH)
}

/// Build the depth-`depth` truncation, refusing depths above `limit`.
pub fn truncate_with_limit(
    depth: u32,
    params: &DyadicParams,
    limit: u32,
) -> Result<Truncation, DyadicError> {
    if depth > limit {
        return Err(DyadicError::DepthBudgetExceeded { depth, limit });
    }
    let points = DyadicPoint::up_to_depth(depth)?;
    let n = points.len();

    // Every entry is an integer combination of a^0..a^depth; with a = p/q
    // put them all over q^depth so each entry costs one reduction.
    let (p, q) = (params.a().numer().clone(), params.a().denom().clone());
    let weights: Vec<BigInt> = (0..=depth)
        .map(|k| {
            num_traits::pow(p.clone(), k as usize)
                * num_traits::pow(q.clone(), (depth - k) as usize)
        })
        .collect();
    let denom = num_traits::pow(q, depth as usize);

    let upper: Vec<Vec<Rational>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let numer = match edge_levels(points[i], points[j])? {
                        None => denom.clone(),
                        Some(levels) => levels.iter().map(|&l| &weights[l as usize]).sum(),
                    };
                    Ok(Rational::new(numer, denom.clone()))
                })
                .collect::<Result<Vec<_>, DyadicError>>()
        })
        .collect::<Result<_, _>>()?;

    let mut matrix = vec![vec![Rational::default(); n]; n];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            matrix[j][i] = v.clone();
            matrix[i][j] = v;
        }
    }
    let labels = points.iter().map(|z| z.to_string()).collect();
    let space = validate_space(matrix, Some(labels))?;
    Ok(Truncation {
        depth,
        points,
        space,
    })
}

/// The tent over `z`: its left path read from 0 up to `z`, then its right
/// path down to 1.
pub fn tent(z: DyadicPoint) -> Vec<DyadicPoint> {
    let mut out = z.left_path();
    out.reverse();
    out.extend(z.right_path().into_iter().skip(1));
    out
}

/// `value,level` rows of [`tent`], one per line, no header.
pub fn tent_csv(z: DyadicPoint) -> String {
    tent(z)
        .iter()
        .map(|p| format!("{},{}\n", p, p.level()))
        .collect()
}
