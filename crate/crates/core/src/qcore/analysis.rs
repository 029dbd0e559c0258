use rayon::prelude::*;

use super::scalar::Scalar;
use super::space::QuasiMetricSpace;
use super::SpaceError;

/// Ordered index triple `(x, y, z)`; `y` is the middle vertex.
pub type Triple = [usize; 3];

/// A constant together with the lexicographically smallest ordered triple
/// attaining it. `triple` is `None` for spaces with fewer than three points.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantWitness<S> {
    pub value: S,
    pub triple: Option<Triple>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceAnalysis<S> {
    /// Least `K` with `ρ(x,z) ≤ K·max(ρ(x,y), ρ(y,z))`.
    pub k: S,
    /// Least `C` with `ρ(x,z) ≤ C·(ρ(x,y) + ρ(y,z))`.
    pub c: S,
    pub is_metric: bool,
    pub is_ultrametric: bool,
    pub worst_triple_k: Option<Triple>,
    pub worst_triple_c: Option<Triple>,
}

#[derive(Clone, Copy)]
enum Denominator {
    Max,
    Sum,
}

/// Lexicographically first ordered triple of distinct indices maximizing
/// `numer / denom`, where `parts` returns the pair. `greater(a, b)` decides
/// `a > b` for two such pairs.
fn argmax_triple<P, F, G>(n: usize, parts: F, greater: G) -> Option<Triple>
where
    P: Send,
    F: Fn(usize, usize, usize) -> P + Sync,
    G: Fn(&P, &P) -> bool + Sync,
{
    if n < 3 {
        return None;
    }
    let per_x: Vec<(P, Triple)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut best: Option<(P, Triple)> = None;
            for y in (0..n).filter(|&y| y != x) {
                for z in (0..n).filter(|&z| z != x && z != y) {
                    let p = parts(x, y, z);
                    if best.as_ref().is_none_or(|(b, _)| greater(&p, b)) {
                        best = Some((p, [x, y, z]));
                    }
                }
            }
            best.expect("n >= 3 leaves at least one triple per x")
        })
        .collect();
    let mut iter = per_x.into_iter();
    let mut best = iter.next()?;
    for cand in iter {
        if greater(&cand.0, &best.0) {
            best = cand;
        }
    }
    Some(best.1)
}

fn worst_triple<S: Scalar>(space: &QuasiMetricSpace<S>, denom: Denominator) -> Option<Triple> {
    let n = space.len();
    if let Some(grid) = S::integer_grid(space.entries()) {
        let w = &grid.values;
        return argmax_triple(
            n,
            |x, y, z| {
                let (a, b) = (w[x * n + y], w[y * n + z]);
                let d = match denom {
                    Denominator::Max => a.max(b),
                    Denominator::Sum => a + b,
                };
                (w[x * n + z], d)
            },
            |&(n1, d1), &(n2, d2)| (n1 as u128) * (d2 as u128) > (n2 as u128) * (d1 as u128),
        );
    }
    argmax_triple(
        n,
        |x, y, z| {
            let (a, b) = (space.get(x, y), space.get(y, z));
            let d = match denom {
                Denominator::Max => {
                    if a >= b {
                        a.clone()
                    } else {
                        b.clone()
                    }
                }
                Denominator::Sum => a.sum(b),
            };
            (space.get(x, z).clone(), d)
        },
        |(n1, d1), (n2, d2)| n1.clone() * d2.clone() > n2.clone() * d1.clone(),
    )
}

fn ratio_at<S: Scalar>(space: &QuasiMetricSpace<S>, t: Triple, denom: Denominator) -> S {
    let [x, y, z] = t;
    let (a, b) = (space.get(x, y), space.get(y, z));
    let d = match denom {
        Denominator::Max => {
            if a >= b {
                a.clone()
            } else {
                b.clone()
            }
        }
        Denominator::Sum => a.sum(b),
    };
    space.get(x, z).clone() / d
}

/// Least constant `K` in the relaxed triangle inequality
/// `ρ(x,z) ≤ K·max(ρ(x,y), ρ(y,z))`. Spaces with fewer than three points get `K = 1`.
pub fn quasi_constant<S: Scalar>(space: &QuasiMetricSpace<S>) -> ConstantWitness<S> {
    match worst_triple(space, Denominator::Max) {
        Some(t) => ConstantWitness {
            value: ratio_at(space, t, Denominator::Max),
            triple: Some(t),
        },
        None => ConstantWitness {
            value: S::one(),
            triple: None,
        },
    }
}

/// Least constant `C` with `ρ(x,z) ≤ C·(ρ(x,y) + ρ(y,z))`; `C ≤ 1` exactly
/// when `ρ` is a metric. Spaces with fewer than three points get `C = 1/2`.
pub fn mult_triangle_constant<S: Scalar>(space: &QuasiMetricSpace<S>) -> ConstantWitness<S> {
    match worst_triple(space, Denominator::Sum) {
        Some(t) => ConstantWitness {
            value: ratio_at(space, t, Denominator::Sum),
            triple: Some(t),
        },
        None => ConstantWitness {
            value: S::one() / S::from_u64(2),
            triple: None,
        },
    }
}

pub fn classify<S: Scalar>(space: &QuasiMetricSpace<S>) -> SpaceAnalysis<S> {
    let k = quasi_constant(space);
    let c = mult_triangle_constant(space);
    let tol = space.tolerance();
    SpaceAnalysis {
        is_metric: c.value.approx_le(&S::one(), tol),
        is_ultrametric: k.value.approx_le(&S::one(), tol),
        k: k.value,
        c: c.value,
        worst_triple_k: k.triple,
        worst_triple_c: c.triple,
    }
}

/// Entrywise power `ρ^p`. A metric becomes a `2^p`-quasi-metric.
pub fn snowflake<S: Scalar>(
    space: &QuasiMetricSpace<S>,
    p: &S,
) -> Result<QuasiMetricSpace<S>, SpaceError> {
    // Reject a bad exponent even for one-point spaces, where no entry is touched.
    S::one().pow_scalar(p)?;
    let mut failure = None;
    let out = space.map_entries(|x| match x.pow_scalar(p) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            x.clone()
        }
    });
    match failure {
        Some(e) => Err(e),
        None => out,
    }
}
