//! The chain construction on finite spaces.
//!
//! `d(x,z)` is the infimum of `ρ(z_0,z_1) + … + ρ(z_k,z_{k+1})` over all
//! chains `x = z_0, …, z_{k+1} = z`. With nonnegative weights on a finite
//! set, revisiting a point never lowers the sum, so the infimum is attained
//! by a simple path and equals the all-pairs shortest-path closure of the
//! complete graph weighted by `ρ`. [`chain_oracle`] checks that claim by
//! enumerating chains directly.

use rayon::prelude::*;
use thiserror::Error;

use crate::qcore::{quasi_constant, QuasiMetricSpace, Scalar, SpaceError};

/// Default cap on the number of chains [`chain_oracle`] may enumerate.
pub const ORACLE_CHAIN_BUDGET: u128 = 200_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetrizeError {
    #[error("a chain needs at least {min} points, got {len}")]
    ChainTooShort { len: usize, min: usize },
    #[error("chain point {index} is out of range for a space of {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error(
        "chain enumeration over {n} points with {max_interior} interior points exceeds the budget"
    )]
    EnumerationBudgetExceeded { n: usize, max_interior: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A sequence of point indices `z_0, …, z_{k+1}` with at least two entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain(Vec<usize>);

impl Chain {
    pub fn new(points: Vec<usize>) -> Result<Self, MetrizeError> {
        if points.len() < 2 {
            return Err(MetrizeError::ChainTooShort {
                len: points.len(),
                min: 2,
            });
        }
        Ok(Chain(points))
    }

    pub fn points(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    fn check_range(&self, n: usize) -> Result<(), MetrizeError> {
        match self.0.iter().find(|&&i| i >= n) {
            Some(&index) => Err(MetrizeError::IndexOutOfRange { index, n }),
            None => Ok(()),
        }
    }

    /// `Σ ρ(z_i, z_{i+1})`.
    pub fn edge_sum<S: Scalar>(&self, space: &QuasiMetricSpace<S>) -> Result<S, MetrizeError> {
        self.check_range(space.len())?;
        Ok(self
            .0
            .windows(2)
            .fold(S::zero(), |acc, w| acc.sum(space.get(w[0], w[1]))))
    }
}

/// Chain closure `d` of a space, with next-hop data for witness chains.
#[derive(Clone, Debug)]
pub struct ChainMetricResult<S> {
    n: usize,
    d: Vec<S>,
    next: Vec<usize>,
    /// Distinct pairs `(i, j)`, `i < j`, with `d = 0`. Always empty for a
    /// finite valid space, since every chain costs at least the smallest
    /// off-diagonal entry.
    pub zero_pairs: Vec<(usize, usize)>,
}

impl<S: Scalar> ChainMetricResult<S> {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> &S {
        &self.d[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.d.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// A chain from `i` to `j` whose edge sum is `d(i,j)`.
    pub fn witness(&self, i: usize, j: usize) -> Chain {
        let mut points = vec![i];
        let mut cur = i;
        while cur != j {
            cur = self.next[cur * self.n + j];
            points.push(cur);
        }
        if points.len() == 1 {
            points.push(j);
        }
        Chain(points)
    }

    /// `d` as a space, carrying over labels and tolerance from `source`.
    pub fn to_space(
        &self,
        source: &QuasiMetricSpace<S>,
    ) -> Result<QuasiMetricSpace<S>, SpaceError> {
        QuasiMetricSpace::validate_with_tolerance(
            self.rows(),
            Some(source.labels().to_vec()),
            source.tolerance(),
        )
    }
}

/// Floyd–Warshall with next-hop tracking. An entry only changes on a strict
/// improvement, so among equal-cost chains the one through the lowest
/// intermediate index found first is kept. Rows are relaxed in parallel;
/// row `k` is fixed during round `k`, so the result does not depend on the
/// schedule.
fn floyd_warshall<W, A>(n: usize, d: &mut [W], next: &mut [usize], add: A)
where
    W: Clone + PartialOrd + Send + Sync,
    A: Fn(&W, &W) -> W + Sync,
{
    for k in 0..n {
        let row_k: Vec<W> = d[k * n..(k + 1) * n].to_vec();
        d.par_chunks_mut(n)
            .zip(next.par_chunks_mut(n))
            .enumerate()
            .filter(|(i, _)| *i != k)
            .for_each(|(_, (row, hops))| {
                let via = row[k].clone();
                let hop = hops[k];
                for j in 0..n {
                    let cand = add(&via, &row_k[j]);
                    if cand < row[j] {
                        row[j] = cand;
                        hops[j] = hop;
                    }
                }
            });
    }
}

/// Chain closure of `space`: `d(i,j)` is the least edge sum over all chains
/// from `i` to `j`.
///
/// Exact spaces whose entries share a denominator small enough for machine
/// integers are closed on that integer grid; everything else runs on the
/// scalar type directly.
pub fn chain_metrize<S: Scalar>(space: &QuasiMetricSpace<S>) -> ChainMetricResult<S> {
    let n = space.len();
    let mut next: Vec<usize> = (0..n * n).map(|idx| idx % n).collect();
    let d: Vec<S> = match S::integer_grid(space.entries()) {
        Some(grid) => {
            let mut w = grid.values;
            floyd_warshall(n, &mut w, &mut next, |a, b| a + b);
            w.iter().map(|&v| S::from_scaled(v, &grid.scale)).collect()
        }
        None => {
            let mut d = space.entries().to_vec();
            floyd_warshall(n, &mut d, &mut next, S::sum);
            d
        }
    };
    let zero = S::zero();
    let zero_pairs = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| d[i * n + j].approx_eq(&zero, space.tolerance()))
        .collect();
    ChainMetricResult {
        n,
        d,
        next,
        zero_pairs,
    }
}

fn chains_per_pair(free: usize, max_interior: usize) -> u128 {
    // Σ_{j ≤ m} free!/(free−j)!
    let mut total: u128 = 1;
    let mut term: u128 = 1;
    for j in 0..max_interior {
        term = term.saturating_mul((free - j) as u128);
        total = total.saturating_add(term);
    }
    total
}

/// Brute-force chain minimum, independent of [`chain_metrize`].
///
/// Enumerates every chain whose interior points are distinct, lie outside
/// the endpoints, and number at most `max_interior`, pruning partial chains
/// that already cost at least the best complete one. With
/// `max_interior ≥ n − 2` the result equals the chain closure.
pub fn chain_oracle<S: Scalar>(
    space: &QuasiMetricSpace<S>,
    max_interior: usize,
) -> Result<Vec<Vec<S>>, MetrizeError> {
    chain_oracle_with_budget(space, max_interior, ORACLE_CHAIN_BUDGET)
}

pub fn chain_oracle_with_budget<S: Scalar>(
    space: &QuasiMetricSpace<S>,
    max_interior: usize,
    budget: u128,
) -> Result<Vec<Vec<S>>, MetrizeError> {
    let n = space.len();
    let m = max_interior.min(n.saturating_sub(2));
    let pairs = (n * n.saturating_sub(1) / 2) as u128;
    let worst = pairs.saturating_mul(chains_per_pair(n.saturating_sub(2), m));
    if !(n <= 10 || m <= 8) || worst > budget {
        return Err(MetrizeError::EnumerationBudgetExceeded { n, max_interior });
    }

    struct Search<'a, S> {
        space: &'a QuasiMetricSpace<S>,
        target: usize,
        max_interior: usize,
        used: Vec<bool>,
        best: S,
    }

    impl<S: Scalar> Search<'_, S> {
        fn extend(&mut self, at: usize, cost: S, interior: usize) {
            if interior == self.max_interior {
                return;
            }
            for v in 0..self.space.len() {
                if self.used[v] {
                    continue;
                }
                let reach = cost.sum(self.space.get(at, v));
                if reach >= self.best {
                    continue;
                }
                let total = reach.sum(self.space.get(v, self.target));
                if total < self.best {
                    self.best = total;
                }
                self.used[v] = true;
                self.extend(v, reach, interior + 1);
                self.used[v] = false;
            }
        }
    }

    let mut out = space.rows();
    for s in 0..n {
        for t in s + 1..n {
            let mut used = vec![false; n];
            used[s] = true;
            used[t] = true;
            let mut search = Search {
                space,
                target: t,
                max_interior: m,
                used,
                best: space.get(s, t).clone(),
            };
            search.extend(s, S::zero(), 0);
            out[s][t] = search.best.clone();
            out[t][s] = search.best;
        }
    }
    Ok(out)
}

/// Outcome of checking `(1/2K)·ρ ≤ d ≤ ρ` on a finite space.
#[derive(Clone, Debug, PartialEq)]
pub struct FrinkReport<S> {
    pub k: S,
    /// `K ≤ 2`: the bounds are guaranteed. Otherwise the report is informational.
    pub applicable: bool,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `min d/ρ` over distinct pairs (1 for a one-point space).
    pub min_ratio: S,
    pub argmin_pair: Option<(usize, usize)>,
}

pub fn frink_check<S: Scalar>(space: &QuasiMetricSpace<S>) -> FrinkReport<S> {
    frink_check_with(space, &chain_metrize(space))
}

/// Same as [`frink_check`] for an already computed closure of `space`.
pub fn frink_check_with<S: Scalar>(
    space: &QuasiMetricSpace<S>,
    closure: &ChainMetricResult<S>,
) -> FrinkReport<S> {
    let n = space.len();
    let tol = space.tolerance();
    let k = quasi_constant(space).value;
    let two_k = k.clone() * S::from_u64(2);
    let mut lower_ok = true;
    let mut upper_ok = true;
    let mut best: Option<(S, (usize, usize))> = None;
    for i in 0..n {
        for j in i + 1..n {
            let (rho, d) = (space.get(i, j), closure.distance(i, j));
            upper_ok &= d.approx_le(rho, tol);
            lower_ok &= rho.approx_le(&(two_k.clone() * d.clone()), tol);
            let ratio = d.clone() / rho.clone();
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                best = Some((ratio, (i, j)));
            }
        }
    }
    let (min_ratio, argmin_pair) = match best {
        Some((r, p)) => (r, Some(p)),
        None => (S::one(), None),
    };
    FrinkReport {
        applicable: k.approx_le(&S::from_u64(2), tol),
        k,
        lower_ok,
        upper_ok,
        min_ratio,
        argmin_pair,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaBound<S> {
    pub bound: S,
    pub holds: bool,
}

/// `Σ(σ) = K·(ρ(z_0,z_1) + 2·Σ_{0<i<k} ρ(z_i,z_{i+1}) + ρ(z_k,z_{k+1}))`
/// and whether `ρ(z_0, z_{k+1}) ≤ Σ(σ)`. For `K ≤ 2` this holds for every
/// chain; `k_override` replaces the computed `K` for experiments.
pub fn sigma_bound<S: Scalar>(
    space: &QuasiMetricSpace<S>,
    sigma: &Chain,
    k_override: Option<&S>,
) -> Result<SigmaBound<S>, MetrizeError> {
    if sigma.len() < 3 {
        return Err(MetrizeError::ChainTooShort {
            len: sigma.len(),
            min: 3,
        });
    }
    sigma.check_range(space.len())?;
    let k = match k_override {
        Some(k) => k.clone(),
        None => quasi_constant(space).value,
    };
    let pts = sigma.points();
    let last = pts.len() - 2;
    let two = S::from_u64(2);
    let mut weighted = S::zero();
    for (i, w) in pts.windows(2).enumerate() {
        let edge = space.get(w[0], w[1]).clone();
        weighted = if i == 0 || i == last {
            weighted + edge
        } else {
            weighted + two.clone() * edge
        };
    }
    let bound = k * weighted;
    let holds = space
        .get(sigma.first(), sigma.last())
        .approx_le(&bound, space.tolerance());
    Ok(SigmaBound { bound, holds })
}
