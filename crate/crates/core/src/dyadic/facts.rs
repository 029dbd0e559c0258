use serde::Serialize;

use super::{rho, DyadicError, DyadicParams, DyadicPoint};

/// Result of one exhaustive check; `counterexample` describes the first failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactCheck {
    pub checked: usize,
    pub counterexample: Option<String>,
}

impl FactCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn run<T>(items: impl IntoIterator<Item = T>, check: impl Fn(T) -> Option<String>) -> Self {
        let mut checked = 0;
        for item in items {
            checked += 1;
            if let Some(msg) = check(item) {
                return FactCheck {
                    checked,
                    counterexample: Some(msg),
                };
            }
        }
        FactCheck {
            checked,
            counterexample: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactReport {
    pub depth: u32,
    /// Interior levels of the two paths of `z` are `1..level(z)`, each once.
    pub levels_partition: FactCheck,
    /// `r(l^k(z))` is the first point of the right path of `z` with a lower
    /// level than `l^k(z)`, and the mirrored statement.
    pub neighbor_jump: FactCheck,
    /// Points strictly inside an edge's interval have a higher level than
    /// both endpoints.
    pub below_tent: FactCheck,
    /// `ρ(z,0) + ρ(z,1) = τ_{level(z)}`.
    pub tent_length: FactCheck,
}

impl FactReport {
    pub fn all_passed(&self) -> bool {
        self.levels_partition.passed()
            && self.neighbor_jump.passed()
            && self.below_tent.passed()
            && self.tent_length.passed()
    }
}

fn levels_partition(z: DyadicPoint) -> Option<String> {
    let mut levels: Vec<u32> = z
        .left_path()
        .into_iter()
        .skip(1)
        .chain(z.right_path().into_iter().skip(1))
        .filter(|p| !p.is_endpoint())
        .map(|p| p.level())
        .collect();
    levels.sort_unstable();
    let expected: Vec<u32> = (1..z.level()).collect();
    (levels != expected).then(|| format!("{z}: interior levels {levels:?}, expected {expected:?}"))
}

fn neighbor_jump(z: DyadicPoint) -> Option<String> {
    let left = z.left_path();
    let right = z.right_path();
    let sides = [(&left, &right, true), (&right, &left, false)];
    for (own, other, from_left) in sides {
        for &p in own.iter().skip(1).filter(|p| !p.is_endpoint()) {
            let target = other.iter().find(|o| o.level() < p.level());
            let jump = if from_left { p.right() } else { p.left() };
            if jump.as_ref() != target {
                let dir = if from_left { "r" } else { "l" };
                return Some(format!(
                    "{z}: {dir}({p}) = {jump:?}, first lower point on the opposite path is {target:?}"
                ));
            }
        }
    }
    None
}

/// Check the structural facts for every point of level `1..=depth`, and the
/// tent-length identity for `params`.
pub fn verify_facts(depth: u32, params: &DyadicParams) -> Result<FactReport, DyadicError> {
    if depth == 0 {
        return Err(DyadicError::NonpositiveIndex);
    }
    let points = DyadicPoint::up_to_depth(depth)?;
    let interior = || points.iter().copied().filter(|z| !z.is_endpoint());

    let levels: Vec<u32> = points.iter().map(|p| p.level()).collect();
    let mut edges = vec![(DyadicPoint::ZERO, DyadicPoint::ONE)];
    for z in interior() {
        let (l, r) = z.neighbors()?;
        edges.push((l, z));
        edges.push((z, r));
    }
    let below_tent = FactCheck::run(edges, |(u, v)| {
        let (iu, iv) = (u.index_at_depth(depth), v.index_at_depth(depth));
        let top = u.level().max(v.level());
        (iu + 1..iv)
            .find(|&i| levels[i] <= top)
            .map(|i| format!("{} lies under edge {{{u}, {v}}}", points[i]))
    });

    let tent_length = FactCheck::run(interior(), |z| {
        let sum = rho(z, DyadicPoint::ZERO, params)
            .and_then(|a| Ok(a + rho(z, DyadicPoint::ONE, params)?));
        match (sum, params.tau(z.level())) {
            (Ok(s), Ok(t)) if s == t => None,
            (Ok(s), Ok(t)) => Some(format!("{z}: rho(z,0)+rho(z,1) = {s}, tau = {t}")),
            (Err(e), _) | (_, Err(e)) => Some(format!("{z}: {e}")),
        }
    });

    Ok(FactReport {
        depth,
        levels_partition: FactCheck::run(interior(), levels_partition),
        neighbor_jump: FactCheck::run(interior(), neighbor_jump),
        below_tent,
        tent_length,
    })
}
