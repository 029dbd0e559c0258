use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::qcore::{snowflake, validate_space, AnySpace, QuasiMetricSpace, Rational};

/// Kind of random space to draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeneratorKind {
    /// Distances between uniform points in the unit square (float mode).
    EuclideanMetric,
    /// Random binary merge tree with nondecreasing heights (exact mode).
    Ultrametric,
    /// A Euclidean metric raised entrywise to the power `p` (float mode).
    SnowflakedMetric { p: f64 },
    /// A Euclidean metric with each distance scaled by an independent factor
    /// in `[1, 1 + delta]` (float mode). `K` may exceed 2.
    Perturbed { delta: f64 },
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::EuclideanMetric => "euclidean-metric",
            GeneratorKind::Ultrametric => "ultrametric",
            GeneratorKind::SnowflakedMetric { .. } => "snowflaked-metric",
            GeneratorKind::Perturbed { .. } => "perturbed",
        }
    }

    /// Parse a kind name, taking the exponent or perturbation size from `param`.
    pub fn parse(name: &str, param: Option<f64>) -> Result<Self, HarnessError> {
        Ok(match name {
            "euclidean-metric" => GeneratorKind::EuclideanMetric,
            "ultrametric" => GeneratorKind::Ultrametric,
            "snowflaked-metric" => GeneratorKind::SnowflakedMetric {
                p: param
                    .ok_or_else(|| HarnessError::BadSpec("snowflaked-metric needs p".into()))?,
            },
            "perturbed" => GeneratorKind::Perturbed {
                delta: param.unwrap_or(0.5),
            },
            other => return Err(HarnessError::BadSpec(format!("unknown kind {other:?}"))),
        })
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, None)
    }
}

/// Identical specs produce identical spaces: draws come from ChaCha8
/// seeded with `seed`, which is stable across platforms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
}

fn euclidean(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = (rng.gen::<f64>(), rng.gen::<f64>());
        if pts.iter().all(|q| (q.0 - p.0).hypot(q.1 - p.1) > 1e-6) {
            pts.push(p);
        }
    }
    pts.iter()
        .map(|a| pts.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).collect())
        .collect()
}

fn ultrametric(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut m = vec![vec![Rational::default(); n]; n];
    let mut height: i64 = 0;
    while clusters.len() > 1 {
        // Heights are quarters; increments of zero give equal merge heights.
        height += rng.gen_range(if height == 0 { 1..=4 } else { 0..=4 });
        let i = rng.gen_range(0..clusters.len());
        let mut j = rng.gen_range(0..clusters.len() - 1);
        if j >= i {
            j += 1;
        }
        let h = Rational::new(height.into(), 4.into());
        for &x in &clusters[i] {
            for &y in &clusters[j] {
                m[x][y] = h.clone();
                m[y][x] = h.clone();
            }
        }
        let merged = clusters.swap_remove(i.max(j));
        clusters[i.min(j)].extend(merged);
    }
    m
}

pub fn generate_space(spec: &GeneratorSpec) -> Result<AnySpace, HarnessError> {
    if spec.n < 2 {
        return Err(HarnessError::BadSpec(format!(
            "need n >= 2, got {}",
            spec.n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok(match spec.kind {
        GeneratorKind::EuclideanMetric => validate_space(euclidean(spec.n, &mut rng), None)?.into(),
        GeneratorKind::Ultrametric => validate_space(ultrametric(spec.n, &mut rng), None)?.into(),
        GeneratorKind::SnowflakedMetric { p } => {
            if !(p > 0.0 && p.is_finite()) {
                return Err(HarnessError::BadSpec(format!(
                    "exponent must be positive, got {p}"
                )));
            }
            let base: QuasiMetricSpace<f64> = validate_space(euclidean(spec.n, &mut rng), None)?;
            snowflake(&base, &p)?.into()
        }
        GeneratorKind::Perturbed { delta } => {
            if !(delta >= 0.0 && delta.is_finite()) {
                return Err(HarnessError::BadSpec(format!(
                    "delta must be nonnegative, got {delta}"
                )));
            }
            let mut m = euclidean(spec.n, &mut rng);
            for i in 0..spec.n {
                for j in i + 1..spec.n {
                    let f = 1.0 + delta * rng.gen::<f64>();
                    m[i][j] *= f;
                    m[j][i] = m[i][j];
                }
            }
            validate_space(m, None)?.into()
        }
    })
}
