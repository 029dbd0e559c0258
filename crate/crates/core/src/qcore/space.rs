use super::scalar::{Mode, Rational, Scalar, DEFAULT_TOLERANCE};
use super::SpaceError;

/// A validated finite quasi-metric space.
///
/// Entries are stored row-major. After validation the diagonal is exactly
/// zero and the matrix is exactly symmetric (in float mode the lower
/// triangle is copied from the upper one once the tolerance check passes).
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiMetricSpace<S> {
    labels: Vec<String>,
    rho: Vec<S>,
    n: usize,
    tolerance: f64,
}

/// Validate `matrix` with the default tolerance. `labels` defaults to
/// positional indices.
pub fn validate_space<S: Scalar>(
    matrix: Vec<Vec<S>>,
    labels: Option<Vec<String>>,
) -> Result<QuasiMetricSpace<S>, SpaceError> {
    QuasiMetricSpace::validate_with_tolerance(matrix, labels, DEFAULT_TOLERANCE)
}

impl<S: Scalar> QuasiMetricSpace<S> {
    pub fn new(matrix: Vec<Vec<S>>) -> Result<Self, SpaceError> {
        validate_space(matrix, None)
    }

    /// Errors name the first offending entry in row-major order.
    pub fn validate_with_tolerance(
        matrix: Vec<Vec<S>>,
        labels: Option<Vec<String>>,
        tolerance: f64,
    ) -> Result<Self, SpaceError> {
        let n = matrix.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(SpaceError::NonSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(SpaceError::LabelCount {
                    labels: l.len(),
                    points: n,
                })
            }
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        for (i, row) in matrix.iter().enumerate() {
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(SpaceError::NonFinite { i, j });
            }
        }

        let zero = S::zero();
        for i in 0..n {
            for j in 0..n {
                let x = &matrix[i][j];
                if i == j {
                    if !x.approx_eq(&zero, tolerance) {
                        return Err(SpaceError::NonzeroDiagonal { i });
                    }
                    continue;
                }
                if !zero.approx_le(x, tolerance) {
                    return Err(SpaceError::NegativeEntry { i, j });
                }
                if x.approx_eq(&zero, tolerance) {
                    return Err(SpaceError::ZeroOffDiagonal { i, j });
                }
                if j > i && !x.approx_eq(&matrix[j][i], tolerance) {
                    return Err(SpaceError::AsymmetricEntry { i, j });
                }
            }
        }

        let mut rho = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                rho.push(match i.cmp(&j) {
                    std::cmp::Ordering::Equal => S::zero(),
                    std::cmp::Ordering::Less => matrix[i][j].clone(),
                    std::cmp::Ordering::Greater => matrix[j][i].clone(),
                });
            }
        }
        Ok(Self {
            labels,
            rho,
            n,
            tolerance,
        })
    }

    /// Build from a symmetric function of index pairs; `f` is only called for `i < j`.
    pub fn from_fn<F>(n: usize, labels: Option<Vec<String>>, mut f: F) -> Result<Self, SpaceError>
    where
        F: FnMut(usize, usize) -> S,
    {
        let mut matrix = vec![vec![S::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                matrix[j][i] = v.clone();
                matrix[i][j] = v;
            }
        }
        validate_space(matrix, labels)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.rho[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.rho[i * self.n..(i + 1) * self.n]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[S] {
        &self.rho
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.rho.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }

    /// Apply `f` to every off-diagonal entry and revalidate.
    pub fn map_entries<F>(&self, mut f: F) -> Result<Self, SpaceError>
    where
        F: FnMut(&S) -> S,
    {
        let rows = self
            .rho
            .chunks(self.n)
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .enumerate()
                    .map(|(j, x)| if i == j { S::zero() } else { f(x) })
                    .collect()
            })
            .collect();
        Self::validate_with_tolerance(rows, Some(self.labels.clone()), self.tolerance)
    }

    /// Relabel so that new point `k` is old point `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length");
        let mut rho = Vec::with_capacity(self.n * self.n);
        for &pi in perm {
            for &pj in perm {
                rho.push(self.get(pi, pj).clone());
            }
        }
        Self {
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            rho,
            n: self.n,
            tolerance: self.tolerance,
        }
    }
}

/// A space whose numeric mode is only known at runtime (e.g. read from a file).
#[derive(Clone, Debug, PartialEq)]
pub enum AnySpace {
    Exact(QuasiMetricSpace<Rational>),
    Float(QuasiMetricSpace<f64>),
}

impl AnySpace {
    pub fn len(&self) -> usize {
        match self {
            AnySpace::Exact(s) => s.len(),
            AnySpace::Float(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            AnySpace::Exact(_) => Mode::Exact,
            AnySpace::Float(_) => Mode::Float,
        }
    }
}

impl From<QuasiMetricSpace<Rational>> for AnySpace {
    fn from(s: QuasiMetricSpace<Rational>) -> Self {
        AnySpace::Exact(s)
    }
}

impl From<QuasiMetricSpace<f64>> for AnySpace {
    fn from(s: QuasiMetricSpace<f64>) -> Self {
        AnySpace::Float(s)
    }
}
