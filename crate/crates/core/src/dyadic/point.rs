use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use super::DyadicError;
use crate::qcore::Rational;

/// Deepest level a [`DyadicPoint`] can hold.
pub const MAX_LEVEL: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

/// A dyadic rational `numer / 2^level` in `[0, 1]`, always reduced.
///
/// Level 0 holds exactly the endpoints 0 and 1; for level `n ≥ 1` the
/// numerator is odd and strictly between 0 and `2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicPoint {
    numer: u64,
    level: u32,
}

impl DyadicPoint {
    pub const ZERO: DyadicPoint = DyadicPoint { numer: 0, level: 0 };
    pub const ONE: DyadicPoint = DyadicPoint { numer: 1, level: 0 };

    /// `numer / 2^level`, reduced.
    pub fn new(numer: u64, level: u32) -> Result<Self, DyadicError> {
        if level > MAX_LEVEL {
            return Err(DyadicError::LevelTooDeep(level));
        }
        if numer > 1u64 << level {
            return Err(DyadicError::NotDyadic(format!("{numer}/2^{level}")));
        }
        if numer == 0 {
            return Ok(Self::ZERO);
        }
        let shift = numer.trailing_zeros().min(level);
        Ok(Self {
            numer: numer >> shift,
            level: level - shift,
        })
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn denom(&self) -> u64 {
        1u64 << self.level
    }

    pub fn is_endpoint(&self) -> bool {
        self.level == 0
    }

    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.numer), BigInt::from(self.denom()))
    }

    /// Position among the `2^depth + 1` points of level at most `depth`,
    /// listed in increasing order.
    pub fn index_at_depth(&self, depth: u32) -> usize {
        debug_assert!(self.level <= depth);
        (self.numer << (depth - self.level)) as usize
    }

    /// All points of level at most `depth`, ascending.
    pub fn up_to_depth(depth: u32) -> Result<Vec<Self>, DyadicError> {
        if depth > MAX_LEVEL {
            return Err(DyadicError::LevelTooDeep(depth));
        }
        (0..=(1u64 << depth)).map(|k| Self::new(k, depth)).collect()
    }

    /// `(l(z), r(z)) = ((k−1)/2^n, (k+1)/2^n)`.
    pub fn neighbors(&self) -> Result<(Self, Self), DyadicError> {
        if self.is_endpoint() {
            return Err(DyadicError::EndpointHasNoNeighbors);
        }
        Ok((
            Self::new(self.numer - 1, self.level)?,
            Self::new(self.numer + 1, self.level)?,
        ))
    }

    pub fn left(&self) -> Option<Self> {
        self.neighbors().ok().map(|(l, _)| l)
    }

    pub fn right(&self) -> Option<Self> {
        self.neighbors().ok().map(|(_, r)| r)
    }

    pub fn step(&self, direction: Direction) -> Option<Self> {
        match direction {
            Direction::Left => self.left(),
            Direction::Right => self.right(),
        }
    }

    /// `z, f(z), f²(z), …` down to an endpoint, where `f` is the chosen
    /// neighbour map. Endpoints yield `[z]`.
    pub fn path(&self, direction: Direction) -> Vec<Self> {
        let mut out = vec![*self];
        let mut cur = *self;
        while let Some(next) = cur.step(direction) {
            out.push(next);
            cur = next;
        }
        out
    }

    pub fn left_path(&self) -> Vec<Self> {
        self.path(Direction::Left)
    }

    pub fn right_path(&self) -> Vec<Self> {
        self.path(Direction::Right)
    }

    /// `1 − z`.
    pub fn mirror(&self) -> Self {
        if self.level == 0 {
            return Self {
                numer: 1 - self.numer,
                level: 0,
            };
        }
        Self {
            numer: self.denom() - self.numer,
            level: self.level,
        }
    }
}

impl Ord for DyadicPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = (self.numer as u128) << other.level;
        let b = (other.numer as u128) << self.level;
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level == 0 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom())
        }
    }
}

impl TryFrom<&Rational> for DyadicPoint {
    type Error = DyadicError;

    fn try_from(value: &Rational) -> Result<Self, Self::Error> {
        let bad = || DyadicError::NotDyadic(value.to_string());
        let denom: u64 = value.denom().try_into().map_err(|_| bad())?;
        let numer: u64 = value.numer().try_into().map_err(|_| bad())?;
        if !denom.is_power_of_two() || numer > denom {
            return Err(bad());
        }
        Self::new(numer, denom.trailing_zeros())
    }
}

impl FromStr for DyadicPoint {
    type Err = DyadicError;

    /// Accepts `p/q` with `q` a power of two, or a bare integer 0 or 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DyadicError::NotDyadic(s.to_string());
        let s = s.trim();
        let (numer, denom) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<u64>().map_err(|_| bad())?,
                q.trim().parse::<u64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<u64>().map_err(|_| bad())?, 1),
        };
        if denom == 0 {
            return Err(bad());
        }
        let g = numer.gcd(&denom);
        let (numer, denom) = (numer / g, denom / g);
        if !denom.is_power_of_two() || numer > denom {
            return Err(bad());
        }
        Self::new(numer, denom.trailing_zeros())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> DyadicPoint {
        s.parse().unwrap()
    }

    #[test]
    fn construction_reduces() {
        assert_eq!(DyadicPoint::new(4, 3).unwrap(), p("1/2"));
        assert_eq!(DyadicPoint::new(8, 3).unwrap(), DyadicPoint::ONE);
        assert_eq!(DyadicPoint::new(0, 5).unwrap(), DyadicPoint::ZERO);
        assert_eq!(p("6/32"), p("3/16"));
        assert_eq!(p("3/16").level(), 4);
        assert!(DyadicPoint::new(9, 3).is_err());
        assert!(DyadicPoint::new(1, 63).is_err());
        assert!("1/3".parse::<DyadicPoint>().is_err());
        assert!("3/2".parse::<DyadicPoint>().is_err());
        assert!("x".parse::<DyadicPoint>().is_err());
    }

    #[test]
    fn neighbors_of_printed_point() {
        let (l, r) = p("11/64").neighbors().unwrap();
        assert_eq!((l, r), (p("5/32"), p("3/16")));
        assert_eq!(
            p("1/2").neighbors().unwrap(),
            (DyadicPoint::ZERO, DyadicPoint::ONE)
        );
        assert_eq!(p("3/8").neighbors().unwrap(), (p("1/4"), p("1/2")));
        assert_eq!(
            DyadicPoint::ZERO.neighbors(),
            Err(DyadicError::EndpointHasNoNeighbors)
        );
        assert_eq!(
            DyadicPoint::ONE.neighbors(),
            Err(DyadicError::EndpointHasNoNeighbors)
        );
    }

    #[test]
    fn printed_paths() {
        let z = p("11/64");
        let left: Vec<_> = ["11/64", "5/32", "1/8", "0"].iter().map(|s| p(s)).collect();
        let right: Vec<_> = ["11/64", "3/16", "1/4", "1/2", "1"]
            .iter()
            .map(|s| p(s))
            .collect();
        assert_eq!(z.left_path(), left);
        assert_eq!(z.right_path(), right);
        assert_eq!(DyadicPoint::ZERO.right_path(), vec![DyadicPoint::ZERO]);
        assert_eq!(DyadicPoint::ONE.left_path(), vec![DyadicPoint::ONE]);
    }

    #[test]
    fn ordering_and_display() {
        let mut pts = DyadicPoint::up_to_depth(3).unwrap();
        assert_eq!(pts.len(), 9);
        let sorted = pts.clone();
        pts.reverse();
        pts.sort();
        assert_eq!(pts, sorted);
        let shown: Vec<String> = sorted.iter().map(|z| z.to_string()).collect();
        assert_eq!(
            shown,
            ["0", "1/8", "1/4", "3/8", "1/2", "5/8", "3/4", "7/8", "1"]
        );
        for (i, z) in sorted.iter().enumerate() {
            assert_eq!(z.index_at_depth(3), i);
        }
    }

    #[test]
    fn mirror_reflects() {
        assert_eq!(p("1/4").mirror(), p("3/4"));
        assert_eq!(DyadicPoint::ZERO.mirror(), DyadicPoint::ONE);
        for z in DyadicPoint::up_to_depth(6).unwrap() {
            assert_eq!(z.mirror().mirror(), z);
            assert_eq!(
                z.mirror().value(),
                Rational::from_integer(1.into()) - z.value()
            );
            if let (Some(r), Some(l_of_mirror)) = (z.right(), z.mirror().left()) {
                assert_eq!(l_of_mirror, r.mirror());
            }
        }
    }

    #[test]
    fn rational_conversion() {
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(DyadicPoint::try_from(&half).unwrap(), p("1/2"));
        assert!(DyadicPoint::try_from(&Rational::new(1.into(), 3.into())).is_err());
    }
}
