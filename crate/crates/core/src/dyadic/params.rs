use num_traits::{One, Signed};

use super::DyadicError;
use crate::qcore::{Rational, Scalar};

/// The edge-length base `a ∈ (0, 1/2]` and the constants derived from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicParams {
    a: Rational,
}

impl DyadicParams {
    pub fn new(a: Rational) -> Result<Self, DyadicError> {
        let half = Rational::new(1.into(), 2.into());
        if !a.is_positive() || a > half {
            return Err(DyadicError::InvalidParameter(a.to_string()));
        }
        Ok(Self { a })
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self, DyadicError> {
        if denom == 0 {
            return Err(DyadicError::InvalidParameter(format!("{numer}/{denom}")));
        }
        Self::new(Rational::new(numer.into(), denom.into()))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Length `a^level` of an edge hanging from a point of that level.
    pub fn power(&self, level: u32) -> Rational {
        self.a.powi(level)
    }

    /// `τ_n = a + a² + … + a^{n−1} + 2aⁿ`, the tent length of a level-`n` point.
    pub fn tau(&self, n: u32) -> Result<Rational, DyadicError> {
        if n == 0 {
            return Err(DyadicError::NonpositiveIndex);
        }
        let mut total = self.power(n) * Rational::from_u64(2);
        for k in 1..n {
            total += self.power(k);
        }
        Ok(total)
    }

    /// `lim τ_n = a/(1−a)`.
    pub fn tau_infinity(&self) -> Rational {
        &self.a / (Rational::one() - &self.a)
    }

    /// `(1−a)/a`: every triangle satisfies `ρ(x,z) ≤ ((1−a)/a)·(ρ(x,y) + ρ(y,z))`.
    pub fn bound_constant(&self) -> Rational {
        (Rational::one() - &self.a) / &self.a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parameter_range() {
        assert!(DyadicParams::from_ratio(1, 2).is_ok());
        assert!(DyadicParams::from_ratio(2, 5).is_ok());
        assert!(DyadicParams::from_ratio(0, 1).is_err());
        assert!(DyadicParams::from_ratio(3, 5).is_err());
        assert!(DyadicParams::from_ratio(-1, 5).is_err());
        assert!(DyadicParams::from_ratio(1, 0).is_err());
    }

    #[test]
    fn tau_values() {
        let p = DyadicParams::from_ratio(2, 5).unwrap();
        assert_eq!(p.tau(1).unwrap(), q(4, 5));
        assert_eq!(p.tau(2).unwrap(), q(18, 25));
        assert_eq!(p.tau(3).unwrap(), q(86, 125));
        assert_eq!(p.tau_infinity(), q(2, 3));
        assert_eq!(p.bound_constant(), q(3, 2));
        assert_eq!(p.tau(0), Err(DyadicError::NonpositiveIndex));
    }

    #[test]
    fn tau_at_half_is_one() {
        let p = DyadicParams::from_ratio(1, 2).unwrap();
        for n in 1..=20 {
            assert_eq!(p.tau(n).unwrap(), q(1, 1));
        }
        assert_eq!(p.tau_infinity(), q(1, 1));
        assert_eq!(p.bound_constant(), q(1, 1));
    }

    #[test]
    fn tau_decreases_to_limit() {
        let p = DyadicParams::from_ratio(1, 4).unwrap();
        let mut prev = p.tau(1).unwrap();
        assert_eq!(prev, q(1, 2));
        for n in 2..=30 {
            let t = p.tau(n).unwrap();
            assert!(t < prev && t > p.tau_infinity());
            prev = t;
        }
    }
}
