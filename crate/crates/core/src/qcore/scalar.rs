use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::SpaceError;

/// Arbitrary-precision rational, always kept in reduced form.
pub type Rational = BigRational;

/// Relative tolerance used for float-mode comparisons unless configured otherwise.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Integer entries no larger than this can be summed and cross-multiplied
/// without overflow (`2·2^62 < 2^64`, `2^63·2^63 < 2^128`).
const GRID_LIMIT: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// Nonnegative values rescaled to machine integers: `original = values[i] / scale`.
#[derive(Clone, Debug)]
pub struct IntegerGrid<S> {
    pub values: Vec<u64>,
    pub scale: S,
}

/// A distance value.
///
/// Implemented for [`Rational`] (exact mode) and `f64` (float mode). The
/// mode is carried by the type, so a whole space is always in one mode.
/// Comparisons that go through [`Scalar::approx_eq`] and
/// [`Scalar::approx_le`] are exact for rationals and tolerance-based for
/// floats.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Zero
    + One
{
    const MODE: Mode;

    fn from_u64(value: u64) -> Self;

    fn is_finite(&self) -> bool {
        true
    }

    /// Sum without consuming either operand.
    fn sum(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn approx_eq(&self, other: &Self, tolerance: f64) -> bool;
    fn approx_le(&self, other: &Self, tolerance: f64) -> bool;

    fn powi(&self, exponent: u32) -> Self;

    /// `self^p` for the snowflake transform. Exact mode only admits positive
    /// integer exponents.
    fn pow_scalar(&self, p: &Self) -> Result<Self, SpaceError>;

    fn to_f64(&self) -> f64;

    /// JSON form used in reports: rationals become `"p/q"` strings, floats
    /// stay numbers.
    fn to_json(&self) -> serde_json::Value;

    /// Token written into a matrix file.
    fn to_token(&self) -> String;

    /// Rescale nonnegative values onto a common integer grid when that is
    /// possible without loss. Float values never qualify.
    fn integer_grid(_values: &[Self]) -> Option<IntegerGrid<Self>> {
        None
    }

    fn from_scaled(value: u64, scale: &Self) -> Self {
        Self::from_u64(value) / scale.clone()
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_u64(value: u64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn sum(&self, other: &Self) -> Self {
        self + other
    }

    fn approx_eq(&self, other: &Self, _tolerance: f64) -> bool {
        self == other
    }

    fn approx_le(&self, other: &Self, _tolerance: f64) -> bool {
        self <= other
    }

    fn powi(&self, exponent: u32) -> Self {
        num_traits::pow::Pow::pow(self, exponent)
    }

    fn pow_scalar(&self, p: &Self) -> Result<Self, SpaceError> {
        if !p.is_positive() {
            return Err(SpaceError::NonpositiveExponent);
        }
        if !p.is_integer() {
            return Err(SpaceError::NonIntegerExponentInExactMode);
        }
        let exponent = p
            .to_integer()
            .to_u32()
            .ok_or(SpaceError::NonIntegerExponentInExactMode)?;
        Ok(self.powi(exponent))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn to_token(&self) -> String {
        self.to_string()
    }

    fn integer_grid(values: &[Self]) -> Option<IntegerGrid<Self>> {
        if values.iter().any(|v| v.is_negative()) {
            return None;
        }
        let mut lcm = BigInt::one();
        for v in values {
            if !v.denom().is_one() && !(&lcm % v.denom()).is_zero() {
                lcm = lcm.lcm(v.denom());
            }
        }
        let limit = BigInt::from(GRID_LIMIT);
        let mut scaled = Vec::with_capacity(values.len());
        for v in values {
            let numer = v.numer() * (&lcm / v.denom());
            if numer > limit {
                return None;
            }
            scaled.push(numer.to_u64()?);
        }
        Some(IntegerGrid {
            values: scaled,
            scale: Rational::from_integer(lcm),
        })
    }
}

fn tolerance_scale(a: f64, b: f64) -> f64 {
    1f64.max(a.abs()).max(b.abs())
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_u64(value: u64) -> Self {
        value as f64
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn sum(&self, other: &Self) -> Self {
        self + other
    }

    fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        (self - other).abs() <= tolerance * tolerance_scale(*self, *other)
    }

    fn approx_le(&self, other: &Self, tolerance: f64) -> bool {
        *self <= other + tolerance * tolerance_scale(*self, *other)
    }

    fn powi(&self, exponent: u32) -> Self {
        f64::powi(*self, exponent as i32)
    }

    fn pow_scalar(&self, p: &Self) -> Result<Self, SpaceError> {
        if p.is_nan() || *p <= 0.0 {
            return Err(SpaceError::NonpositiveExponent);
        }
        Ok(self.powf(*p))
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn to_token(&self) -> String {
        // Debug keeps a decimal point on integral values, so the file
        // re-parses in float mode.
        format!("{self:?}")
    }
}
