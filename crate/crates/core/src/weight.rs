//! Edge weights: exact rationals or floating point.
//!
//! Every kernel in this crate is generic over a [`Weight`]. The rational
//! implementation keeps identities such as the cycle covering equation exact;
//! the `f64` implementation exists for user-supplied float graphs.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number used for exact weights.
pub type Rational = BigRational;

/// Scalar type carried on kernel edges, measures and cycle weights.
pub trait Weight: Clone + fmt::Debug + fmt::Display + PartialOrd + Num + Signed {
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Zero for exact weights; `|w| <= tol` for floats.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs().to_f64() <= tol
        }
    }

    /// Positive, and not a rounding leftover for float weights.
    fn is_positive_weight(&self, tol: f64) -> bool {
        self.is_positive() && !self.is_negligible(tol)
    }
}

impl Weight for Rational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
}

impl Weight for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

/// Converts a big rational to the nearest-ish `f64`, staying finite when
/// numerator and denominator individually overflow `f64`.
pub fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    sign * (ln_biguint(num) - ln_biguint(den)).exp()
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of `num / den` for positive big integers.
pub fn ln_ratio(num: &BigUint, den: &BigUint) -> f64 {
    ln_biguint(num) - ln_biguint(den)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator '{p}': {e}"))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator '{q}': {e}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let num = BigInt::from_str_radix(&digits, 10).map_err(|e| format!("bad decimal '{s}': {e}"))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|e| format!("bad rational '{s}': {e}"))
}

/// Formats a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
