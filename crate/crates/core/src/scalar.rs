//! Scalar abstraction shared by the polynomial engine and the classifiers.
//!
//! Polynomial arithmetic, evaluation and the region classifiers only need
//! ordered-field operations, so they are written once against [`Scalar`] and
//! used with [`BigRational`] on the exact path and `f64`/`f32` elsewhere.
//! Anything whose correctness depends on exact zero tests (gcd, Sturm
//! sequences, root isolation) is additionally bounded by [`ExactScalar`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync {
    fn from_i64(v: i64) -> Self;

    /// Nearest `f64`. Exact rationals round correctly; huge values saturate
    /// to infinity.
    fn to_f64(&self) -> f64;
}

/// Scalars whose arithmetic is exact, so `is_zero` on a computed value is a
/// proof rather than a rounding accident.
pub trait ExactScalar: Scalar {}

impl Scalar for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
}

impl ExactScalar for BigRational {}

/// Exact rational for a finite `f64` (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `"num/den"`, or just `"num"` for integers.
pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"3"`, `"-1/2"`, `"0.25"` or `"1e-3"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_decimal(n.trim())?;
        let d = parse_decimal(d.trim())?;
        if d == int(0) {
            return None;
        }
        return Some(n / d);
    }
    parse_decimal(text)
}

/// Exact value of a decimal literal with optional sign and exponent.
pub fn parse_decimal(text: &str) -> Option<BigRational> {
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], body[i + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (whole, frac) = match mantissa.split_once('.') {
        Some((w, f)) => (w, f),
        None => (mantissa, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::from(0)
    } else {
        digits.parse().ok()?
    };
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_decimal("0.5"), Some(rational(1, 2)));
        assert_eq!(parse_decimal("-1.25"), Some(rational(-5, 4)));
        assert_eq!(parse_decimal("1e-3"), Some(rational(1, 1000)));
        assert_eq!(parse_decimal("2.5E2"), Some(int(250)));
        assert_eq!(parse_decimal(".5"), Some(rational(1, 2)));
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1x"), None);
    }

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("1/2"), Some(rational(1, 2)));
        assert_eq!(parse_rational("-3/6"), Some(rational(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(rational_to_string(&rational(-6, 4)), "-3/2");
        assert_eq!(rational_to_string(&int(7)), "7");
    }

    #[test]
    fn float_round_trip() {
        let q = rational_from_f64(0.1).unwrap();
        assert_eq!(Scalar::to_f64(&q), 0.1);
        assert!(rational_from_f64(f64::NAN).is_none());
    }
}
