//! Growth certificates: signs of `lim x f''(x)` at both ends.

use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use super::{ExpPolynomial, RationalFunction};

/// Sides on which `x f''(x)` is certified to tend to `-inf` (left) or
/// `+inf` (right).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthCertificate {
    pub left: bool,
    pub right: bool,
}

impl GrowthCertificate {
    pub fn both() -> Self {
        GrowthCertificate { left: true, right: true }
    }

    pub fn is_two_sided(&self) -> bool {
        self.left && self.right
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrowthRejection {
    #[error("numerator degree {m} does not exceed denominator degree {n}: horizontal asymptote")]
    HorizontalAsymptote { m: usize, n: usize },
    #[error("numerator degree is denominator degree + 1: oblique asymptote, no growth")]
    ObliqueAsymptote,
    #[error("degree {degree} of the {part} is odd")]
    OddDegree { part: &'static str, degree: usize },
    #[error("leading coefficient ratio has the wrong sign")]
    WrongSign,
    #[error("exponent has even degree with negative leading coefficient: the function decays on both sides")]
    DecayingExponent,
    #[error("2n + m - 2 = {value} is odd")]
    OddLeadingPower { value: usize },
    #[error("leading coefficient of the polynomial factor is negative")]
    NegativeFactor,
}

/// `x R''(x) ~ (m-n)(m-n-1) (a_m / b_n) x^(m-n-1)`, so both tails grow with
/// the required signs when `m > n + 1`, `m, n` even and `a_m / b_n > 0`.
pub fn rational_growth_check(r: &RationalFunction) -> Result<GrowthCertificate, GrowthRejection> {
    let m = r.numerator().degree().unwrap_or(0);
    let n = r.denominator().degree().unwrap_or(0);
    if r.numerator().is_zero() || m <= n {
        return Err(GrowthRejection::HorizontalAsymptote { m, n });
    }
    if m == n + 1 {
        return Err(GrowthRejection::ObliqueAsymptote);
    }
    if m % 2 == 1 {
        return Err(GrowthRejection::OddDegree { part: "numerator", degree: m });
    }
    if n % 2 == 1 {
        return Err(GrowthRejection::OddDegree { part: "denominator", degree: n });
    }
    let am = r.numerator().leading().expect("non-zero");
    let bn = r.denominator().leading().expect("non-zero");
    let factor = ((m - n) * (m - n - 1)) as i64;
    if (am / bn * crate::Rational::from_integer(factor.into())).is_positive() {
        Ok(GrowthCertificate::both())
    } else {
        Err(GrowthRejection::WrongSign)
    }
}

/// `x f''(x) ~ n^2 a_m b_n^2 x^(2n+m-1) e^q`. With `2n+m-2` even and
/// `a_m > 0` the sign pattern is right on every side where `q -> +inf`.
/// For even `n` that needs `b_n > 0` and covers both sides; for odd `n` only
/// the side where `b_n x^n -> +inf` grows, the other side decays to the
/// asymptote `y = 0`.
pub fn exppoly_growth_check(g: &ExpPolynomial) -> Result<GrowthCertificate, GrowthRejection> {
    let m = g.factor().degree().unwrap_or(0);
    let n = g.exponent().degree().unwrap_or(0);
    let bn = g.exponent().leading().expect("degree >= 1");
    let am = g.factor().leading().expect("non-zero factor");
    if n % 2 == 0 && bn.is_negative() {
        return Err(GrowthRejection::DecayingExponent);
    }
    if (2 * n + m - 2) % 2 == 1 {
        return Err(GrowthRejection::OddLeadingPower { value: 2 * n + m - 2 });
    }
    if am.is_negative() {
        return Err(GrowthRejection::NegativeFactor);
    }
    if n % 2 == 0 {
        Ok(GrowthCertificate::both())
    } else {
        let right = bn.is_positive();
        Ok(GrowthCertificate { left: !right, right })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QPoly;

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_i64s(c)
    }

    fn rational(p: &[i64], d: &[i64]) -> Result<GrowthCertificate, GrowthRejection> {
        rational_growth_check(&RationalFunction::new(q(p), q(d)).unwrap())
    }

    fn exppoly(p: &[i64], e: &[i64]) -> Result<GrowthCertificate, GrowthRejection> {
        exppoly_growth_check(&ExpPolynomial::new(q(p), q(e)).unwrap())
    }

    #[test]
    fn rational_cases() {
        assert_eq!(rational(&[1, 0, 1, 0, 1], &[1, 0, 1]), Ok(GrowthCertificate::both()));
        assert_eq!(rational(&[0, 1, 0, 1], &[1, 0, 2, 0, 1]).unwrap_err(), GrowthRejection::HorizontalAsymptote { m: 1, n: 2 });
        assert_eq!(rational(&[1, 1, 0, 1], &[1, 0, 1]), Err(GrowthRejection::ObliqueAsymptote));
        assert_eq!(rational(&[1, 0, 1], &[2, 0, 1]).unwrap_err(), GrowthRejection::HorizontalAsymptote { m: 2, n: 2 });
        assert_eq!(rational(&[1, 0, 1, 0, -1], &[1, 0, 1]), Err(GrowthRejection::WrongSign));
    }

    #[test]
    fn exponential_cases() {
        assert_eq!(exppoly(&[1], &[0, 0, 1]), Ok(GrowthCertificate::both()));
        assert_eq!(exppoly(&[1], &[0, 0, -1]), Err(GrowthRejection::DecayingExponent));
        assert_eq!(exppoly(&[0, 1], &[0, 0, 1]), Err(GrowthRejection::OddLeadingPower { value: 3 }));
        assert_eq!(exppoly(&[1], &[0, 1]), Ok(GrowthCertificate { left: false, right: true }));
        assert_eq!(exppoly(&[1], &[0, -1]), Ok(GrowthCertificate { left: true, right: false }));
        assert_eq!(exppoly(&[-1], &[0, 0, 1]), Err(GrowthRejection::NegativeFactor));
    }
}
