//! Structural function families with exact convexity tests.

use thiserror::Error;

use crate::exactpoly::{sturm_count, Bound};
use crate::scalar::Scalar;
use crate::{QPoly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("denominator has a real root, the function is not defined on the whole line")]
    RealPole,
    #[error("polynomial factor is zero")]
    ZeroFactor,
    #[error("exponent polynomial must have degree at least 1")]
    ConstantExponent,
}

/// `p / q` in lowest terms with `q` monic and free of real roots, so `q > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    p: QPoly,
    q: QPoly,
}

impl RationalFunction {
    pub fn new(p: QPoly, q: QPoly) -> Result<Self, FormError> {
        if q.is_zero() {
            return Err(FormError::ZeroDenominator);
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = if g.is_zero() || g.is_constant() {
            (p, q)
        } else {
            (p.exact_div(&g).expect("gcd divides"), q.exact_div(&g).expect("gcd divides"))
        };
        let lead = q.leading().expect("non-zero").clone();
        if lead != Rational::from_i64(1) {
            let inv = Rational::from_i64(1) / lead;
            p = p.scale(&inv);
            q = q.scale(&inv);
        }
        if sturm_count(&q, &Bound::NegInf, &Bound::PosInf) > 0 {
            return Err(FormError::RealPole);
        }
        Ok(RationalFunction { p, q })
    }

    pub fn numerator(&self) -> &QPoly {
        &self.p
    }

    pub fn denominator(&self) -> &QPoly {
        &self.q
    }

    pub fn eval_exact(&self, x: &Rational) -> Rational {
        self.p.eval(x) / self.q.eval(x)
    }

    /// Quotient and remainder of `p / q`; the quotient is the polynomial
    /// part that governs behaviour at infinity.
    pub fn polynomial_part(&self) -> (QPoly, QPoly) {
        self.p.div_rem(&self.q).expect("non-zero denominator")
    }

    /// `N` with `R'' = N / q^3`:
    /// `q^2 p'' - p q q'' - 2 p' q' q + 2 p q'^2`. Since `q > 0`, `R'' >= 0`
    /// everywhere iff `N >= 0` everywhere.
    pub fn convexity_numerator(&self) -> QPoly {
        let (p, q) = (&self.p, &self.q);
        let (p1, p2) = (p.derivative(), p.nth_derivative(2));
        let (q1, q2) = (q.derivative(), q.nth_derivative(2));
        let two = QPoly::constant(Rational::from_i64(2));
        let a = &(q * q) * &p2;
        let b = &(p * q) * &q2;
        let c = &(&(&two * &p1) * &q1) * q;
        let d = &(&two * p) * &(&q1 * &q1);
        &(&(&a - &b) - &c) + &d
    }
}

/// `p(x) * exp(q(x))` with `p != 0` and `deg q >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolynomial {
    p: QPoly,
    q: QPoly,
}

impl ExpPolynomial {
    pub fn new(p: QPoly, q: QPoly) -> Result<Self, FormError> {
        if p.is_zero() {
            return Err(FormError::ZeroFactor);
        }
        if q.degree().unwrap_or(0) == 0 {
            return Err(FormError::ConstantExponent);
        }
        Ok(ExpPolynomial { p, q })
    }

    pub fn factor(&self) -> &QPoly {
        &self.p
    }

    pub fn exponent(&self) -> &QPoly {
        &self.q
    }

    /// `W` with `f'' = W e^q`: `p q'^2 + 2 p' q' + p q'' + p''`.
    pub fn convexity_factor(&self) -> QPoly {
        let (p, q) = (&self.p, &self.q);
        let (p1, p2) = (p.derivative(), p.nth_derivative(2));
        let (q1, q2) = (q.derivative(), q.nth_derivative(2));
        let two = QPoly::constant(Rational::from_i64(2));
        let a = &(p * &q1) * &q1;
        let b = &(&two * &p1) * &q1;
        let c = p * &q2;
        &(&(&a + &b) + &c) + &p2
    }
}
