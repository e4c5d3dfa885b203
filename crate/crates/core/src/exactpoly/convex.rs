//! Exact nonnegativity and convexity certificates for rational polynomials.

use num_traits::{Signed, Zero};

use super::{isolate_real_roots, sturm_count, Bound, IsolatingInterval, Polynomial};
use crate::Rational;

/// `p = leading * prod g^m` where every odd-`m` factor has no real root.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegCertificate {
    pub leading: Rational,
    pub factors: Vec<(Polynomial<Rational>, usize)>,
}

/// Why a polynomial is not nonnegative on all of the real line.
#[derive(Clone, Debug, PartialEq)]
pub enum Negativity {
    NegativeConstant(Rational),
    NegativeLeading(Rational),
    /// A real root of odd multiplicity, where the sign flips.
    SignChange { root: IsolatingInterval },
}

/// Decides `p(x) >= 0` for every real `x`.
pub fn certify_nonnegative(p: &Polynomial<Rational>) -> Result<NonnegCertificate, Negativity> {
    let leading = p.leading().cloned().unwrap_or_else(Rational::zero);
    if p.degree().unwrap_or(0) == 0 {
        return if leading.is_negative() {
            Err(Negativity::NegativeConstant(leading))
        } else {
            Ok(NonnegCertificate { leading, factors: Vec::new() })
        };
    }
    if leading.is_negative() {
        return Err(Negativity::NegativeLeading(leading));
    }
    let factors = p.square_free_decomposition();
    for (g, m) in &factors {
        if m % 2 == 1 && sturm_count(g, &Bound::NegInf, &Bound::PosInf) > 0 {
            let root = isolate_real_roots(g).remove(0);
            return Err(Negativity::SignChange { root });
        }
    }
    Ok(NonnegCertificate { leading, factors })
}

/// Convexity of a polynomial, decided on its second derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityVerdict {
    pub second_derivative: Polynomial<Rational>,
    pub outcome: Result<NonnegCertificate, Negativity>,
}

impl ConvexityVerdict {
    pub fn is_convex(&self) -> bool {
        self.outcome.is_ok()
    }
}

pub fn is_convex_poly(f: &Polynomial<Rational>) -> ConvexityVerdict {
    let second_derivative = f.nth_derivative(2);
    let outcome = certify_nonnegative(&second_derivative);
    ConvexityVerdict { second_derivative, outcome }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn convex(c: &[i64]) -> bool {
        is_convex_poly(&Polynomial::from_i64s(c)).is_convex()
    }

    #[test]
    fn basic_cases() {
        assert!(convex(&[0, 0, 1]));
        assert!(!convex(&[0, 0, 0, 1]));
        assert!(convex(&[0, 0, 0, 0, 1]));
        assert!(!convex(&[0, 0, -2, 0, 1]));
        assert!(convex(&[3, 1]));
        assert!(convex(&[]));
    }

    #[test]
    fn even_multiplicity_root_is_fine() {
        let f = Polynomial::new(vec![int(0), int(1), int(0), int(0), rational(1, 12)]);
        let verdict = is_convex_poly(&f);
        assert_eq!(verdict.second_derivative, Polynomial::from_i64s(&[0, 0, 1]));
        assert!(verdict.is_convex());
    }

    #[test]
    fn reasons() {
        let p = Polynomial::from_i64s(&[-4, 0, 12]);
        match certify_nonnegative(&p) {
            Err(Negativity::SignChange { root }) => assert!(!root.is_point()),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            certify_nonnegative(&Polynomial::from_i64s(&[1, 0, -1])),
            Err(Negativity::NegativeLeading(_))
        ));
        assert!(matches!(
            certify_nonnegative(&Polynomial::from_i64s(&[-2])),
            Err(Negativity::NegativeConstant(_))
        ));
        // (x^2 + 1)(x - 3)^2
        let p = &Polynomial::from_i64s(&[1, 0, 1]) * &Polynomial::from_i64s(&[-3, 1]).pow(2);
        assert!(certify_nonnegative(&p).is_ok());
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::int;

    /// Twice-integrated `p^2 + c` with `c >= 0`: convex by construction.
    fn convex() -> impl Strategy<Value = Polynomial<Rational>> {
        (prop::collection::vec(-5i64..6, 1..4), 0i64..4, -5i64..6, -5i64..6).prop_map(|(p, c, a0, a1)| {
            let p = Polynomial::<Rational>::from_i64s(&p);
            let second = &(&p * &p) + &Polynomial::constant(int(c));
            let mut f = second.integral().integral();
            f = &f + &Polynomial::from_i64s(&[a0, a1]);
            f
        })
    }

    proptest! {
        #[test]
        fn constructed_convex_is_certified(f in convex()) {
            prop_assert!(is_convex_poly(&f).is_convex());
        }

        #[test]
        fn sums_of_convex_stay_convex(f in convex(), g in convex(), a in -9i64..10, b in -9i64..10) {
            let h = &(&f + &g) + &Polynomial::from_i64s(&[a, b]);
            prop_assert!(is_convex_poly(&h).is_convex());
        }

        #[test]
        fn sampled_negativity_is_never_certified(f in convex(), a in -20i64..21, b in -20i64..21) {
            let h = &f + &Polynomial::from_i64s(&[0, 0, 0, a, -b.abs()]);
            let second = h.derivative().derivative();
            let negative = (-80..=80).any(|k| second.eval(&crate::scalar::rational(k, 4)) < Rational::zero());
            if negative {
                prop_assert!(!is_convex_poly(&h).is_convex());
            }
        }
    }
}
