//! The tangent-value polynomial `h(c) = f(c) + (s - c) f'(c) - t`.

use super::{isolate_real_roots, IsolatingInterval, PolyError, Polynomial};
use crate::scalar::Scalar;
use crate::Rational;

/// Sign of an infinite limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Infinity {
    Negative,
    Positive,
}

impl Infinity {
    fn of<T: Scalar>(v: &T) -> Infinity {
        if v.is_positive() {
            Infinity::Positive
        } else {
            Infinity::Negative
        }
    }

    pub fn flip(self) -> Infinity {
        match self {
            Infinity::Negative => Infinity::Positive,
            Infinity::Positive => Infinity::Negative,
        }
    }
}

fn require_degree<T: Scalar>(f: &Polynomial<T>, minimum: usize) -> Result<usize, PolyError> {
    match f.degree() {
        Some(n) if n >= minimum => Ok(n),
        other => Err(PolyError::UnsupportedDegree { degree: other.unwrap_or(0), minimum }),
    }
}

/// Coefficients of `c^k`: `s (k+1) a_{k+1} - (k-1) a_k` for `k >= 1`, constant
/// `a_0 + s a_1 - t`. Degree is that of `f`, leading `-(n-1) a_n`.
pub fn build_gs_poly<T: Scalar>(f: &Polynomial<T>, s: &T, t: &T) -> Result<Polynomial<T>, PolyError> {
    let n = require_degree(f, 2)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(f.coeff(0) + s.clone() * f.coeff(1) - t.clone());
    for k in 1..=n {
        let next = s.clone() * T::from_i64(k as i64 + 1) * f.coeff(k + 1);
        coeffs.push(next - T::from_i64(k as i64 - 1) * f.coeff(k));
    }
    Ok(Polynomial::new(coeffs))
}

/// Limits of `g_s(c)` as `c -> -inf` and `c -> +inf`.
pub fn gs_limit_signs<T: Scalar>(f: &Polynomial<T>, s: &T) -> Result<(Infinity, Infinity), PolyError> {
    let h = build_gs_poly(f, s, &T::zero())?;
    let n = h.degree().unwrap_or(0);
    let right = Infinity::of(h.leading().expect("degree >= 2"));
    let left = if n % 2 == 1 { right.flip() } else { right };
    Ok((left, right))
}

/// Local-extremum abscissae of `g_s`: sign changes of `g_s'(c) = (s - c) f''(c)`.
pub fn gs_critical_points(f: &Polynomial<Rational>, s: &Rational) -> Result<Vec<IsolatingInterval>, PolyError> {
    require_degree(f, 2)?;
    let slope = &Polynomial::new(vec![s.clone(), -Rational::from_i64(1)]) * &f.nth_derivative(2);
    Ok(isolate_real_roots(&slope)
        .into_iter()
        .filter(|iv| iv.multiplicity % 2 == 1)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn q(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::from_i64s(c)
    }

    #[test]
    fn small_expansions() {
        assert_eq!(build_gs_poly(&q(&[0, 0, 1]), &int(0), &int(-1)).unwrap(), q(&[1, 0, -1]));
        assert_eq!(build_gs_poly(&q(&[0, 0, 0, 1]), &int(1), &int(0)).unwrap(), q(&[0, 0, 3, -2]));
        assert_eq!(
            build_gs_poly(&q(&[0, 0, 0, 0, 0, 1]), &int(1), &int(0)).unwrap(),
            q(&[0, 0, 0, 0, 5, -4])
        );
    }

    #[test]
    fn linear_is_unsupported() {
        assert_eq!(
            build_gs_poly(&q(&[1, 2]), &int(0), &int(0)),
            Err(PolyError::UnsupportedDegree { degree: 1, minimum: 2 })
        );
    }

    #[test]
    fn float_instantiation() {
        let f: Polynomial<f64> = Polynomial::from_i64s(&[0, 0, 1]);
        let h = build_gs_poly(&f, &0.5, &-1.0).unwrap();
        // f(c) + (s - c) f'(c) - t = c^2 + (0.5 - c) 2c + 1
        assert_eq!(h.coeffs(), &[1.0, 1.0, -1.0]);
    }

    #[test]
    fn limit_signs() {
        use Infinity::*;
        assert_eq!(gs_limit_signs(&q(&[0, 0, 0, 1]), &int(0)).unwrap(), (Positive, Negative));
        assert_eq!(gs_limit_signs(&q(&[0, 0, 1]), &int(5)).unwrap(), (Negative, Negative));
        assert_eq!(gs_limit_signs(&q(&[0, 0, 0, 0, -1]), &int(0)).unwrap(), (Positive, Positive));
    }

    #[test]
    fn critical_points() {
        let pts = |f: &[i64], s: i64| -> Vec<Rational> {
            gs_critical_points(&q(f), &int(s))
                .unwrap()
                .iter()
                .map(|iv| iv.exact_root().expect("rational").clone())
                .collect()
        };
        assert_eq!(pts(&[0, 0, 0, 1], 1), vec![int(0), int(1)]);
        assert_eq!(pts(&[0, 0, 1], 3), vec![int(3)]);
        assert_eq!(pts(&[0, 0, 0, 0, 1], 1), vec![int(1)]);
        // f = x^3 with s at the inflection: g_0' = -6c^2 keeps its sign
        assert!(pts(&[0, 0, 0, 1], 0).is_empty());
        let half = gs_critical_points(&q(&[0, 0, 0, 1]), &rational(1, 2)).unwrap();
        assert_eq!(half.len(), 2);
    }
}
