use num_traits::Signed;
use serde::Serialize;

use crate::exactpoly::Line;
use crate::function::{Form, Function};
use crate::scalar::Scalar;
use crate::Rational;

/// Behaviour of `f` at one end of the line.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AsymptoteSide {
    Line { line: Line },
    Superlinear,
    Undetermined,
}

impl AsymptoteSide {
    pub fn line(&self) -> Option<&Line> {
        match self {
            AsymptoteSide::Line { line } => Some(line),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    ExactRationalDivision,
    StructuralCertificate,
    /// Largest residual `|f(x) - L(x)|` observed on the last radius step.
    NumericFit { residual: f64 },
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoteInfo {
    pub left: AsymptoteSide,
    pub right: AsymptoteSide,
    pub provenance: Provenance,
}

const FIT_RADII: [f64; 3] = [1e2, 1e3, 1e4];
const FIT_TOLERANCE: f64 = 1e-4;

/// Tangent line at `x = direction * R` for each radius; accepted when the
/// line from each radius predicts `f` at the next radius better than the
/// previous one did, ending within `1e-4`.
fn numeric_fit(f: &Function, direction: f64) -> Option<(Line, f64)> {
    let mut lines = Vec::with_capacity(FIT_RADII.len());
    for r in FIT_RADII {
        let x = direction * r;
        let m = f.slope(x).ok()?;
        let y = f.value(x).ok()?;
        if !m.is_finite() || !y.is_finite() {
            return None;
        }
        lines.push(Line::approx(m, y - m * x));
    }
    let mut residuals = Vec::new();
    for k in 0..FIT_RADII.len() - 1 {
        let x = direction * FIT_RADII[k + 1];
        residuals.push((f.value(x).ok()? - lines[k].eval(x)).abs());
    }
    let decreasing = residuals.windows(2).all(|w| w[1] < w[0]);
    let last = *residuals.last()?;
    (decreasing && last <= FIT_TOLERANCE).then(|| (lines.pop().expect("three radii"), last))
}

pub fn detect_asymptotes(f: &Function) -> AsymptoteInfo {
    let exact_line = |p: &crate::QPoly| Line::exact(p.coeff(1), p.coeff(0));
    match f.form() {
        Form::Polynomial(p) => {
            let side = if p.degree().unwrap_or(0) <= 1 {
                AsymptoteSide::Line { line: exact_line(p) }
            } else {
                AsymptoteSide::Superlinear
            };
            AsymptoteInfo { left: side.clone(), right: side, provenance: Provenance::ExactRationalDivision }
        }
        Form::Rational(r) => {
            let (quotient, _) = r.polynomial_part();
            let side = if quotient.degree().unwrap_or(0) <= 1 {
                AsymptoteSide::Line { line: exact_line(&quotient) }
            } else {
                AsymptoteSide::Superlinear
            };
            AsymptoteInfo { left: side.clone(), right: side, provenance: Provenance::ExactRationalDivision }
        }
        Form::ExpPolynomial(g) => {
            let q = g.exponent();
            let n = q.degree().unwrap_or(0);
            let lead_positive = q.leading().expect("degree >= 1").is_positive();
            // q -> +inf on the right iff b_n > 0; on the left iff that flips with odd n
            let right_grows = lead_positive;
            let left_grows = if n % 2 == 0 { lead_positive } else { !lead_positive };
            let side = |grows: bool| {
                if grows {
                    AsymptoteSide::Superlinear
                } else {
                    AsymptoteSide::Line { line: Line::exact(Rational::from_i64(0), Rational::from_i64(0)) }
                }
            };
            AsymptoteInfo {
                left: side(left_grows),
                right: side(right_grows),
                provenance: Provenance::StructuralCertificate,
            }
        }
        Form::XAtanX => {
            let half_pi = std::f64::consts::FRAC_PI_2;
            AsymptoteInfo {
                left: AsymptoteSide::Line { line: Line::approx(-half_pi, -1.0) },
                right: AsymptoteSide::Line { line: Line::approx(half_pi, -1.0) },
                provenance: Provenance::StructuralCertificate,
            }
        }
        Form::General => {
            let left = numeric_fit(f, -1.0);
            let right = numeric_fit(f, 1.0);
            let residual = left.iter().chain(right.iter()).map(|(_, r)| *r).fold(0.0, f64::max);
            let side = |fit: Option<(Line, f64)>| match fit {
                Some((line, _)) => AsymptoteSide::Line { line },
                None => AsymptoteSide::Undetermined,
            };
            AsymptoteInfo { left: side(left), right: side(right), provenance: Provenance::NumericFit { residual } }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use std::f64::consts::FRAC_PI_2;

    fn info(text: &str) -> AsymptoteInfo {
        detect_asymptotes(&Function::parse(text).unwrap())
    }

    #[test]
    fn named_examples() {
        let a = info("x*atan(x)");
        assert_eq!(a.left.line().unwrap().slope, -FRAC_PI_2);
        assert_eq!(a.right.line().unwrap().intercept, -1.0);
        let e = info("exp(x)");
        assert_eq!(e.left.line().unwrap().exact.as_ref().unwrap().slope, int(0));
        assert_eq!(e.right, AsymptoteSide::Superlinear);
        let e = info("exp(-x)");
        assert_eq!(e.left, AsymptoteSide::Superlinear);
        assert!(e.right.line().is_some());
    }

    #[test]
    fn rational_division() {
        let r = info("(x^4+x^2+1)/(x^2+1)");
        assert_eq!(r.left, AsymptoteSide::Superlinear);
        assert_eq!(r.right, AsymptoteSide::Superlinear);
        assert_eq!(r.provenance, Provenance::ExactRationalDivision);
        let r = info("(x^3+2*x^2+1)/(x^2+1)");
        let line = r.right.line().unwrap().exact.clone().unwrap();
        assert_eq!((line.slope, line.intercept), (int(1), int(2)));
    }

    #[test]
    fn numeric_fit_of_a_general_expression() {
        // x atan x plus a decaying bump; asymptotes unchanged
        let a = info("x*atan(x) + 1/(1+x^2)");
        assert!(matches!(a.provenance, Provenance::NumericFit { residual } if residual <= 1e-4));
        let right = a.right.line().unwrap();
        assert!((right.slope - FRAC_PI_2).abs() < 1e-6);
        assert!((right.intercept + 1.0).abs() < 1e-4);
        let g = info("x^2 + atan(x)");
        assert_eq!(g.left, AsymptoteSide::Undetermined);
        assert_eq!(g.right, AsymptoteSide::Undetermined);
    }
}
