use serde::Serialize;

use super::Polynomial;
use crate::scalar::Scalar;
use crate::Rational;

/// Exact slope and intercept.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactLine {
    #[serde(serialize_with = "crate::cli::json::rational")]
    pub slope: Rational,
    #[serde(serialize_with = "crate::cli::json::rational")]
    pub intercept: Rational,
}

/// Non-vertical line `y = slope * x + intercept`.
///
/// The float pair is always present; `exact` is filled when the line is known
/// exactly (rational tangency point of a rational polynomial, exact asymptote).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactLine>,
}

impl Line {
    pub fn approx(slope: f64, intercept: f64) -> Line {
        Line { slope, intercept, exact: None }
    }

    pub fn exact(slope: Rational, intercept: Rational) -> Line {
        Line {
            slope: slope.to_f64(),
            intercept: intercept.to_f64(),
            exact: Some(ExactLine { slope, intercept }),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    pub fn eval_exact(&self, x: &Rational) -> Option<Rational> {
        self.exact.as_ref().map(|l| &l.slope * x + &l.intercept)
    }

    /// Tangent to `f` at `c`, computed exactly.
    pub fn tangent_exact(f: &Polynomial<Rational>, c: &Rational) -> Line {
        let m = f.derivative().eval(c);
        let b = f.eval(c) - c * &m;
        Line::exact(m, b)
    }

    /// Coincidence: exact comparison when both sides are exact, otherwise
    /// `|dm| <= tol (1 + |m|)` and `|db| <= tol (1 + |b|)`.
    pub fn same_as(&self, other: &Line, tol: f64) -> bool {
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a == b;
        }
        (self.slope - other.slope).abs() <= tol * (1.0 + self.slope.abs())
            && (self.intercept - other.intercept).abs() <= tol * (1.0 + self.intercept.abs())
    }
}
