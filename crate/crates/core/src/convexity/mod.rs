//! Convexity certificates, asymptote detection and the region classifiers
//! for convex functions.
//!
//! For convex `f` the tangent-value function increases left of `s` and
//! decreases right of it, so at most two tangent lines pass through any
//! point, and which of 0, 1 or 2 occurs is read off from `f(s)` and the
//! values of the asymptotes (or growth) at each end.

mod asymptote;
mod forms;
mod growth;

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

pub use asymptote::{detect_asymptotes, AsymptoteInfo, AsymptoteSide, Provenance};
pub use forms::{ExpPolynomial, FormError, RationalFunction};
pub use growth::{exppoly_growth_check, rational_growth_check, GrowthCertificate, GrowthRejection};

use crate::exactpoly::{certify_nonnegative, is_convex_poly, Line};
use crate::expr::EvalError;
use crate::function::{Form, Function};
use crate::scalar::Scalar;
use crate::Rational;

/// A number known exactly, approximately, or both. Comparisons are exact
/// when both sides are exact and fall back to `f64` otherwise.
#[derive(Clone, Debug)]
pub struct Value {
    pub approx: f64,
    pub exact: Option<Rational>,
}

impl Value {
    pub fn exact(q: Rational) -> Value {
        Value { approx: q.to_f64(), exact: Some(q) }
    }

    pub fn approx(x: f64) -> Value {
        Value { approx: x, exact: None }
    }

    /// Within `1e-9 (1 + |a|)` of `other` without an exact comparison to
    /// settle it.
    pub fn near(&self, other: &Value) -> bool {
        if self.exact.is_some() && other.exact.is_some() {
            return false;
        }
        (self.approx - other.approx).abs() <= 1e-9 * (1.0 + self.approx.abs())
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Value) -> Option<Ordering> {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.cmp(b)),
            _ => self.approx.partial_cmp(&other.approx),
        }
    }
}

fn max_min<'a, T: PartialOrd>(a: &'a T, b: &'a T) -> (&'a T, &'a T) {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Two distinct oblique asymptotes `L1`, `L2`; requires `t < f(s)`.
/// `max < t` gives 2, `min < t <= max` gives 1, `t <= min` gives 0.
pub fn classify_two_asymptotes<T: PartialOrd>(_fs: &T, l1s: &T, l2s: &T, t: &T) -> usize {
    let (max, min) = max_min(l1s, l2s);
    if t > max {
        2
    } else if t > min {
        1
    } else {
        0
    }
}

/// Asymptote `L` on one side, growth on the other; requires `t < f(s)`.
pub fn classify_one_asymptote<T: PartialOrd>(_fs: &T, ls: &T, t: &T) -> usize {
    if t > ls {
        2
    } else {
        1
    }
}

/// Growth on both sides: every point below the graph sees two tangents.
pub fn classify_superlinear<T: PartialOrd>(fs: &T, t: &T) -> usize {
    if t < fs {
        2
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConvexityEvidence {
    /// `f''` is a polynomial certified nonnegative.
    PolynomialSecondDerivative,
    /// `R'' = N / q^3` with `q > 0` and `N` certified nonnegative.
    RationalNumerator,
    /// `f'' = W e^q` with `W` certified nonnegative.
    ExpFactor,
    /// `(x atan x)'' = 2 / (1 + x^2)^2`.
    XAtanX,
    UserAsserted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    AboveGraph,
    TwoAsymptotes,
    OneAsymptote,
    Superlinear,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremSetup {
    pub evidence: ConvexityEvidence,
    pub asymptotes: AsymptoteInfo,
    pub growth: Option<GrowthCertificate>,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoCertificate {
    #[error("no convexity certificate: {0}")]
    NotConvex(String),
    #[error("no convexity certificate: a linear function has no region structure")]
    Linear,
    #[error("no asymptote structure: {0}")]
    Structure(String),
}

fn convexity_evidence(f: &Function, assume_convex: bool) -> Result<ConvexityEvidence, NoCertificate> {
    let refuse = |what: &str| Err(NoCertificate::NotConvex(format!("{what} takes negative values")));
    match f.form() {
        Form::Polynomial(p) => {
            if p.degree().unwrap_or(0) <= 1 {
                return Err(NoCertificate::Linear);
            }
            if is_convex_poly(p).is_convex() {
                Ok(ConvexityEvidence::PolynomialSecondDerivative)
            } else {
                refuse("f''")
            }
        }
        Form::Rational(r) => match certify_nonnegative(&r.convexity_numerator()) {
            Ok(_) => Ok(ConvexityEvidence::RationalNumerator),
            Err(_) => refuse("f''"),
        },
        Form::ExpPolynomial(g) => match certify_nonnegative(&g.convexity_factor()) {
            Ok(_) => Ok(ConvexityEvidence::ExpFactor),
            Err(_) => refuse("f''"),
        },
        Form::XAtanX => Ok(ConvexityEvidence::XAtanX),
        Form::General if assume_convex => Ok(ConvexityEvidence::UserAsserted),
        Form::General => Err(NoCertificate::NotConvex(
            "convexity of a general expression is not decided; assert it explicitly".into(),
        )),
    }
}

fn growth_of(f: &Function) -> Option<GrowthCertificate> {
    match f.form() {
        Form::Polynomial(_) => Some(GrowthCertificate::both()),
        Form::Rational(r) => rational_growth_check(r).ok(),
        Form::ExpPolynomial(g) => exppoly_growth_check(g).ok(),
        _ => None,
    }
}

/// Certificate for the theorem path. `asymptotes` overrides detection
/// (recorded as user-supplied).
pub fn certify_with(
    f: &Function,
    assume_convex: bool,
    asymptotes: Option<(AsymptoteSide, AsymptoteSide)>,
) -> Result<TheoremSetup, NoCertificate> {
    let evidence = convexity_evidence(f, assume_convex)?;
    let asymptotes = match asymptotes {
        Some((left, right)) => AsymptoteInfo { left, right, provenance: Provenance::UserSupplied },
        None => detect_asymptotes(f),
    };
    let growth = growth_of(f);
    let grows = |left: bool| growth.is_some_and(|g| if left { g.left } else { g.right });
    use AsymptoteSide as A;
    let rule = match (&asymptotes.left, &asymptotes.right) {
        (A::Line { line: a }, A::Line { line: b }) => {
            if a.same_as(b, 1e-12) {
                return Err(NoCertificate::Structure("the same asymptote on both sides".into()));
            }
            Rule::TwoAsymptotes
        }
        (A::Line { .. }, A::Superlinear) if grows(false) => Rule::OneAsymptote,
        (A::Superlinear, A::Line { .. }) if grows(true) => Rule::OneAsymptote,
        (A::Superlinear, A::Superlinear) if grows(true) && grows(false) => Rule::Superlinear,
        (A::Undetermined, _) | (_, A::Undetermined) => {
            return Err(NoCertificate::Structure("asymptote fit did not converge".into()))
        }
        _ => return Err(NoCertificate::Structure("growth condition not certified".into())),
    };
    Ok(TheoremSetup { evidence, asymptotes, growth, rule })
}

pub fn certify(f: &Function, assume_convex: bool) -> Result<TheoremSetup, NoCertificate> {
    certify_with(f, assume_convex, None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub index: usize,
    pub rule: Rule,
    /// Some comparison was decided in floating point within `1e-9`.
    pub near_boundary: bool,
    pub f_at_s: f64,
    /// `L(s)` for each line asymptote, left first.
    pub asymptote_values: Vec<f64>,
}

fn line_value(line: &Line, s: &Rational, s_approx: f64) -> Value {
    match line.eval_exact(s) {
        Some(v) => Value::exact(v),
        None => Value::approx(line.eval(s_approx)),
    }
}

/// `f(s)` exactly when the form allows, else in `f64`.
pub fn value_at(f: &Function, s: &Rational) -> Result<Value, EvalError> {
    match f.value_exact(s) {
        Some(v) => Ok(Value::exact(v)),
        None => Ok(Value::approx(f.value(s.to_f64())?)),
    }
}

/// Region verdict for `P = (s, t)` off the graph.
pub fn classify(f: &Function, setup: &TheoremSetup, s: &Rational, t: &Rational) -> Result<Verdict, EvalError> {
    let fs = value_at(f, s)?;
    let tv = Value::exact(t.clone());
    let s_approx = s.to_f64();
    let lines: Vec<Value> = [&setup.asymptotes.left, &setup.asymptotes.right]
        .iter()
        .filter_map(|side| side.line())
        .map(|l| line_value(l, s, s_approx))
        .collect();
    let mut near = tv.near(&fs);
    let (index, rule) = if tv > fs {
        (0, Rule::AboveGraph)
    } else {
        near |= lines.iter().any(|l| tv.near(l));
        match setup.rule {
            Rule::TwoAsymptotes => (classify_two_asymptotes(&fs, &lines[0], &lines[1], &tv), Rule::TwoAsymptotes),
            Rule::OneAsymptote => (classify_one_asymptote(&fs, &lines[0], &tv), Rule::OneAsymptote),
            Rule::Superlinear | Rule::AboveGraph => (classify_superlinear(&fs, &tv), Rule::Superlinear),
        }
    };
    Ok(Verdict {
        index,
        rule,
        near_boundary: near,
        f_at_s: fs.approx,
        asymptote_values: lines.iter().map(|l| l.approx).collect(),
    })
}
