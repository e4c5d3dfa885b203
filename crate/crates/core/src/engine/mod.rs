//! Illumination index: tangency enumeration, line deduplication and the
//! dispatch between the exact, theorem and numeric paths.

mod exact;
mod numeric;
pub mod scan;

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

pub use exact::PreparedPolynomial;
pub use numeric::{dedup_lines, tangencies_numeric, NumericTangencies, LINE_TOLERANCE, TAIL_THRESHOLD};

use crate::convexity::{certify, classify, NoCertificate, TheoremSetup, Verdict};
use crate::exactpoly::{build_gs_poly, IsolatingInterval, Line, PolyError};
use crate::expr::EvalError;
use crate::function::Function;
use crate::scalar::{rational_from_f64, Scalar};
use crate::Rational;

/// The query point `P = (s, t)`, kept exactly together with `f64` copies.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryPoint {
    s: Rational,
    t: Rational,
    s_f64: f64,
    t_f64: f64,
}

impl QueryPoint {
    pub fn new(s: Rational, t: Rational) -> Self {
        QueryPoint { s_f64: s.to_f64(), t_f64: t.to_f64(), s, t }
    }

    /// `None` unless both coordinates are finite.
    pub fn from_f64(s: f64, t: f64) -> Option<Self> {
        Some(QueryPoint { s: rational_from_f64(s)?, t: rational_from_f64(t)?, s_f64: s, t_f64: t })
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn s_f64(&self) -> f64 {
        self.s_f64
    }

    pub fn t_f64(&self) -> f64 {
        self.t_f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    LeftOfS,
    EqualsS,
    RightOfS,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangencyRecord {
    pub abscissa: f64,
    /// Certified isolating interval (exact path only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<IsolatingInterval>,
    pub line: Line,
    pub side: Side,
    /// Root multiplicity of `g_s(c) - t`; on the numeric path 2 marks a
    /// touching root of unknown even multiplicity.
    pub multiplicity: usize,
}

/// One counted line with every tangency that produces it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentLine {
    pub line: Line,
    pub tangencies: Vec<TangencyRecord>,
}

impl TangentLine {
    pub fn single(rec: TangencyRecord) -> Self {
        TangentLine { line: rec.line.clone(), tangencies: vec![rec] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactPoly,
    ConvexTheorem,
    NumericScan,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ExactPoly => "exact-poly",
            Method::ConvexTheorem => "convex-theorem",
            Method::NumericScan => "numeric-scan",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IlluminationResult {
    pub index: usize,
    pub method: Method,
    pub lines: Vec<TangentLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub diagnostics: Vec<String>,
    /// The last numeric scan still saw a near-zero residual at a window end,
    /// so a tangency may lie outside it.
    pub window_truncated: bool,
}

impl IlluminationResult {
    pub fn tangencies(&self) -> impl Iterator<Item = &TangencyRecord> {
        self.lines.iter().flat_map(|l| l.tangencies.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("point ({s}, {t}) lies on the graph")]
    OnGraph { s: f64, t: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("exact path requires a polynomial with rational coefficients")]
    NotPolynomial,
    #[error(transparent)]
    NoCertificate(#[from] NoCertificate),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("invalid window [{lo}, {hi}]")]
    InvalidWindow { lo: f64, hi: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MethodChoice {
    #[default]
    Auto,
    Exact,
    Theorem,
    Numeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub method: MethodChoice,
    /// Explicit scan window; otherwise `[s - half_width, s + half_width]`,
    /// or a root bound of `g_s - t` for polynomials.
    pub window: Option<(f64, f64)>,
    pub half_width: f64,
    pub samples: usize,
    /// Times the window (and sample count) doubles while a tangency may lie
    /// outside it.
    pub max_doublings: u32,
    /// Accept convexity of a general expression without proof.
    pub assume_convex: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            method: MethodChoice::Auto,
            window: None,
            half_width: 1e3,
            samples: 4096,
            max_doublings: 4,
            assume_convex: false,
        }
    }
}

/// `f(c) + (s - c) f'(c)`: the value at `x = s` of the tangent at `c`.
pub fn gs_eval(f: &Function, s: f64, c: f64) -> Result<f64, EvalError> {
    let slope = f.slope(c)?;
    let value = f.value(c)?;
    if s == c {
        return Ok(value);
    }
    Ok(value + (s - c) * slope)
}

/// Exact where `f(s)` is rational or provably irrational, otherwise within
/// `1e-9 (1 + |f(s)|)`.
pub fn point_on_graph(f: &Function, p: &QueryPoint) -> Result<bool, EvalError> {
    if let Some(v) = f.value_exact(p.s()) {
        return Ok(&v == p.t());
    }
    if f.value_is_irrational(p.s()) {
        return Ok(false);
    }
    let fs = f.value(p.s_f64())?;
    Ok((p.t_f64() - fs).abs() <= 1e-9 * (1.0 + fs.abs()))
}

/// Reusable query context for one function: caches the prepared polynomial
/// (convexity and multiple tangent lines) and the theorem certificate.
#[derive(Debug)]
pub struct Illuminator {
    f: Function,
    options: Options,
    prepared: Option<PreparedPolynomial>,
    setup: OnceLock<Result<TheoremSetup, NoCertificate>>,
}

impl Illuminator {
    pub fn new(f: Function, options: Options) -> Self {
        let prepared = f.as_polynomial().map(|p| PreparedPolynomial::new(p.clone()));
        Illuminator { f, options, prepared, setup: OnceLock::new() }
    }

    pub fn function(&self) -> &Function {
        &self.f
    }

    pub fn options(&self) -> &Options {
        &self.options
    }

    pub fn theorem_setup(&self) -> Result<&TheoremSetup, NoCertificate> {
        self.setup
            .get_or_init(|| certify(&self.f, self.options.assume_convex))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn is_linear(&self) -> bool {
        self.prepared.as_ref().is_some_and(|p| p.polynomial().degree().unwrap_or(0) <= 1)
    }

    pub fn query(&self, p: &QueryPoint) -> Result<IlluminationResult, EngineError> {
        if point_on_graph(&self.f, p)? {
            return Err(EngineError::OnGraph { s: p.s_f64(), t: p.t_f64() });
        }
        if self.is_linear() {
            return Ok(IlluminationResult {
                index: 0,
                method: Method::ExactPoly,
                lines: Vec::new(),
                verdict: None,
                diagnostics: vec!["linear function: its only tangent line is the graph itself".into()],
                window_truncated: false,
            });
        }
        match self.options.method {
            MethodChoice::Auto => {
                if self.prepared.is_some() {
                    self.exact(p)
                } else if self.theorem_setup().is_ok() {
                    self.theorem(p)
                } else {
                    self.numeric(p)
                }
            }
            MethodChoice::Exact => self.exact(p),
            MethodChoice::Theorem => self.theorem(p),
            MethodChoice::Numeric => self.numeric(p),
        }
    }

    fn exact(&self, p: &QueryPoint) -> Result<IlluminationResult, EngineError> {
        let prepared = self.prepared.as_ref().ok_or(EngineError::NotPolynomial)?;
        let lines = prepared.lines(p)?;
        Ok(IlluminationResult {
            index: lines.len(),
            method: Method::ExactPoly,
            lines,
            verdict: None,
            diagnostics: Vec::new(),
            window_truncated: false,
        })
    }

    fn theorem(&self, p: &QueryPoint) -> Result<IlluminationResult, EngineError> {
        let setup = self.theorem_setup()?;
        let verdict = classify(&self.f, setup, p.s(), p.t())?;
        let (lines, mut diagnostics, window_truncated) = match &self.prepared {
            Some(prepared) => (prepared.lines(p)?, Vec::new(), false),
            None => self.scan_lines(p)?,
        };
        if verdict.near_boundary {
            diagnostics.push("point within 1e-9 of a region boundary; classified with the computed values".into());
        }
        if lines.len() != verdict.index {
            diagnostics.push(format!(
                "enumeration found {} tangent line(s); the region verdict {} is reported",
                lines.len(),
                verdict.index
            ));
        }
        Ok(IlluminationResult {
            index: verdict.index,
            method: Method::ConvexTheorem,
            lines,
            verdict: Some(verdict),
            diagnostics,
            window_truncated,
        })
    }

    fn numeric(&self, p: &QueryPoint) -> Result<IlluminationResult, EngineError> {
        let (lines, diagnostics, window_truncated) = self.scan_lines(p)?;
        Ok(IlluminationResult {
            index: lines.len(),
            method: Method::NumericScan,
            lines,
            verdict: None,
            diagnostics,
            window_truncated,
        })
    }

    fn initial_window(&self, p: &QueryPoint) -> Result<(f64, f64), EngineError> {
        if let Some(w) = self.options.window {
            return Ok(w);
        }
        let s = p.s_f64();
        if let Some(prepared) = &self.prepared {
            // every root of g_s - t lies inside the Cauchy bound
            let h = build_gs_poly(prepared.polynomial(), p.s(), p.t())?;
            let bound = h.cauchy_bound().to_f64().max(s.abs()) + 1.0;
            return Ok((-bound, bound));
        }
        Ok((s - self.options.half_width, s + self.options.half_width))
    }

    fn scan_lines(&self, p: &QueryPoint) -> Result<(Vec<TangentLine>, Vec<String>, bool), EngineError> {
        let (mut lo, mut hi) = self.initial_window(p)?;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(EngineError::InvalidWindow { lo, hi });
        }
        let mut samples = self.options.samples.max(64);
        let s = p.s_f64();
        let mut doublings = 0;
        loop {
            let found = tangencies_numeric(&self.f, p, (lo, hi), samples)?;
            if !found.tail_suspect || doublings == self.options.max_doublings {
                let mut diagnostics = found.diagnostics;
                if doublings > 0 {
                    diagnostics.push(format!("window doubled {doublings} time(s)"));
                }
                return Ok((dedup_lines(found.records), diagnostics, found.tail_suspect));
            }
            doublings += 1;
            lo = s - 2.0 * (s - lo);
            hi = s + 2.0 * (hi - s);
            samples *= 2;
        }
    }
}

/// One-shot convenience wrapper around [`Illuminator`].
pub fn illumination_index(f: &Function, p: &QueryPoint, options: &Options) -> Result<IlluminationResult, EngineError> {
    Illuminator::new(f.clone(), options.clone()).query(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn index(text: &str, s: Rational, t: Rational) -> IlluminationResult {
        illumination_index(&Function::parse(text).unwrap(), &QueryPoint::new(s, t), &Options::default()).unwrap()
    }

    #[test]
    fn gs_values() {
        let f = Function::parse("x*atan(x)").unwrap();
        assert!((gs_eval(&f, 0.0, 1.0).unwrap() + 0.5).abs() < 1e-15);
        let e = Function::parse("exp(x)").unwrap();
        assert!(gs_eval(&e, 0.0, 1.0).unwrap().abs() < 1e-15);
        assert_eq!(gs_eval(&e, 0.3, 0.3).unwrap(), 0.3f64.exp());
    }

    #[test]
    fn on_graph_predicate() {
        let sq = Function::parse("x^2").unwrap();
        assert!(point_on_graph(&sq, &QueryPoint::new(int(2), int(4))).unwrap());
        assert!(!point_on_graph(&sq, &QueryPoint::new(int(2), int(3))).unwrap());
        let xa = Function::parse("x*atan(x)").unwrap();
        assert!(point_on_graph(&xa, &QueryPoint::new(int(0), int(0))).unwrap());
        let general = Function::parse("x^2 + atan(x)").unwrap();
        let fs = 1.0 + 1f64.atan();
        assert!(point_on_graph(&general, &QueryPoint::from_f64(1.0, fs).unwrap()).unwrap());
    }

    #[test]
    fn dispatch() {
        let r = index("x^3", int(1), rational(1, 2));
        assert_eq!((r.index, r.method), (3, Method::ExactPoly));
        let r = index("x*atan(x)", int(0), rational(-1, 2));
        assert_eq!((r.index, r.method), (2, Method::ConvexTheorem));
        assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
        let r = index("x^4-2*x^2", int(0), int(-1));
        assert_eq!(r.index, 1);
        assert_eq!(r.lines[0].tangencies.len(), 2);
        let r = index("x^2 + atan(x)", int(0), int(-1));
        assert_eq!((r.index, r.method), (2, Method::NumericScan));
    }

    #[test]
    fn linear_functions_have_index_zero() {
        let r = index("3*x - 1", int(0), int(5));
        assert_eq!(r.index, 0);
        assert!(!r.diagnostics.is_empty());
        let f = Function::parse("2").unwrap();
        let err = illumination_index(&f, &QueryPoint::new(int(1), int(2)), &Options::default());
        assert!(matches!(err, Err(EngineError::OnGraph { .. })));
    }

    #[test]
    fn forced_methods() {
        let f = Function::parse("x*atan(x)").unwrap();
        let p = QueryPoint::new(int(0), rational(-1, 2));
        let exact = Options { method: MethodChoice::Exact, ..Options::default() };
        assert_eq!(illumination_index(&f, &p, &exact), Err(EngineError::NotPolynomial));
        let numeric = Options { method: MethodChoice::Numeric, ..Options::default() };
        assert_eq!(illumination_index(&f, &p, &numeric).unwrap().index, 2);
        let cubic = Function::parse("x^3").unwrap();
        let theorem = Options { method: MethodChoice::Theorem, ..Options::default() };
        assert!(matches!(
            illumination_index(&cubic, &p, &theorem),
            Err(EngineError::NoCertificate(_))
        ));
        let numeric_cubic = illumination_index(&cubic, &QueryPoint::new(int(1), rational(1, 2)), &numeric).unwrap();
        assert_eq!(numeric_cubic.index, 3);
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::{int, rational};
    use crate::QPoly;

    fn poly(degrees: std::ops::Range<usize>) -> impl Strategy<Value = QPoly> {
        (prop::collection::vec(-6i64..7, degrees), prop_oneof![-4i64..-1, 1i64..4]).prop_map(|(mut c, lead)| {
            c.push(lead);
            QPoly::from_i64s(&c)
        })
    }

    fn point() -> impl Strategy<Value = QueryPoint> {
        (-30i64..31, 1i64..5, -60i64..61, 1i64..5).prop_map(|(a, b, c, d)| QueryPoint::new(rational(a, b), rational(c, d)))
    }

    fn query(f: &QPoly, p: &QueryPoint, method: MethodChoice) -> Option<IlluminationResult> {
        let options = Options { method, ..Options::default() };
        match illumination_index(&Function::from_polynomial(f), p, &options) {
            Err(EngineError::OnGraph { .. }) => None,
            other => Some(other.unwrap()),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Exact and numeric paths agree away from double roots.
        #[test]
        fn exact_and_numeric_agree(f in poly(2..5), p in point()) {
            let Some(exact) = query(&f, &p, MethodChoice::Exact) else { return Ok(()) };
            prop_assume!(exact.tangencies().all(|r| r.multiplicity == 1));
            let numeric = query(&f, &p, MethodChoice::Numeric).unwrap();
            prop_assert_eq!(exact.index, numeric.index, "{} at ({}, {})", f, p.s(), p.t());
        }

        /// Every reported tangent passes through P.
        #[test]
        fn tangents_pass_through_point(f in poly(2..6), p in point()) {
            let Some(r) = query(&f, &p, MethodChoice::Exact) else { return Ok(()) };
            for line in &r.lines {
                match line.line.eval_exact(p.s()) {
                    Some(y) => prop_assert_eq!(&y, p.t()),
                    None => prop_assert!((line.line.eval(p.s_f64()) - p.t_f64()).abs() <= 1e-6 * (1.0 + p.t_f64().abs())),
                }
            }
        }

        /// Odd degree >= 3 always has at least one tangent through P.
        #[test]
        fn odd_degree_floor(f in prop_oneof![poly(3..4), poly(5..6)], p in point()) {
            if let Some(r) = query(&f, &p, MethodChoice::Exact) {
                prop_assert!(r.index >= 1);
            }
        }

        /// A convex polynomial admits at most two tangents through any point.
        #[test]
        fn convex_cap(c in prop::collection::vec(-4i64..5, 1..3), k in 0i64..3, p in point()) {
            let half = QPoly::from_i64s(&c);
            let f = (&(&half * &half) + &QPoly::constant(int(k))).integral().integral();
            prop_assume!(f.degree().unwrap_or(0) >= 2);
            if let Some(r) = query(&f, &p, MethodChoice::Exact) {
                prop_assert!(r.index <= 2);
            }
        }
    }
}
