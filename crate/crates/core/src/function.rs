//! A parsed function together with its derivatives and recognized structure.

use num_traits::Zero;

use crate::convexity::{ExpPolynomial, RationalFunction};
use crate::expr::{parse, CompiledExpr, EvalError, Expr, ParseError};
use crate::{FPoly, QPoly, Rational};

/// Structure detected in the expression; drives the exact and theorem paths.
#[derive(Clone, Debug, PartialEq)]
pub enum Form {
    Polynomial(QPoly),
    Rational(RationalFunction),
    ExpPolynomial(ExpPolynomial),
    /// `x * atan(x)`
    XAtanX,
    General,
}

impl Form {
    pub fn name(&self) -> &'static str {
        match self {
            Form::Polynomial(_) => "polynomial",
            Form::Rational(_) => "rational-function",
            Form::ExpPolynomial(_) => "exp-polynomial",
            Form::XAtanX => "x-atan-x",
            Form::General => "general",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Function {
    expr: Expr,
    form: Form,
    d1: Expr,
    d2: Expr,
    compiled: [CompiledExpr; 3],
    fast: Option<Fast>,
}

/// Closed-form derivatives for the recognized forms; the compiled
/// derivative trees are the fallback.
#[derive(Clone, Debug)]
enum Fast {
    Horner([FPoly; 3]),
    XAtanX,
    /// `p * exp(q)` with `p, p', p''` and `q', q''`
    Exp { p: [FPoly; 3], q: [FPoly; 3] },
}

fn with_derivatives(p: &QPoly) -> [FPoly; 3] {
    let d = p.derivative();
    [p.to_f64(), d.to_f64(), d.derivative().to_f64()]
}

impl Fast {
    fn eval(&self, k: usize, x: f64) -> f64 {
        match self {
            Fast::Horner(polys) => polys[k].eval(&x),
            Fast::XAtanX => {
                let w = 1.0 + x * x;
                match k {
                    0 => x * x.atan(),
                    1 => x.atan() + x / w,
                    _ => 2.0 / (w * w),
                }
            }
            Fast::Exp { p, q } => {
                let e = q[0].eval(&x).exp();
                let p0 = p[0].eval(&x);
                match k {
                    0 => p0 * e,
                    1 => (p[1].eval(&x) + p0 * q[1].eval(&x)) * e,
                    _ => {
                        let q1 = q[1].eval(&x);
                        (p[2].eval(&x) + 2.0 * p[1].eval(&x) * q1 + p0 * (q[2].eval(&x) + q1 * q1)) * e
                    }
                }
            }
        }
    }
}

impl Function {
    pub fn parse(text: &str) -> Result<Function, ParseError> {
        Ok(Function::from_expr(parse(text)?))
    }

    pub fn from_expr(expr: Expr) -> Function {
        let form = recognize(&expr);
        let d1 = expr.differentiate();
        let d2 = d1.differentiate();
        let compiled = [expr.compile(), d1.compile(), d2.compile()];
        let fast = match &form {
            Form::Polynomial(p) => Some(Fast::Horner(with_derivatives(p))),
            Form::XAtanX => Some(Fast::XAtanX),
            Form::ExpPolynomial(g) => Some(Fast::Exp { p: with_derivatives(g.factor()), q: with_derivatives(g.exponent()) }),
            _ => None,
        };
        Function { expr, form, d1, d2, compiled, fast }
    }

    pub fn from_polynomial(p: &QPoly) -> Function {
        Function::from_expr(Expr::from_polynomial(p))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative_expr(&self) -> &Expr {
        &self.d1
    }

    pub fn second_derivative_expr(&self) -> &Expr {
        &self.d2
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn as_polynomial(&self) -> Option<&QPoly> {
        match &self.form {
            Form::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    fn nth(&self, k: usize, x: f64) -> Result<f64, EvalError> {
        match &self.fast {
            Some(fast) => Ok(fast.eval(k, x)),
            None => self.compiled[k].eval(x),
        }
    }

    pub fn value(&self, x: f64) -> Result<f64, EvalError> {
        self.nth(0, x)
    }

    pub fn slope(&self, x: f64) -> Result<f64, EvalError> {
        self.nth(1, x)
    }

    pub fn curvature(&self, x: f64) -> Result<f64, EvalError> {
        self.nth(2, x)
    }

    /// Single-precision evaluation of `f`.
    pub fn value_f32(&self, x: f32) -> Result<f32, EvalError> {
        self.compiled[0].eval(x)
    }

    /// Exact value where the form makes it rational: polynomials and
    /// rational functions everywhere, the transcendental forms at the points
    /// where the transcendental factor is trivial.
    pub fn value_exact(&self, x: &Rational) -> Option<Rational> {
        match &self.form {
            Form::Polynomial(p) => Some(p.eval(x)),
            Form::Rational(r) => Some(r.eval_exact(x)),
            Form::ExpPolynomial(g) => {
                let pv = g.factor().eval(x);
                (pv.is_zero() || g.exponent().eval(x).is_zero()).then_some(pv)
            }
            Form::XAtanX => x.is_zero().then(Rational::zero),
            Form::General => None,
        }
    }

    /// Whether `f(x)` is provably irrational, so it cannot equal any
    /// rational `t`: `e^r` and `atan(r)` are transcendental for rational
    /// `r != 0` (Lindemann-Weierstrass).
    pub fn value_is_irrational(&self, x: &Rational) -> bool {
        match &self.form {
            Form::ExpPolynomial(_) | Form::XAtanX => self.value_exact(x).is_none(),
            _ => false,
        }
    }
}

fn recognize(expr: &Expr) -> Form {
    if let Some(p) = expr.as_polynomial() {
        return Form::Polynomial(p);
    }
    match expr {
        Expr::Mul(a, b) => {
            if matches!((&**a, &**b), (Expr::Var, Expr::Atan(inner)) | (Expr::Atan(inner), Expr::Var) if **inner == Expr::Var)
            {
                return Form::XAtanX;
            }
            for (poly, other) in [(a, b), (b, a)] {
                if let (Some(p), Expr::Exp(inner)) = (poly.as_polynomial(), &**other) {
                    if let Some(q) = inner.as_polynomial() {
                        if let Ok(g) = ExpPolynomial::new(p, q) {
                            return Form::ExpPolynomial(g);
                        }
                    }
                }
            }
            Form::General
        }
        Expr::Exp(inner) => match inner.as_polynomial() {
            Some(q) => ExpPolynomial::new(QPoly::one(), q).map_or(Form::General, Form::ExpPolynomial),
            None => Form::General,
        },
        Expr::Div(a, b) => match (a.as_polynomial(), b.as_polynomial()) {
            (Some(p), Some(q)) => RationalFunction::new(p, q).map_or(Form::General, Form::Rational),
            _ => Form::General,
        },
        _ => Form::General,
    }
}
