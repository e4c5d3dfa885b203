//! Expression front end: formula text to a differentiable tree.

mod diff;
mod eval;
mod parse;
mod print;

use std::fmt;

use num_traits::{One, Zero};

use crate::exactpoly::Polynomial;
use crate::Rational;

pub use eval::{CompiledExpr, EvalError};
pub use parse::{parse, ExponentIssue, ParseError};

/// A formula in the single variable `x`.
///
/// Constants are exact rationals. Integer powers carry their exponent in the
/// node, so a well-formed tree can never hold a negative or fractional power.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rational),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
    Atan(Box<Expr>),
    Neg(Box<Expr>),
}

// Constructors used by the differentiator. They fold the trivial identities
// (0 + a, 1 * a, a^1, constant op constant) and nothing else.
impl Expr {
    pub fn constant(q: Rational) -> Expr {
        Expr::Const(q)
    }

    pub fn integer(v: i64) -> Expr {
        Expr::Const(crate::scalar::int(v))
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(q) => Some(q),
            _ => None,
        }
    }

    fn is_const_zero(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_zero())
    }

    fn is_const_one(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_one())
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(p), Some(q)) => Expr::Const(p + q),
            _ if a.is_const_zero() => b,
            _ if b.is_const_zero() => a,
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(p), Some(q)) => Expr::Const(p - q),
            _ if b.is_const_zero() => a,
            _ if a.is_const_zero() => Expr::neg(b),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(p), Some(q)) => Expr::Const(p * q),
            _ if a.is_const_zero() || b.is_const_zero() => Expr::integer(0),
            _ if a.is_const_one() => b,
            _ if b.is_const_one() => a,
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(p), Some(q)) if !q.is_zero() => Expr::Const(p / q),
            _ if b.is_const_one() => a,
            _ if a.is_const_zero() && !b.is_const_zero() => Expr::integer(0),
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn pow(a: Expr, n: u32) -> Expr {
        match n {
            0 => Expr::integer(1),
            1 => a,
            _ => Expr::Pow(Box::new(a), n),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(q) => Expr::Const(-q),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    pub fn atan(a: Expr) -> Expr {
        Expr::Atan(Box::new(a))
    }

    /// Exact symbolic derivative with respect to `x`.
    pub fn differentiate(&self) -> Expr {
        diff::derivative(self)
    }

    /// Double-precision value at `x`.
    pub fn evaluate(&self, x: f64) -> Result<f64, EvalError> {
        eval::evaluate_tree(self, x)
    }

    pub fn compile(&self) -> CompiledExpr {
        CompiledExpr::new(self)
    }

    /// True when the tree mentions `x` somewhere.
    pub fn depends_on_x(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_x() || b.depends_on_x()
            }
            Expr::Pow(a, _) | Expr::Exp(a) | Expr::Atan(a) | Expr::Neg(a) => a.depends_on_x(),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
            Expr::Pow(a, _) | Expr::Exp(a) | Expr::Atan(a) | Expr::Neg(a) => 1 + a.size(),
        }
    }

    /// Exact coefficient list when the expression expands to a polynomial with
    /// rational coefficients. Division is only accepted by a non-zero
    /// constant; `exp` and `atan` always make the result non-polynomial.
    pub fn as_polynomial(&self) -> Option<Polynomial<Rational>> {
        Some(match self {
            Expr::Const(q) => Polynomial::constant(q.clone()),
            Expr::Var => Polynomial::x(),
            Expr::Add(a, b) => &a.as_polynomial()? + &b.as_polynomial()?,
            Expr::Sub(a, b) => &a.as_polynomial()? - &b.as_polynomial()?,
            Expr::Mul(a, b) => &a.as_polynomial()? * &b.as_polynomial()?,
            Expr::Div(a, b) => {
                let num = a.as_polynomial()?;
                let den = b.as_polynomial()?;
                if den.degree() != Some(0) {
                    return None;
                }
                num.scale(&(Rational::one() / den.coeffs()[0].clone()))
            }
            Expr::Pow(a, n) => a.as_polynomial()?.pow(*n),
            Expr::Neg(a) => -&a.as_polynomial()?,
            Expr::Exp(_) | Expr::Atan(_) => return None,
        })
    }

    /// The polynomial as an expression tree (Horner-free sum of monomials).
    pub fn from_polynomial(p: &Polynomial<Rational>) -> Expr {
        let mut acc: Option<Expr> = None;
        for (k, c) in p.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = num_traits::Signed::abs(c);
            let monomial = match k {
                0 => Expr::Const(magnitude.clone()),
                _ => Expr::mul(Expr::Const(magnitude.clone()), Expr::pow(Expr::Var, k as u32)),
            };
            acc = Some(match acc {
                None if num_traits::Signed::is_negative(c) => Expr::neg(monomial),
                None => monomial,
                Some(prev) if num_traits::Signed::is_negative(c) => Expr::sub(prev, monomial),
                Some(prev) => Expr::add(prev, monomial),
            });
        }
        acc.unwrap_or_else(|| Expr::integer(0))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::to_text(self))
    }
}
