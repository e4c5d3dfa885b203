use num_traits::{Float, FromPrimitive};
use thiserror::Error;

use super::Expr;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
}

pub(super) fn evaluate_tree(e: &Expr, x: f64) -> Result<f64, EvalError> {
    Ok(match e {
        Expr::Const(q) => q.to_f64(),
        Expr::Var => x,
        Expr::Add(a, b) => evaluate_tree(a, x)? + evaluate_tree(b, x)?,
        Expr::Sub(a, b) => evaluate_tree(a, x)? - evaluate_tree(b, x)?,
        Expr::Mul(a, b) => evaluate_tree(a, x)? * evaluate_tree(b, x)?,
        Expr::Div(a, b) => {
            let den = evaluate_tree(b, x)?;
            if den == 0.0 {
                return Err(EvalError::DivisionByZero { x });
            }
            evaluate_tree(a, x)? / den
        }
        Expr::Pow(a, n) => powu(evaluate_tree(a, x)?, *n),
        Expr::Exp(a) => evaluate_tree(a, x)?.exp(),
        Expr::Atan(a) => evaluate_tree(a, x)?.atan(),
        Expr::Neg(a) => -evaluate_tree(a, x)?,
    })
}

fn powu<F: Float>(base: F, n: u32) -> F {
    match i32::try_from(n) {
        Ok(k) => base.powi(k),
        Err(_) => base.powf(F::from(n).unwrap_or_else(F::infinity)),
    }
}

const INLINE_STACK: usize = 16;

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(f64),
    Var,
    Add,
    Sub,
    Mul,
    Div,
    Pow(u32),
    Exp,
    Atan,
    Neg,
}

/// Postfix form of an [`Expr`] with constants pre-rounded, for the hot loops
/// of the numeric scanners. Evaluation is generic over the float width.
#[derive(Debug, Clone)]
pub struct CompiledExpr {
    ops: Vec<Op>,
    depth: usize,
}

impl CompiledExpr {
    pub fn new(e: &Expr) -> Self {
        let mut ops = Vec::with_capacity(e.size());
        emit(e, &mut ops);
        let mut depth = 0usize;
        let mut max_depth = 0usize;
        for op in &ops {
            match op {
                Op::Const(_) | Op::Var => depth += 1,
                Op::Add | Op::Sub | Op::Mul | Op::Div => depth -= 1,
                Op::Pow(_) | Op::Exp | Op::Atan | Op::Neg => {}
            }
            max_depth = max_depth.max(depth);
        }
        CompiledExpr {
            ops,
            depth: max_depth,
        }
    }

    pub fn eval<F: Float + FromPrimitive>(&self, x: F) -> Result<F, EvalError> {
        if self.depth <= INLINE_STACK {
            let mut stack = [F::zero(); INLINE_STACK];
            self.run(x, &mut stack)
        } else {
            let mut stack = vec![F::zero(); self.depth];
            self.run(x, &mut stack)
        }
    }

    fn run<F: Float + FromPrimitive>(&self, x: F, stack: &mut [F]) -> Result<F, EvalError> {
        let mut sp = 0usize;
        for op in &self.ops {
            match *op {
                Op::Const(c) => {
                    stack[sp] = F::from_f64(c).unwrap_or_else(F::nan);
                    sp += 1;
                }
                Op::Var => {
                    stack[sp] = x;
                    sp += 1;
                }
                Op::Neg => stack[sp - 1] = -stack[sp - 1],
                Op::Exp => stack[sp - 1] = stack[sp - 1].exp(),
                Op::Atan => stack[sp - 1] = stack[sp - 1].atan(),
                Op::Pow(n) => stack[sp - 1] = powu(stack[sp - 1], n),
                Op::Add | Op::Sub | Op::Mul | Op::Div => {
                    sp -= 1;
                    let (a, b) = (stack[sp - 1], stack[sp]);
                    stack[sp - 1] = match *op {
                        Op::Add => a + b,
                        Op::Sub => a - b,
                        Op::Mul => a * b,
                        _ => {
                            if b.is_zero() {
                                return Err(EvalError::DivisionByZero {
                                    x: x.to_f64().unwrap_or(f64::NAN),
                                });
                            }
                            a / b
                        }
                    };
                }
            }
        }
        Ok(stack[0])
    }
}

fn emit(e: &Expr, ops: &mut Vec<Op>) {
    match e {
        Expr::Const(q) => ops.push(Op::Const(q.to_f64())),
        Expr::Var => ops.push(Op::Var),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            emit(a, ops);
            emit(b, ops);
            ops.push(match e {
                Expr::Add(..) => Op::Add,
                Expr::Sub(..) => Op::Sub,
                Expr::Mul(..) => Op::Mul,
                _ => Op::Div,
            });
        }
        Expr::Pow(a, n) => {
            emit(a, ops);
            ops.push(Op::Pow(*n));
        }
        Expr::Exp(a) => {
            emit(a, ops);
            ops.push(Op::Exp);
        }
        Expr::Atan(a) => {
            emit(a, ops);
            ops.push(Op::Atan);
        }
        Expr::Neg(a) => {
            emit(a, ops);
            ops.push(Op::Neg);
        }
    }
}
