use num_traits::Signed;

use super::Expr;
use crate::scalar::rational_to_string;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::Pow(..) => 4,
        Expr::Const(_) | Expr::Var | Expr::Exp(_) | Expr::Atan(_) => ATOM,
    }
}

/// Text that parses back to the same tree (for trees the parser can
/// produce; the parser folds `-c` and `p/q` literals into one constant).
pub(super) fn to_text(e: &Expr) -> String {
    let mut out = String::new();
    write(e, 0, &mut out);
    out
}

fn write(e: &Expr, min: u8, out: &mut String) {
    let wrap = precedence(e) < min;
    if wrap {
        out.push('(');
    }
    match e {
        Expr::Const(q) => {
            if q.is_negative() || !q.is_integer() {
                out.push('(');
                out.push_str(&rational_to_string(q));
                out.push(')');
            } else {
                out.push_str(&rational_to_string(q));
            }
        }
        Expr::Var => out.push('x'),
        Expr::Add(a, b) => binary(a, "+", b, SUM, out),
        Expr::Sub(a, b) => binary(a, "-", b, SUM, out),
        Expr::Mul(a, b) => binary(a, "*", b, PRODUCT, out),
        Expr::Div(a, b) => binary(a, "/", b, PRODUCT, out),
        Expr::Neg(a) => {
            out.push('-');
            write(a, UNARY, out);
        }
        Expr::Pow(a, n) => {
            write(a, ATOM, out);
            out.push('^');
            out.push_str(&n.to_string());
        }
        Expr::Exp(a) => call("exp", a, out),
        Expr::Atan(a) => call("atan", a, out),
    }
    if wrap {
        out.push(')');
    }
}

fn binary(a: &Expr, op: &str, b: &Expr, level: u8, out: &mut String) {
    write(a, level, out);
    out.push_str(op);
    write(b, level + 1, out);
}

fn call(name: &str, arg: &Expr, out: &mut String) {
    out.push_str(name);
    out.push('(');
    write(arg, 0, out);
    out.push(')');
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    #[test]
    fn prints_minimal_parentheses() {
        for (input, printed) in [
            ("x*atan(x)", "x*atan(x)"),
            ("x - (x - 1)", "x-(x-1)"),
            ("(x + 1)^2", "(x+1)^2"),
            ("-(x*2)", "-(x*2)"),
            ("-x*2", "-x*2"),
            ("(x^2)^3", "(x^2)^3"),
            ("1/2 * x", "(1/2)*x"),
            ("x*(-3)", "x*(-3)"),
            ("exp(-x^2)", "exp(-x^2)"),
            ("x/(2/3)", "x/(2/3)"),
        ] {
            assert_eq!(parse(input).unwrap().to_string(), printed, "{input}");
        }
    }
}
