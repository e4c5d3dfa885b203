use super::Expr;

pub(super) fn derivative(e: &Expr) -> Expr {
    match e {
        Expr::Const(_) => Expr::integer(0),
        Expr::Var => Expr::integer(1),
        Expr::Add(a, b) => Expr::add(derivative(a), derivative(b)),
        Expr::Sub(a, b) => Expr::sub(derivative(a), derivative(b)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(derivative(a), (**b).clone()),
            Expr::mul((**a).clone(), derivative(b)),
        ),
        Expr::Div(a, b) => Expr::div(
            Expr::sub(
                Expr::mul(derivative(a), (**b).clone()),
                Expr::mul((**a).clone(), derivative(b)),
            ),
            Expr::pow((**b).clone(), 2),
        ),
        Expr::Pow(a, n) => match n {
            0 => Expr::integer(0),
            _ => Expr::mul(
                Expr::mul(Expr::integer(i64::from(*n)), Expr::pow((**a).clone(), n - 1)),
                derivative(a),
            ),
        },
        Expr::Exp(a) => Expr::mul(e.clone(), derivative(a)),
        Expr::Atan(a) => Expr::div(
            derivative(a),
            Expr::add(Expr::integer(1), Expr::pow((**a).clone(), 2)),
        ),
        Expr::Neg(a) => Expr::neg(derivative(a)),
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn product_rule_on_x_atan_x() {
        let d = parse("x*atan(x)").unwrap().differentiate();
        for x in [-3.0, -0.5, 0.0, 0.7, 4.0] {
            let expected = f64::atan(x) + x / (1.0 + x * x);
            assert!(close(d.evaluate(x).unwrap(), expected));
        }
    }

    #[test]
    fn exp_is_its_own_derivative() {
        let e = parse("exp(x)").unwrap();
        assert_eq!(e.differentiate(), e);
    }

    #[test]
    fn second_derivative_of_x_atan_x() {
        // f'' = 2 / (1 + x^2)^2
        let d2 = parse("x*atan(x)").unwrap().differentiate().differentiate();
        for x in [-10.0f64, -1.0, 0.0, 0.3, 2.0, 50.0] {
            let expected = 2.0 / (1.0 + x * x).powi(2);
            assert!(close(d2.evaluate(x).unwrap(), expected), "x = {x}");
        }
    }

    #[test]
    fn quotient_and_chain_rules() {
        let d = parse("exp(x^2)/(1+x^2)").unwrap().differentiate();
        let x: f64 = 0.8;
        let q = 1.0 + x * x;
        let expected = (2.0 * x * (x * x).exp() * q - (x * x).exp() * 2.0 * x) / (q * q);
        assert!(close(d.evaluate(x).unwrap(), expected));
        assert_eq!(parse("7").unwrap().differentiate().to_string(), "0");
        assert_eq!(parse("x^0").unwrap().differentiate().to_string(), "0");
    }
}
