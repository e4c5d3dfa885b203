use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::Expr;
use crate::scalar::parse_decimal;
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExponentIssue {
    Negative,
    Fractional,
    NotConstant,
    TooLarge,
}

impl std::fmt::Display for ExponentIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ExponentIssue::Negative => "negative exponent",
            ExponentIssue::Fractional => "fractional exponent",
            ExponentIssue::NotConstant => "exponent depends on x",
            ExponentIssue::TooLarge => "exponent too large",
        })
    }
}

/// Positions are 0-based character offsets into the input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown identifier '{name}' at position {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("bad exponent at position {position}: {issue}")]
    BadExponent {
        position: usize,
        issue: ExponentIssue,
    },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownIdentifier { position, .. }
            | ParseError::BadExponent { position, .. } => *position,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(tok: &Token) -> String {
    match tok {
        Token::Number(_) => "number".into(),
        Token::Ident(name) => format!("'{name}'"),
        Token::Plus => "'+'".into(),
        Token::Minus => "'-'".into(),
        Token::Star => "'*'".into(),
        Token::Slash => "'/'".into(),
        Token::Caret => "'^'".into(),
        Token::LParen => "'('".into(),
        Token::RParen => "')'".into(),
        Token::End => "end of input".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            d if d.is_ascii_digit() || d == '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // exponent part only when followed by digits, so "2e" stays an error
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        while j < chars.len() && chars[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let lexeme: String = chars[start..i].iter().collect();
                let value = parse_decimal(&lexeme).ok_or_else(|| ParseError::Syntax {
                    position: start,
                    message: format!("malformed number '{lexeme}'"),
                })?;
                out.push((Token::Number(value), start));
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Token::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Token::End, chars.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn pos(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.at].0.clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        tok
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::Syntax {
            position: self.pos(),
            message: format!("expected {wanted}, found {}", describe(self.peek())),
        }
    }

    fn expect(&mut self, tok: Token, wanted: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Token::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Token::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = match (lhs, rhs) {
                        // literal fractions such as 1/2 become a single constant
                        (Expr::Const(p), Expr::Const(q)) if !q.is_zero() => Expr::Const(p / q),
                        (l, r) => Expr::Div(Box::new(l), Box::new(r)),
                    };
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            let operand = self.unary()?;
            return Ok(match operand {
                Expr::Const(q) => Expr::Const(-q),
                other => Expr::Neg(Box::new(other)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let position = self.pos();
        let exponent = self.unary()?;
        let n = integer_exponent(&exponent).map_err(|issue| ParseError::BadExponent {
            position,
            issue,
        })?;
        Ok(Expr::Pow(Box::new(base), n))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let position = self.pos();
        match self.peek().clone() {
            Token::Number(q) => {
                self.bump();
                Ok(Expr::Const(q))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "x" => Ok(Expr::Var),
                    "exp" | "atan" => {
                        self.expect(Token::LParen, "'(' after function name")?;
                        let arg = self.expr()?;
                        self.expect(Token::RParen, "')'")?;
                        Ok(if name == "exp" {
                            Expr::Exp(Box::new(arg))
                        } else {
                            Expr::Atan(Box::new(arg))
                        })
                    }
                    _ => Err(ParseError::UnknownIdentifier { name, position }),
                }
            }
            _ => Err(self.unexpected("a number, 'x', a function or '('")),
        }
    }
}

/// Folds a variable-free exponent to an exact rational.
fn constant_value(e: &Expr) -> Option<Rational> {
    Some(match e {
        Expr::Const(q) => q.clone(),
        Expr::Add(a, b) => constant_value(a)? + constant_value(b)?,
        Expr::Sub(a, b) => constant_value(a)? - constant_value(b)?,
        Expr::Mul(a, b) => constant_value(a)? * constant_value(b)?,
        Expr::Div(a, b) => {
            let d = constant_value(b)?;
            if d.is_zero() {
                return None;
            }
            constant_value(a)? / d
        }
        Expr::Neg(a) => -constant_value(a)?,
        Expr::Pow(a, n) => num_traits::pow(constant_value(a)?, *n as usize),
        Expr::Var | Expr::Exp(_) | Expr::Atan(_) => return None,
    })
}

const MAX_EXPONENT: u32 = 4096;

fn integer_exponent(e: &Expr) -> Result<u32, ExponentIssue> {
    if e.depends_on_x() {
        return Err(ExponentIssue::NotConstant);
    }
    let value = constant_value(e).ok_or(ExponentIssue::NotConstant)?;
    if value.is_negative() {
        return Err(ExponentIssue::Negative);
    }
    if !value.denom().is_one() {
        return Err(ExponentIssue::Fractional);
    }
    let n: &BigInt = value.numer();
    match n.to_u32() {
        Some(v) if v <= MAX_EXPONENT => Ok(v),
        _ => Err(ExponentIssue::TooLarge),
    }
}

/// Parses a formula in `x`.
///
/// Precedence from tightest: `^` (right-associative), unary `-`, `*` `/`,
/// `+` `-`. So `-x^2` is `-(x^2)` and `2^3^2` is `2^9`.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, at: 0 };
    let e = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    #[test]
    fn named_examples() {
        assert_eq!(
            parse("x*atan(x)").unwrap(),
            Expr::Mul(Box::new(Expr::Var), Box::new(Expr::Atan(Box::new(Expr::Var))))
        );
        assert_eq!(parse("exp(x)").unwrap(), Expr::Exp(Box::new(Expr::Var)));
    }

    #[test]
    fn dangling_caret_reports_end_position() {
        let err = parse("x^").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 2, .. }), "{err:?}");
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), 2)))
        );
        assert_eq!(parse("2^3^2").unwrap(), Expr::Pow(Box::new(Expr::Const(int(2))), 9));
        assert_eq!(
            parse("1 - x - x").unwrap(),
            Expr::Sub(
                Box::new(Expr::Sub(Box::new(Expr::Const(int(1))), Box::new(Expr::Var))),
                Box::new(Expr::Var)
            )
        );
        assert_eq!(
            parse("1/2*x").unwrap(),
            Expr::Mul(Box::new(Expr::Const(rational(1, 2))), Box::new(Expr::Var))
        );
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse("0.5").unwrap(), Expr::Const(rational(1, 2)));
        assert_eq!(parse("-0.125").unwrap(), Expr::Const(rational(-1, 8)));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse("sin(x)"),
            Err(ParseError::UnknownIdentifier { position: 0, .. })
        ));
        assert!(matches!(
            parse("x^-1"),
            Err(ParseError::BadExponent { issue: ExponentIssue::Negative, position: 2 })
        ));
        assert!(matches!(
            parse("x^0.5"),
            Err(ParseError::BadExponent { issue: ExponentIssue::Fractional, .. })
        ));
        assert!(matches!(
            parse("x^x"),
            Err(ParseError::BadExponent { issue: ExponentIssue::NotConstant, .. })
        ));
        assert!(matches!(parse("(x"), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("x x"), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse("x # 2"), Err(ParseError::Syntax { position: 2, .. })));
        assert!(matches!(parse(""), Err(ParseError::Syntax { position: 0, .. })));
    }
}
