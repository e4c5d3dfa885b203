use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::PolyError;
use crate::scalar::{ExactScalar, Scalar};

/// Dense univariate polynomial, coefficients indexed by power.
///
/// Invariant: the coefficient vector is empty (the zero polynomial) or its
/// last entry is non-zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `c * x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![T::zero()];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.clone() / T::from_i64(k as i64 + 1)),
        );
        Self::new(coeffs)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `p(q(x))`
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * inner) + &Self::constant(c.clone()))
    }

    /// Euclidean division over a field: `self = q * divisor + r`, `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let d_lead = divisor.leading().ok_or(PolyError::DivisionByZero)?.clone();
        let d_deg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - d_deg];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d_deg].clone() / d_lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(d_deg);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        self.map(Scalar::to_f64)
    }

    /// Cauchy bound `1 + max |a_k / a_n|`: every complex root has modulus
    /// strictly below it.
    pub fn cauchy_bound(&self) -> T {
        let Some(lead) = self.leading() else {
            return T::one();
        };
        let n = self.coeffs.len() - 1;
        let mut best = T::zero();
        for c in &self.coeffs[..n] {
            let r = (c.clone() / lead.clone()).abs();
            if r > best {
                best = r;
            }
        }
        best + T::one()
    }
}

impl<T: ExactScalar> Polynomial<T> {
    /// Same roots, leading coefficient 1. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lead) => {
                let inv = T::one() / lead.clone();
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        // monic remainders keep the coefficients from exploding
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor is non-zero");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(PolyError::NotDivisible);
        }
        Ok(q)
    }

    /// Yun's square-free decomposition: monic, pairwise coprime, square-free
    /// factors `g_i` with multiplicities `i` such that
    /// `self = lc(self) * prod g_i^i`. Constants decompose to nothing.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let d = self.derivative();
        let c = self.gcd(&d);
        let mut w = self.exact_div(&c).expect("gcd divides");
        let y = d.exact_div(&c).expect("gcd divides");
        let mut z = &y - &w.derivative();
        let mut out = Vec::new();
        let mut mult = 1;
        while w.degree().unwrap_or(0) > 0 {
            let g = w.gcd(&z);
            w = w.exact_div(&g).expect("gcd divides");
            let y = z.exact_div(&g).expect("gcd divides");
            z = &y - &w.derivative();
            if g.degree().unwrap_or(0) > 0 {
                out.push((g, mult));
            }
            mult += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::one();
        }
        self.exact_div(&self.gcd(&self.derivative()))
            .expect("gcd divides")
            .monic()
    }
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;

            fn $method(self, rhs: Polynomial<T>) -> Polynomial<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        -&self
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("x")?,
                1 => write!(f, "{mag}*x")?,
                _ if unit => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use crate::Rational;

    fn q(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::from_i64s(c)
    }

    #[test]
    fn derivative_of_cube() {
        assert_eq!(q(&[0, 0, 0, 1]).derivative(), q(&[0, 0, 3]));
        assert!(q(&[5]).derivative().is_zero());
    }

    #[test]
    fn gcd_is_monic() {
        assert_eq!(q(&[-1, 0, 1]).gcd(&q(&[-1, 1])), q(&[-1, 1]));
        assert_eq!(q(&[-2, 0, 2]).gcd(&q(&[-3, 3])), q(&[-1, 1]));
        assert_eq!(q(&[1, 0, 1]).gcd(&q(&[0, 1])), q(&[1]));
    }

    #[test]
    fn division_with_remainder() {
        // x^4 + x^2 + 1 = (x^2 + 1) * x^2 + 1
        let (quot, rem) = q(&[1, 0, 1, 0, 1]).div_rem(&q(&[1, 0, 1])).unwrap();
        assert_eq!(quot, q(&[0, 0, 1]));
        assert_eq!(rem, q(&[1]));
        assert_eq!(q(&[1, 2]).div_rem(&Polynomial::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn square_free_of_quintic_tangent_polynomial() {
        // x^4 (5 - 4x): factors x (mult 4) and x - 5/4 (mult 1)
        let h = q(&[0, 0, 0, 0, 5, -4]);
        let parts = h.square_free_decomposition();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&(q(&[0, 1]), 4)));
        let lin = Polynomial::new(vec![rational(-5, 4), int(1)]);
        assert!(parts.contains(&(lin, 1)));
        // multiply back and compare up to the leading coefficient
        let product = parts
            .iter()
            .fold(Polynomial::one(), |acc, (g, m)| &acc * &g.pow(*m as u32));
        assert_eq!(product.scale(&int(-4)), h);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(q(&[1, 0, -2, 0, 1]).to_string(), "x^4 - 2*x^2 + 1");
        assert_eq!(Polynomial::<Rational>::zero().to_string(), "0");
    }

    #[test]
    fn float_polynomials_share_the_arithmetic() {
        let p: Polynomial<f64> = Polynomial::from_i64s(&[1, -3, 0, 2]);
        assert_eq!(p.eval(&2.0), 11.0);
        assert_eq!(p.derivative().coeffs(), &[-3.0, 0.0, 6.0]);
        let (quot, rem) = p.div_rem(&Polynomial::from_i64s(&[-1, 1])).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot.coeffs(), &[-1.0, 2.0, 2.0]);
        let g: Polynomial<f32> = Polynomial::from_i64s(&[0, 0, 1]);
        assert_eq!(g.eval(&3.0), 9.0);
    }
}
