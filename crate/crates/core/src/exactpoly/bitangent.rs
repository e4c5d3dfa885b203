//! Lines tangent to a polynomial graph at two or more distinct points.
//!
//! Tangents at `x` and `y` coincide iff `f'(x) = f'(y)` and `G(x) = G(y)` with
//! `G = f - x f'`. Dividing both differences by `x - y` and eliminating `y`
//! with a resultant leaves a univariate `R(x)` whose real roots contain every
//! multiple-tangency abscissa (plus inflection points and projections of
//! complex solutions, which group with nothing and drop out).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{default_eps, eps_digits, refine_interval, isolate_real_roots, refine_with, IsolatingInterval, Line, PolyError, Polynomial};
use crate::scalar::Scalar;
use crate::Rational;

type QPoly = Polynomial<Rational>;

#[derive(Clone, Debug, PartialEq)]
pub struct BitangentRecord {
    pub line: Line,
    /// Sorted, at least two entries; each isolates a root of the resultant.
    pub abscissae: Vec<IsolatingInterval>,
}

/// All multiple tangent lines of a polynomial together with the square-free
/// resultant whose roots the abscissae isolate.
#[derive(Clone, Debug, PartialEq)]
pub struct BitangentSet {
    pub resultant: QPoly,
    pub records: Vec<BitangentRecord>,
}

impl BitangentSet {
    pub fn empty() -> Self {
        BitangentSet { resultant: QPoly::one(), records: Vec::new() }
    }
}

const LINE_TOLERANCE: f64 = 1e-9;

/// Coefficients in `y` (index = power of `y`) of `sum_k w_k h_{k-d}(x, y)`
/// where `h_j = sum_{i=0}^{j} x^i y^{j-i}`.
fn divided_difference(weights: &[Rational], drop: usize) -> Vec<QPoly> {
    let top = weights.len().saturating_sub(drop + 1);
    let mut rows = vec![QPoly::zero(); top + 1];
    for (k, w) in weights.iter().enumerate() {
        if k < drop || w.is_zero() {
            continue;
        }
        let j = k - drop;
        for e in 0..=j {
            rows[e] = &rows[e] + &QPoly::monomial(w.clone(), j - e);
        }
    }
    while rows.len() > 1 && rows.last().is_some_and(|p| p.is_zero()) {
        rows.pop();
    }
    rows
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Sylvester matrix of `a` and `b` (coefficients in `y`) with entries
/// evaluated at `x = x0`.
fn sylvester_at(a: &[Vec<BigInt>], b: &[Vec<BigInt>], x0: &BigInt) -> Vec<Vec<BigInt>> {
    let p = a.len() - 1;
    let q = b.len() - 1;
    let size = p + q;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for r in 0..q {
        for (i, c) in a.iter().rev().enumerate() {
            m[r][r + i] = eval_int(c, x0);
        }
    }
    for r in 0..p {
        for (i, c) in b.iter().rev().enumerate() {
            m[q + r][r + i] = eval_int(c, x0);
        }
    }
    m
}

/// `Res_y(a, b)` for integer polynomials given by their coefficients in `y`
/// (each a polynomial in `x`), of degree at most `bound` in `x`: integer
/// determinants at `bound + 1` points, then Newton interpolation.
fn resultant(a: &[Vec<BigInt>], b: &[Vec<BigInt>], bound: usize) -> QPoly {
    let nodes: Vec<BigInt> =
        (0..=bound as i64).map(|k| BigInt::from(if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 })).collect();
    let mut dd: Vec<Rational> =
        nodes.iter().map(|x0| Rational::from_integer(bareiss_det(sylvester_at(a, b, x0)))).collect();
    let xs: Vec<Rational> = nodes.iter().cloned().map(Rational::from_integer).collect();
    for level in 1..xs.len() {
        for i in (level..xs.len()).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut r = QPoly::constant(dd[xs.len() - 1].clone());
    for i in (0..xs.len() - 1).rev() {
        let lin = QPoly::new(vec![-xs[i].clone(), Rational::one()]);
        r = &(&r * &lin) + &QPoly::constant(dd[i].clone());
    }
    r
}

/// Integer multiple of `weights` (same ratios).
fn integer_weights(weights: &[Rational]) -> Vec<BigInt> {
    let lcm = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    weights.iter().map(|w| (w * Rational::from_integer(lcm.clone())).to_integer()).collect()
}

fn integer_rows(rows: Vec<QPoly>) -> Vec<Vec<BigInt>> {
    rows.into_iter()
        .map(|p| p.coeffs().iter().map(|c| c.to_integer()).collect())
        .collect()
}

struct Candidate {
    interval: IsolatingInterval,
    line: Line,
}

pub fn multiple_tangent_lines(f: &QPoly) -> Result<BitangentSet, PolyError> {
    let n = f.degree().unwrap_or(0);
    if n <= 3 {
        return Ok(BitangentSet::empty());
    }
    let a = f.coeffs();
    let slope_weights: Vec<Rational> = (0..=n).map(|k| Rational::from_i64(k as i64) * &a[k]).collect();
    let intercept_weights: Vec<Rational> = (0..=n).map(|k| Rational::from_i64(1 - k as i64) * &a[k]).collect();
    // (f'(x) - f'(y)) / (x - y) and (G(x) - G(y)) / (x - y), scaled to
    // integers; total degrees n - 2 and n - 1 bound deg R by their product
    let as_q = |w: Vec<BigInt>| -> Vec<Rational> { w.into_iter().map(Rational::from_integer).collect() };
    let da = integer_rows(divided_difference(&as_q(integer_weights(&slope_weights)), 2));
    let db = integer_rows(divided_difference(&as_q(integer_weights(&intercept_weights)), 1));
    let r = resultant(&da, &db, (n - 2) * (n - 1));
    if r.is_zero() {
        return Err(PolyError::DegenerateResultant);
    }
    let sqf = r.square_free_part();
    let fp = f.derivative();
    let eps = eps_digits(40);
    let candidates: Vec<Candidate> = isolate_real_roots(&sqf)
        .into_iter()
        .map(|interval| {
            let line = match interval.exact_root() {
                Some(c) => Line::tangent_exact(f, c),
                None => {
                    let c = refine_with(&sqf, &interval, &eps);
                    let m = fp.eval(&c);
                    let b = f.eval(&c) - &c * &m;
                    Line::approx(m.to_f64(), b.to_f64())
                }
            };
            Candidate { interval, line }
        })
        .collect();

    let mut group: Vec<usize> = (0..candidates.len()).collect();
    for i in 0..candidates.len() {
        for j in 0..i {
            if group[j] == j && candidates[i].line.same_as(&candidates[j].line, LINE_TOLERANCE) {
                group[i] = j;
                break;
            }
        }
    }
    let mut records = Vec::new();
    for leader in 0..candidates.len() {
        if group[leader] != leader {
            continue;
        }
        let members: Vec<&Candidate> = candidates
            .iter()
            .zip(&group)
            .filter(|(_, &g)| g == leader)
            .map(|(c, _)| c)
            .collect();
        if members.len() < 2 {
            continue;
        }
        let line = members
            .iter()
            .find(|c| c.line.is_exact())
            .map_or_else(|| members[0].line.clone(), |c| c.line.clone());
        let abscissae = members
            .iter()
            .map(|c| IsolatingInterval {
                multiplicity: 1,
                ..refine_interval(&sqf, &c.interval, &default_eps())
            })
            .collect();
        records.push(BitangentRecord { line, abscissae });
    }
    Ok(BitangentSet { resultant: sqf, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn q(c: &[i64]) -> QPoly {
        Polynomial::from_i64s(c)
    }

    #[test]
    fn w_shaped_quartic() {
        let set = multiple_tangent_lines(&q(&[0, 0, -2, 0, 1])).unwrap();
        assert_eq!(set.records.len(), 1);
        let rec = &set.records[0];
        assert_eq!(rec.line.exact.as_ref().unwrap().slope, int(0));
        assert_eq!(rec.line.exact.as_ref().unwrap().intercept, int(-1));
        let xs: Vec<_> = rec.abscissae.iter().map(|iv| iv.exact_root().unwrap().clone()).collect();
        assert_eq!(xs, vec![int(-1), int(1)]);
    }

    #[test]
    fn convex_and_cubic_have_none() {
        assert!(multiple_tangent_lines(&q(&[0, 0, 0, 0, 1])).unwrap().records.is_empty());
        assert!(multiple_tangent_lines(&q(&[0, 0, 0, 1])).unwrap().records.is_empty());
        assert!(multiple_tangent_lines(&q(&[0, 0, 0, 0, 0, 1])).unwrap().records.is_empty());
    }

    #[test]
    fn tilted_quartic_keeps_slope() {
        // adding a linear term shears every tangent line the same way
        let set = multiple_tangent_lines(&q(&[5, 3, -2, 0, 1])).unwrap();
        assert_eq!(set.records.len(), 1);
        let exact = set.records[0].line.exact.clone().unwrap();
        assert_eq!(exact.slope, int(3));
        assert_eq!(exact.intercept, int(4));
    }

    #[test]
    fn irrational_tangency_points() {
        // x^4 - 3x^2: bitangent y = -9/4 touching at +-sqrt(3/2)
        let f = q(&[0, 0, -3, 0, 1]);
        let set = multiple_tangent_lines(&f).unwrap();
        assert_eq!(set.records.len(), 1);
        let rec = &set.records[0];
        assert!(!rec.abscissae[0].is_point());
        assert!((rec.line.intercept + 2.25).abs() < 1e-12);
        assert!(rec.line.slope.abs() < 1e-12);
        let x = rec.abscissae[1].approx();
        assert!((x - 1.5f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn sextic_with_two_bitangents() {
        // (x^2 - 1)^2 (x^2 - 4)^2 / 4 touches y = 0 at four points
        let base = &q(&[-1, 0, 1]).pow(2) * &q(&[-4, 0, 1]).pow(2);
        let f = base.scale(&rational(1, 4));
        let set = multiple_tangent_lines(&f).unwrap();
        let zero_line = set
            .records
            .iter()
            .find(|r| r.line.exact.as_ref().is_some_and(|l| l.slope.is_zero() && l.intercept.is_zero()))
            .expect("y = 0 is a multiple tangent");
        assert_eq!(zero_line.abscissae.len(), 4);
    }

    #[test]
    fn resultant_of_simple_pair() {
        // Res_y(y - x, y + x) = 2x up to sign
        let a = integer_rows(vec![-q(&[0, 1]), q(&[1])]);
        let b = integer_rows(vec![q(&[0, 1]), q(&[1])]);
        let r = resultant(&a, &b, 1);
        assert_eq!(r.degree(), Some(1));
        assert!(r.eval(&int(0)).is_zero());
        // Res_y(y^2 - x, y - x) = x^2 - x
        let a = integer_rows(vec![-q(&[0, 1]), q(&[0]), q(&[1])]);
        let b = integer_rows(vec![-q(&[0, 1]), q(&[1])]);
        assert_eq!(resultant(&a, &b, 2), q(&[0, -1, 1]));
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::scalar::{int, rational};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// `(x - a)^2 (x - b)^2 + m x + k` is tangent to `y = m x + k` at `a` and `b`.
        #[test]
        fn planted_bitangent_is_found(a in -6i64..7, gap in 1i64..8, m in -9i64..10, k in -9i64..10, d in 1i64..3) {
            let (a, b) = (rational(a, d), rational(a + gap, d));
            let sq = |r: &Rational| Polynomial::new(vec![-r.clone(), int(1)]).pow(2);
            let f = &(&sq(&a) * &sq(&b)) + &Polynomial::new(vec![int(k), int(m)]);
            let set = multiple_tangent_lines(&f).unwrap();
            let target = Line::exact(int(m), int(k));
            let hit = set.records.iter().find(|r| r.line.same_as(&target, 0.0));
            prop_assert!(hit.is_some(), "records {:?}", set.records);
            let roots: Vec<_> = hit.unwrap().abscissae.iter().map(|iv| iv.exact_root().cloned()).collect();
            prop_assert_eq!(roots, vec![Some(a), Some(b)]);
        }

        #[test]
        fn records_are_genuine_multiple_tangents(c in prop::collection::vec(-6i64..7, 4), lead in 1i64..4) {
            let mut coeffs = c.clone();
            coeffs.push(lead);
            let f = Polynomial::<Rational>::from_i64s(&coeffs);
            let ff = f.to_f64();
            let d = ff.derivative();
            for rec in &multiple_tangent_lines(&f).unwrap().records {
                prop_assert!(rec.abscissae.len() >= 2);
                for iv in &rec.abscissae {
                    let x = iv.approx();
                    let (m, y) = (d.eval(&x), ff.eval(&x));
                    prop_assert!((m - rec.line.slope).abs() <= 1e-6 * (1.0 + m.abs()));
                    prop_assert!((y - m * x - rec.line.intercept).abs() <= 1e-6 * (1.0 + y.abs()));
                }
            }
        }
    }
}
