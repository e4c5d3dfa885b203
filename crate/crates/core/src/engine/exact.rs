//! Exact tangency enumeration for rational polynomials.

use std::sync::OnceLock;

use num_traits::Zero;

use super::{EngineError, QueryPoint, Side, TangencyRecord, TangentLine};
use crate::exactpoly::{
    build_gs_poly, default_eps, eps_digits, exclude_point, is_convex_poly, isolate_real_roots,
    multiple_tangent_lines, refine_interval, refine_with, BitangentSet, IsolatingInterval, Line, PolyError,
    SturmSequence,
};
use crate::scalar::Scalar;
use crate::{QPoly, Rational};

/// A polynomial with its convexity verdict and (lazily) its multiple tangent
/// lines, shared across queries.
#[derive(Debug)]
pub struct PreparedPolynomial {
    f: QPoly,
    convex: bool,
    bitangents: OnceLock<Result<BitangentSet, PolyError>>,
}

impl PreparedPolynomial {
    pub fn new(f: QPoly) -> Self {
        let convex = is_convex_poly(&f).is_convex();
        PreparedPolynomial { f, convex, bitangents: OnceLock::new() }
    }

    pub fn polynomial(&self) -> &QPoly {
        &self.f
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }

    /// Convex polynomials have no multiple tangent lines, so the
    /// elimination is skipped for them.
    pub fn bitangents(&self) -> Result<&BitangentSet, PolyError> {
        self.bitangents
            .get_or_init(|| {
                if self.convex {
                    Ok(BitangentSet::empty())
                } else {
                    multiple_tangent_lines(&self.f)
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Every real root of `g_s(c) - t`, with its tangent line.
    pub fn tangencies(&self, p: &QueryPoint) -> Result<(Vec<TangencyRecord>, QPoly), EngineError> {
        let h = build_gs_poly(&self.f, p.s(), p.t())?;
        if h.eval(p.s()).is_zero() {
            return Err(EngineError::OnGraph { s: p.s_f64(), t: p.t_f64() });
        }
        let sqf = h.square_free_part();
        let fine = eps_digits(30);
        let mut records = Vec::new();
        for iv in isolate_real_roots(&h) {
            let record = match iv.exact_root() {
                Some(c) => TangencyRecord {
                    abscissa: c.to_f64(),
                    side: side_of(c, p.s()),
                    line: Line::tangent_exact(&self.f, c),
                    multiplicity: iv.multiplicity,
                    interval: Some(iv.clone()),
                },
                None => {
                    let iv = exclude_point(&sqf, &iv, p.s());
                    let iv = refine_interval(&sqf, &iv, &default_eps());
                    let c = refine_with(&sqf, &iv, &fine);
                    let m = self.f.derivative().eval(&c);
                    let b = self.f.eval(&c) - &c * &m;
                    let side = if iv.hi <= *p.s() { Side::LeftOfS } else { Side::RightOfS };
                    TangencyRecord {
                        abscissa: c.to_f64(),
                        side,
                        line: Line::approx(m.to_f64(), b.to_f64()),
                        multiplicity: iv.multiplicity,
                        interval: Some(iv),
                    }
                }
            };
            records.push(record);
        }
        Ok((records, sqf))
    }

    /// Tangencies grouped into distinct lines. Two tangencies share a line
    /// exactly when both abscissae are roots listed under one multiple
    /// tangent line of `f`.
    pub fn lines(&self, p: &QueryPoint) -> Result<Vec<TangentLine>, EngineError> {
        let (records, h_sqf) = self.tangencies(p)?;
        if records.len() < 2 || self.f.degree().unwrap_or(0) <= 3 {
            return Ok(records.into_iter().map(TangentLine::single).collect());
        }
        let set = self.bitangents()?;
        let common = h_sqf.gcd(&set.resultant);
        let common_seq = (common.degree().unwrap_or(0) > 0).then(|| SturmSequence::new(&common));
        let owner: Vec<Option<usize>> = records
            .iter()
            .map(|rec| {
                let iv = rec.interval.as_ref().expect("exact path keeps intervals");
                set.records.iter().position(|b| {
                    b.abscissae
                        .iter()
                        .any(|alpha| same_root(iv, alpha, &h_sqf, &set.resultant, common_seq.as_ref()))
                })
            })
            .collect();
        let mut lines: Vec<TangentLine> = Vec::new();
        let mut slot_of_record: Vec<Option<usize>> = vec![None; set.records.len()];
        for (rec, own) in records.into_iter().zip(owner) {
            match own {
                Some(k) => match slot_of_record[k] {
                    Some(slot) => lines[slot].tangencies.push(rec),
                    None => {
                        slot_of_record[k] = Some(lines.len());
                        let line = if rec.line.is_exact() { rec.line.clone() } else { set.records[k].line.clone() };
                        lines.push(TangentLine { line, tangencies: vec![rec] });
                    }
                },
                None => lines.push(TangentLine::single(rec)),
            }
        }
        Ok(lines)
    }
}

fn side_of(c: &Rational, s: &Rational) -> Side {
    match c.cmp(s) {
        std::cmp::Ordering::Less => Side::LeftOfS,
        std::cmp::Ordering::Equal => Side::EqualsS,
        std::cmp::Ordering::Greater => Side::RightOfS,
    }
}

/// Whether a tangency interval and a resultant-root interval isolate the
/// same real number. `common` is the Sturm sequence of
/// `gcd(sqf(h), sqf(R))`; a shared root must be one of its roots.
fn same_root(
    c: &IsolatingInterval,
    alpha: &IsolatingInterval,
    h_sqf: &QPoly,
    resultant: &QPoly,
    common: Option<&SturmSequence>,
) -> bool {
    match (c.exact_root(), alpha.exact_root()) {
        (Some(a), Some(b)) => a == b,
        (Some(a), None) => alpha.lo < *a && *a < alpha.hi && resultant.eval(a).is_zero(),
        (None, Some(b)) => c.lo < *b && *b < c.hi && h_sqf.eval(b).is_zero(),
        (None, None) => {
            let lo = if c.lo > alpha.lo { &c.lo } else { &alpha.lo };
            let hi = if c.hi < alpha.hi { &c.hi } else { &alpha.hi };
            lo < hi && common.is_some_and(|seq| seq.count_open(lo, hi) > 0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn lines(f: &[i64], s: Rational, t: Rational) -> Vec<TangentLine> {
        PreparedPolynomial::new(QPoly::from_i64s(f)).lines(&QueryPoint::new(s, t)).unwrap()
    }

    fn exact_abscissae(lines: &[TangentLine]) -> Vec<Rational> {
        let mut xs: Vec<Rational> = lines
            .iter()
            .flat_map(|l| &l.tangencies)
            .map(|r| r.interval.as_ref().unwrap().exact_root().expect("rational").clone())
            .collect();
        xs.sort();
        xs
    }

    #[test]
    fn parabola() {
        let ls = lines(&[0, 0, 1], int(0), int(-1));
        assert_eq!(ls.len(), 2);
        assert_eq!(exact_abscissae(&ls), vec![int(-1), int(1)]);
        let slopes: Vec<_> = ls.iter().map(|l| l.line.exact.clone().unwrap().slope).collect();
        assert_eq!(slopes, vec![int(-2), int(2)]);
    }

    #[test]
    fn cubic_with_double_root() {
        let ls = lines(&[0, 0, 0, 1], int(1), int(0));
        assert_eq!(ls.len(), 2);
        assert_eq!(exact_abscissae(&ls), vec![int(0), rational(3, 2)]);
        assert_eq!(ls[0].tangencies[0].multiplicity, 2);
        let l = ls[1].line.exact.clone().unwrap();
        assert_eq!((l.slope, l.intercept), (rational(27, 4), rational(-27, 4)));
    }

    #[test]
    fn bitangent_counts_once() {
        let ls = lines(&[0, 0, -2, 0, 1], int(0), int(-1));
        assert_eq!(ls.len(), 1);
        assert_eq!(ls[0].tangencies.len(), 2);
    }

    #[test]
    fn irrational_bitangent_counts_once() {
        // x^4 - 3x^2 has the bitangent y = -9/4 at +-sqrt(3/2)
        let ls = lines(&[0, 0, -3, 0, 1], int(0), rational(-9, 4));
        assert_eq!(ls.len(), 1);
        assert_eq!(ls[0].tangencies.len(), 2);
        // away from the bitangent the same abscissa pair is not merged
        let ls = lines(&[0, 0, -3, 0, 1], int(0), int(-3));
        assert_eq!(ls.len(), 2);
    }

    #[test]
    fn irrational_sides_are_resolved() {
        // x^3 at (1/2, ...) : root intervals straddling s get separated
        let ls = lines(&[0, 0, 0, 1], rational(1, 2), rational(1, 10));
        for l in &ls {
            for r in &l.tangencies {
                let left = r.abscissa < 0.5;
                assert_eq!(r.side == Side::LeftOfS, left);
            }
        }
    }

    #[test]
    fn on_graph_rejected() {
        let prepared = PreparedPolynomial::new(QPoly::from_i64s(&[0, 0, 1]));
        assert!(matches!(
            prepared.tangencies(&QueryPoint::new(int(2), int(4))),
            Err(EngineError::OnGraph { .. })
        ));
    }
}
