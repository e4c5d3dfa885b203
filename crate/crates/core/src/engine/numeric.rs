//! Numeric tangency enumeration by scanning `g_s(c) - t`.

use super::scan::{scan, ScanSettings};
use super::{gs_eval, QueryPoint, Side, TangencyRecord, TangentLine};
use crate::exactpoly::Line;
use crate::expr::EvalError;
use crate::function::Function;

pub const LINE_TOLERANCE: f64 = 1e-9;
pub const TAIL_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericTangencies {
    pub records: Vec<TangencyRecord>,
    pub diagnostics: Vec<String>,
    /// The residual is small at a window end.
    pub tail_suspect: bool,
}

/// Roots of `g_s(c) = t` on `window` with `samples` grid points, plus the
/// critical points of `g_s` (sign changes of `(s - c) f''(c)`).
pub fn tangencies_numeric(
    f: &Function,
    p: &QueryPoint,
    window: (f64, f64),
    samples: usize,
) -> Result<NumericTangencies, EvalError> {
    let (s, t) = (p.s_f64(), p.t_f64());
    let value = |c: f64| Ok(gs_eval(f, s, c)? - t);
    let slope = |c: f64| Ok((s - c) * f.curvature(c)?);
    let settings = ScanSettings {
        lo: window.0,
        hi: window.1,
        samples,
        touch_tolerance: 1e-10 * (1.0 + t.abs()),
    };
    let report = scan(&value, &slope, &[s], &settings)?;
    let mut diagnostics = Vec::new();
    if report.skipped > 0 {
        diagnostics.push(format!("{} sample points had non-finite residuals and were skipped", report.skipped));
    }
    if report.flat > 0 {
        diagnostics.push(format!(
            "{} sample points had an identically zero residual (underflow) and were not counted",
            report.flat
        ));
    }
    let tail_suspect = report.tail_suspect(TAIL_THRESHOLD);
    if tail_suspect {
        diagnostics.push(format!(
            "residual within {TAIL_THRESHOLD:e} of zero at a window end [{}, {}]: a tangency may lie outside",
            window.0, window.1
        ));
    }
    let mut records = Vec::with_capacity(report.roots.len());
    for root in report.roots {
        let c = root.x;
        let m = f.slope(c)?;
        let b = f.value(c)? - c * m;
        let side = if c < s {
            Side::LeftOfS
        } else if c > s {
            Side::RightOfS
        } else {
            Side::EqualsS
        };
        records.push(TangencyRecord {
            abscissa: c,
            interval: None,
            line: Line::approx(m, b),
            side,
            multiplicity: if root.touching { 2 } else { 1 },
        });
    }
    Ok(NumericTangencies { records, diagnostics, tail_suspect })
}

/// Groups records whose lines agree to `1e-9` relative in slope and
/// intercept.
pub fn dedup_lines(records: Vec<TangencyRecord>) -> Vec<TangentLine> {
    let mut lines: Vec<TangentLine> = Vec::new();
    for rec in records {
        match lines.iter_mut().find(|l| l.line.same_as(&rec.line, LINE_TOLERANCE)) {
            Some(l) => l.tangencies.push(rec),
            None => lines.push(TangentLine::single(rec)),
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};

    fn roots(text: &str, p: QueryPoint) -> Vec<f64> {
        let f = Function::parse(text).unwrap();
        let (s, _) = (p.s_f64(), p.t_f64());
        tangencies_numeric(&f, &p, (s - 1000.0, s + 1000.0), 4096)
            .unwrap()
            .records
            .iter()
            .map(|r| r.abscissa)
            .collect()
    }

    #[test]
    fn x_atan_x_pair() {
        let r = roots("x*atan(x)", QueryPoint::new(int(0), rational(-1, 2)));
        assert_eq!(r.len(), 2);
        assert!((r[0] + 1.0).abs() < 1e-9 && (r[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exponential_pair() {
        let r = roots("exp(x)", QueryPoint::new(int(0), rational(1, 2)));
        assert_eq!(r.len(), 2);
        // e^c (1 - c) = 1/2
        for c in &r {
            assert!((c.exp() * (1.0 - c) - 0.5).abs() < 1e-12);
        }
        assert!((r[0] + 1.678).abs() < 1e-3 && (r[1] - 0.768).abs() < 1e-3);
        let r = roots("exp(x)", QueryPoint::new(int(0), int(0)));
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn numeric_bitangent_merges() {
        let f = Function::parse("x^4 - 2*x^2").unwrap();
        let found = tangencies_numeric(&f, &QueryPoint::new(int(0), int(-1)), (-10.0, 10.0), 512).unwrap();
        assert_eq!(found.records.len(), 2);
        assert_eq!(dedup_lines(found.records).len(), 1);
        assert!(dedup_lines(Vec::new()).is_empty());
    }
}
