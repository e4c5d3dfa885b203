//! Normal lines and theta lines through a point.
//!
//! A theta line through `P` meets the graph at `(c, f(c))` at angle `theta`
//! to the tangent there (the smaller of the two angles, in `[0, pi/2]`).
//! `theta = 0` recovers tangent lines and `theta = pi/2` normal lines.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::engine::scan::{scan, ScanSettings};
use crate::engine::{gs_eval, QueryPoint};
use crate::exactpoly::Line;
use crate::expr::EvalError;
use crate::function::Function;

pub const ANGLE_TOLERANCE: f64 = 1e-6;
const DIRECTION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IncidenceKind {
    Normal,
    Theta,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneralLine {
    Sloped { slope: f64, intercept: f64 },
    Vertical { x: f64 },
}

impl GeneralLine {
    /// Line through `P` and `(c, y)`.
    fn through(p: &QueryPoint, c: f64, y: f64) -> GeneralLine {
        let (s, t) = (p.s_f64(), p.t_f64());
        if c == s {
            GeneralLine::Vertical { x: s }
        } else {
            let slope = (y - t) / (c - s);
            GeneralLine::Sloped { slope, intercept: t - slope * s }
        }
    }

    pub fn as_line(&self) -> Option<Line> {
        match *self {
            GeneralLine::Sloped { slope, intercept } => Some(Line::approx(slope, intercept)),
            GeneralLine::Vertical { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IncidenceRecord {
    pub abscissa: f64,
    pub line: GeneralLine,
    pub kind: IncidenceKind,
    /// Measured angle between the line and the tangent at the abscissa.
    pub angle: f64,
    /// Index of the distinct line this incidence belongs to.
    pub line_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineCount {
    pub count: usize,
    pub records: Vec<IncidenceRecord>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NearestPoint {
    pub abscissa: f64,
    pub distance: f64,
    pub diagnostics: Vec<String>,
}

/// Zero iff the segment from `P` to `(c, f(c))` is perpendicular to the
/// tangent at `c`.
pub fn normal_residual(f: &Function, p: &QueryPoint, c: f64) -> Result<f64, EvalError> {
    Ok((c - p.s_f64()) + f.slope(c)? * (f.value(c)? - p.t_f64()))
}

/// Smaller angle between the chord `P -> (c, f(c))` and the tangent at `c`.
fn chord_angle(f: &Function, p: &QueryPoint, c: f64) -> Result<f64, EvalError> {
    let dx = c - p.s_f64();
    let dy = f.value(c)? - p.t_f64();
    let m = f.slope(c)?;
    let cross = dx * m - dy;
    let dot = dx + dy * m;
    Ok(cross.abs().atan2(dot.abs()))
}

/// Direction angle in `[0, pi)`; lines through `P` coincide iff these agree.
fn direction(line: &GeneralLine) -> f64 {
    match *line {
        GeneralLine::Vertical { .. } => FRAC_PI_2,
        GeneralLine::Sloped { slope, .. } => slope.atan().rem_euclid(PI),
    }
}

fn same_direction(a: f64, b: f64) -> bool {
    let d = (a - b).abs();
    d.min(PI - d) <= DIRECTION_TOLERANCE
}

struct Collector<'a> {
    f: &'a Function,
    p: &'a QueryPoint,
    kind: IncidenceKind,
    theta: f64,
    records: Vec<IncidenceRecord>,
    directions: Vec<f64>,
    rejected: usize,
}

impl Collector<'_> {
    fn offer(&mut self, c: f64) -> Result<(), EvalError> {
        let angle = chord_angle(self.f, self.p, c)?;
        if !angle.is_finite() || (angle - self.theta).abs() > ANGLE_TOLERANCE {
            self.rejected += 1;
            return Ok(());
        }
        let line = GeneralLine::through(self.p, c, self.f.value(c)?);
        let dir = direction(&line);
        let line_index = match self.directions.iter().position(|&d| same_direction(d, dir)) {
            Some(k) => k,
            None => {
                self.directions.push(dir);
                self.directions.len() - 1
            }
        };
        if !self.records.iter().any(|r| r.abscissa == c) {
            self.records.push(IncidenceRecord { abscissa: c, line, kind: self.kind, angle, line_index });
        }
        Ok(())
    }

    fn finish(mut self, mut diagnostics: Vec<String>) -> LineCount {
        if self.rejected > 0 {
            diagnostics.push(format!(
                "{} residual root(s) rejected: angle differs from the target (supplementary branch)",
                self.rejected
            ));
        }
        self.records.sort_by(|a, b| a.abscissa.total_cmp(&b.abscissa));
        LineCount { count: self.directions.len(), records: self.records, diagnostics }
    }
}

fn scan_diagnostics(skipped: usize, flat: usize) -> Vec<String> {
    let mut out = Vec::new();
    if skipped > 0 {
        out.push(format!("{skipped} sample points had non-finite residuals and were skipped"));
    }
    if flat > 0 {
        out.push(format!("{flat} sample points had an identically zero residual and were not counted"));
    }
    out
}

fn settings(window: (f64, f64), samples: usize, scale: f64) -> ScanSettings {
    ScanSettings { lo: window.0, hi: window.1, samples, touch_tolerance: 1e-10 * (1.0 + scale) }
}

/// Distinct normal lines through `P`. At least one always exists; if the
/// scan finds none the nearest point of the graph is used.
pub fn count_normals(f: &Function, p: &QueryPoint, window: (f64, f64), samples: usize) -> Result<LineCount, EvalError> {
    let (s, t) = (p.s_f64(), p.t_f64());
    let value = |c: f64| normal_residual(f, p, c);
    let slope = |c: f64| {
        let m = f.slope(c)?;
        Ok(1.0 + f.curvature(c)? * (f.value(c)? - t) + m * m)
    };
    let report = scan(&value, &slope, &[s], &settings(window, samples, s.abs()))?;
    let mut diagnostics = scan_diagnostics(report.skipped, report.flat);
    let mut collector = Collector {
        f,
        p,
        kind: IncidenceKind::Normal,
        theta: FRAC_PI_2,
        records: Vec::new(),
        directions: Vec::new(),
        rejected: 0,
    };
    for root in &report.roots {
        collector.offer(root.x)?;
    }
    if collector.directions.is_empty() {
        let nearest = nearest_point(f, p, window, samples)?;
        diagnostics.push("no residual root bracketed; nearest graph point used".into());
        diagnostics.extend(nearest.diagnostics);
        collector.offer(nearest.abscissa)?;
    }
    Ok(collector.finish(diagnostics))
}

/// Minimizer of `(c - s)^2 + (f(c) - t)^2` over the window: best sample,
/// then bisection on the normal residual (half the distance derivative)
/// between its neighbours.
pub fn nearest_point(f: &Function, p: &QueryPoint, window: (f64, f64), samples: usize) -> Result<NearestPoint, EvalError> {
    let (s, t) = (p.s_f64(), p.t_f64());
    let n = samples.max(3);
    let step = (window.1 - window.0) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n).map(|i| window.0 + step * i as f64).collect();
    let dist = |c: f64| -> Result<f64, EvalError> {
        let y = f.value(c)?;
        Ok((c - s).powi(2) + (y - t).powi(2))
    };
    let mut best = (0usize, f64::INFINITY);
    for (i, &x) in xs.iter().enumerate() {
        let d = dist(x)?;
        if d < best.1 {
            best = (i, d);
        }
    }
    let mut diagnostics = Vec::new();
    let i = best.0;
    if i == 0 || i == n - 1 {
        diagnostics.push("distance minimum at the window edge; the nearest point may lie outside".into());
    }
    let lo = xs[i.saturating_sub(1)];
    let hi = xs[(i + 1).min(n - 1)];
    let (mut a, mut b) = (lo, hi);
    let mut ra = normal_residual(f, p, a)?;
    let rb = normal_residual(f, p, b)?;
    let mut c = xs[i];
    if ra <= 0.0 && rb >= 0.0 {
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let rm = normal_residual(f, p, m)?;
            if rm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if (rm < 0.0) == (ra < 0.0) {
                a = m;
                ra = rm;
            } else {
                b = m;
            }
        }
        c = if normal_residual(f, p, a)?.abs() <= normal_residual(f, p, b)?.abs() { a } else { b };
    } else {
        // golden-section search on the distance
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut x1, mut x2) = (b - g * (b - a), a + g * (b - a));
        for _ in 0..200 {
            if dist(x1)? < dist(x2)? {
                b = x2;
            } else {
                a = x1;
            }
            x1 = b - g * (b - a);
            x2 = a + g * (b - a);
            if b - a <= 1e-15 * (1.0 + a.abs()) {
                break;
            }
        }
        c = if dist(a)? <= dist(c)? { a } else { c };
    }
    let residual = normal_residual(f, p, c)?;
    if residual.abs() > 1e-6 * (1.0 + c.abs()) {
        diagnostics.push(format!("normal residual {residual:e} at the minimizer exceeds tolerance"));
    }
    Ok(NearestPoint { abscissa: c, distance: dist(c)?.sqrt(), diagnostics })
}

/// With `m1 = f'(c)` and `m2 = (t - f(c)) / (s - c)`:
/// `r+ = tan(theta)(1 + m1 m2) - (m1 - m2)`, `r- = tan(theta)(1 + m1 m2) + (m1 - m2)`.
/// Requires `c != s` and `theta < pi/2`.
pub fn theta_residuals(f: &Function, p: &QueryPoint, theta: f64, c: f64) -> Result<(f64, f64), EvalError> {
    let m1 = f.slope(c)?;
    let m2 = (p.t_f64() - f.value(c)?) / (p.s_f64() - c);
    let k = theta.tan() * (1.0 + m1 * m2);
    Ok((k - (m1 - m2), k + (m1 - m2)))
}

/// `theta_residuals` multiplied by `s - c`, which removes the pole at
/// `c = s`; returns the pair and its derivative in `c`.
fn cleared(f: &Function, p: &QueryPoint, tan: f64, sign: f64, c: f64) -> Result<(f64, f64), EvalError> {
    let u = p.s_f64() - c;
    let w = p.t_f64() - f.value(c)?;
    let m1 = f.slope(c)?;
    let curv = f.curvature(c)?;
    let value = tan * (u + m1 * w) - sign * (m1 * u - w);
    let slope = tan * (-1.0 + curv * w - m1 * m1) - sign * curv * u;
    Ok((value, slope))
}

/// Distinct theta lines through `P` for `0 <= theta <= pi/2`.
pub fn count_theta_lines(
    f: &Function,
    p: &QueryPoint,
    theta: f64,
    window: (f64, f64),
    samples: usize,
) -> Result<LineCount, EvalError> {
    if theta >= FRAC_PI_2 - 1e-12 {
        return count_normals(f, p, window, samples);
    }
    let (s, t) = (p.s_f64(), p.t_f64());
    let scale = s.abs().max(t.abs());
    let mut collector = Collector {
        f,
        p,
        kind: IncidenceKind::Theta,
        theta: theta.max(0.0),
        records: Vec::new(),
        directions: Vec::new(),
        rejected: 0,
    };
    let mut diagnostics = Vec::new();
    let mut roots = Vec::new();
    if theta <= 0.0 {
        // both branches reduce to the tangent condition g_s(c) = t
        let value = |c: f64| Ok(gs_eval(f, s, c)? - t);
        let slope = |c: f64| Ok((s - c) * f.curvature(c)?);
        let report = scan(&value, &slope, &[s], &settings(window, samples, t.abs()))?;
        diagnostics.extend(scan_diagnostics(report.skipped, report.flat));
        roots.extend(report.roots.iter().map(|r| r.x));
    } else {
        let tan = theta.tan();
        for sign in [1.0, -1.0] {
            let value = |c: f64| Ok(cleared(f, p, tan, sign, c)?.0);
            let slope = |c: f64| Ok(cleared(f, p, tan, sign, c)?.1);
            let report = scan(&value, &slope, &[s], &settings(window, samples, scale))?;
            diagnostics.extend(scan_diagnostics(report.skipped, report.flat));
            roots.extend(report.roots.iter().map(|r| r.x));
        }
        // vertical chord at c = s: angle to the tangent is pi/2 - atan|f'(s)|
        let vertical_angle = FRAC_PI_2 - f.slope(s)?.abs().atan();
        if (vertical_angle - theta).abs() <= DIRECTION_TOLERANCE {
            roots.push(s);
        }
    }
    roots.sort_by(f64::total_cmp);
    for c in roots {
        collector.offer(c)?;
    }
    diagnostics.dedup();
    Ok(collector.finish(diagnostics))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplorerEntry {
    pub angle: f64,
    pub count: usize,
    /// Count stayed 0 after every window doubling. Only a candidate: the
    /// scan is windowed.
    pub candidate_counterexample: bool,
    pub diagnostics: Vec<String>,
}

/// Theta-line counts over a sweep of angles, doubling the window up to
/// `max_doublings` times whenever a count comes out 0.
pub fn explore_conjecture(
    f: &Function,
    p: &QueryPoint,
    angles: &[f64],
    window: (f64, f64),
    samples: usize,
    max_doublings: u32,
) -> Result<Vec<ExplorerEntry>, EvalError> {
    let s = p.s_f64();
    let mut out = Vec::with_capacity(angles.len());
    for &angle in angles {
        let (mut lo, mut hi, mut n) = (window.0, window.1, samples);
        let mut result = count_theta_lines(f, p, angle, (lo, hi), n)?;
        let mut doublings = 0;
        while result.count == 0 && doublings < max_doublings {
            doublings += 1;
            lo = s - 2.0 * (s - lo);
            hi = s + 2.0 * (hi - s);
            n *= 2;
            result = count_theta_lines(f, p, angle, (lo, hi), n)?;
        }
        let mut diagnostics = result.diagnostics;
        if doublings > 0 {
            diagnostics.push(format!("window doubled {doublings} time(s)"));
        }
        out.push(ExplorerEntry {
            angle,
            count: result.count,
            candidate_counterexample: result.count == 0,
            diagnostics,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rational};
    use std::f64::consts::FRAC_PI_4;

    fn func(text: &str) -> Function {
        Function::parse(text).unwrap()
    }

    fn point(s: i64, t: i64) -> QueryPoint {
        QueryPoint::new(int(s), int(t))
    }

    const WINDOW: (f64, f64) = (-1000.0, 1000.0);

    #[test]
    fn residual_values() {
        let sq = func("x^2");
        assert_eq!(normal_residual(&sq, &point(0, 2), 0.0).unwrap(), 0.0);
        assert!(normal_residual(&sq, &point(0, 2), 1.5f64.sqrt()).unwrap().abs() < 1e-14);
        assert_eq!(normal_residual(&sq, &point(0, -1), 1.0).unwrap(), 5.0);
    }

    #[test]
    fn normals_of_parabola() {
        let sq = func("x^2");
        let above = count_normals(&sq, &point(0, 2), WINDOW, 4096).unwrap();
        assert_eq!(above.count, 3);
        let below = count_normals(&sq, &point(0, -1), WINDOW, 4096).unwrap();
        assert_eq!(below.count, 1);
        assert_eq!(below.records[0].line, GeneralLine::Vertical { x: 0.0 });
        assert!(count_normals(&func("exp(x)"), &point(0, 0), WINDOW, 4096).unwrap().count >= 1);
    }

    #[test]
    fn nearest_points() {
        let sq = func("x^2");
        let c = nearest_point(&sq, &point(0, 2), WINDOW, 4096).unwrap().abscissa;
        assert!((c.abs() - 1.5f64.sqrt()).abs() < 1e-9);
        let c = nearest_point(&sq, &point(0, -1), WINDOW, 4096).unwrap().abscissa;
        assert!(c.abs() < 1e-9);
        let zero = func("0");
        let n = nearest_point(&zero, &point(3, 1), (-997.0, 1003.0), 4096).unwrap();
        assert!((n.abscissa - 3.0).abs() < 1e-9);
        assert!((n.distance - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_residual_formula() {
        let (rp, _) = theta_residuals(&func("0"), &point(0, 1), FRAC_PI_4, 1.0).unwrap();
        assert!(rp.abs() < 1e-15);
    }

    #[test]
    fn theta_counts() {
        let zero = func("0");
        assert_eq!(count_theta_lines(&zero, &point(0, 1), FRAC_PI_4, WINDOW, 4096).unwrap().count, 2);
        assert_eq!(count_theta_lines(&zero, &point(0, 1), 0.0, WINDOW, 4096).unwrap().count, 0);
        let sq = func("x^2");
        assert_eq!(count_theta_lines(&sq, &point(0, 2), FRAC_PI_2, WINDOW, 4096).unwrap().count, 3);
        assert_eq!(count_theta_lines(&sq, &point(0, -1), 0.0, WINDOW, 4096).unwrap().count, 2);
    }

    #[test]
    fn angles_are_validated() {
        let sq = func("x^2");
        let p = QueryPoint::new(rational(1, 3), int(-2));
        for theta in [0.1, 0.5, 1.0, 1.4] {
            let r = count_theta_lines(&sq, &p, theta, WINDOW, 4096).unwrap();
            assert!(r.count >= 1);
            for rec in &r.records {
                assert!((rec.angle - theta).abs() <= ANGLE_TOLERANCE);
            }
        }
    }

    #[test]
    fn vertical_chord() {
        // tangent slope 1 at s = 1/2 for x^2: a vertical line makes 45 degrees
        let sq = func("x^2");
        let p = QueryPoint::new(rational(1, 2), int(-3));
        let r = count_theta_lines(&sq, &p, FRAC_PI_4, WINDOW, 4096).unwrap();
        assert!(r.records.iter().any(|rec| matches!(rec.line, GeneralLine::Vertical { .. })));
    }

    #[test]
    fn explorer_flags_nothing_for_parabola() {
        let sq = func("x^2");
        let entries = explore_conjecture(&sq, &point(0, -1), &[0.0, 0.3, 0.9, FRAC_PI_2], WINDOW, 1024, 2).unwrap();
        assert!(entries.iter().all(|e| !e.candidate_counterexample));
        let zero = func("0");
        let entries = explore_conjecture(&zero, &point(0, 1), &[0.0], (-10.0, 10.0), 256, 1).unwrap();
        assert!(entries[0].candidate_counterexample);
    }
}
