//! Bracketing root scanner for a continuous residual on a finite window.

use crate::expr::EvalError;

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSettings {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
    /// `|F| <= touch_tolerance` at a local extremum of `F` whose neighbours
    /// share its sign counts as a touching (even-multiplicity) root.
    pub touch_tolerance: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRoot {
    pub x: f64,
    pub touching: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub roots: Vec<ScanRoot>,
    /// Points where the residual was NaN (e.g. `inf - inf` after overflow).
    pub skipped: usize,
    /// Points inside runs of exact zeros (underflow plateaus), not counted
    /// as roots.
    pub flat: usize,
    pub end_values: (f64, f64),
}

impl ScanReport {
    /// The residual is small at a window end, so a root may sit just outside.
    pub fn tail_suspect(&self, threshold: f64) -> bool {
        let near = |v: f64| v.is_finite() && v.abs() <= threshold;
        near(self.end_values.0) || near(self.end_values.1)
    }
}

type Eval<'a> = &'a dyn Fn(f64) -> Result<f64, EvalError>;

fn opposite(a: f64, b: f64) -> bool {
    (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)
}

/// Bisection to full double precision; returns the end with smaller `|F|`.
fn bisect(f: Eval, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64) -> Result<f64, EvalError> {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.is_nan() {
            break;
        }
        if opposite(fa, fm) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    Ok(if fa.abs() <= fb.abs() { a } else { b })
}

/// Roots of `value` on `[lo, hi]`. `slope` (the derivative of `value`, or
/// anything with the same sign) locates local extrema so that touching roots
/// and close root pairs between grid points are not missed; `extra` points
/// are sampled in addition to the uniform grid.
pub fn scan(
    value: &dyn Fn(f64) -> Result<f64, EvalError>,
    slope: &dyn Fn(f64) -> Result<f64, EvalError>,
    extra: &[f64],
    settings: &ScanSettings,
) -> Result<ScanReport, EvalError> {
    let ScanSettings { lo, hi, samples, touch_tolerance } = *settings;
    let n = samples.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    let mut xs: Vec<f64> = (0..n).map(|i| if i == n - 1 { hi } else { lo + step * i as f64 }).collect();
    xs.extend(extra.iter().copied().filter(|x| (lo..=hi).contains(x)));
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut critical = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in &xs {
        let d = slope(x)?;
        if d == 0.0 {
            critical.push(x);
        }
        if let Some((px, pd)) = prev {
            if opposite(pd, d) {
                critical.push(bisect(slope, px, x, pd, d)?);
            }
        }
        if !d.is_nan() {
            prev = Some((x, d));
        }
    }
    xs.extend(critical.iter().copied());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    critical.sort_by(f64::total_cmp);

    let mut points = Vec::with_capacity(xs.len());
    let mut skipped = 0;
    for &x in &xs {
        let v = value(x)?;
        if v.is_nan() {
            skipped += 1;
        } else {
            points.push((x, v));
        }
    }

    let mut roots = Vec::new();
    let mut flat = 0;
    for (i, &(x, v)) in points.iter().enumerate() {
        let zero_at = |j: Option<usize>| j.and_then(|j| points.get(j)).is_some_and(|p| p.1 == 0.0);
        if v == 0.0 && (zero_at(i.checked_sub(1)) || zero_at(Some(i + 1))) {
            flat += 1;
            continue;
        }
        if v == 0.0 {
            let before = i.checked_sub(1).map(|j| points[j].1);
            let after = points.get(i + 1).map(|p| p.1);
            let touching = matches!((before, after), (Some(a), Some(b)) if !opposite(a, b) && a != 0.0 && b != 0.0);
            roots.push(ScanRoot { x, touching });
        }
        if let Some(&(nx, nv)) = points.get(i + 1) {
            if opposite(v, nv) {
                roots.push(ScanRoot { x: bisect(value, x, nx, v, nv)?, touching: false });
            }
        }
        if v != 0.0 && v.abs() <= touch_tolerance && critical.binary_search_by(|c| c.total_cmp(&x)).is_ok() {
            let same_side = |j: Option<usize>| j.and_then(|j| points.get(j)).is_none_or(|p| !opposite(p.1, v));
            if same_side(i.checked_sub(1)) && same_side(Some(i + 1)) {
                roots.push(ScanRoot { x, touching: true });
            }
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let merge = 1e-9 * (hi - lo);
    let mut merged: Vec<ScanRoot> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(last) if r.x - last.x <= merge => last.touching |= r.touching,
            _ => merged.push(r),
        }
    }
    let end = |x: f64| value(x).unwrap_or(f64::NAN);
    Ok(ScanReport { roots: merged, skipped, flat, end_values: (end(lo), end(hi)) })
}
