//! Illumination index over a grid of cell centers.

use std::io::{self, Write};

use rayon::prelude::*;

use super::format::g17;
use crate::engine::{EngineError, Illuminator, Method, QueryPoint};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub x: f64,
    pub y: f64,
    /// `None` for on-graph and failed cells.
    pub index: Option<usize>,
    pub method: Option<Method>,
    pub on_graph: bool,
    /// Theorem comparison decided in floating point near a region boundary.
    pub boundary: bool,
    /// A tangency may lie outside the numeric scan window.
    pub truncated: bool,
    pub error: Option<String>,
}

impl Cell {
    fn flags(&self) -> String {
        let mut flags = Vec::new();
        if self.on_graph {
            flags.push("on-graph");
        }
        if self.boundary {
            flags.push("boundary");
        }
        if self.truncated {
            flags.push("truncated");
        }
        if self.error.is_some() {
            flags.push("error");
        }
        flags.join(";")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionGrid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
    /// Row-major from `(xmin, ymin)`: x varies fastest.
    pub cells: Vec<Cell>,
}

fn center(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    lo + (hi - lo) * (i as f64 + 0.5) / n as f64
}

fn evaluate(illuminator: &Illuminator, x: f64, y: f64) -> Cell {
    let mut cell =
        Cell { x, y, index: None, method: None, on_graph: false, boundary: false, truncated: false, error: None };
    let Some(p) = QueryPoint::from_f64(x, y) else {
        cell.error = Some("non-finite cell center".into());
        return cell;
    };
    match illuminator.query(&p) {
        Ok(r) => {
            cell.index = Some(r.index);
            cell.method = Some(r.method);
            cell.boundary = r.verdict.as_ref().is_some_and(|v| v.near_boundary);
            cell.truncated = r.window_truncated;
        }
        Err(EngineError::OnGraph { .. }) => cell.on_graph = true,
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

/// Evaluates every cell center, in parallel on `threads` workers (rayon's
/// default when `None`). The result order does not depend on scheduling.
pub fn region_grid(illuminator: &Illuminator, rect: Rect, nx: usize, ny: usize, threads: Option<usize>) -> RegionGrid {
    let compute = || -> Vec<Cell> {
        (0..nx * ny)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k % nx, k / nx);
                evaluate(illuminator, center(rect.xmin, rect.xmax, nx, i), center(rect.ymin, rect.ymax, ny, j))
            })
            .collect()
    };
    let cells = match threads.filter(|&n| n > 0) {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(compute),
            Err(_) => compute(),
        },
        None => compute(),
    };
    RegionGrid { rect, nx, ny, cells }
}

/// Header `x,y,index,method,flags`, then one row per cell; floats as `%.17g`.
pub fn write_csv(grid: &RegionGrid, out: &mut dyn Write) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["x", "y", "index", "method", "flags"])?;
    for cell in &grid.cells {
        w.write_record([
            g17(cell.x),
            g17(cell.y),
            cell.index.map(|k| k.to_string()).unwrap_or_default(),
            cell.method.map(|m| m.name().to_string()).unwrap_or_default(),
            cell.flags(),
        ])?;
    }
    w.flush()
}
