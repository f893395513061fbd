use serde::Serialize;

use super::{DiscreteHomotopy, HomotopyError};
use crate::geom3d::{solid_angle_winding, ROUNDING_GUARD};
use crate::Point3;

/// Piecewise-constant, right-continuous index of a fixed point under a
/// homotopy: `values[0]` holds on `[0, times[0])`, `values[k]` on
/// `[times[k-1], times[k])`, and the last value through `t = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexTrace {
    pub point: [f64; 3],
    pub times: Vec<f64>,
    pub values: Vec<i64>,
    /// Times near which the winding number could not be rounded safely;
    /// jumps placed there are approximate.
    pub uncertain: Vec<f64>,
}

impl IndexTrace {
    pub fn start(&self) -> i64 {
        self.values[0]
    }

    pub fn end(&self) -> i64 {
        *self.values.last().unwrap()
    }

    pub fn jump_count(&self) -> usize {
        self.times.len()
    }

    /// Total variation `sum |values[k+1] - values[k]|`.
    pub fn variation(&self) -> u64 {
        self.values.windows(2).map(|w| w[1].abs_diff(w[0])).sum()
    }

    /// Whether the trace never changes direction.
    pub fn is_monotone(&self) -> bool {
        let steps = || self.values.windows(2).map(|w| w[1] - w[0]);
        steps().all(|d| d >= 0) || steps().all(|d| d <= 0)
    }

    pub fn value_at(&self, t: f64) -> i64 {
        self.values[self.times.partition_point(|&s| s <= t)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// Samples per frame interval before bisection.
    pub substeps: usize,
    /// Bisection stops once a jump is bracketed this tightly.
    pub time_tolerance: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            substeps: 4,
            time_tolerance: 1e-9,
        }
    }
}

pub fn index_trace(point: &Point3, h: &DiscreteHomotopy) -> Result<IndexTrace, HomotopyError> {
    index_trace_with(point, h, TraceOptions::default())
}

/// Samples the rounded solid-angle winding number of `point` against the
/// interpolated surfaces and brackets every change by bisection. The
/// collapsed surface at `t = 1` bounds nothing, so the trace ends at 0.
/// Jumps that cancel within one sampling interval are not seen.
pub fn index_trace_with(point: &Point3, h: &DiscreteHomotopy, opts: TraceOptions) -> Result<IndexTrace, HomotopyError> {
    if *point == h.terminal_point() {
        return Err(HomotopyError::AtTerminalPoint);
    }
    let w0 = solid_angle_winding(point, h.base());
    if (w0 - w0.round()).abs() >= ROUNDING_GUARD {
        return Err(HomotopyError::OnSurface { value: w0 });
    }
    let sample = |t: f64| -> Option<i64> {
        if t >= 1.0 {
            return Some(0);
        }
        let w = solid_angle_winding(point, &h.at(t));
        let r = w.round();
        ((w - r).abs() < ROUNDING_GUARD).then_some(r as i64)
    };

    let substeps = opts.substeps.max(1);
    let mut grid = vec![0.0];
    for k in 0..h.times().len() - 1 {
        let (a, b) = (h.times()[k], h.times()[k + 1]);
        grid.extend((1..=substeps).map(|j| if j == substeps { b } else { a + (b - a) * j as f64 / substeps as f64 }));
    }

    let mut trace = IndexTrace {
        point: [point.x, point.y, point.z],
        times: Vec::new(),
        values: vec![w0.round() as i64],
        uncertain: Vec::new(),
    };
    let (mut t0, mut v0) = (0.0, trace.values[0]);
    for &t in &grid[1..] {
        let Some(v) = sample(t) else {
            trace.uncertain.push(t);
            continue;
        };
        if v != v0 {
            bisect(&sample, t0, v0, t, v, opts.time_tolerance, &mut trace);
        }
        (t0, v0) = (t, v);
    }
    Ok(trace)
}

fn bisect(
    sample: &impl Fn(f64) -> Option<i64>,
    t0: f64,
    v0: i64,
    t1: f64,
    v1: i64,
    tol: f64,
    trace: &mut IndexTrace,
) {
    if t1 - t0 <= tol {
        trace.times.push(t1);
        trace.values.push(v1);
        return;
    }
    let w = t1 - t0;
    // the exact midpoint may sit on a sheet; try a couple of nearby times
    let probe = [0.5, 0.375, 0.625].iter().find_map(|f| {
        let tm = t0 + w * f;
        sample(tm).map(|v| (tm, v))
    });
    match probe {
        Some((tm, vm)) => {
            if vm != v0 {
                bisect(sample, t0, v0, tm, vm, tol, trace);
            }
            if vm != v1 {
                bisect(sample, tm, vm, t1, v1, tol, trace);
            }
        }
        None => {
            let tm = t0 + w * 0.5;
            trace.uncertain.push(tm);
            trace.times.push(tm);
            trace.values.push(v1);
        }
    }
}
