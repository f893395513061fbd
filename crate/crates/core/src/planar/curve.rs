use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::PlanarError;
use crate::Point2;

/// Closed polygon; the last point connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveFile", into = "CurveFile")]
pub struct PolyCurve {
    points: Vec<Point2>,
}

#[derive(Serialize, Deserialize)]
struct CurveFile {
    points: Vec<[f64; 2]>,
}

impl TryFrom<CurveFile> for PolyCurve {
    type Error = PlanarError;

    fn try_from(f: CurveFile) -> Result<Self, PlanarError> {
        PolyCurve::new(f.points.into_iter().map(Point2::from).collect())
    }
}

impl From<PolyCurve> for CurveFile {
    fn from(c: PolyCurve) -> Self {
        CurveFile {
            points: c.points.iter().map(|p| [p.x, p.y]).collect(),
        }
    }
}

impl PolyCurve {
    pub fn new(points: Vec<Point2>) -> Result<Self, PlanarError> {
        if points.len() < 3 {
            return Err(PlanarError::InvalidCurve("a closed curve needs at least three points".into()));
        }
        let n = points.len();
        if let Some(i) = (0..n).find(|&i| points[i] == points[(i + 1) % n]) {
            return Err(PlanarError::InvalidCurve(format!(
                "points {i} and {} coincide",
                (i + 1) % n
            )));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(PlanarError::InvalidCurve("non-finite coordinate".into()));
        }
        Ok(PolyCurve { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// Edges as `(start, end)` pairs, including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.points.len();
        (0..n).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        PolyCurve { points }
    }

    pub fn bounds(&self) -> (Point2, Point2) {
        self.points.iter().fold((self.points[0], self.points[0]), |(lo, hi), p| (lo.inf(p), hi.sup(p)))
    }

    /// Shoelace signed area.
    pub fn signed_area(&self) -> f64 {
        self.edges().map(|(a, b)| a.x * b.y - b.x * a.y).sum::<f64>() / 2.0
    }

    /// Counter-clockwise axis-aligned square with corners `min` and `min + side`.
    pub fn square(min: Point2, side: f64) -> Self {
        PolyCurve {
            points: vec![
                min,
                Point2::new(min.x + side, min.y),
                Point2::new(min.x + side, min.y + side),
                Point2::new(min.x, min.y + side),
            ],
        }
    }

    /// Regular `segments`-gon inscribed in a circle, traversed `turns` times
    /// counter-clockwise (clockwise for negative `turns`).
    pub fn circle(center: Point2, radius: f64, segments: usize, turns: i32) -> Self {
        let total = segments * turns.unsigned_abs() as usize;
        let dir = turns.signum() as f64;
        PolyCurve {
            points: (0..total)
                .map(|i| {
                    let a = dir * TAU * i as f64 / segments as f64;
                    Point2::new(center.x + radius * a.cos(), center.y + radius * a.sin())
                })
                .collect(),
        }
    }

    /// Figure-eight `(sin t, sin t cos t)` scaled by `scale`; the right lobe
    /// runs clockwise and the left lobe counter-clockwise.
    pub fn figure_eight(scale: f64, segments: usize) -> Self {
        let segments = segments.max(4) & !1;
        PolyCurve {
            points: (0..segments)
                .map(|i| {
                    let t = TAU * i as f64 / segments as f64;
                    Point2::new(scale * t.sin(), scale * t.sin() * t.cos())
                })
                .collect(),
        }
    }

    /// Star-shaped polygon alternating between two radii.
    pub fn star(center: Point2, inner: f64, outer: f64, spikes: usize) -> Self {
        PolyCurve {
            points: (0..2 * spikes)
                .map(|i| {
                    let r = if i % 2 == 0 { outer } else { inner };
                    let a = TAU * i as f64 / (2 * spikes) as f64;
                    Point2::new(center.x + r * a.cos(), center.y + r * a.sin())
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn validation() {
        assert!(PolyCurve::new(vec![Point2::origin(), Point2::new(1.0, 0.0)]).is_err());
        assert!(PolyCurve::new(vec![Point2::origin(), Point2::new(1.0, 0.0), Point2::origin()]).is_err());
        let c: PolyCurve = serde_json::from_str(r#"{"points": [[0,0],[1,0],[0,1]]}"#).unwrap();
        assert_eq!(c.points().len(), 3);
    }

    #[test]
    fn areas() {
        assert_eq!(PolyCurve::square(Point2::origin(), 1.0).signed_area(), 1.0);
        let c = PolyCurve::circle(Point2::origin(), 1.0, 2000, 1);
        assert!((c.signed_area() - PI).abs() < 1e-4);
        assert!(c.reversed().signed_area() < 0.0);
        let f = PolyCurve::figure_eight(1.0, 400);
        assert!(f.signed_area().abs() < 1e-12);
    }
}
