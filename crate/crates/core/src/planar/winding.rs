use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PlanarError, PolyCurve};
use crate::geom3d::{BARYCENTRIC_TOLERANCE, ROUNDING_GUARD, TANGENT_TOLERANCE};
use crate::{Point2, Vec2};

fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Signed crossings of the segment `from -> to` with the curve. An edge
/// crossed with the ray on its right (the ray direction turning left onto
/// the edge) counts +1.
pub fn winding_crossings_along(from: Point2, to: Point2, curve: &PolyCurve) -> Result<i64, PlanarError> {
    let r = to - from;
    let rn = r.norm();
    let mut total = 0;
    for (i, (a, b)) in curve.edges().enumerate() {
        let e = b - a;
        let denom = cross(&r, &e);
        let ap = a - from;
        if (denom / (rn * e.norm())).abs() < TANGENT_TOLERANCE {
            // parallel: only a problem when collinear and overlapping
            if cross(&ap, &r).abs() <= 1e-12 * rn * rn.max(ap.norm()) {
                let s0 = ap.dot(&r) / (rn * rn);
                let s1 = (b - from).dot(&r) / (rn * rn);
                if s0.max(s1) >= 0.0 && s0.min(s1) <= 1.0 {
                    return Err(PlanarError::DegenerateHit { edge: i, reason: "ray runs along an edge" });
                }
            }
            continue;
        }
        let t = cross(&ap, &e) / denom;
        let u = cross(&ap, &r) / denom;
        if !(-BARYCENTRIC_TOLERANCE..=1.0 + BARYCENTRIC_TOLERANCE).contains(&u) || !(0.0..=1.0).contains(&t) {
            continue;
        }
        if u <= BARYCENTRIC_TOLERANCE || u >= 1.0 - BARYCENTRIC_TOLERANCE {
            return Err(PlanarError::DegenerateHit { edge: i, reason: "ray passes through a vertex" });
        }
        if t <= 1e-12 {
            return Err(PlanarError::OnCurve);
        }
        total += if denom > 0.0 { 1 } else { -1 };
    }
    Ok(total)
}

/// Ray-casting settings for [`winding_crossings`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayQuery {
    pub retry_budget: u32,
    pub seed: u64,
}

impl Default for RayQuery {
    fn default() -> Self {
        RayQuery { retry_budget: 16, seed: 0 }
    }
}

impl RayQuery {
    /// Winding number as the signed crossing count of a ray from `point` to
    /// a point beyond the curve's bounding box. A degenerate ray is replaced
    /// by one in a fresh random direction.
    pub fn winding(&self, point: Point2, curve: &PolyCurve) -> Result<i64, PlanarError> {
        let (lo, hi) = curve.bounds();
        let reach = (hi - lo).norm() + (point - nalgebra::center(&lo, &hi)).norm() + 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ point.x.to_bits().rotate_left(17) ^ point.y.to_bits());
        // first try an off-axis direction, then random ones
        let mut angle: f64 = 0.318_309_886;
        for _ in 0..=self.retry_budget {
            let far = point + Vec2::new(angle.cos(), angle.sin()) * reach;
            match winding_crossings_along(point, far, curve) {
                Ok(w) => return Ok(w),
                Err(PlanarError::DegenerateHit { .. }) => angle = rng.random_range(0.0..TAU),
                Err(e) => return Err(e),
            }
        }
        Err(PlanarError::RetriesExhausted {
            attempts: self.retry_budget + 1,
        })
    }
}

pub fn winding_crossings(point: Point2, curve: &PolyCurve) -> Result<i64, PlanarError> {
    RayQuery::default().winding(point, curve)
}

/// Total turning angle of `curve` around `point` divided by `2π`.
pub fn winding_angle_value(point: Point2, curve: &PolyCurve) -> Result<f64, PlanarError> {
    let mut sum = 0.0;
    for (a, b) in curve.edges() {
        let (u, v) = (a - point, b - point);
        let (c, d) = (cross(&u, &v), u.dot(&v));
        // a zero vector or a point strictly between the ends of the edge
        if u.norm_squared() == 0.0 || v.norm_squared() == 0.0 || (c == 0.0 && d < 0.0) {
            return Err(PlanarError::OnCurve);
        }
        sum += c.atan2(d);
    }
    Ok(sum / TAU)
}

/// Angle-sum winding number, rounded; fails when the sum is not within the
/// rounding guard of an integer.
pub fn winding_angle(point: Point2, curve: &PolyCurve) -> Result<i64, PlanarError> {
    let value = winding_angle_value(point, curve)?;
    let r = value.round();
    if (value - r).abs() >= ROUNDING_GUARD {
        return Err(PlanarError::NearCurve { value });
    }
    Ok(r as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> PolyCurve {
        PolyCurve::square(Point2::origin(), 1.0)
    }

    #[test]
    fn square_center_and_outside() {
        let c = unit_square();
        assert_eq!(winding_crossings(Point2::new(0.5, 0.5), &c).unwrap(), 1);
        assert_eq!(winding_crossings(Point2::new(2.5, 0.5), &c).unwrap(), 0);
        assert_eq!(winding_angle(Point2::new(0.5, 0.5), &c).unwrap(), 1);
        assert_eq!(winding_angle(Point2::new(0.5, 0.5), &c.reversed()).unwrap(), -1);
        assert_eq!(winding_crossings(Point2::new(0.5, 0.5), &c.reversed()).unwrap(), -1);
    }

    #[test]
    fn axis_ray_through_vertex_retries() {
        // the horizontal ray from (0, 0.5) towards +x hits nothing special, but
        // from the centre of a diamond it hits the right vertex
        let diamond = PolyCurve::new(vec![
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(-1.0, 0.0),
            Point2::new(0.0, -1.0),
        ])
        .unwrap();
        assert!(matches!(
            winding_crossings_along(Point2::origin(), Point2::new(5.0, 0.0), &diamond),
            Err(PlanarError::DegenerateHit { .. })
        ));
        assert_eq!(winding_crossings(Point2::origin(), &diamond).unwrap(), 1);
    }

    #[test]
    fn figure_eight_lobes() {
        let f = PolyCurve::figure_eight(1.0, 200);
        assert_eq!(winding_crossings(Point2::new(0.5, 0.0), &f).unwrap(), -1);
        assert_eq!(winding_crossings(Point2::new(-0.5, 0.0), &f).unwrap(), 1);
        assert_eq!(winding_angle(Point2::new(0.5, 0.0), &f).unwrap(), -1);
        assert_eq!(winding_angle(Point2::new(-0.5, 0.0), &f).unwrap(), 1);
    }

    #[test]
    fn triple_wound_circle() {
        let c = PolyCurve::circle(Point2::origin(), 1.0, 64, 3);
        assert_eq!(winding_angle(Point2::origin(), &c).unwrap(), 3);
        assert!((winding_angle_value(Point2::origin(), &c).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(winding_crossings(Point2::new(0.1, 0.2), &c).unwrap(), 3);
    }

    #[test]
    fn on_curve_points() {
        let c = unit_square();
        assert_eq!(winding_angle(Point2::new(1.0, 1.0), &c), Err(PlanarError::OnCurve));
        assert_eq!(winding_angle(Point2::new(0.5, 0.0), &c), Err(PlanarError::OnCurve));
        assert_eq!(winding_angle(Point2::new(0.5, 1e-7), &c), Ok(1));
    }
}
