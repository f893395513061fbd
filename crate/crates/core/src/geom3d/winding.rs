use std::f64::consts::PI;

use super::TriangleMesh;
use crate::Point3;

/// Largest accepted distance between a winding value and its nearest integer.
pub const ROUNDING_GUARD: f64 = 0.25;

/// Signed solid angle of triangle `abc` seen from `p`
/// (Van Oosterom and Strackee). Positive when the triangle's normal points
/// away from `p`.
pub fn triangle_solid_angle(p: &Point3, [a, b, c]: &[Point3; 3]) -> f64 {
    let a = a - p;
    let b = b - p;
    let c = c - p;
    let (la, lb, lc) = (a.norm(), b.norm(), c.norm());
    let num = a.dot(&b.cross(&c));
    let den = la * lb * lc + a.dot(&b) * lc + b.dot(&c) * la + c.dot(&a) * lb;
    2.0 * num.atan2(den)
}

/// Generalised winding number: total signed solid angle over `4π`.
/// Triangles are summed in index order so the result is reproducible.
pub fn solid_angle_winding(point: &Point3, mesh: &TriangleMesh) -> f64 {
    (0..mesh.triangles().len())
        .map(|t| triangle_solid_angle(point, &mesh.corners(t)))
        .sum::<f64>()
        / (4.0 * PI)
}
