use serde::{Deserialize, Serialize};

use super::{GeomError, TriangleMesh};
use crate::word::Sign;
use crate::{Point3, Vec3};

/// A hit whose barycentric coordinates come this close to the triangle
/// boundary is treated as an edge/vertex hit.
pub const BARYCENTRIC_TOLERANCE: f64 = 1e-9;
/// Crossings with `|<t, n>| / (|t||n|)` below this are near-tangential.
pub const TANGENT_TOLERANCE: f64 = 1e-9;
/// Hits this close (in segment fraction) to a waypoint are waypoint hits.
const WAYPOINT_TOLERANCE: f64 = 1e-12;

/// Polyline from a region point towards the exterior base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CableFile", into = "CableFile")]
pub struct Cable {
    points: Vec<Point3>,
}

#[derive(Serialize, Deserialize)]
struct CableFile {
    points: Vec<[f64; 3]>,
}

impl TryFrom<CableFile> for Cable {
    type Error = GeomError;

    fn try_from(f: CableFile) -> Result<Self, GeomError> {
        Cable::new(f.points.into_iter().map(Point3::from).collect())
    }
}

impl From<Cable> for CableFile {
    fn from(c: Cable) -> Self {
        CableFile {
            points: c.points.iter().map(|p| [p.x, p.y, p.z]).collect(),
        }
    }
}

impl Cable {
    pub fn new(points: Vec<Point3>) -> Result<Self, GeomError> {
        if points.len() < 2 {
            return Err(GeomError::InvalidCable("a cable needs at least two points".into()));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(GeomError::InvalidCable(format!("points {i} and {} coincide", i + 1)));
        }
        Ok(Cable { points })
    }

    pub fn straight(from: Point3, to: Point3) -> Result<Self, GeomError> {
        Self::new(vec![from, to])
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn start(&self) -> Point3 {
        self.points[0]
    }

    pub fn end(&self) -> Point3 {
        *self.points.last().unwrap()
    }

    /// Position at cable parameter `s` in `[0, 1]`; each segment covers an
    /// equal share of the parameter range.
    pub fn point_at(&self, s: f64) -> Point3 {
        let n = self.segment_count() as f64;
        let x = (s.clamp(0.0, 1.0) * n).min(n);
        let k = (x.floor() as usize).min(self.segment_count() - 1);
        let t = x - k as f64;
        self.points[k] + (self.points[k + 1] - self.points[k]) * t
    }

    /// Same polyline traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Cable { points }
    }
}

/// One transverse cable/surface intersection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingEvent {
    pub parameter: f64,
    pub position: Point3,
    pub triangle: usize,
    #[serde(serialize_with = "ser_sign")]
    pub sign: Sign,
}

fn ser_sign<S: serde::Serializer>(s: &Sign, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_i64(s.value())
}

enum Hit {
    Miss,
    Cross { t: f64, sign: Sign },
    Degenerate(&'static str),
}

fn segment_triangle(q0: &Point3, q1: &Point3, tri: &[Point3; 3]) -> Hit {
    let [a, b, c] = tri;
    let e1 = b - a;
    let e2 = c - a;
    let n = e1.cross(&e2);
    let d = q1 - q0;

    let s0 = (q0 - a).dot(&n);
    let s1 = (q1 - a).dot(&n);
    if (s0 > 0.0 && s1 > 0.0) || (s0 < 0.0 && s1 < 0.0) {
        return Hit::Miss;
    }

    let nn = n.norm();
    let dn = d.norm();
    if nn == 0.0 {
        return Hit::Miss;
    }
    let denom = d.dot(&n);
    let cos = denom / (dn * nn);

    if s0 == s1 {
        // segment lies in the triangle's plane
        return if overlaps_in_plane(q0, q1, tri) {
            Hit::Degenerate("segment lies in the triangle plane")
        } else {
            Hit::Miss
        };
    }

    let t = s0 / (s0 - s1);
    let p = q0 + d * t;
    let bary = barycentric(&p, a, &e1, &e2, &n);
    let lowest = bary.iter().copied().fold(f64::INFINITY, f64::min);

    if cos.abs() < TANGENT_TOLERANCE {
        return if lowest > -1e-6 {
            Hit::Degenerate("near-tangential crossing")
        } else {
            Hit::Miss
        };
    }
    if lowest < -BARYCENTRIC_TOLERANCE {
        return Hit::Miss;
    }
    if lowest <= BARYCENTRIC_TOLERANCE {
        return Hit::Degenerate("hit within tolerance of an edge or vertex");
    }
    if t <= WAYPOINT_TOLERANCE || t >= 1.0 - WAYPOINT_TOLERANCE {
        return Hit::Degenerate("cable waypoint lies on the surface");
    }
    Hit::Cross {
        t,
        sign: if denom > 0.0 { Sign::Plus } else { Sign::Minus },
    }
}

fn barycentric(p: &Point3, a: &Point3, e1: &Vec3, e2: &Vec3, n: &Vec3) -> [f64; 3] {
    let w = p - a;
    let inv = 1.0 / n.norm_squared();
    let v = w.cross(e2).dot(n) * inv;
    let u = e1.cross(&w).dot(n) * inv;
    [1.0 - v - u, v, u]
}

fn overlaps_in_plane(q0: &Point3, q1: &Point3, tri: &[Point3; 3]) -> bool {
    (0..3).all(|i| {
        let lo = tri.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min);
        let hi = tri.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max);
        q0[i].max(q1[i]) >= lo && q0[i].min(q1[i]) <= hi
    })
}

/// All transverse crossings of `cable` with `mesh`, sorted by cable
/// parameter. Any hit too close to an edge, vertex, waypoint or tangency is
/// reported as [`GeomError::DegenerateCrossing`] so the caller can perturb
/// the cable.
pub fn cable_crossings(cable: &Cable, mesh: &TriangleMesh) -> Result<Vec<CrossingEvent>, GeomError> {
    let nseg = cable.segment_count();
    let mut events = Vec::new();
    for (k, w) in cable.points.windows(2).enumerate() {
        let (q0, q1) = (w[0], w[1]);
        let lo = q0.inf(&q1);
        let hi = q0.sup(&q1);
        for t in 0..mesh.triangles().len() {
            let tri = mesh.corners(t);
            if (0..3).any(|i| {
                tri.iter().all(|p| p[i] < lo[i]) || tri.iter().all(|p| p[i] > hi[i])
            }) {
                continue;
            }
            match segment_triangle(&q0, &q1, &tri) {
                Hit::Miss => {}
                Hit::Degenerate(reason) => {
                    return Err(GeomError::DegenerateCrossing {
                        segment: k,
                        triangle: t,
                        reason,
                    })
                }
                Hit::Cross { t: s, sign } => events.push(CrossingEvent {
                    parameter: (k as f64 + s) / nseg as f64,
                    position: q0 + (q1 - q0) * s,
                    triangle: t,
                    sign,
                }),
            }
        }
    }
    events.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signs(ev: &[CrossingEvent]) -> Vec<i64> {
        ev.iter().map(|e| e.sign.value()).collect()
    }

    #[test]
    fn diameter_enters_then_leaves() {
        let m = TriangleMesh::unit_icosphere(2);
        let c = Cable::straight(Point3::new(-3.0, 0.1, 0.05), Point3::new(3.0, 0.1, 0.05)).unwrap();
        let ev = cable_crossings(&c, &m).unwrap();
        assert_eq!(signs(&ev), vec![-1, 1]);
        assert!(ev[0].parameter < ev[1].parameter);
        assert!((ev[0].position.coords.norm() - 1.0).abs() < 0.1);
    }

    #[test]
    fn outside_segment_misses() {
        let m = TriangleMesh::unit_icosphere(2);
        let c = Cable::straight(Point3::new(3.0, 3.0, 3.0), Point3::new(5.0, 4.0, 3.0)).unwrap();
        assert!(cable_crossings(&c, &m).unwrap().is_empty());
    }

    #[test]
    fn nested_spheres_both_positive() {
        let m = TriangleMesh::unit_icosphere(2).merged(&TriangleMesh::icosphere(2, 2.0, Point3::origin()));
        let c = Cable::straight(Point3::new(0.0, 0.013, 0.007), Point3::new(3.0, 0.013, 0.007)).unwrap();
        let ev = cable_crossings(&c, &m).unwrap();
        assert_eq!(signs(&ev), vec![1, 1]);
    }

    #[test]
    fn vertex_hit_is_degenerate() {
        // subdivision 1 has a vertex at (1, 0, 0) (direction of (phi, 0, 0))
        let m = TriangleMesh::unit_icosphere(1);
        let c = Cable::straight(Point3::origin(), Point3::new(10.0, 0.0, 0.0)).unwrap();
        assert!(matches!(
            cable_crossings(&c, &m),
            Err(GeomError::DegenerateCrossing { .. })
        ));
    }

    #[test]
    fn in_plane_segment_is_degenerate() {
        let m = TriangleMesh::new(
            vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let c = Cable::straight(Point3::new(-1.0, 0.2, 0.0), Point3::new(2.0, 0.2, 0.0)).unwrap();
        assert!(matches!(
            cable_crossings(&c, &m),
            Err(GeomError::DegenerateCrossing { .. })
        ));
    }

    #[test]
    fn waypoint_on_surface_is_degenerate() {
        let m = TriangleMesh::new(
            vec![Point3::new(0.0, -1.0, -1.0), Point3::new(0.0, 1.0, -1.0), Point3::new(0.0, 0.0, 1.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let c = Cable::new(vec![
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.1, 0.0),
        ])
        .unwrap();
        assert!(matches!(
            cable_crossings(&c, &m),
            Err(GeomError::DegenerateCrossing { .. })
        ));
    }

    #[test]
    fn cable_validation() {
        assert!(Cable::new(vec![Point3::origin()]).is_err());
        assert!(Cable::new(vec![Point3::origin(), Point3::origin()]).is_err());
        let c: Cable = serde_json::from_str(r#"{"points": [[0,0,0],[1,0,0],[1,1,0]]}"#).unwrap();
        assert_eq!(c.segment_count(), 2);
        assert_eq!(c.point_at(0.75), Point3::new(1.0, 0.5, 0.0));
        assert_eq!(c.point_at(1.0), Point3::new(1.0, 1.0, 0.0));
        assert!(serde_json::from_str::<Cable>(r#"{"points": [[0,0,0]]}"#).is_err());
    }
}
