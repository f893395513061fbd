use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cable_crossings, Cable, GeomError, TriangleMesh};
use crate::{Point3, Vec3};

/// Signed crossing count along an explicit cable.
pub fn signed_crossing_count(cable: &Cable, mesh: &TriangleMesh) -> Result<i64, GeomError> {
    Ok(cable_crossings(cable, mesh)?.iter().map(|e| e.sign.value()).sum())
}

/// A point comfortably outside the mesh bounding box, off the coordinate
/// axes through the box.
pub fn default_exterior(mesh: &TriangleMesh) -> Point3 {
    match mesh.bounding_box() {
        Some(bb) => bb.max + Vec3::new(1.0, 0.618, 0.382) * (bb.diagonal() + 1.0),
        None => Point3::new(10.0, 6.18, 3.82),
    }
}

/// Two-segment cable through a random waypoint near the midpoint.
pub fn jittered_cable(from: Point3, to: Point3, rng: &mut impl Rng) -> Result<Cable, GeomError> {
    let len = (to - from).norm();
    let dir = loop {
        let v = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            break v / n;
        }
    };
    let mid = nalgebra::center(&from, &to) + dir * len * rng.random_range(0.05..0.35);
    Cable::new(vec![from, mid, to])
}

/// Cable-index query settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexQuery {
    pub exterior: Point3,
    pub retry_budget: u32,
    pub seed: u64,
}

impl IndexQuery {
    pub fn for_mesh(mesh: &TriangleMesh) -> Self {
        IndexQuery {
            exterior: default_exterior(mesh),
            retry_budget: 16,
            seed: 0,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        IndexQuery { seed, ..self }
    }

    pub fn with_retry_budget(self, retry_budget: u32) -> Self {
        IndexQuery { retry_budget, ..self }
    }

    /// Signed crossing count of a cable from `point` to the exterior point.
    /// Tries the straight cable first; each degenerate cable is replaced by
    /// one through a fresh random waypoint.
    pub fn index(&self, point: &Point3, mesh: &TriangleMesh) -> Result<i64, GeomError> {
        if mesh.bounding_box().is_some_and(|bb| bb.contains(&self.exterior)) {
            return Err(GeomError::ExteriorInsideBounds);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ point_hash(point));
        let mut cable = Cable::straight(*point, self.exterior)?;
        for attempt in 0..=self.retry_budget {
            match signed_crossing_count(&cable, mesh) {
                Ok(n) => return Ok(n),
                Err(GeomError::DegenerateCrossing { segment, triangle, reason }) => {
                    log::debug!(
                        "attempt {attempt}: degenerate cable at segment {segment}, triangle {triangle}: {reason}"
                    );
                    cable = jittered_cable(*point, self.exterior, &mut rng)?;
                }
                Err(e) => return Err(e),
            }
        }
        Err(GeomError::RetriesExhausted {
            attempts: self.retry_budget + 1,
        })
    }
}

fn point_hash(p: &Point3) -> u64 {
    p.coords.iter().fold(0x9E37_79B9_7F4A_7C15u64, |h, c| {
        let mut z = h ^ c.to_bits();
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    })
}

/// Cable index of the region containing `point`, with jitter seeded from the
/// point coordinates.
pub fn cable_index(
    point: &Point3,
    mesh: &TriangleMesh,
    exterior: &Point3,
    retry_budget: u32,
) -> Result<i64, GeomError> {
    cable_index_seeded(point, mesh, exterior, retry_budget, 0)
}

pub fn cable_index_seeded(
    point: &Point3,
    mesh: &TriangleMesh,
    exterior: &Point3,
    retry_budget: u32,
    seed: u64,
) -> Result<i64, GeomError> {
    IndexQuery {
        exterior: *exterior,
        retry_budget,
        seed,
    }
    .index(point, mesh)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext() -> Point3 {
        Point3::new(10.0, 0.0, 0.0)
    }

    #[test]
    fn embedded_sphere() {
        let m = TriangleMesh::unit_icosphere(3);
        assert_eq!(cable_index(&Point3::origin(), &m, &ext(), 8).unwrap(), 1);
        assert_eq!(cable_index(&Point3::new(5.0, 5.0, 5.0), &m, &ext(), 8).unwrap(), 0);
    }

    #[test]
    fn axis_cable_hits_vertex_and_retries() {
        // the straight cable along +x passes through a mesh vertex
        let m = TriangleMesh::unit_icosphere(1);
        let c = Cable::straight(Point3::origin(), ext()).unwrap();
        assert!(signed_crossing_count(&c, &m).is_err());
        assert_eq!(cable_index(&Point3::origin(), &m, &ext(), 8).unwrap(), 1);
    }

    #[test]
    fn zero_budget_exhausts_on_vertex_hit() {
        let m = TriangleMesh::unit_icosphere(1);
        assert_eq!(
            cable_index(&Point3::origin(), &m, &ext(), 0).unwrap_err(),
            GeomError::RetriesExhausted { attempts: 1 }
        );
    }

    #[test]
    fn nested_spheres_give_two() {
        let m = TriangleMesh::unit_icosphere(3).merged(&TriangleMesh::icosphere(3, 2.0, Point3::origin()));
        assert_eq!(cable_index(&Point3::origin(), &m, &ext(), 8).unwrap(), 2);
        assert_eq!(cable_index(&Point3::new(0.0, 1.5, 0.0), &m, &ext(), 8).unwrap(), 1);
    }

    #[test]
    fn exterior_must_be_outside_bounds() {
        let m = TriangleMesh::unit_icosphere(1);
        assert_eq!(
            cable_index(&Point3::origin(), &m, &Point3::new(0.5, 0.0, 0.0), 2).unwrap_err(),
            GeomError::ExteriorInsideBounds
        );
    }

    #[test]
    fn same_seed_same_cable() {
        let a = jittered_cable(Point3::origin(), ext(), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = jittered_cable(Point3::origin(), ext(), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
    }
}
