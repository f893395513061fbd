use std::collections::HashMap;

use serde::Serialize;

use super::GeomError;
use crate::{Point3, Vec3};

/// Indexed triangle mesh. Triangle normals follow the winding order,
/// `(v1 - v0) x (v2 - v0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh {
    vertices: Vec<Point3>,
    triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb {
    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Point3>) -> Option<Aabb> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        Some(it.fold(Aabb { min: first, max: first }, |b, p| Aabb {
            min: b.min.inf(p),
            max: b.max.sup(p),
        }))
    }

    pub fn contains(&self, p: &Point3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn center(&self) -> Point3 {
        nalgebra::center(&self.min, &self.max)
    }

    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn diagonal(&self) -> f64 {
        self.extent().norm()
    }

    pub fn volume(&self) -> f64 {
        let e = self.extent();
        e.x * e.y * e.z
    }
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point3>, triangles: Vec<[usize; 3]>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if let Some((i, t)) = triangles
            .iter()
            .enumerate()
            .find(|(_, t)| t.iter().any(|&v| v >= n))
        {
            return Err(GeomError::InvalidMesh(format!(
                "triangle {i} references vertex {:?} but the mesh has {n} vertices",
                t
            )));
        }
        if vertices.iter().any(|p| !p.coords.iter().all(|c| c.is_finite())) {
            return Err(GeomError::InvalidMesh("non-finite vertex coordinate".into()));
        }
        Ok(TriangleMesh { vertices, triangles })
    }

    pub fn empty() -> Self {
        TriangleMesh {
            vertices: Vec::new(),
            triangles: Vec::new(),
        }
    }

    /// Subdivided icosahedron projected onto a sphere, outward oriented.
    /// Subdivision `s` has `20 * 4^s` triangles.
    pub fn icosphere(subdivisions: u32, radius: f64, center: Point3) -> Self {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut verts: Vec<Vec3> = [
            (-1.0, phi, 0.0),
            (1.0, phi, 0.0),
            (-1.0, -phi, 0.0),
            (1.0, -phi, 0.0),
            (0.0, -1.0, phi),
            (0.0, 1.0, phi),
            (0.0, -1.0, -phi),
            (0.0, 1.0, -phi),
            (phi, 0.0, -1.0),
            (phi, 0.0, 1.0),
            (-phi, 0.0, -1.0),
            (-phi, 0.0, 1.0),
        ]
        .iter()
        .map(|&(x, y, z)| Vec3::new(x, y, z).normalize())
        .collect();
        let mut faces: Vec<[usize; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..subdivisions {
            let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
            let mut mid = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
                *midpoints.entry((a.min(b), a.max(b))).or_insert_with(|| {
                    verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                    verts.len() - 1
                })
            };
            let mut next = Vec::with_capacity(faces.len() * 4);
            for [a, b, c] in faces {
                let ab = mid(a, b, &mut verts);
                let bc = mid(b, c, &mut verts);
                let ca = mid(c, a, &mut verts);
                next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            faces = next;
        }
        TriangleMesh {
            vertices: verts.into_iter().map(|v| center + v * radius).collect(),
            triangles: faces,
        }
    }

    pub fn unit_icosphere(subdivisions: u32) -> Self {
        Self::icosphere(subdivisions, 1.0, Point3::origin())
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn corners(&self, t: usize) -> [Point3; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Unnormalised normal; its length is twice the triangle area.
    pub fn normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.corners(t);
        (b - a).cross(&(c - a))
    }

    pub fn bounding_box(&self) -> Option<Aabb> {
        Aabb::from_points(self.triangles.iter().flatten().map(|&i| &self.vertices[i]))
    }

    /// Signed enclosed volume by the divergence theorem. For a closed mesh
    /// this equals the integral of the winding number over space.
    pub fn signed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|&[a, b, c]| {
                let (a, b, c) = (self.vertices[a].coords, self.vertices[b].coords, self.vertices[c].coords);
                a.dot(&b.cross(&c))
            })
            .sum::<f64>()
            / 6.0
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.normal(t).norm() * 0.5).sum()
    }

    /// Same surface with every triangle's winding reversed.
    pub fn flipped(&self) -> Self {
        TriangleMesh {
            vertices: self.vertices.clone(),
            triangles: self.triangles.iter().map(|&[a, b, c]| [a, c, b]).collect(),
        }
    }

    /// Disjoint union of two meshes (the result may self-intersect).
    pub fn merged(&self, other: &TriangleMesh) -> Self {
        let off = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut triangles = self.triangles.clone();
        triangles.extend(other.triangles.iter().map(|t| t.map(|v| v + off)));
        TriangleMesh { vertices, triangles }
    }

    pub fn translated(&self, offset: Vec3) -> Self {
        TriangleMesh {
            vertices: self.vertices.iter().map(|p| p + offset).collect(),
            triangles: self.triangles.clone(),
        }
    }

    /// Same connectivity with new vertex positions.
    pub fn with_vertices(&self, vertices: Vec<Point3>) -> Result<Self, GeomError> {
        if vertices.len() != self.vertices.len() {
            return Err(GeomError::InvalidMesh(format!(
                "expected {} vertices, got {}",
                self.vertices.len(),
                vertices.len()
            )));
        }
        Ok(TriangleMesh {
            vertices,
            triangles: self.triangles.clone(),
        })
    }

    pub fn without_triangle(&self, t: usize) -> Self {
        let mut m = self.clone();
        m.triangles.remove(t);
        m
    }

    pub fn with_flipped_triangle(&self, t: usize) -> Self {
        let mut m = self.clone();
        m.triangles[t].swap(1, 2);
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeshReport {
    pub vertex_count: usize,
    pub triangle_count: usize,
    /// Undirected edges used by an odd number of triangle sides.
    pub open_edges: Vec<[usize; 2]>,
    /// Edges used an even number of times but not in matching opposite pairs.
    pub inconsistent_edges: Vec<[usize; 2]>,
    pub degenerate_triangles: Vec<usize>,
    pub bounding_box: Option<Aabb>,
}

impl MeshReport {
    pub fn is_closed(&self) -> bool {
        self.open_edges.is_empty()
    }

    pub fn is_oriented(&self) -> bool {
        self.inconsistent_edges.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.is_closed() && self.is_oriented() && self.degenerate_triangles.is_empty()
    }
}

/// Closedness, orientation consistency and degeneracy diagnostics.
pub fn validate_mesh(mesh: &TriangleMesh) -> MeshReport {
    // (lo, hi) -> (sides running lo->hi, sides running hi->lo)
    let mut edges: HashMap<(usize, usize), (u32, u32)> = HashMap::new();
    for &[a, b, c] in &mesh.triangles {
        for (u, v) in [(a, b), (b, c), (c, a)] {
            let e = edges.entry((u.min(v), u.max(v))).or_default();
            if u < v {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
    }
    let mut open_edges = Vec::new();
    let mut inconsistent_edges = Vec::new();
    for (&(u, v), &(fwd, back)) in &edges {
        if (fwd + back) % 2 == 1 {
            open_edges.push([u, v]);
        } else if fwd != back {
            inconsistent_edges.push([u, v]);
        }
    }
    open_edges.sort_unstable();
    inconsistent_edges.sort_unstable();

    let degenerate_triangles = (0..mesh.triangles.len())
        .filter(|&t| {
            let [a, b, c] = mesh.corners(t);
            let longest = [(b - a).norm_squared(), (c - b).norm_squared(), (a - c).norm_squared()]
                .into_iter()
                .fold(0.0, f64::max);
            longest == 0.0 || mesh.normal(t).norm() <= 1e-12 * longest
        })
        .collect();

    MeshReport {
        vertex_count: mesh.vertices.len(),
        triangle_count: mesh.triangles.len(),
        open_edges,
        inconsistent_edges,
        degenerate_triangles,
        bounding_box: mesh.bounding_box(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn icosphere_is_closed_and_outward() {
        for s in 0..4 {
            let m = TriangleMesh::unit_icosphere(s);
            assert_eq!(m.triangles().len(), 20 * 4usize.pow(s));
            let r = validate_mesh(&m);
            assert!(r.is_valid(), "subdivision {s}: {r:?}");
            assert!(m.signed_volume() > 0.0);
        }
        let v = TriangleMesh::unit_icosphere(4).signed_volume();
        assert!((v - 4.0 * PI / 3.0).abs() / (4.0 * PI / 3.0) < 0.01);
    }

    #[test]
    fn removed_triangle_opens_three_edges() {
        let m = TriangleMesh::unit_icosphere(2).without_triangle(7);
        let r = validate_mesh(&m);
        assert_eq!(r.open_edges.len(), 3);
        assert!(!r.is_closed());
    }

    #[test]
    fn flipped_triangle_breaks_orientation() {
        let m = TriangleMesh::unit_icosphere(2).with_flipped_triangle(3);
        let r = validate_mesh(&m);
        assert!(r.is_closed());
        assert_eq!(r.inconsistent_edges.len(), 3);
        assert!(!r.is_oriented());
    }

    #[test]
    fn degenerate_triangle_reported() {
        let m = TriangleMesh::new(
            vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0), Point3::new(2.0, 0.0, 0.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(validate_mesh(&m).degenerate_triangles, vec![0]);
    }

    #[test]
    fn out_of_range_index_rejected() {
        assert!(TriangleMesh::new(vec![Point3::origin()], vec![[0, 0, 1]]).is_err());
    }

    #[test]
    fn nested_and_flipped_volumes() {
        let inner = TriangleMesh::unit_icosphere(3);
        let outer = TriangleMesh::icosphere(3, 2.0, Point3::origin());
        let nested = inner.merged(&outer);
        assert!(validate_mesh(&nested).is_valid());
        let expect = inner.signed_volume() + outer.signed_volume();
        assert!((nested.signed_volume() - expect).abs() < 1e-9);
        assert!((inner.flipped().signed_volume() + inner.signed_volume()).abs() < 1e-12);
    }

    #[test]
    fn empty_mesh_has_no_bounds() {
        let r = validate_mesh(&TriangleMesh::empty());
        assert!(r.is_valid());
        assert!(r.bounding_box.is_none());
    }
}
