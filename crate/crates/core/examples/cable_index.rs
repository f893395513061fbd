//! Cable index of a few points against nested and overlapping spheres,
//! checked against the solid-angle winding number.

use std::error::Error;

use cabledeg::geom3d::{solid_angle_winding, IndexQuery, TriangleMesh};
use cabledeg::Point3;

pub fn run_example() -> Result<Vec<i64>, Box<dyn Error>> {
    let nested = TriangleMesh::unit_icosphere(3).merged(&TriangleMesh::icosphere(3, 2.0, Point3::origin()));
    let overlap = TriangleMesh::icosphere(3, 1.0, Point3::new(-0.5, 0.0, 0.0))
        .merged(&TriangleMesh::icosphere(3, 1.0, Point3::new(0.5, 0.0, 0.0)));
    let cases = [
        ("nested", &nested, Point3::new(0.1, 0.2, -0.3)),
        ("nested", &nested, Point3::new(1.5, 0.0, 0.0)),
        ("nested", &nested, Point3::new(3.0, 0.0, 0.0)),
        ("overlap", &overlap, Point3::new(0.0, 0.1, 0.0)),
        ("overlap", &overlap, Point3::new(-1.2, 0.0, 0.0)),
        ("flipped", &nested.flipped(), Point3::origin()),
    ];
    let mut out = Vec::new();
    for (name, mesh, p) in cases {
        let index = IndexQuery::for_mesh(mesh).index(&p, mesh)?;
        let w = solid_angle_winding(&p, mesh);
        println!("{name:<8} ({:5.2}, {:5.2}, {:5.2})  index {index:>2}  solid angle {w:+.6}", p.x, p.y, p.z);
        assert_eq!(index, w.round() as i64);
        out.push(index);
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
