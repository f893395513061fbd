//! Voxel region decomposition and the degree-weighted volumes `D` and
//! `V_deg` for a sphere, nested spheres and an inside-out sphere.

use std::error::Error;
use std::f64::consts::PI;

use cabledeg::geom3d::{voxel_regions, TriangleMesh};
use cabledeg::Point3;

pub fn run_example() -> Result<Vec<(f64, f64)>, Box<dyn Error>> {
    let ball = 4.0 * PI / 3.0;
    let cases = [
        ("sphere", TriangleMesh::unit_icosphere(3), ball),
        (
            "nested",
            TriangleMesh::unit_icosphere(3).merged(&TriangleMesh::icosphere(3, 2.0, Point3::origin())),
            9.0 * ball,
        ),
        ("flipped", TriangleMesh::unit_icosphere(3).flipped(), -ball),
    ];
    let mut out = Vec::new();
    for (name, mesh, exact) in cases {
        let map = voxel_regions(&mesh, 48)?;
        for r in map.bounded() {
            println!(
                "{name:<8} region {}  index {:>2}  volume {:.4}  solid angle {:+.4}",
                r.id, r.index, r.volume, r.winding
            );
        }
        let d = map.total_degree();
        println!(
            "{name:<8} D = {:.4}  V_deg = {:.4}  exact D = {:.4}  rel err {:+.2}%",
            d.total,
            d.vdeg,
            exact,
            100.0 * (d.total - exact) / exact
        );
        out.push((d.total, d.vdeg));
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
