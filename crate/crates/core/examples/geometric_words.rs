//! Builds cable words from geometry: straight and detouring cables through
//! nested spheres, then reduces them. Detours cancel and leave the index.

use std::error::Error;

use cabledeg::geom3d::{build_cable_word, voxel_regions, Cable, TriangleMesh};
use cabledeg::word::reduce;
use cabledeg::Point3;

pub fn run_example() -> Result<Vec<i64>, Box<dyn Error>> {
    let mesh = TriangleMesh::unit_icosphere(3).merged(&TriangleMesh::icosphere(3, 2.0, Point3::origin()));
    let regions = voxel_regions(&mesh, 48)?;
    let far = Point3::new(5.0, 0.3, 0.2);
    let cables = [
        ("straight from the core", Cable::straight(Point3::new(0.05, 0.1, 0.0), far)?),
        ("straight from the shell", Cable::straight(Point3::new(0.0, 1.5, 0.1), far)?),
        (
            "core, out and back in",
            Cable::new(vec![
                Point3::new(0.05, 0.1, 0.0),
                Point3::new(0.1, 3.0, 0.2),
                Point3::new(0.1, 1.5, -0.1),
                far,
            ])?,
        ),
    ];
    let mut out = Vec::new();
    for (name, cable) in &cables {
        let word = build_cable_word(cable, &mesh, &regions)?;
        let term = reduce(&word);
        println!("{name:<24} {word}  ->  {term}");
        out.push(term.coefficient);
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
