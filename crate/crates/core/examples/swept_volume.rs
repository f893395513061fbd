//! Swept volume of three null homotopies of the unit sphere against its
//! total degree: the radial contraction (equality), a translate-and-return
//! detour (strict inequality) and a randomly wobbled contraction.

use std::error::Error;

use cabledeg::geom3d::TriangleMesh;
use cabledeg::homotopy::{verify_lower_bound, DiscreteHomotopy, LowerBoundReport};
use cabledeg::Vec3;

const AMPLITUDE: f64 = 0.3;

pub fn run_example() -> Result<Vec<LowerBoundReport>, Box<dyn Error>> {
    let sphere = TriangleMesh::unit_icosphere(3);
    let cases = [
        ("radial", DiscreteHomotopy::radial(&sphere, 32)?),
        ("translate-return", DiscreteHomotopy::translate_return(&sphere, Vec3::new(4.0, 0.0, 0.0), 16)?),
        ("wobble", DiscreteHomotopy::wobble(&sphere, 32, AMPLITUDE, 11)?),
    ];
    let mut out = Vec::new();
    for (name, h) in &cases {
        let r = verify_lower_bound(h, 40)?;
        println!(
            "{name:<17} Vol = {:8.4}  |D| = {:.4}  margin = {:+8.4}  sense-preserving = {}  violation = {}",
            r.swept_volume,
            r.total_degree.abs(),
            r.margin,
            r.sense.sense_preserving,
            r.violation
        );
        out.push(r);
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
