//! Index of fixed points followed through a homotopy. Under the radial
//! contraction every trace is monotone; the translate-and-return detour
//! enters and leaves the sphere twice.

use std::error::Error;

use cabledeg::geom3d::TriangleMesh;
use cabledeg::homotopy::{index_trace, sweep_multiplicity, DiscreteHomotopy, IndexTrace};
use cabledeg::{Point3, Vec3};

pub fn run_example() -> Result<Vec<IndexTrace>, Box<dyn Error>> {
    let sphere = TriangleMesh::unit_icosphere(3);
    let radial = DiscreteHomotopy::radial(&sphere, 16)?;
    let detour = DiscreteHomotopy::translate_return(&sphere, Vec3::new(0.0, 0.0, 4.0), 16)?;
    let cases = [
        ("radial", &radial, Point3::new(0.2, 0.1, -0.4)),
        ("radial", &radial, Point3::new(1.5, 0.0, 0.0)),
        ("detour", &detour, Point3::new(0.05, 0.02, 2.5)),
    ];
    let mut out = Vec::new();
    for (name, h, p) in cases {
        let tr = index_trace(&p, h)?;
        let times: Vec<String> = tr.times.iter().map(|t| format!("{t:.4}")).collect();
        println!(
            "{name:<7} ({:.2}, {:.2}, {:.2})  values {:?}  jumps at [{}]  variation {}  sheets {}",
            p.x,
            p.y,
            p.z,
            tr.values,
            times.join(", "),
            tr.variation(),
            sweep_multiplicity(&p, h)
        );
        out.push(tr);
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
