//! Winding numbers of closed polygons by ray crossings and by angle sums,
//! and the winding-number-area bound for a few curves.

use std::error::Error;

use cabledeg::planar::{planar_regions, winding_angle, winding_crossings, AreaBound, PolyCurve};
use cabledeg::Point2;

pub fn run_example() -> Result<Vec<AreaBound>, Box<dyn Error>> {
    let curves = [
        ("square", PolyCurve::square(Point2::new(-0.5, -0.5), 1.0)),
        ("triple circle", PolyCurve::circle(Point2::origin(), 1.0, 256, 3)),
        ("figure eight", PolyCurve::figure_eight(1.0, 400)),
        ("star", PolyCurve::star(Point2::origin(), 0.4, 1.0, 5)),
    ];
    let probe = Point2::new(0.05, 0.03);
    let mut out = Vec::new();
    for (name, curve) in &curves {
        let map = planar_regions(curve, 200)?;
        let b = map.area_bound();
        println!(
            "{name:<14} regions {}  sum |w| A = {:.4}  sum w A = {:+.4}  shoelace = {:+.4}",
            map.regions().len() - 1,
            b.unsigned,
            b.signed,
            curve.signed_area()
        );
        if let (Ok(a), Ok(b)) = (winding_crossings(probe, curve), winding_angle(probe, curve)) {
            println!("{:<14} winding at ({}, {}): rays {a}, angles {b}", "", probe.x, probe.y);
        }
        out.push(b);
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example().map(|_| ())
}
