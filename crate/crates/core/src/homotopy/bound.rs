use std::f64::consts::PI;

use serde::Serialize;

use super::{sense_preserving_report, swept_volume, DiscreteHomotopy, HomotopyError, SenseReport, SweepQuality};
use crate::geom3d::{voxel_regions, TriangleMesh};

/// Relative slack added on top of the estimated discretization errors.
pub const BOUND_SLACK: f64 = 0.01;

/// Relative error budget of a lower-bound check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    /// Volume deficit of an icosphere with the same triangle count.
    pub mesh: f64,
    /// One voxel layer relative to the box side, `1 / resolution`.
    pub voxel: f64,
    pub slack: f64,
    /// `(mesh + voxel + slack) * |D|`.
    pub absolute: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub swept_volume: f64,
    /// Total degree `D` of the initial surface.
    pub total_degree: f64,
    pub vdeg: f64,
    /// `Vol - |D|`.
    pub margin: f64,
    /// `Vol - V_deg`.
    pub margin_vdeg: f64,
    /// `(Vol - |D|) / |D|`, or 0 when `D` vanishes.
    pub relative_gap: f64,
    pub tolerance: Tolerance,
    /// `Vol < |D| - tolerance`.
    pub violation: bool,
    pub sense: SenseReport,
    pub quality: SweepQuality,
    pub warnings: Vec<String>,
}

/// Relative volume deficit `1 - V / (4 pi / 3)` of the unit icosphere whose
/// triangle count is closest to `triangles`.
pub fn sphere_discretization_error(triangles: usize) -> f64 {
    let s = ((triangles.max(20) as f64 / 20.0).log(4.0).round() as u32).min(6);
    1.0 - TriangleMesh::unit_icosphere(s).signed_volume() / (4.0 * PI / 3.0)
}

/// Checks `Vol(H) >= |D(Σ_0)|` with `D` and `V_deg` measured on a voxel grid
/// of `resolution` cells per axis.
pub fn verify_lower_bound(h: &DiscreteHomotopy, resolution: usize) -> Result<LowerBoundReport, HomotopyError> {
    verify_lower_bound_with(h, resolution, BOUND_SLACK)
}

/// [`verify_lower_bound`] with a custom relative slack.
pub fn verify_lower_bound_with(
    h: &DiscreteHomotopy,
    resolution: usize,
    slack: f64,
) -> Result<LowerBoundReport, HomotopyError> {
    let map = voxel_regions(h.base(), resolution)?;
    let degree = map.total_degree();
    let sweep = swept_volume(h);
    let sense = sense_preserving_report(h);

    let d = degree.total.abs();
    let mesh = sphere_discretization_error(h.base().triangles().len());
    let voxel = 1.0 / resolution as f64;
    let tolerance = Tolerance {
        mesh,
        voxel,
        slack,
        absolute: (mesh + voxel + slack) * d,
    };

    let mut warnings = Vec::new();
    if map.unassigned_surface_voxels() > 0 {
        warnings.push(format!(
            "{} surface voxels could not be assigned to a region",
            map.unassigned_surface_voxels()
        ));
    }
    if let Some(r) = map.bounded().find(|r| !r.oracle_agrees()) {
        warnings.push(format!(
            "region {} has cable index {} but solid-angle winding {:.4}",
            r.id, r.index, r.winding
        ));
    }
    if sweep.quality.inverted_prisms > 0 {
        warnings.push(format!("{} prisms fold over within one time step", sweep.quality.inverted_prisms));
    }
    if sense.degenerate {
        warnings.push("no triangle moves normal to itself".into());
    }
    let violation = sweep.volume < d - tolerance.absolute;
    if violation {
        warnings.push(format!(
            "swept volume {:.6} is below |D| = {:.6} beyond the tolerance {:.6}",
            sweep.volume, d, tolerance.absolute
        ));
    }

    Ok(LowerBoundReport {
        swept_volume: sweep.volume,
        total_degree: degree.total,
        vdeg: degree.vdeg,
        margin: sweep.volume - d,
        margin_vdeg: sweep.volume - degree.vdeg,
        relative_gap: if d > 0.0 { (sweep.volume - d) / d } else { 0.0 },
        tolerance,
        violation,
        sense,
        quality: sweep.quality,
        warnings,
    })
}
