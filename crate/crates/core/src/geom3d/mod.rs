//! Geometric kernel for closed oriented triangle meshes.

mod cable_word;
mod crossing;
mod index;
pub mod io;
mod mesh;
mod regions;
mod winding;

use thiserror::Error;

pub use cable_word::build_cable_word;
pub use crossing::{cable_crossings, Cable, CrossingEvent, BARYCENTRIC_TOLERANCE, TANGENT_TOLERANCE};
pub use index::{
    cable_index, cable_index_seeded, default_exterior, jittered_cable, signed_crossing_count,
    IndexQuery,
};
pub use mesh::{validate_mesh, Aabb, MeshReport, TriangleMesh};
pub use regions::{
    default_bounds, total_degree, voxel_regions, voxel_regions_in, Grid, RegionInfo, RegionMap, RegionRecord,
    TotalDegree, VoxelLabel, SURFACE_LABEL,
};
pub use winding::{solid_angle_winding, triangle_solid_angle, ROUNDING_GUARD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid cable: {0}")]
    InvalidCable(String),
    #[error("degenerate crossing on cable segment {segment} with triangle {triangle}: {reason}")]
    DegenerateCrossing {
        segment: usize,
        triangle: usize,
        reason: &'static str,
    },
    #[error("cable index failed after {attempts} degenerate cables")]
    RetriesExhausted { attempts: u32 },
    #[error("exterior point lies inside the mesh bounding box")]
    ExteriorInsideBounds,
    #[error("resolution {0} is below the minimum of 8")]
    ResolutionTooLow(usize),
    #[error("every sample on cable segment {segment} lands in a surface-adjacent voxel")]
    SurfaceSample { segment: usize },
    #[error("crossing {crossing} joins region {region} to itself; refine the voxel resolution")]
    UnresolvedTransition {
        crossing: usize,
        region: crate::word::RegionId,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for GeomError {
    fn from(e: std::io::Error) -> Self {
        GeomError::Io(e.to_string())
    }
}
