//! Winding numbers of closed polygonal curves and the planar
//! winding-number-area bound.

mod curve;
mod regions;
mod winding;

use thiserror::Error;

pub use curve::PolyCurve;
pub use regions::{homotopy_area_bound, planar_regions, planar_regions_with, AreaBound, PixelGrid, PlanarRegion, PlanarRegionMap};
pub use winding::{
    winding_angle, winding_angle_value, winding_crossings, winding_crossings_along, RayQuery,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanarError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("degenerate ray hit on edge {edge}: {reason}")]
    DegenerateHit { edge: usize, reason: &'static str },
    #[error("winding count failed after {attempts} degenerate rays")]
    RetriesExhausted { attempts: u32 },
    #[error("point lies on the curve")]
    OnCurve,
    #[error("angle sum {value:.4} is too far from an integer; the point is too close to the curve")]
    NearCurve { value: f64 },
    #[error("resolution {0} is below the minimum of 8")]
    ResolutionTooLow(usize),
}
