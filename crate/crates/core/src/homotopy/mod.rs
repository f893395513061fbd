//! Discrete null homotopies of closed surfaces: swept volume by the area
//! formula, index traces of fixed points, and the check that the swept
//! volume is at least the absolute total degree of the initial surface.

mod bound;
mod path;
mod sweep;
mod trace;

use thiserror::Error;

use crate::geom3d::GeomError;

pub use bound::{sphere_discretization_error, verify_lower_bound, verify_lower_bound_with, LowerBoundReport, Tolerance, BOUND_SLACK};
pub use path::{DiscreteHomotopy, COLLAPSE_TOLERANCE};
pub use sweep::{sense_preserving_report, swept_volume, sweep_multiplicity, SenseReport, SweepQuality, SweptVolume};
pub use trace::{index_trace, index_trace_with, IndexTrace, TraceOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomotopyError {
    #[error("invalid homotopy: {0}")]
    InvalidHomotopy(String),
    #[error("final frame is not collapsed to a point (spread {spread:.3e})")]
    NotNull { spread: f64 },
    #[error("the point is the terminal point of the homotopy")]
    AtTerminalPoint,
    #[error("the point lies on the initial surface (winding {value:.4})")]
    OnSurface { value: f64 },
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("{0}")]
    Io(String),
}
