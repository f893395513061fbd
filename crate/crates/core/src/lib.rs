//! Cable indices and degree-weighted volumes of closed oriented surfaces.
//!
//! The crate is organised around four cores:
//!
//! * [`word`]: symbolic cable-words and their linear-time reduction.
//! * [`geom3d`]: triangle meshes, signed cable crossings, the solid-angle
//!   winding number, voxel region decomposition and total degree.
//! * [`planar`]: the same machinery for closed polygonal curves in the plane.
//! * [`homotopy`]: discrete null homotopies, their swept volume and the
//!   check `Vol(H) >= |D(Σ)|`.
//!
//! [`cli`] wires them into the `cabledeg` binary.

pub mod cli;
pub mod geom3d;
pub mod homotopy;
mod lattice;
pub mod planar;
pub mod word;

pub type Point3 = nalgebra::Point3<f64>;
pub type Vec3 = nalgebra::Vector3<f64>;
pub type Point2 = nalgebra::Point2<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;
