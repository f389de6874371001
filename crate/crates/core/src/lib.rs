//! Geometric conservation on deforming structured hexahedral meshes under
//! Fourier-collocation (NLFD) and Time-Spectral time discretisations.
//!
//! The crate computes integrated face mesh velocities (IFMV) with four
//! methods and compares them:
//!
//! * `NLFD-LVI`: Fourier differentiation of linear volumetric increments,
//! * `NLFD-AEVI`: Fourier differentiation of the periodic part of
//!   accumulated per-step sweep volumes, with the zeroth mode taken from the
//!   increment over one full period,
//! * `AVG`: mean vertex velocity projected on the face area vector,
//! * `TRI-MAP`: the closed-form flux of the trilinear mapping, used as the
//!   reference.
//!
//! The Time-Spectral variants (`TS-LVI`, `TS-AEVI`) replace the DFT round
//! trip with the dense skew-symmetric differentiation matrix.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod flow;
pub mod gcl;
pub mod hexmesh;
pub mod metrics;
pub mod motion;
pub mod rbf;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use experiment::{Study, StudyOptions};
pub use gcl::{DecomposedIncrements, IfmvField, IncrementMethod, IncrementSeries, Method};
pub use hexmesh::{build_box_mesh, hex_volume, CellGeometry, Direction, Face, HexMesh, Vec3};
pub use metrics::ErrorReport;
pub use motion::{CaseId, CaseKind, MotionCase, MotionTrajectory, PreparedMotion};
pub use rbf::RbfSystem;
pub use spectral::SpectralOperator;
