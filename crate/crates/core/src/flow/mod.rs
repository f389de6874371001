//! A minimal ALE Euler solver with JST dissipation, run in the frequency
//! domain with five-stage pseudo-time marching. It exists to measure how
//! well a uniform flow survives on a deforming mesh.

mod scheme;
mod solver;
mod state;

pub use scheme::{ale_face_flux, convective_flux, jst_dissipation, JstParams};
pub use solver::{
    nlfd_unsteady_residual, run_freestream, FlowField, FreestreamConfig, FreestreamOutcome, MovingGeometry,
    RK_ALPHA, RK_BETA,
};
pub use state::{pressure, ConservativeState, StateVector};
