//! Integrated face mesh velocities and the geometric conservation law.

mod ifmv;
mod increments;
pub mod trimap;

pub use ifmv::{
    compute_ifmv, dvoldt_history, ifmv_avg, ifmv_nlfd, ifmv_trimap, ifmv_ts, volume_history, IfmvField, Method,
};
pub use increments::{
    aevi_increments, extract_linear_and_periodic, lvi_increments, sweep_volume, DecomposedIncrements,
    IncrementMethod, IncrementSeries,
};
pub use trimap::{dvoldt_trimap, face_ifmv, face_ifmv_terms, ifmv_cell};
