//! Shared fixtures for the criterion benches.

use gclkit::experiment::default_mesh;
use gclkit::motion::{sample_motion, CaseId, MotionCase, MotionTrajectory};
use gclkit::{HexMesh, Vec3};

/// A gently sheared hexahedron with a rotating velocity field.
pub fn sample_cell() -> ([Vec3; 8], [Vec3; 8]) {
    let r = [
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(1.1, 0.05, 0.0),
        Vec3::new(1.0, 0.9, 0.1),
        Vec3::new(-0.1, 1.0, 0.0),
        Vec3::new(0.05, 0.0, 1.2),
        Vec3::new(1.0, -0.1, 1.0),
        Vec3::new(1.2, 1.1, 0.9),
        Vec3::new(0.0, 0.95, 1.05),
    ];
    let w = Vec3::new(0.2, -0.4, 1.0);
    let u = r.map(|p| w.cross(&p) + 0.1 * p);
    (r, u)
}

/// Default mesh with a Case 2 trajectory at `harmonics`.
pub fn case2_trajectory(harmonics: usize) -> (HexMesh, MotionTrajectory) {
    let mesh = default_mesh();
    let tr = sample_motion(&mesh, &MotionCase::default_for(CaseId::Case2), harmonics).expect("admissible motion");
    (mesh, tr)
}
