//! Prescribed periodic mesh motions sampled at the spectral time instants.
//!
//! Cases 1 to 3 move vertices with closed-form expressions. Cases 4 and 5
//! prescribe displacements on the boundary vertices and spread them through
//! the volume with RBF interpolation. Two rigid calibration motions are
//! included for sanity checks.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hexmesh::{Face, HexMesh, Vec3};
use crate::rbf::build_system;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    RigidTranslation,
    RigidRotation,
}

impl CaseId {
    /// The five deformation cases of the convergence study.
    pub const STUDY: [CaseId; 5] = [
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case4,
        CaseId::Case5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Case1 => "case1",
            CaseId::Case2 => "case2",
            CaseId::Case3 => "case3",
            CaseId::Case4 => "case4",
            CaseId::Case5 => "case5",
            CaseId::RigidTranslation => "rigidTranslation",
            CaseId::RigidRotation => "rigidRotation",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        Ok(match key.as_str() {
            "1" | "case1" => CaseId::Case1,
            "2" | "case2" => CaseId::Case2,
            "3" | "case3" => CaseId::Case3,
            "4" | "case4" => CaseId::Case4,
            "5" | "case5" => CaseId::Case5,
            "rigidtranslation" | "translation" => CaseId::RigidTranslation,
            "rigidrotation" | "rotation" => CaseId::RigidRotation,
            _ => return Err(Error::UnknownCase(s.to_string())),
        })
    }
}

/// Motion family together with its amplitude parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum CaseKind {
    /// Single-harmonic sine bump, amplitude per axis.
    Case1 { amplitude: [f64; 3] },
    /// Shear by angle `α = α0 sin 2πt/T` in the x-y plane.
    Case2 { alpha0: f64 },
    /// Interior vertices travel on circles of radius `R`.
    Case3 { radius: f64 },
    /// Random boundary amplitudes spread by RBF.
    Case4 { amplitude: f64, seed: u64, support_radius: Option<f64> },
    /// Pitching about `x_p = pivot_fraction · Lx`, spread by RBF.
    Case5 { alpha0: f64, pivot_fraction: f64, support_radius: Option<f64> },
    /// Every vertex follows `r0 + a sin 2πt/T`.
    RigidTranslation { amplitude: [f64; 3] },
    /// Rotation about the vertical axis through the box centre.
    RigidRotation { alpha0: f64 },
}

impl CaseKind {
    pub fn default_for(id: CaseId) -> CaseKind {
        match id {
            CaseId::Case1 => CaseKind::Case1 { amplitude: [0.15; 3] },
            CaseId::Case2 => CaseKind::Case2 { alpha0: 0.1 },
            CaseId::Case3 => CaseKind::Case3 { radius: 0.05 },
            CaseId::Case4 => CaseKind::Case4 { amplitude: 0.05, seed: 42, support_radius: None },
            CaseId::Case5 => CaseKind::Case5 { alpha0: 0.05, pivot_fraction: 0.621, support_radius: None },
            CaseId::RigidTranslation => CaseKind::RigidTranslation { amplitude: [0.1, 0.05, -0.02] },
            CaseId::RigidRotation => CaseKind::RigidRotation { alpha0: 0.2 },
        }
    }

    pub fn id(&self) -> CaseId {
        match self {
            CaseKind::Case1 { .. } => CaseId::Case1,
            CaseKind::Case2 { .. } => CaseId::Case2,
            CaseKind::Case3 { .. } => CaseId::Case3,
            CaseKind::Case4 { .. } => CaseId::Case4,
            CaseKind::Case5 { .. } => CaseId::Case5,
            CaseKind::RigidTranslation { .. } => CaseId::RigidTranslation,
            CaseKind::RigidRotation { .. } => CaseId::RigidRotation,
        }
    }

    /// Parameter list as `(name, value)` pairs, for output metadata.
    pub fn describe(&self) -> Vec<(&'static str, String)> {
        let v3 = |a: &[f64; 3]| format!("{},{},{}", a[0], a[1], a[2]);
        let sr = |s: &Option<f64>| s.map_or("auto".to_string(), |r| r.to_string());
        match self {
            CaseKind::Case1 { amplitude } => vec![("amplitude", v3(amplitude))],
            CaseKind::Case2 { alpha0 } => vec![("alpha0", alpha0.to_string())],
            CaseKind::Case3 { radius } => vec![("radius", radius.to_string())],
            CaseKind::Case4 { amplitude, seed, support_radius } => vec![
                ("amplitude", amplitude.to_string()),
                ("seed", seed.to_string()),
                ("support_radius", sr(support_radius)),
            ],
            CaseKind::Case5 { alpha0, pivot_fraction, support_radius } => vec![
                ("alpha0", alpha0.to_string()),
                ("pivot_fraction", pivot_fraction.to_string()),
                ("support_radius", sr(support_radius)),
            ],
            CaseKind::RigidTranslation { amplitude } => vec![("amplitude", v3(amplitude))],
            CaseKind::RigidRotation { alpha0 } => vec![("alpha0", alpha0.to_string())],
        }
    }

    fn check(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
            }
        };
        match self {
            CaseKind::Case1 { amplitude } | CaseKind::RigidTranslation { amplitude } => {
                amplitude.iter().try_for_each(|&a| finite("amplitude", a))
            }
            CaseKind::Case2 { alpha0 } | CaseKind::RigidRotation { alpha0 } => finite("alpha0", *alpha0),
            CaseKind::Case3 { radius } => finite("radius", *radius),
            CaseKind::Case4 { amplitude, support_radius, .. } => {
                finite("amplitude", *amplitude)?;
                check_radius(*support_radius)
            }
            CaseKind::Case5 { alpha0, pivot_fraction, support_radius } => {
                finite("alpha0", *alpha0)?;
                finite("pivot_fraction", *pivot_fraction)?;
                check_radius(*support_radius)
            }
        }
    }
}

fn check_radius(r: Option<f64>) -> Result<()> {
    match r {
        Some(r) if !(r > 0.0 && r.is_finite()) => Err(Error::InvalidSupportRadius(r)),
        _ => Ok(()),
    }
}

/// A motion family with its period.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionCase {
    pub kind: CaseKind,
    pub period: f64,
}

impl MotionCase {
    pub fn new(kind: CaseKind, period: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParameter(format!("period must be positive, got {period}")));
        }
        kind.check()?;
        Ok(MotionCase { kind, period })
    }

    /// Default parameters with unit period.
    pub fn default_for(id: CaseId) -> Self {
        MotionCase { kind: CaseKind::default_for(id), period: 1.0 }
    }

    pub fn id(&self) -> CaseId {
        self.kind.id()
    }
}

/// Vertex positions and velocities at `t_0..t_{2N}` plus the closing
/// instant `t_{2N+1} = T`, which repeats the first sample.
#[derive(Debug, Clone)]
pub struct MotionTrajectory {
    pub harmonics: usize,
    pub period: f64,
    pub instants: Vec<f64>,
    pub positions: Vec<Vec<Vec3>>,
    pub velocities: Vec<Vec<Vec3>>,
}

impl MotionTrajectory {
    pub fn sample_count(&self) -> usize {
        2 * self.harmonics + 1
    }
}

#[derive(Debug, Clone)]
enum Field {
    Direct,
    /// Displacement `shape · sin θ`.
    Modal(Vec<Vec3>),
    /// Displacement `(cos α - 1) · a + sin α · b`.
    Pitch { a: Vec<Vec3>, b: Vec<Vec3> },
}

/// A motion bound to a mesh, with any RBF interpolation done once.
#[derive(Debug, Clone)]
pub struct PreparedMotion {
    case: MotionCase,
    base: Vec<Vec3>,
    moving: Vec<bool>,
    centre: Vec3,
    field: Field,
}

impl PreparedMotion {
    pub fn new(mesh: &HexMesh, case: &MotionCase) -> Result<Self> {
        case.kind.check()?;
        let base = mesh.vertices.clone();
        let [lx, ly, lz] = mesh.lengths;
        let centre = Vec3::new(lx / 2.0, ly / 2.0, lz / 2.0);
        let moving = match case.kind {
            CaseKind::Case3 { .. } => (0..mesh.n_vertices()).map(|v| !mesh.is_boundary_vertex(v)).collect(),
            _ => vec![true; mesh.n_vertices()],
        };
        let default_radius = 2.0 * lx.max(ly).max(lz);
        let field = match &case.kind {
            CaseKind::Case4 { amplitude, seed, support_radius } => {
                let ids = mesh.boundary_vertices();
                let pts: Vec<Vec3> = ids.iter().map(|&v| base[v]).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let a = amplitude.abs();
                let shape: Vec<Vec3> = pts
                    .iter()
                    .map(|p| {
                        let mut draw = || if a > 0.0 { rng.random_range(-a..=a) } else { 0.0 };
                        let (rx, ry, rz) = (draw(), draw(), draw());
                        let (sx, sy, sz) = (
                            (2.0 * PI * p.x).sin(),
                            (2.0 * PI * p.y).sin(),
                            (2.0 * PI * p.z).sin(),
                        );
                        Vec3::new(rx * sy * sz, ry * sx * sz, rz * sy * sz)
                    })
                    .collect();
                let sys = build_system(&pts, &base, support_radius.unwrap_or(default_radius))?;
                Field::Modal(sys.interpolate_vec3(&shape)?)
            }
            CaseKind::Case5 { pivot_fraction, support_radius, .. } => {
                let ids = mesh.boundary_vertices();
                let pts: Vec<Vec3> = ids.iter().map(|&v| base[v]).collect();
                let xp = pivot_fraction * lx;
                let a: Vec<Vec3> = pts.iter().map(|p| Vec3::new(p.x - xp, p.y, 0.0)).collect();
                let b: Vec<Vec3> = pts.iter().map(|p| Vec3::new(p.y, -(p.x - xp), 0.0)).collect();
                let sys = build_system(&pts, &base, support_radius.unwrap_or(default_radius))?;
                Field::Pitch { a: sys.interpolate_vec3(&a)?, b: sys.interpolate_vec3(&b)? }
            }
            _ => Field::Direct,
        };
        Ok(PreparedMotion { case: case.clone(), base, moving, centre, field })
    }

    pub fn case(&self) -> &MotionCase {
        &self.case
    }

    /// Position and velocity of vertex `v` at time `t`.
    pub fn position_velocity(&self, v: usize, t: f64) -> (Vec3, Vec3) {
        let r0 = self.base[v];
        if !self.moving[v] {
            return (r0, Vec3::zeros());
        }
        let w = 2.0 * PI / self.case.period;
        let th = w * t;
        let (s, c) = th.sin_cos();
        match (&self.case.kind, &self.field) {
            (CaseKind::Case1 { amplitude }, _) => {
                let [lx, ly, lz] = self.extent();
                let bump = (PI * r0.x / lx).sin() * (PI * r0.y / ly).sin() * (PI * r0.z / lz).sin();
                let a = Vec3::from(*amplitude) * bump;
                (r0 + a * s, a * (w * c))
            }
            (CaseKind::Case2 { alpha0 }, _) => {
                let al = alpha0 * s;
                let ad = alpha0 * w * c;
                let (sa, ca) = al.sin_cos();
                (
                    Vec3::new(r0.x + r0.y * sa, r0.y * ca, r0.z),
                    Vec3::new(r0.y * ca * ad, -r0.y * sa * ad, 0.0),
                )
            }
            (CaseKind::Case3 { radius }, _) => (
                Vec3::new(r0.x + radius * (1.0 - c), r0.y + radius * s, r0.z),
                Vec3::new(radius * w * s, radius * w * c, 0.0),
            ),
            (CaseKind::Case4 { .. }, Field::Modal(shape)) => (r0 + shape[v] * s, shape[v] * (w * c)),
            (CaseKind::Case5 { alpha0, .. }, Field::Pitch { a, b }) => {
                let al = alpha0 * c;
                let ad = -alpha0 * w * s;
                let (sa, ca) = al.sin_cos();
                (
                    r0 + a[v] * (ca - 1.0) + b[v] * sa,
                    (-a[v] * sa + b[v] * ca) * ad,
                )
            }
            (CaseKind::RigidTranslation { amplitude }, _) => {
                let a = Vec3::from(*amplitude);
                (r0 + a * s, a * (w * c))
            }
            (CaseKind::RigidRotation { alpha0 }, _) => {
                let al = alpha0 * s;
                let ad = alpha0 * w * c;
                let (sa, ca) = al.sin_cos();
                let d = r0 - self.centre;
                let rot = Vec3::new(d.x * ca - d.y * sa, d.x * sa + d.y * ca, d.z);
                let vel = Vec3::new(-d.x * sa - d.y * ca, d.x * ca - d.y * sa, 0.0) * ad;
                (self.centre + rot, vel)
            }
            _ => unreachable!("field is built to match the case"),
        }
    }

    fn extent(&self) -> [f64; 3] {
        [2.0 * self.centre.x, 2.0 * self.centre.y, 2.0 * self.centre.z]
    }

    /// All vertex positions and velocities at time `t`.
    pub fn state_at(&self, t: f64) -> (Vec<Vec3>, Vec<Vec3>) {
        (0..self.base.len())
            .into_par_iter()
            .map(|v| self.position_velocity(v, t))
            .unzip()
    }

    /// Sample at the `2N + 1` instants and close the period; aborts if any
    /// sampled configuration holds a degenerate cell.
    pub fn sample(&self, mesh: &HexMesh, harmonics: usize) -> Result<MotionTrajectory> {
        if harmonics == 0 {
            return Err(Error::InvalidParameter("harmonic count must be at least 1".into()));
        }
        if mesh.n_vertices() != self.base.len() {
            return Err(Error::DimensionMismatch { expected: self.base.len(), actual: mesh.n_vertices() });
        }
        let nts = 2 * harmonics + 1;
        let period = self.case.period;
        let mut instants: Vec<f64> = (0..nts).map(|n| n as f64 * period / nts as f64).collect();
        let mut positions = Vec::with_capacity(nts + 1);
        let mut velocities = Vec::with_capacity(nts + 1);
        for (n, &t) in instants.iter().enumerate() {
            let (p, v) = self.state_at(t);
            let bad = mesh.detect_degenerate(&p);
            if !bad.is_empty() {
                return Err(Error::Degenerate { instant: n, cells: bad });
            }
            positions.push(p);
            velocities.push(v);
        }
        instants.push(period);
        positions.push(positions[0].clone());
        velocities.push(velocities[0].clone());
        Ok(MotionTrajectory { harmonics, period, instants, positions, velocities })
    }
}

/// Prepare and sample in one call.
pub fn sample_motion(mesh: &HexMesh, case: &MotionCase, harmonics: usize) -> Result<MotionTrajectory> {
    PreparedMotion::new(mesh, case)?.sample(mesh, harmonics)
}

/// Exact volume swept by a face whose lower edge is fixed while its upper
/// edge, `y30` above, travels the circular path of Case 3 through angle
/// `α = 2πt/T`.
pub fn analytic_increment_case3(radius: f64, y30: f64, depth: f64, t: f64, period: f64) -> f64 {
    let a = 2.0 * PI * t / period;
    depth * (0.5 * radius * radius * (a - a.sin()) + 0.5 * radius * y30 * (1.0 - a.cos()))
}

/// Time derivative of [`analytic_increment_case3`].
pub fn analytic_increment_rate_case3(radius: f64, y30: f64, depth: f64, t: f64, period: f64) -> f64 {
    let w = 2.0 * PI / period;
    let a = w * t;
    depth * w * (0.5 * radius * radius * (1.0 - a.cos()) + 0.5 * radius * y30 * a.sin())
}

/// A cell in the bottom `y` layer whose `2376` face has a fixed lower edge
/// and a moving upper edge under Case 3. Returns the cell and that face.
pub fn case3_probe_cell(mesh: &HexMesh) -> Option<(usize, Face)> {
    if mesh.nx < 2 || mesh.ny < 2 || mesh.nz < 3 {
        return None;
    }
    Some((mesh.cell_index(mesh.nx / 2 - 1, 0, mesh.nz / 2), Face::XiMax))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexmesh::build_box_mesh;

    fn paper_mesh() -> HexMesh {
        build_box_mesh(10, 10, 10, 3.2, 2.8, 2.4).unwrap()
    }

    #[test]
    fn parse_case_ids() {
        assert_eq!("3".parse::<CaseId>().unwrap(), CaseId::Case3);
        assert_eq!("case5".parse::<CaseId>().unwrap(), CaseId::Case5);
        assert_eq!("rigid-rotation".parse::<CaseId>().unwrap(), CaseId::RigidRotation);
        assert!(matches!("case9".parse::<CaseId>(), Err(Error::UnknownCase(_))));
    }

    #[test]
    fn case3_quarter_period() {
        let m = paper_mesh();
        let p = PreparedMotion::new(&m, &MotionCase::default_for(CaseId::Case3)).unwrap();
        let v = m.n_vertices() / 2;
        assert!(!m.is_boundary_vertex(v));
        let (r, u) = p.position_velocity(v, 0.25);
        let r0 = m.vertices[v];
        assert!((r - (r0 + Vec3::new(0.05, 0.05, 0.0))).norm() < 1e-15);
        assert!((u - Vec3::new(2.0 * PI * 0.05, 0.0, 0.0)).norm() < 1e-15);
        // boundary vertices stay put
        assert_eq!(p.position_velocity(0, 0.25), (m.vertices[0], Vec3::zeros()));
    }

    #[test]
    fn case1_initial_velocity() {
        let m = paper_mesh();
        let p = PreparedMotion::new(&m, &MotionCase::default_for(CaseId::Case1)).unwrap();
        let v = 3 + 11 * (4 + 11 * 6);
        let r0 = m.vertices[v];
        let (r, u) = p.position_velocity(v, 0.0);
        assert_eq!(r, r0);
        let bump = (PI * r0.x / 3.2).sin() * (PI * r0.y / 2.8).sin() * (PI * r0.z / 2.4).sin();
        assert!((u.x - 2.0 * PI * 0.15 * bump).abs() < 1e-14);
    }

    #[test]
    fn rigid_translation_has_uniform_velocity_and_fixed_volumes() {
        let m = build_box_mesh(3, 3, 3, 1.0, 1.0, 1.0).unwrap();
        let tr = sample_motion(&m, &MotionCase::default_for(CaseId::RigidTranslation), 2).unwrap();
        for n in 0..tr.instants.len() {
            let v0 = tr.velocities[n][0];
            assert!(tr.velocities[n].iter().all(|v| *v == v0));
            for vol in m.cell_volumes(&tr.positions[n]) {
                assert!((vol - 1.0 / 27.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn closing_sample_repeats_first() {
        let m = build_box_mesh(4, 4, 4, 1.0, 1.0, 1.0).unwrap();
        for id in CaseId::STUDY {
            let tr = sample_motion(&m, &MotionCase::default_for(id), 3).unwrap();
            assert_eq!(tr.instants.len(), 8);
            assert_eq!(tr.positions[7], tr.positions[0]);
            assert_eq!(*tr.instants.last().unwrap(), 1.0);
        }
    }

    #[test]
    fn velocities_match_finite_differences() {
        let m = build_box_mesh(5, 4, 3, 3.2, 2.8, 2.4).unwrap();
        let mut ids = CaseId::STUDY.to_vec();
        ids.extend([CaseId::RigidTranslation, CaseId::RigidRotation]);
        for id in ids {
            let case = MotionCase::new(CaseKind::default_for(id), 1.3).unwrap();
            let p = PreparedMotion::new(&m, &case).unwrap();
            let h = 1e-6 * case.period;
            for &t in &[0.0, 0.21, 0.77] {
                let (_, u) = p.state_at(t);
                let (a, _) = p.state_at(t + h);
                let (b, _) = p.state_at(t - h);
                let scale = u.iter().fold(1e-3f64, |s, v| s.max(v.amax()));
                for i in 0..u.len() {
                    let fd = (a[i] - b[i]) / (2.0 * h);
                    assert!((fd - u[i]).amax() <= 1e-6 * scale, "{id} at t={t}");
                }
            }
        }
    }

    #[test]
    fn defaults_are_admissible_on_paper_mesh() {
        let m = paper_mesh();
        for id in CaseId::STUDY {
            assert!(sample_motion(&m, &MotionCase::default_for(id), 4).is_ok(), "{id}");
        }
    }

    #[test]
    fn oversized_motion_is_rejected() {
        let m = build_box_mesh(4, 4, 4, 1.0, 1.0, 1.0).unwrap();
        let case = MotionCase::new(CaseKind::Case1 { amplitude: [2.0, 0.0, 0.0] }, 1.0).unwrap();
        assert!(matches!(sample_motion(&m, &case, 2), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn case3_increment_values() {
        let (r, y, d) = (0.05, 0.28, 0.24);
        assert_eq!(analytic_increment_case3(r, y, d, 0.0, 1.0), 0.0);
        assert!((analytic_increment_case3(r, y, d, 1.0, 1.0) - d * PI * r * r).abs() < 1e-15);
        assert!((analytic_increment_case3(r, 0.0, d, 0.5, 1.0) - d * PI * r * r / 2.0).abs() < 1e-15);
        for &t in &[0.1, 0.4, 0.9] {
            let h = 1e-5;
            let fd = (analytic_increment_case3(r, y, d, t + h, 1.0) - analytic_increment_case3(r, y, d, t - h, 1.0))
                / (2.0 * h);
            assert!((fd - analytic_increment_rate_case3(r, y, d, t, 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn case5_velocity_is_derivative_of_interpolated_displacement() {
        let m = build_box_mesh(4, 4, 4, 3.2, 2.8, 2.4).unwrap();
        let p = PreparedMotion::new(&m, &MotionCase::default_for(CaseId::Case5)).unwrap();
        let h = 1e-5;
        for &t in &[0.1, 0.35] {
            let (_, u) = p.state_at(t);
            let (a, _) = p.state_at(t + h);
            let (b, _) = p.state_at(t - h);
            for i in 0..u.len() {
                // fourth-order difference to reach 1e-10
                let (a2, _) = p.position_velocity(i, t + 2.0 * h);
                let (b2, _) = p.position_velocity(i, t - 2.0 * h);
                let fd = (8.0 * (a[i] - b[i]) - (a2 - b2)) / (12.0 * h);
                assert!((fd - u[i]).amax() < 1e-10);
            }
        }
    }
}
