//! Driver for one motion case across a sweep of harmonic counts.

use std::time::Instant;

use crate::error::Result;
use crate::flow::{run_freestream, FreestreamConfig};
use crate::gcl::{
    aevi_increments, dvoldt_history, ifmv_avg, ifmv_nlfd, ifmv_trimap, ifmv_ts, lvi_increments, volume_history,
    DecomposedIncrements, IfmvField, Method,
};
use crate::hexmesh::{build_box_mesh, Direction, HexMesh};
use crate::metrics::{abs_err_ifmv_vs_reference, abs_err_sum_vs_dvoldt, fd_reference_errors, ErrorReport};
use crate::motion::{MotionCase, MotionTrajectory, PreparedMotion};

/// The 10×10×10 box of lengths 3.2 × 2.8 × 2.4 used by the study.
pub fn default_mesh() -> HexMesh {
    build_box_mesh(10, 10, 10, 3.2, 2.8, 2.4).expect("valid default mesh")
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyOptions {
    pub methods: Vec<Method>,
    /// Run the flow solver for every method when set.
    pub freestream: Option<FreestreamConfig>,
    /// Record wall-clock time per row.
    pub timing: bool,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions { methods: Method::ALL.to_vec(), freestream: None, timing: false }
    }
}

/// Everything computed at one harmonic count that methods share.
pub struct Snapshot {
    pub trajectory: MotionTrajectory,
    /// `cell * Nts + n`.
    pub volumes: Vec<f64>,
    pub reference: IfmvField,
    lvi: Option<DecomposedIncrements>,
    aevi: Option<DecomposedIncrements>,
}

impl Snapshot {
    pub fn field(&mut self, mesh: &HexMesh, method: Method) -> IfmvField {
        match method {
            Method::TriMap => self.reference.clone(),
            Method::Avg => ifmv_avg(mesh, &self.trajectory),
            Method::NlfdLvi | Method::TsLvi => {
                let d = self.lvi.get_or_insert_with(|| lvi_increments(mesh, &self.trajectory).decompose());
                if method == Method::NlfdLvi { ifmv_nlfd(d) } else { ifmv_ts(d) }
            }
            Method::NlfdAevi | Method::TsAevi => {
                let d = self.aevi.get_or_insert_with(|| aevi_increments(mesh, &self.trajectory).decompose());
                if method == Method::NlfdAevi { ifmv_nlfd(d) } else { ifmv_ts(d) }
            }
        }
    }

    pub fn increments(&mut self, mesh: &HexMesh, lvi: bool) -> &DecomposedIncrements {
        if lvi {
            self.lvi.get_or_insert_with(|| lvi_increments(mesh, &self.trajectory).decompose())
        } else {
            self.aevi.get_or_insert_with(|| aevi_increments(mesh, &self.trajectory).decompose())
        }
    }
}

/// A motion case bound to a mesh.
pub struct Study {
    mesh: HexMesh,
    motion: PreparedMotion,
}

impl Study {
    pub fn new(mesh: HexMesh, case: &MotionCase) -> Result<Self> {
        let motion = PreparedMotion::new(&mesh, case)?;
        Ok(Study { mesh, motion })
    }

    pub fn mesh(&self) -> &HexMesh {
        &self.mesh
    }

    pub fn case(&self) -> &MotionCase {
        self.motion.case()
    }

    pub fn motion(&self) -> &PreparedMotion {
        &self.motion
    }

    pub fn trajectory(&self, harmonics: usize) -> Result<MotionTrajectory> {
        self.motion.sample(&self.mesh, harmonics)
    }

    pub fn snapshot(&self, harmonics: usize) -> Result<Snapshot> {
        let trajectory = self.trajectory(harmonics)?;
        let volumes = volume_history(&self.mesh, &trajectory);
        let reference = ifmv_trimap(&self.mesh, &trajectory);
        Ok(Snapshot { trajectory, volumes, reference, lvi: None, aevi: None })
    }

    /// One report per requested method at harmonic count `harmonics`.
    pub fn evaluate(&self, harmonics: usize, opts: &StudyOptions) -> Result<Vec<ErrorReport>> {
        let start = Instant::now();
        let mut snap = self.snapshot(harmonics)?;
        let period = self.case().period;
        let nts = 2 * harmonics + 1;
        let exact = dvoldt_history(&self.mesh, &snap.trajectory);
        let (fd1, fd2) = fd_reference_errors(&snap.volumes, &exact, nts, period)?;
        let shared_ms = start.elapsed().as_secs_f64() * 1e3;
        let mut out = Vec::with_capacity(opts.methods.len());
        for &method in &opts.methods {
            let t0 = Instant::now();
            let field = snap.field(&self.mesh, method);
            let abs_err1 = abs_err_sum_vs_dvoldt(&field, &snap.volumes, period)?;
            let mut abs_err2 = [0.0; 3];
            for d in Direction::ALL {
                abs_err2[d.index()] = abs_err_ifmv_vs_reference(&field, &snap.reference, d)?;
            }
            let rel_err_freestream = match &opts.freestream {
                Some(cfg) => Some(run_freestream(&self.mesh, &snap.trajectory, Some(&field), cfg)?.rel_err),
                None => None,
            };
            out.push(ErrorReport {
                case: self.case().id(),
                method,
                harmonics,
                sample_count: nts,
                rel_err_freestream,
                abs_err1,
                abs_err2,
                fd1_ref: fd1,
                fd2_ref: fd2,
                wall_ms: opts.timing.then(|| shared_ms + t0.elapsed().as_secs_f64() * 1e3),
            });
        }
        Ok(out)
    }
}
