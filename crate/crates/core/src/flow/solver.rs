use num_complex::Complex64;
use rayon::prelude::*;

use super::scheme::{ale_face_flux, jst_dissipation, JstParams};
use super::state::{pressure, pressure_unchecked, ConservativeState, StateVector};
use crate::error::{Error, Result};
use crate::gcl::IfmvField;
use crate::hexmesh::{quad_area_vector, face_vertices, hex_volume, Face, HexMesh, Vec3};
use crate::metrics::rel_err_freestream;
use crate::motion::MotionTrajectory;
use crate::spectral::SpectralOperator;

/// Stage coefficients of the five-stage scheme.
pub const RK_ALPHA: [f64; 5] = [0.25, 1.0 / 6.0, 0.375, 0.5, 1.0];
/// Dissipation blending weights at stages 1, 3 and 5 (zero means reuse).
pub const RK_BETA: [f64; 5] = [1.0, 0.0, 0.56, 0.0, 0.44];

#[derive(Debug, Clone, PartialEq)]
pub struct FreestreamConfig {
    pub w0: ConservativeState,
    pub cfl: f64,
    pub max_iterations: usize,
    /// Stop once the residual has dropped by this factor.
    pub convergence_drop: f64,
    /// Stop once the residual is below this multiple of the freestream
    /// flux scale (it cannot drop further than roundoff).
    pub absolute_floor: f64,
    pub jst: JstParams,
    /// Subtract the face mesh velocity in the spectral radius.
    pub mesh_velocity_in_radius: bool,
}

impl Default for FreestreamConfig {
    fn default() -> Self {
        FreestreamConfig {
            w0: ConservativeState::from_primitive(1.0, Vec3::new(0.5, 0.0, 0.0), 1.0, 1.4),
            cfl: 1.5,
            max_iterations: 20_000,
            convergence_drop: 1e-12,
            absolute_floor: 1e-14,
            jst: JstParams::default(),
            mesh_velocity_in_radius: true,
        }
    }
}

impl FreestreamConfig {
    fn check(&self) -> Result<()> {
        pressure(&self.w0.to_vector(), self.w0.gamma)?;
        if !(self.cfl > 0.0) {
            return Err(Error::InvalidParameter(format!("CFL must be positive, got {}", self.cfl)));
        }
        if !(self.w0.gamma > 1.0) {
            return Err(Error::InvalidParameter(format!("gamma must exceed 1, got {}", self.w0.gamma)));
        }
        Ok(())
    }
}

/// Cell volumes and face area vectors at every instant.
#[derive(Debug, Clone)]
pub struct MovingGeometry {
    pub harmonics: usize,
    pub n_cells: usize,
    /// `cell * Nts + n`.
    pub volumes: Vec<f64>,
    /// `(cell * 6 + face) * Nts + n`.
    pub areas: Vec<Vec3>,
}

impl MovingGeometry {
    pub fn new(mesh: &HexMesh, traj: &MotionTrajectory) -> Self {
        let nts = traj.sample_count();
        let per_cell: Vec<(Vec<f64>, Vec<Vec3>)> = (0..mesh.n_cells())
            .into_par_iter()
            .map(|c| {
                let mut vol = Vec::with_capacity(nts);
                let mut s = vec![Vec3::zeros(); 6 * nts];
                for n in 0..nts {
                    let r = mesh.cell_points(c, &traj.positions[n]);
                    vol.push(hex_volume(&r));
                    for f in Face::ALL {
                        s[f.index() * nts + n] = quad_area_vector(&face_vertices(&r, f));
                    }
                }
                (vol, s)
            })
            .collect();
        let (vols, areas): (Vec<_>, Vec<_>) = per_cell.into_iter().unzip();
        MovingGeometry {
            harmonics: traj.harmonics,
            n_cells: mesh.n_cells(),
            volumes: vols.concat(),
            areas: areas.concat(),
        }
    }

    pub fn sample_count(&self) -> usize {
        2 * self.harmonics + 1
    }
}

/// Cell states at every instant, indexed `cell * Nts + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowField {
    pub harmonics: usize,
    pub n_cells: usize,
    pub states: Vec<StateVector>,
}

impl FlowField {
    pub fn uniform(w0: &ConservativeState, n_cells: usize, harmonics: usize) -> Self {
        FlowField { harmonics, n_cells, states: vec![w0.to_vector(); n_cells * (2 * harmonics + 1)] }
    }
}

#[derive(Debug, Clone)]
pub struct FreestreamOutcome {
    pub rel_err: f64,
    pub iterations: usize,
    pub initial_residual: f64,
    pub final_residual: f64,
    pub converged: bool,
    pub field: FlowField,
}

/// Neighbour cells along the line through each face: behind the cell,
/// across the face, and one further.
type Stencil = [[Option<usize>; 3]; 6];

struct Solver<'a> {
    geo: &'a MovingGeometry,
    ifmv: Option<&'a IfmvField>,
    cfg: &'a FreestreamConfig,
    op: SpectralOperator,
    stencils: Vec<Stencil>,
    w0: StateVector,
    p0: f64,
    gamma: f64,
    nts: usize,
}

impl<'a> Solver<'a> {
    fn new(
        mesh: &HexMesh,
        geo: &'a MovingGeometry,
        ifmv: Option<&'a IfmvField>,
        period: f64,
        cfg: &'a FreestreamConfig,
    ) -> Result<Self> {
        cfg.check()?;
        if let Some(g) = ifmv {
            if g.n_cells != geo.n_cells || g.harmonics != geo.harmonics {
                return Err(Error::DimensionMismatch { expected: geo.volumes.len() * 6, actual: g.values.len() });
            }
        }
        let stencils = (0..mesh.n_cells())
            .map(|c| {
                Face::ALL.map(|f| [mesh.neighbor(c, f.opposite(), 1), mesh.neighbor(c, f, 1), mesh.neighbor(c, f, 2)])
            })
            .collect();
        let w0 = cfg.w0.to_vector();
        let gamma = cfg.w0.gamma;
        Ok(Solver {
            geo,
            ifmv,
            cfg,
            op: SpectralOperator::new(geo.harmonics, period)?,
            stencils,
            w0,
            p0: pressure_unchecked(&w0, gamma),
            gamma,
            nts: geo.sample_count(),
        })
    }

    #[inline]
    fn g(&self, c: usize, f: Face, n: usize) -> f64 {
        self.ifmv.map_or(0.0, |g| g.get(c, f, n))
    }

    /// Face spectral radius from the average of two states.
    #[inline]
    fn lambda(&self, a: &StateVector, b: &StateVector, s: &Vec3, g: f64) -> f64 {
        let m: StateVector = std::array::from_fn(|i| 0.5 * (a[i] + b[i]));
        let p = pressure_unchecked(&m, self.gamma).max(0.0);
        let c = (self.gamma * p / m[0]).sqrt();
        let vn = (m[1] * s.x + m[2] * s.y + m[3] * s.z) / m[0];
        let vn = if self.cfg.mesh_velocity_in_radius { vn - g } else { vn };
        vn.abs() + c * s.norm()
    }

    /// Local pseudo-time steps from the uniform state.
    fn time_steps(&self) -> Vec<f64> {
        let nts = self.nts;
        let w = 2.0 * std::f64::consts::PI * self.geo.harmonics as f64 / self.op.period();
        (0..self.geo.n_cells)
            .map(|c| {
                (0..nts)
                    .map(|n| {
                        let vol = self.geo.volumes[c * nts + n];
                        let sum: f64 = Face::ALL
                            .iter()
                            .map(|&f| {
                                let s = &self.geo.areas[(c * 6 + f.index()) * nts + n];
                                self.lambda(&self.w0, &self.w0, s, self.g(c, f, n))
                            })
                            .sum();
                        self.cfg.cfl * vol / (sum + vol * w)
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    fn flux_scale(&self) -> f64 {
        let smax = self.geo.areas.iter().fold(0.0f64, |m, s| m.max(s.norm()));
        let w0max = self.w0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.lambda(&self.w0, &self.w0, &Vec3::new(smax, 0.0, 0.0), 0.0) * w0max
    }

    /// Convective residual and (optionally) dissipation per cell and instant.
    fn spatial(&self, states: &[StateVector], pressures: &[f64], conv: &mut [StateVector], diss: Option<&mut [StateVector]>) {
        let nts = self.nts;
        let work = |c: usize, q: &mut [StateVector], d: Option<&mut [StateVector]>| {
            let st = &self.stencils[c];
            let mut d = d;
            for n in 0..nts {
                let at = |cell: Option<usize>| cell.map_or(&self.w0, |x| &states[x * nts + n]);
                let pat = |cell: Option<usize>| cell.map_or(self.p0, |x| pressures[x * nts + n]);
                let wc = &states[c * nts + n];
                let pc = pressures[c * nts + n];
                let mut rq = [0.0; 5];
                let mut rd = [0.0; 5];
                for f in Face::ALL {
                    let [cc, nb, nn] = st[f.index()];
                    let s = &self.geo.areas[(c * 6 + f.index()) * nts + n];
                    let g = self.g(c, f, n);
                    let wn = at(nb);
                    let flux = ale_face_flux(wc, wn, s, g, self.gamma);
                    for i in 0..5 {
                        rq[i] += flux[i];
                    }
                    if d.is_some() {
                        let lam = self.lambda(wc, wn, s, g);
                        let diss = jst_dissipation([at(cc), wc, wn, at(nn)], [pat(cc), pc, pat(nb), pat(nn)], lam, &self.cfg.jst);
                        for i in 0..5 {
                            rd[i] += diss[i];
                        }
                    }
                }
                q[n] = rq;
                if let Some(d) = d.as_deref_mut() {
                    d[n] = rd;
                }
            }
        };
        match diss {
            Some(d) => conv
                .par_chunks_mut(nts)
                .zip(d.par_chunks_mut(nts))
                .enumerate()
                .for_each(|(c, (q, d))| work(c, q, Some(d))),
            None => conv.par_chunks_mut(nts).enumerate().for_each(|(c, q)| work(c, q, None)),
        }
    }

    /// Fourier coefficients of `Ω w` per cell and component:
    /// `(cell * 5 + comp) * Nts + k`.
    fn to_spectral(&self, states: &[StateVector]) -> Vec<Complex64> {
        let nts = self.nts;
        let mut out = vec![Complex64::new(0.0, 0.0); self.geo.n_cells * 5 * nts];
        out.par_chunks_mut(5 * nts).enumerate().for_each(|(c, o)| {
            let mut buf = vec![0.0; nts];
            for comp in 0..5 {
                for n in 0..nts {
                    buf[n] = self.geo.volumes[c * nts + n] * states[c * nts + n][comp];
                }
                self.op.dft_into(&buf, &mut o[comp * nts..(comp + 1) * nts]);
            }
        });
        out
    }

    fn to_physical(&self, what: &[Complex64], states: &mut [StateVector], pressures: &mut [f64]) {
        let nts = self.nts;
        states
            .par_chunks_mut(nts)
            .zip(pressures.par_chunks_mut(nts))
            .enumerate()
            .for_each(|(c, (s, p))| {
                let mut buf = vec![0.0; nts];
                for comp in 0..5 {
                    self.op.idft_real_into(&what[(c * 5 + comp) * nts..(c * 5 + comp + 1) * nts], &mut buf);
                    for n in 0..nts {
                        s[n][comp] = buf[n] / self.geo.volumes[c * nts + n];
                    }
                }
                for n in 0..nts {
                    p[n] = pressure_unchecked(&s[n], self.gamma);
                }
            });
    }

    /// `R̂*_k = i 2πk/T ŵ_k + DFT(Q - D)_k`.
    fn unsteady(&self, what: &[Complex64], residual: &[StateVector]) -> Vec<Complex64> {
        let nts = self.nts;
        let ik = self.op.wavenumbers();
        let mut out = vec![Complex64::new(0.0, 0.0); what.len()];
        out.par_chunks_mut(5 * nts).enumerate().for_each(|(c, o)| {
            let mut buf = vec![0.0; nts];
            for comp in 0..5 {
                for n in 0..nts {
                    buf[n] = residual[c * nts + n][comp];
                }
                let slot = &mut o[comp * nts..(comp + 1) * nts];
                self.op.dft_into(&buf, slot);
                for k in 0..nts {
                    slot[k] += ik[k] * what[(c * 5 + comp) * nts + k];
                }
            }
        });
        out
    }
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0f64, |m, z| if z.norm().is_nan() { f64::NAN } else { m.max(z.norm()) })
}

/// Unsteady frequency-domain residual of `field`, indexed
/// `(cell * 5 + comp) * Nts + k` with `k` running from `-N` to `N`.
pub fn nlfd_unsteady_residual(
    mesh: &HexMesh,
    traj: &MotionTrajectory,
    field: &FlowField,
    ifmv: Option<&IfmvField>,
    cfg: &FreestreamConfig,
) -> Result<Vec<Complex64>> {
    let geo = MovingGeometry::new(mesh, traj);
    if field.states.len() != geo.volumes.len() {
        return Err(Error::DimensionMismatch { expected: geo.volumes.len(), actual: field.states.len() });
    }
    let solver = Solver::new(mesh, &geo, ifmv, traj.period, cfg)?;
    let pressures: Vec<f64> = field.states.iter().map(|w| pressure_unchecked(w, solver.gamma)).collect();
    let mut q = vec![[0.0; 5]; field.states.len()];
    let mut d = vec![[0.0; 5]; field.states.len()];
    solver.spatial(&field.states, &pressures, &mut q, Some(&mut d));
    for (qi, di) in q.iter_mut().zip(&d) {
        for i in 0..5 {
            qi[i] -= di[i];
        }
    }
    let what = solver.to_spectral(&field.states);
    Ok(solver.unsteady(&what, &q))
}

/// March a uniform initial field to its periodic steady state in pseudo
/// time and report how far it drifted from the freestream.
pub fn run_freestream(
    mesh: &HexMesh,
    traj: &MotionTrajectory,
    ifmv: Option<&IfmvField>,
    cfg: &FreestreamConfig,
) -> Result<FreestreamOutcome> {
    let geo = MovingGeometry::new(mesh, traj);
    let solver = Solver::new(mesh, &geo, ifmv, traj.period, cfg)?;
    let len = geo.volumes.len();
    let dt = solver.time_steps();
    let floor = cfg.absolute_floor * solver.flux_scale();
    let nts = solver.nts;

    let mut field = FlowField::uniform(&cfg.w0, geo.n_cells, geo.harmonics);
    let mut what = solver.to_spectral(&field.states);
    let mut pressures = vec![solver.p0; len];
    let mut q = vec![[0.0; 5]; len];
    let mut d = vec![[0.0; 5]; len];
    let mut d_blend = vec![[0.0; 5]; len];
    let mut r = vec![[0.0; 5]; len];

    let mut initial = f64::NAN;
    let mut last = f64::NAN;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iterations {
        let what0 = what.clone();
        for stage in 0..5 {
            solver.to_physical(&what, &mut field.states, &mut pressures);
            let beta = RK_BETA[stage];
            if beta > 0.0 {
                solver.spatial(&field.states, &pressures, &mut q, Some(&mut d));
                for (b, di) in d_blend.iter_mut().zip(&d) {
                    for i in 0..5 {
                        b[i] = beta * di[i] + (1.0 - beta) * b[i];
                    }
                }
            } else {
                solver.spatial(&field.states, &pressures, &mut q, None);
            }
            for ((ri, qi), bi) in r.iter_mut().zip(&q).zip(&d_blend) {
                for i in 0..5 {
                    ri[i] = qi[i] - bi[i];
                }
            }
            let rhat = solver.unsteady(&what, &r);
            if stage == 0 {
                last = max_norm(&rhat);
                if last.is_nan() {
                    return Err(Error::Diverged { iterations, rel_err: f64::NAN });
                }
                if iterations == 0 {
                    initial = last;
                }
                if last <= floor || last <= cfg.convergence_drop * initial {
                    converged = true;
                    break;
                }
            }
            let a = RK_ALPHA[stage];
            what.par_chunks_mut(5 * nts)
                .zip(what0.par_chunks(5 * nts))
                .zip(rhat.par_chunks(5 * nts))
                .enumerate()
                .for_each(|(c, ((w, w0), rh))| {
                    for i in 0..w.len() {
                        w[i] = w0[i] - a * dt[c] * rh[i];
                    }
                });
        }
        if converged {
            break;
        }
        iterations += 1;
        if iterations % 50 == 0 {
            solver.to_physical(&what, &mut field.states, &mut pressures);
            let e = rel_err_freestream(&field.states, &cfg.w0.to_vector());
            if !(e <= 1.0) {
                return Err(Error::Diverged { iterations, rel_err: e });
            }
        }
    }
    solver.to_physical(&what, &mut field.states, &mut pressures);
    let rel_err = rel_err_freestream(&field.states, &cfg.w0.to_vector());
    if !(rel_err <= 1.0) {
        return Err(Error::Diverged { iterations, rel_err });
    }
    Ok(FreestreamOutcome { rel_err, iterations, initial_residual: initial, final_residual: last, converged, field })
}
