use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use super::increments::{aevi_increments, lvi_increments, DecomposedIncrements, IncrementMethod};
use super::trimap::{dvoldt_trimap, ifmv_cell};
use crate::error::{Error, Result};
use crate::hexmesh::{face_area_vectors, hex_volume, Direction, Face, HexMesh, Vec3};
use crate::motion::MotionTrajectory;
use crate::spectral::SpectralOperator;

/// How the face mesh velocities are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    NlfdLvi,
    NlfdAevi,
    Avg,
    TriMap,
    TsLvi,
    TsAevi,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::NlfdLvi,
        Method::NlfdAevi,
        Method::Avg,
        Method::TriMap,
        Method::TsLvi,
        Method::TsAevi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::NlfdLvi => "NLFD-LVI",
            Method::NlfdAevi => "NLFD-AEVI",
            Method::Avg => "AVG",
            Method::TriMap => "TRI-MAP",
            Method::TsLvi => "TS-LVI",
            Method::TsAevi => "TS-AEVI",
        }
    }

    /// Increment flavour feeding this method, if any.
    pub fn increments(self) -> Option<IncrementMethod> {
        match self {
            Method::NlfdLvi | Method::TsLvi => Some(IncrementMethod::Lvi),
            Method::NlfdAevi | Method::TsAevi => Some(IncrementMethod::Aevi),
            Method::Avg | Method::TriMap => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "lvi" | "nlfd-lvi" => Method::NlfdLvi,
            "aevi" | "nlfd-aevi" => Method::NlfdAevi,
            "avg" => Method::Avg,
            "trimap" | "tri-map" => Method::TriMap,
            "ts-lvi" => Method::TsLvi,
            "ts-aevi" => Method::TsAevi,
            _ => return Err(Error::UnknownMethod(s.to_string())),
        })
    }
}

/// `G_m(t_n)` for every face of every cell at the `Nts` instants.
#[derive(Debug, Clone)]
pub struct IfmvField {
    pub method: Method,
    pub harmonics: usize,
    pub period: f64,
    pub n_cells: usize,
    /// Indexed `(cell * 6 + face) * Nts + n`.
    pub values: Vec<f64>,
}

impl IfmvField {
    pub fn zeros(method: Method, harmonics: usize, period: f64, n_cells: usize) -> Self {
        let nts = 2 * harmonics + 1;
        IfmvField { method, harmonics, period, n_cells, values: vec![0.0; n_cells * 6 * nts] }
    }

    pub fn sample_count(&self) -> usize {
        2 * self.harmonics + 1
    }

    pub fn face(&self, cell: usize, face: Face) -> &[f64] {
        let nts = self.sample_count();
        let o = (cell * 6 + face.index()) * nts;
        &self.values[o..o + nts]
    }

    #[inline]
    pub fn get(&self, cell: usize, face: Face, n: usize) -> f64 {
        self.values[(cell * 6 + face.index()) * self.sample_count() + n]
    }

    /// Sum over the six faces of `cell` at each instant.
    pub fn cell_sum(&self, cell: usize) -> Vec<f64> {
        let nts = self.sample_count();
        (0..nts)
            .map(|n| Face::ALL.iter().map(|&f| self.get(cell, f, n)).sum())
            .collect()
    }

    /// Sum over the two faces of one family at each instant.
    pub fn family_sum(&self, cell: usize, dir: Direction) -> Vec<f64> {
        let nts = self.sample_count();
        (0..nts)
            .map(|n| {
                Face::ALL
                    .iter()
                    .filter(|f| f.direction() == dir)
                    .map(|&f| self.get(cell, f, n))
                    .sum()
            })
            .collect()
    }

    /// Largest face-wise difference to `other`, optionally restricted to
    /// one face family.
    pub fn max_abs_diff(&self, other: &IfmvField, dir: Option<Direction>) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::DimensionMismatch { expected: self.values.len(), actual: other.values.len() });
        }
        let nts = self.sample_count();
        let mut worst: f64 = 0.0;
        for (i, (a, b)) in self.values.chunks_exact(nts).zip(other.values.chunks_exact(nts)).enumerate() {
            if dir.is_some_and(|d| Face::from_index(i % 6).direction() != d) {
                continue;
            }
            for (x, y) in a.iter().zip(b) {
                worst = worst.max((x - y).abs());
            }
        }
        Ok(worst)
    }
}

fn from_increments(dec: &DecomposedIncrements, method: Method, per_face: impl Fn(&[f64], f64, &mut [f64]) + Sync) -> IfmvField {
    let s = &dec.series;
    let nts = s.sample_count();
    let mut values = vec![0.0; dec.slope.len() * nts];
    values
        .par_chunks_mut(nts)
        .zip(dec.periodic.par_chunks(nts))
        .zip(dec.slope.par_iter())
        .for_each(|((out, p), &g0)| per_face(p, g0, out));
    IfmvField { method, harmonics: s.harmonics, period: s.period, n_cells: s.n_cells, values }
}

/// Fourier differentiation of the periodic part, with the mean taken from
/// the linear drift.
pub fn ifmv_nlfd(dec: &DecomposedIncrements) -> IfmvField {
    let s = &dec.series;
    let op = SpectralOperator::new(s.harmonics, s.period).expect("increment series has N >= 1 and T > 0");
    let ik = op.wavenumbers();
    let n = s.harmonics;
    let method = match s.method {
        IncrementMethod::Lvi => Method::NlfdLvi,
        IncrementMethod::Aevi => Method::NlfdAevi,
    };
    from_increments(dec, method, |p, g0, out| {
        let mut c = vec![Complex64::new(0.0, 0.0); p.len()];
        op.dft_into(p, &mut c);
        for (ci, k) in c.iter_mut().zip(&ik) {
            *ci *= k;
        }
        c[n] = Complex64::new(g0, 0.0);
        op.idft_real_into(&c, out);
    })
}

/// Time-Spectral matrix applied to the periodic part plus the drift.
pub fn ifmv_ts(dec: &DecomposedIncrements) -> IfmvField {
    let s = &dec.series;
    let op = SpectralOperator::new(s.harmonics, s.period).expect("increment series has N >= 1 and T > 0");
    let d = op.d_matrix();
    let nts = op.sample_count();
    let method = match s.method {
        IncrementMethod::Lvi => Method::TsLvi,
        IncrementMethod::Aevi => Method::TsAevi,
    };
    from_increments(dec, method, |p, g0, out| {
        for (o, row) in out.iter_mut().zip(d.chunks_exact(nts)) {
            *o = row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + g0;
        }
    })
}

fn per_cell_instant(
    mesh: &HexMesh,
    traj: &MotionTrajectory,
    method: Method,
    f: impl Fn(&[Vec3; 8], &[Vec3; 8]) -> [f64; 6] + Sync,
) -> IfmvField {
    let nts = traj.sample_count();
    let mut values = vec![0.0; mesh.n_cells() * 6 * nts];
    values.par_chunks_mut(6 * nts).enumerate().for_each(|(c, out)| {
        for n in 0..nts {
            let g = f(&mesh.cell_points(c, &traj.positions[n]), &mesh.cell_points(c, &traj.velocities[n]));
            for (fi, gv) in g.iter().enumerate() {
                out[fi * nts + n] = *gv;
            }
        }
    });
    IfmvField { method, harmonics: traj.harmonics, period: traj.period, n_cells: mesh.n_cells(), values }
}

/// Mean vertex velocity dotted with the face area vector.
pub fn ifmv_avg(mesh: &HexMesh, traj: &MotionTrajectory) -> IfmvField {
    per_cell_instant(mesh, traj, Method::Avg, |r, u| {
        let s = face_area_vectors(r);
        let mut g = [0.0; 6];
        for f in Face::ALL {
            let l = f.vertex_loop();
            let vbar = (u[l[0]] + u[l[1]] + u[l[2]] + u[l[3]]) / 4.0;
            g[f.index()] = vbar.dot(&s[f.index()]);
        }
        g
    })
}

/// Exact face fluxes of the trilinear map.
pub fn ifmv_trimap(mesh: &HexMesh, traj: &MotionTrajectory) -> IfmvField {
    per_cell_instant(mesh, traj, Method::TriMap, ifmv_cell)
}

/// Build the field for any method.
pub fn compute_ifmv(method: Method, mesh: &HexMesh, traj: &MotionTrajectory) -> IfmvField {
    match method {
        Method::Avg => ifmv_avg(mesh, traj),
        Method::TriMap => ifmv_trimap(mesh, traj),
        Method::NlfdLvi => ifmv_nlfd(&lvi_increments(mesh, traj).decompose()),
        Method::NlfdAevi => ifmv_nlfd(&aevi_increments(mesh, traj).decompose()),
        Method::TsLvi => ifmv_ts(&lvi_increments(mesh, traj).decompose()),
        Method::TsAevi => ifmv_ts(&aevi_increments(mesh, traj).decompose()),
    }
}

/// Cell volumes at the `Nts` instants, indexed `cell * Nts + n`.
pub fn volume_history(mesh: &HexMesh, traj: &MotionTrajectory) -> Vec<f64> {
    let nts = traj.sample_count();
    let mut out = vec![0.0; mesh.n_cells() * nts];
    out.par_chunks_mut(nts).enumerate().for_each(|(c, row)| {
        for (n, v) in row.iter_mut().enumerate() {
            *v = hex_volume(&mesh.cell_points(c, &traj.positions[n]));
        }
    });
    out
}

/// Exact `dV/dt` at the `Nts` instants, indexed `cell * Nts + n`.
pub fn dvoldt_history(mesh: &HexMesh, traj: &MotionTrajectory) -> Vec<f64> {
    let nts = traj.sample_count();
    let mut out = vec![0.0; mesh.n_cells() * nts];
    out.par_chunks_mut(nts).enumerate().for_each(|(c, row)| {
        for (n, v) in row.iter_mut().enumerate() {
            *v = dvoldt_trimap(&mesh.cell_points(c, &traj.positions[n]), &mesh.cell_points(c, &traj.velocities[n]));
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcl::increments::{IncrementSeries};
    use crate::hexmesh::build_box_mesh;
    use crate::motion::{sample_motion, CaseId, MotionCase};
    use std::f64::consts::PI;

    fn synthetic(n: usize, t: f64, slope: f64, f: impl Fn(f64) -> f64) -> DecomposedIncrements {
        let nts = 2 * n + 1;
        let mut values = Vec::new();
        for _ in 0..6 {
            for i in 0..=nts {
                let ti = i as f64 * t / nts as f64;
                values.push(slope * ti + if i == nts { f(0.0) } else { f(ti) } - f(0.0));
            }
        }
        IncrementSeries { method: IncrementMethod::Aevi, harmonics: n, period: t, n_cells: 1, values }.decompose()
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert_eq!("lvi".parse::<Method>().unwrap(), Method::NlfdLvi);
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn zero_increments_give_zero_velocities() {
        let d = synthetic(3, 1.0, 0.0, |_| 0.0);
        assert!(ifmv_nlfd(&d).values.iter().all(|&v| v == 0.0));
        assert!(ifmv_ts(&d).values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sine_increment() {
        let t = 2.0;
        let d = synthetic(4, t, 0.0, |x| (2.0 * PI * x / t).sin());
        let g = ifmv_nlfd(&d);
        for (n, v) in g.face(0, Face::XiMax).iter().enumerate() {
            let tn = n as f64 * t / 9.0;
            assert!((v - PI * (2.0 * PI * tn / t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_drift() {
        let d = synthetic(2, 1.0, 0.8, |_| 0.0);
        for v in ifmv_ts(&d).values.iter().chain(ifmv_nlfd(&d).values.iter()) {
            assert!((v - 0.8).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_mesh_avg_is_zero() {
        let m = build_box_mesh(2, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let mut tr = sample_motion(&m, &MotionCase::default_for(CaseId::Case1), 1).unwrap();
        for n in 0..tr.positions.len() {
            tr.positions[n] = m.vertices.clone();
            tr.velocities[n] = vec![Vec3::zeros(); m.n_vertices()];
        }
        assert!(ifmv_avg(&m, &tr).values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rigid_translation_avg_is_exact() {
        let m = build_box_mesh(3, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let tr = sample_motion(&m, &MotionCase::default_for(CaseId::RigidTranslation), 2).unwrap();
        let avg = ifmv_avg(&m, &tr);
        let tri = ifmv_trimap(&m, &tr);
        assert!(avg.max_abs_diff(&tri, None).unwrap() < 1e-15);
    }

    #[test]
    fn case1_aevi_sum_matches_volume_derivative() {
        let m = build_box_mesh(4, 4, 4, 3.2, 2.8, 2.4).unwrap();
        let tr = sample_motion(&m, &MotionCase::default_for(CaseId::Case1), 3).unwrap();
        let g = compute_ifmv(Method::NlfdAevi, &m, &tr);
        let vol = volume_history(&m, &tr);
        let op = SpectralOperator::new(3, 1.0).unwrap();
        for c in 0..m.n_cells() {
            let d = op.differentiate(&vol[c * 7..(c + 1) * 7]).unwrap();
            for (a, b) in g.cell_sum(c).iter().zip(&d) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ts_and_nlfd_agree() {
        let m = build_box_mesh(3, 3, 3, 3.2, 2.8, 2.4).unwrap();
        let tr = sample_motion(&m, &MotionCase::default_for(CaseId::Case2), 5).unwrap();
        let d = lvi_increments(&m, &tr).decompose();
        assert!(ifmv_ts(&d).max_abs_diff(&ifmv_nlfd(&d), None).unwrap() < 1e-12);
    }

    #[test]
    fn family_sums_add_to_cell_sum() {
        let m = build_box_mesh(2, 2, 2, 1.0, 1.0, 1.0).unwrap();
        let tr = sample_motion(&m, &MotionCase::default_for(CaseId::Case1), 2).unwrap();
        let g = ifmv_trimap(&m, &tr);
        for c in 0..m.n_cells() {
            let total = g.cell_sum(c);
            let parts: Vec<Vec<f64>> = Direction::ALL.iter().map(|&d| g.family_sum(c, d)).collect();
            for n in 0..total.len() {
                let s: f64 = parts.iter().map(|p| p[n]).sum();
                assert!((s - total[n]).abs() <= 1e-13 * total[n].abs().max(1e-3));
            }
        }
    }
}
