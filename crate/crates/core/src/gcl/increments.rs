//! Volumetric increments swept by each face since the first instant.

use rayon::prelude::*;

use crate::hexmesh::{face_vertices, hex_volume, Face, HexMesh, Vec3};
use crate::motion::MotionTrajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IncrementMethod {
    /// One straight sweep from the first configuration.
    Lvi,
    /// Accumulated per-step sweeps.
    Aevi,
}

/// Volume of the hexahedron spanned by a face at two configurations.
/// Positive when the face moves along its outward normal.
#[inline]
pub fn sweep_volume(from: &[Vec3; 4], to: &[Vec3; 4]) -> f64 {
    hex_volume(&[from[0], from[1], from[2], from[3], to[0], to[1], to[2], to[3]])
}

/// `Ω_m(t_n)` for every face of every cell, `n = 0..=Nts`.
#[derive(Debug, Clone)]
pub struct IncrementSeries {
    pub method: IncrementMethod,
    pub harmonics: usize,
    pub period: f64,
    pub n_cells: usize,
    /// Indexed `(cell * 6 + face) * (Nts + 1) + n`.
    pub values: Vec<f64>,
}

impl IncrementSeries {
    pub fn sample_count(&self) -> usize {
        2 * self.harmonics + 1
    }

    fn stride(&self) -> usize {
        self.sample_count() + 1
    }

    pub fn face(&self, cell: usize, face: Face) -> &[f64] {
        let s = self.stride();
        let o = (cell * 6 + face.index()) * s;
        &self.values[o..o + s]
    }

    pub fn decompose(self) -> DecomposedIncrements {
        extract_linear_and_periodic(self)
    }
}

fn build_series(mesh: &HexMesh, traj: &MotionTrajectory, method: IncrementMethod) -> IncrementSeries {
    let nts = traj.sample_count();
    let stride = nts + 1;
    let mut values = vec![0.0; mesh.n_cells() * 6 * stride];
    values
        .par_chunks_mut(6 * stride)
        .enumerate()
        .for_each(|(c, out)| {
            let cfg: Vec<[Vec3; 8]> = traj.positions.iter().map(|p| mesh.cell_points(c, p)).collect();
            for f in Face::ALL {
                let row = &mut out[f.index() * stride..(f.index() + 1) * stride];
                let first = face_vertices(&cfg[0], f);
                let mut acc = 0.0;
                row[0] = 0.0;
                for n in 1..stride {
                    let cur = face_vertices(&cfg[n], f);
                    row[n] = match method {
                        IncrementMethod::Lvi => sweep_volume(&first, &cur),
                        IncrementMethod::Aevi => {
                            acc += sweep_volume(&face_vertices(&cfg[n - 1], f), &cur);
                            acc
                        }
                    };
                }
            }
        });
    IncrementSeries { method, harmonics: traj.harmonics, period: traj.period, n_cells: mesh.n_cells(), values }
}

pub fn lvi_increments(mesh: &HexMesh, traj: &MotionTrajectory) -> IncrementSeries {
    build_series(mesh, traj, IncrementMethod::Lvi)
}

pub fn aevi_increments(mesh: &HexMesh, traj: &MotionTrajectory) -> IncrementSeries {
    build_series(mesh, traj, IncrementMethod::Aevi)
}

/// Increments split into a linear drift and a periodic remainder.
#[derive(Debug, Clone)]
pub struct DecomposedIncrements {
    pub series: IncrementSeries,
    /// `Ω_m(T) / T`, indexed `cell * 6 + face`.
    pub slope: Vec<f64>,
    /// `Ω_m(t_n) - slope · t_n` for `n = 0..Nts`, indexed
    /// `(cell * 6 + face) * Nts + n`.
    pub periodic: Vec<f64>,
}

impl DecomposedIncrements {
    pub fn slope(&self, cell: usize, face: Face) -> f64 {
        self.slope[cell * 6 + face.index()]
    }

    pub fn periodic(&self, cell: usize, face: Face) -> &[f64] {
        let nts = self.series.sample_count();
        let o = (cell * 6 + face.index()) * nts;
        &self.periodic[o..o + nts]
    }
}

pub fn extract_linear_and_periodic(series: IncrementSeries) -> DecomposedIncrements {
    let nts = series.sample_count();
    let stride = nts + 1;
    let t = series.period;
    let mut slope = Vec::with_capacity(series.values.len() / stride);
    let mut periodic = Vec::with_capacity(slope.capacity() * nts);
    for row in series.values.chunks_exact(stride) {
        let g0 = row[nts] / t;
        slope.push(g0);
        for (n, &w) in row[..nts].iter().enumerate() {
            periodic.push(w - g0 * (n as f64 * t / nts as f64));
        }
    }
    DecomposedIncrements { series, slope, periodic }
}
