//! Error measures and observed convergence orders.

use crate::error::{Error, Result};
use crate::flow::StateVector;
use crate::gcl::{IfmvField, Method};
use crate::hexmesh::Direction;
use crate::motion::CaseId;
use crate::spectral::SpectralOperator;

/// Errors at or below this level are treated as roundoff.
pub const NOISE_FLOOR: f64 = 1e-13;

/// One row of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub case: CaseId,
    pub method: Method,
    pub harmonics: usize,
    pub sample_count: usize,
    pub rel_err_freestream: Option<f64>,
    pub abs_err1: f64,
    /// Per face family, x, y, z.
    pub abs_err2: [f64; 3],
    pub fd1_ref: f64,
    pub fd2_ref: f64,
    pub wall_ms: Option<f64>,
}

impl ErrorReport {
    pub fn abs_err2(&self, dir: Direction) -> f64 {
        self.abs_err2[dir.index()]
    }
}

/// Largest componentwise relative deviation from `w0`. Components where
/// `w0` vanishes are scaled by the largest component of `w0` instead.
pub fn rel_err_freestream(states: &[StateVector], w0: &StateVector) -> f64 {
    let wmax = w0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale: [f64; 5] = std::array::from_fn(|i| if w0[i] != 0.0 { w0[i].abs() } else { wmax });
    let mut worst: f64 = 0.0;
    for w in states {
        for i in 0..5 {
            let e = (w[i] - w0[i]).abs() / scale[i];
            if e.is_nan() {
                return f64::NAN;
            }
            worst = worst.max(e);
        }
    }
    worst
}

/// `max |Σ_m G_m(t_n) - dΩ/dt(t_n)|` with the derivative taken spectrally.
/// `volumes` is indexed `cell * Nts + n`.
pub fn abs_err_sum_vs_dvoldt(field: &IfmvField, volumes: &[f64], period: f64) -> Result<f64> {
    let nts = field.sample_count();
    if volumes.len() != field.n_cells * nts {
        return Err(Error::DimensionMismatch { expected: field.n_cells * nts, actual: volumes.len() });
    }
    let op = SpectralOperator::new(field.harmonics, period)?;
    let mut worst: f64 = 0.0;
    for c in 0..field.n_cells {
        let d = op.differentiate(&volumes[c * nts..(c + 1) * nts])?;
        for (a, b) in field.cell_sum(c).iter().zip(&d) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

/// `max |G_m - G_m^ref|` over the faces of one family.
pub fn abs_err_ifmv_vs_reference(field: &IfmvField, reference: &IfmvField, dir: Direction) -> Result<f64> {
    field.max_abs_diff(reference, Some(dir))
}

/// Backward and centred finite-difference errors of `dΩ/dt` against the
/// exact rate, both periodic in time.
pub fn fd_reference_errors(volumes: &[f64], exact: &[f64], nts: usize, period: f64) -> Result<(f64, f64)> {
    if volumes.len() != exact.len() || !volumes.len().is_multiple_of(nts) {
        return Err(Error::DimensionMismatch { expected: volumes.len(), actual: exact.len() });
    }
    let tau = period / nts as f64;
    let (mut e1, mut e2) = (0.0f64, 0.0f64);
    for (v, x) in volumes.chunks_exact(nts).zip(exact.chunks_exact(nts)) {
        for n in 0..nts {
            let prev = v[(n + nts - 1) % nts];
            let next = v[(n + 1) % nts];
            e1 = e1.max(((v[n] - prev) / tau - x[n]).abs());
            e2 = e2.max(((next - prev) / (2.0 * tau) - x[n]).abs());
        }
    }
    Ok((e1, e2))
}

/// Least-squares slope of `log(error)` against `log(1/Nts)`. Points at or
/// below the noise floor are dropped; at least three must remain.
pub fn fitted_order(points: &[(usize, f64)]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, e)| *n > 0 && *e > NOISE_FLOOR && e.is_finite())
        .map(|&(n, e)| (-(n as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientPoints(pts.len()));
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_err_cases() {
        let w0 = [1.0, 0.5, 0.0, 0.0, 2.625];
        assert_eq!(rel_err_freestream(&[w0; 3], &w0), 0.0);
        let mut w = w0;
        w[1] *= 1.0 + 1e-6;
        assert!((rel_err_freestream(&[w0, w], &w0) - 1e-6).abs() < 1e-15);
        // zero component scaled by the largest one
        let mut z = w0;
        z[2] = 2.625e-3;
        assert!((rel_err_freestream(&[z], &w0) - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn order_of_synthetic_errors() {
        let one: Vec<(usize, f64)> = [11, 21, 41, 81].iter().map(|&n| (n, 3.0 / n as f64)).collect();
        let two: Vec<(usize, f64)> = [11, 21, 41, 81].iter().map(|&n| (n, 0.2 / (n * n) as f64)).collect();
        assert!((fitted_order(&one).unwrap() - 1.0).abs() < 0.01);
        assert!((fitted_order(&two).unwrap() - 2.0).abs() < 0.01);
    }

    #[test]
    fn order_needs_points_above_floor() {
        let pts = [(3, 1e-3), (5, 1e-14), (7, 1e-15), (9, 1e-4)];
        assert_eq!(fitted_order(&pts).unwrap_err(), Error::InsufficientPoints(2));
    }

    #[test]
    fn fd_errors_on_sine() {
        let nts = 41;
        let t = 1.0;
        let w = 2.0 * std::f64::consts::PI;
        let v: Vec<f64> = (0..nts).map(|n| (w * n as f64 / nts as f64).sin()).collect();
        let x: Vec<f64> = (0..nts).map(|n| w * (w * n as f64 / nts as f64).cos()).collect();
        let (e1, e2) = fd_reference_errors(&v, &x, nts, t).unwrap();
        let tau = t / nts as f64;
        assert!(e1 < w * w * tau && e1 > 0.1 * w * w * tau);
        assert!(e2 < w.powi(3) * tau * tau);
    }
}
