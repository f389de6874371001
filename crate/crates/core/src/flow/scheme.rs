use super::state::{pressure_unchecked, StateVector};
use crate::hexmesh::Vec3;

/// Physical flux through area vector `s`, without mesh motion.
#[inline]
pub fn convective_flux(w: &StateVector, s: &Vec3, gamma: f64) -> StateVector {
    let p = pressure_unchecked(w, gamma);
    let v = (w[1] * s.x + w[2] * s.y + w[3] * s.z) / w[0];
    [
        w[0] * v,
        w[1] * v + p * s.x,
        w[2] * v + p * s.y,
        w[3] * v + p * s.z,
        (w[4] + p) * v,
    ]
}

/// Central moving-face flux: average of the two physical fluxes minus the
/// integrated face mesh velocity times the average state.
#[inline]
pub fn ale_face_flux(left: &StateVector, right: &StateVector, s: &Vec3, ifmv: f64, gamma: f64) -> StateVector {
    let fl = convective_flux(left, s, gamma);
    let fr = convective_flux(right, s, gamma);
    let mut f = [0.0; 5];
    for i in 0..5 {
        f[i] = 0.5 * (fl[i] + fr[i]) - ifmv * 0.5 * (left[i] + right[i]);
    }
    f
}

/// Scalar JST coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JstParams {
    pub kappa2: f64,
    pub kappa4: f64,
}

impl Default for JstParams {
    fn default() -> Self {
        JstParams { kappa2: 1.0, kappa4: 1.0 / 32.0 }
    }
}

#[inline]
fn sensor(pm: f64, p: f64, pp: f64) -> f64 {
    let den = (pp + 2.0 * p + pm).abs();
    if den > 0.0 {
        (pp - 2.0 * p + pm).abs() / den
    } else {
        0.0
    }
}

/// Dissipative flux on the face between `w[1]` and `w[2]` of the line
/// stencil `w[0..4]`, oriented from cell 1 to cell 2. `p` holds the
/// pressures of the same four cells; `lambda` is the face spectral radius.
#[inline]
pub fn jst_dissipation(w: [&StateVector; 4], p: [f64; 4], lambda: f64, params: &JstParams) -> StateVector {
    let nu = sensor(p[0], p[1], p[2]).max(sensor(p[1], p[2], p[3]));
    let e2 = params.kappa2 * nu;
    let e4 = (params.kappa4 - e2).max(0.0);
    let mut d = [0.0; 5];
    for i in 0..5 {
        let d1 = w[2][i] - w[1][i];
        let d3 = (w[3][i] - w[0][i]) - 3.0 * (w[2][i] - w[1][i]);
        d[i] = lambda * (e2 * d1 - e4 * d3);
    }
    d
}
