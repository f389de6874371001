use crate::error::{Error, Result};
use crate::hexmesh::Vec3;

/// `[ρ, ρu, ρv, ρw, ρE]`.
pub type StateVector = [f64; 5];

/// Conserved variables of an ideal gas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservativeState {
    pub rho: f64,
    pub rho_u: f64,
    pub rho_v: f64,
    pub rho_w: f64,
    pub rho_e: f64,
    pub gamma: f64,
}

impl ConservativeState {
    pub fn from_primitive(rho: f64, velocity: Vec3, p: f64, gamma: f64) -> Self {
        let m = velocity * rho;
        ConservativeState {
            rho,
            rho_u: m.x,
            rho_v: m.y,
            rho_w: m.z,
            rho_e: p / (gamma - 1.0) + 0.5 * rho * velocity.norm_squared(),
            gamma,
        }
    }

    pub fn from_vector(w: StateVector, gamma: f64) -> Self {
        ConservativeState { rho: w[0], rho_u: w[1], rho_v: w[2], rho_w: w[3], rho_e: w[4], gamma }
    }

    pub fn to_vector(&self) -> StateVector {
        [self.rho, self.rho_u, self.rho_v, self.rho_w, self.rho_e]
    }

    pub fn velocity(&self) -> Vec3 {
        Vec3::new(self.rho_u, self.rho_v, self.rho_w) / self.rho
    }

    pub fn pressure(&self) -> Result<f64> {
        pressure(&self.to_vector(), self.gamma)
    }
}

#[inline]
pub(crate) fn pressure_unchecked(w: &StateVector, gamma: f64) -> f64 {
    (gamma - 1.0) * (w[4] - 0.5 * (w[1] * w[1] + w[2] * w[2] + w[3] * w[3]) / w[0])
}

/// Ideal-gas pressure; fails on nonpositive density or pressure.
pub fn pressure(w: &StateVector, gamma: f64) -> Result<f64> {
    if !(w[0] > 0.0) {
        return Err(Error::NonPhysicalState(format!("density {}", w[0])));
    }
    let p = pressure_unchecked(w, gamma);
    if !(p > 0.0) {
        return Err(Error::NonPhysicalState(format!("pressure {p}")));
    }
    Ok(p)
}
