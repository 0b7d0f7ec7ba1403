use serde::{Deserialize, Serialize};

/// Fluid state in standard variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub rho: f64,
    pub u: [f64; 3],
    pub theta: f64,
}

/// Fluid state in conservative-entropy variables: density, momentum, total entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservativeState {
    pub rho: f64,
    pub m: [f64; 3],
    pub s: f64,
}

impl ThermoState {
    pub fn new(rho: f64, u: [f64; 3], theta: f64) -> Self {
        Self { rho, u, theta }
    }

    /// One-dimensional state; the remaining velocity components are zero.
    pub fn new_1d(rho: f64, u: f64, theta: f64) -> Self {
        Self { rho, u: [u, 0.0, 0.0], theta }
    }

    pub fn speed_sq(&self) -> f64 {
        self.u.iter().map(|c| c * c).sum()
    }
}

impl ConservativeState {
    pub fn momentum_sq(&self) -> f64 {
        self.m.iter().map(|c| c * c).sum()
    }
}
