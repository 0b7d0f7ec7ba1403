//! Pointwise constitutive fluxes of the one-dimensional scheme.

use super::config::SolverConfig;
use crate::thermo::TransportSpec;

/// Total viscosity `(mu + delta theta) 2 (1 - 1/d) + eta` multiplying `du/dx`.
pub fn viscosity(ts: &TransportSpec, cfg: &SolverConfig, theta: f64) -> f64 {
    (ts.mu(theta) + cfg.delta * theta) * cfg.deviatoric_factor() + ts.eta(theta)
}

/// Conductivity `kappa + delta (theta^Gamma + 1/theta)`.
pub fn conductivity(ts: &TransportSpec, cfg: &SolverConfig, theta: f64) -> f64 {
    let mut k = ts.kappa(theta);
    if cfg.delta > 0.0 {
        k += cfg.delta * (theta.powf(cfg.gamma) + 1.0 / theta);
    }
    k
}

/// One-dimensional viscous stress.
pub fn viscous_stress(ts: &TransportSpec, cfg: &SolverConfig, theta: f64, du_dx: f64) -> f64 {
    viscosity(ts, cfg, theta) * du_dx
}

/// Fourier heat flux including the regularising conductivity.
pub fn heat_flux(ts: &TransportSpec, cfg: &SolverConfig, theta: f64, dtheta_dx: f64) -> f64 {
    -conductivity(ts, cfg, theta) * dtheta_dx
}
