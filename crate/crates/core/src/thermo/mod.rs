//! Constitutive relations: pressure, internal energy, entropy and their
//! variable transforms.

pub mod eos;
pub mod extended;
pub mod invert;
pub mod shape;
pub mod state;
pub mod transport;

pub use eos::{EosDoc, EosSpec, TableDoc, ThermoDerivatives};
pub use extended::extended_internal_energy;
pub use shape::{MonotoneTable, PressureShape};
pub use state::{ConservativeState, ThermoState};
pub use transport::{transport_coefficients, Envelope, PowerLaw, TransportSpec};

use crate::error::{NsfError, Result};

pub fn pressure(eos: &EosSpec, rho: f64, theta: f64) -> Result<f64> {
    eos.pressure(rho, theta)
}

pub fn specific_internal_energy(eos: &EosSpec, rho: f64, theta: f64) -> Result<f64> {
    eos.specific_internal_energy(rho, theta)
}

pub fn specific_entropy(eos: &EosSpec, rho: f64, theta: f64) -> Result<f64> {
    eos.specific_entropy(rho, theta)
}

pub fn gibbs_residual(eos: &EosSpec, rho: f64, theta: f64) -> Result<(f64, f64)> {
    eos.gibbs_residual(rho, theta)
}

pub fn stability_margins(eos: &EosSpec, rho: f64, theta: f64) -> Result<(f64, f64)> {
    eos.stability_margins(rho, theta)
}

pub fn to_conservative(eos: &EosSpec, s: &ThermoState) -> Result<ConservativeState> {
    let ent = eos.specific_entropy(s.rho, s.theta)?;
    Ok(ConservativeState {
        rho: s.rho,
        m: s.u.map(|c| s.rho * c),
        s: s.rho * ent,
    })
}

pub fn from_conservative(eos: &EosSpec, c: &ConservativeState) -> Result<ThermoState> {
    if !eos.is_interior(c.rho, c.s) {
        return Err(NsfError::OutOfDomain { rho: c.rho, entropy: c.s });
    }
    let theta = eos.temperature_from_entropy(c.rho, c.s, None)?;
    Ok(ThermoState {
        rho: c.rho,
        u: c.m.map(|m| m / c.rho),
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conservative_examples() {
        let eos = EosSpec::iconic(1.0, 1.0).unwrap();
        let c = to_conservative(&eos, &ThermoState::new_1d(1.0, 0.0, 1.0)).unwrap();
        assert_eq!(c.rho, 1.0);
        assert_eq!(c.m, [0.0; 3]);
        assert!((c.s - 4.0 / 3.0).abs() < 1e-15);
        let back = from_conservative(&eos, &ConservativeState { rho: 1.0, m: [0.0; 3], s: 4.0 / 3.0 }).unwrap();
        assert!((back.theta - 1.0).abs() < 1e-13);
        let cold = EosSpec::iconic(0.0, 1.0).unwrap();
        let t = from_conservative(&cold, &ConservativeState { rho: 1.0, m: [0.0; 3], s: 0.0 }).unwrap();
        assert!((t.theta - 1.0).abs() < 1e-13);
    }

    #[test]
    fn momentum_scales_with_velocity() {
        let eos = EosSpec::iconic(1.0, 1.0).unwrap();
        let a = to_conservative(&eos, &ThermoState::new(2.0, [1.0, -0.5, 0.25], 1.5)).unwrap();
        let b = to_conservative(&eos, &ThermoState::new(2.0, [2.0, -1.0, 0.5], 1.5)).unwrap();
        assert_eq!(b.m, a.m.map(|m| 2.0 * m));
        assert_eq!((a.rho, a.s), (b.rho, b.s));
    }
}
