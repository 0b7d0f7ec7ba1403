//! Relative energy: the Bregman distance of the total energy.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{domain, NsfError, Result};
use crate::par::{pairwise_sum, Execution};
use crate::solver::Mesh1D;
use crate::thermo::{ConservativeState, EosSpec, ThermoState};

/// Pointwise relative energy split into kinetic and internal parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelEnergySample {
    pub value: f64,
    pub kinetic_part: f64,
    pub bregman_part: f64,
}

impl RelEnergySample {
    fn new(kinetic_part: f64, bregman_part: f64) -> Self {
        Self {
            value: kinetic_part + bregman_part,
            kinetic_part,
            bregman_part,
        }
    }

    pub const ZERO: Self = Self {
        value: 0.0,
        kinetic_part: 0.0,
        bregman_part: 0.0,
    };
}

/// Relative energy integrated over the mesh at a sequence of instants.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RelEnergyTrace {
    pub reference_label: String,
    pub times: Vec<f64>,
    pub integrals: Vec<f64>,
    pub kinetic: Vec<f64>,
    pub bregman: Vec<f64>,
}

impl RelEnergyTrace {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            reference_label: label.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, t: f64, total: RelEnergySample) {
        self.times.push(t);
        self.integrals.push(total.value);
        self.kinetic.push(total.kinetic_part);
        self.bregman.push(total.bregman_part);
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let io = |e| NsfError::Io { path: path.to_path_buf(), source: e };
        let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
        writeln!(f, "t,rel_energy,kinetic,bregman").map_err(io)?;
        for i in 0..self.times.len() {
            writeln!(f, "{:.17e},{:.17e},{:.17e},{:.17e}", self.times[i], self.integrals[i], self.kinetic[i], self.bregman[i])
                .map_err(io)?;
        }
        Ok(())
    }
}

fn check_reference(r: &ThermoState) -> Result<()> {
    if r.rho > 0.0 && r.theta > 0.0 && r.rho.is_finite() && r.theta.is_finite() {
        Ok(())
    } else {
        Err(domain("relative_energy", format!("reference state must be interior, got rho={} theta={}", r.rho, r.theta)))
    }
}

/// `(rho e, rho s)` extended continuously to `rho = 0`.
fn densities(eos: &EosSpec, rho: f64, theta: f64) -> (f64, f64) {
    if rho == 0.0 {
        (eos.a * theta.powi(4), 4.0 * eos.a / 3.0 * theta.powi(3))
    } else {
        let d = eos.derivatives_unchecked(rho, theta);
        (rho * d.e, rho * d.s)
    }
}

/// Relative energy in standard variables with the ballistic potential
/// `H(rho, theta) = rho (e - theta_ref s)`.
pub fn relative_energy_standard(eos: &EosSpec, state: &ThermoState, reference: &ThermoState) -> Result<RelEnergySample> {
    check_reference(reference)?;
    if !(state.theta > 0.0) || !(state.rho >= 0.0) {
        return Err(domain("relative_energy_standard", format!("state (rho={}, theta={}) outside the domain", state.rho, state.theta)));
    }
    let kinetic = 0.5 * state.rho * sq_dist(&state.u, &reference.u);
    let tr = reference.theta;
    let rr = reference.rho;
    let d = eos.derivatives_unchecked(rr, tr);
    // dH/drho at the reference, assembled from the rho-derivatives of e and s.
    let dh = d.e + rr * d.e_rho - tr * (d.s + rr * d.s_rho);
    // Same rounding path as `h`, so identical states give exactly zero.
    let h_ref = rr * d.e - tr * (rr * d.s);
    let (re, rs) = densities(eos, state.rho, state.theta);
    let h = re - tr * rs;
    let bregman = h - dh * (state.rho - rr) - h_ref;
    Ok(RelEnergySample::new(kinetic, bregman))
}

/// Gradient of `E(rho, m, S) = |m|^2 / (2 rho) + E_int(rho, S)` at an interior state.
pub fn energy_gradient(eos: &EosSpec, c: &ConservativeState, theta: f64) -> (f64, [f64; 3], f64) {
    let d = eos.derivatives_unchecked(c.rho, theta);
    let u = c.m.map(|m| m / c.rho);
    let u2: f64 = u.iter().map(|x| x * x).sum();
    (d.e - theta * d.s + d.p / c.rho - 0.5 * u2, u, theta)
}

/// Bregman divergence of the total energy in conservative-entropy variables.
///
/// States outside the closure of the admissible set give `+inf`.
pub fn relative_energy_conservative(eos: &EosSpec, c: &ConservativeState, cref: &ConservativeState) -> Result<RelEnergySample> {
    if !eos.is_interior(cref.rho, cref.s) {
        return Err(domain("relative_energy_conservative", format!("reference (rho={}, S={}) is not interior", cref.rho, cref.s)));
    }
    let tr = eos.temperature_from_entropy(cref.rho, cref.s, None)?;
    let u_ref = cref.m.map(|m| m / cref.rho);
    let kinetic = if c.rho > 0.0 {
        let u = c.m.map(|m| m / c.rho);
        0.5 * c.rho * sq_dist(&u, &u_ref)
    } else if c.rho == 0.0 && c.m.iter().all(|m| *m == 0.0) {
        0.0
    } else {
        f64::INFINITY
    };
    let e_int = eos.extended_internal_energy(c.rho, c.s);
    if !e_int.is_finite() || !kinetic.is_finite() {
        return Ok(RelEnergySample::new(kinetic, e_int.max(0.0)));
    }
    let d = eos.derivatives_unchecked(cref.rho, tr);
    let g_rho = d.e - tr * d.s + d.p / cref.rho;
    let e_ref = cref.rho * d.e;
    let bregman = e_int - e_ref - g_rho * (c.rho - cref.rho) - tr * (c.s - cref.s);
    Ok(RelEnergySample::new(kinetic, bregman))
}

fn sq_dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Midpoint-rule integral of the pointwise relative energy.
pub fn relative_energy_integral(
    eos: &EosSpec,
    fields: &[ThermoState],
    ref_fields: &[ThermoState],
    mesh: &Mesh1D,
) -> Result<f64> {
    Ok(relative_energy_integral_split(eos, fields, ref_fields, mesh, Execution::default())?.value)
}

/// As [`relative_energy_integral`], also returning the kinetic and Bregman totals.
pub fn relative_energy_integral_split(
    eos: &EosSpec,
    fields: &[ThermoState],
    ref_fields: &[ThermoState],
    mesh: &Mesh1D,
    exec: Execution,
) -> Result<RelEnergySample> {
    if fields.len() != mesh.n || ref_fields.len() != mesh.n {
        return Err(NsfError::Shape(format!(
            "mesh has {} cells but fields have {} and references {}",
            mesh.n,
            fields.len(),
            ref_fields.len()
        )));
    }
    let samples = crate::par::map_indexed(exec, mesh.n, |i| relative_energy_standard(eos, &fields[i], &ref_fields[i]));
    let mut kin = Vec::with_capacity(mesh.n);
    let mut breg = Vec::with_capacity(mesh.n);
    for s in samples {
        let s = s?;
        kin.push(s.kinetic_part);
        breg.push(s.bregman_part);
    }
    let h = mesh.h();
    Ok(RelEnergySample::new(h * pairwise_sum(&kin), h * pairwise_sum(&breg)))
}

/// `e(rho_b, theta_tilde) - theta s(rho_b, theta_tilde)`, minimal at `theta_tilde = theta`.
pub fn ballistic_free_energy(eos: &EosSpec, rho_b: f64, theta_tilde: f64, theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(domain("ballistic_free_energy", format!("temperature must be positive, got {theta}")));
    }
    let e = eos.specific_internal_energy(rho_b, theta_tilde)?;
    let s = eos.specific_entropy(rho_b, theta_tilde)?;
    Ok(e - theta * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::to_conservative;

    fn eos() -> EosSpec {
        EosSpec::iconic(1.0, 1.0).unwrap()
    }

    #[test]
    fn velocity_only_difference() {
        let r = relative_energy_standard(&eos(), &ThermoState::new_1d(1.0, 1.0, 1.0), &ThermoState::new_1d(1.0, 0.0, 1.0)).unwrap();
        assert!((r.kinetic_part - 0.5).abs() < 1e-15);
        assert!(r.bregman_part.abs() < 1e-14);
    }

    #[test]
    fn self_distance_is_zero() {
        let s = ThermoState::new(0.7, [0.3, -1.0, 2.0], 2.5);
        let r = relative_energy_standard(&eos(), &s, &s).unwrap();
        assert!(r.value.abs() < 1e-13);
        let c = to_conservative(&eos(), &s).unwrap();
        assert!(relative_energy_conservative(&eos(), &c, &c).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn quadratic_growth() {
        let r = ThermoState::new_1d(1.3, 0.0, 0.8);
        let ratio = |h: f64| {
            let s = ThermoState::new_1d(1.3 + h, 0.0, 0.8);
            relative_energy_standard(&eos(), &s, &r).unwrap().value / (h * h)
        };
        let (a, b) = (ratio(1e-2), ratio(1e-3));
        assert!(a > 0.0 && b > 0.0);
        assert!((a - b).abs() < 2e-2 * b);
    }

    #[test]
    fn vacuum_and_out_of_domain_states() {
        let e = eos();
        let cref = to_conservative(&e, &ThermoState::new_1d(1.0, 0.0, 1.0)).unwrap();
        let bad = ConservativeState { rho: -1.0, m: [0.0; 3], s: 1.0 };
        assert_eq!(relative_energy_conservative(&e, &bad, &cref).unwrap().value, f64::INFINITY);
        let vac = ConservativeState { rho: 0.0, m: [1.0, 0.0, 0.0], s: 1.0 };
        assert_eq!(relative_energy_conservative(&e, &vac, &cref).unwrap().value, f64::INFINITY);
        let vac = ConservativeState { rho: 0.0, m: [0.0; 3], s: 1.0 };
        assert!(relative_energy_conservative(&e, &vac, &cref).unwrap().value.is_finite());
    }

    #[test]
    fn integral_of_constant() {
        let e = eos();
        let mesh = Mesh1D::new(0.0, 2.0, 1).unwrap();
        let s = ThermoState::new_1d(1.0, 6f64.sqrt(), 1.0);
        let r = ThermoState::new_1d(1.0, 0.0, 1.0);
        let v = relative_energy_integral(&e, &[s], &[r], &mesh).unwrap();
        assert!((v - 6.0).abs() < 1e-13);
        assert!(relative_energy_integral(&e, &[s, s], &[r], &mesh).is_err());
    }

    #[test]
    fn ballistic_value() {
        let v = ballistic_free_energy(&eos(), 1.0, 1.0, 1.0).unwrap();
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
    }
}
