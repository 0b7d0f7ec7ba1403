//! Discrete audits of the mass, total-energy and entropy balances, the
//! a-priori monitors and the weak–strong relative-energy trace.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{NsfError, Result};
use crate::relent::{relative_energy_integral_split, RelEnergyTrace};
use crate::solver::state::temperature_from_energy;
use crate::solver::{Conserved, FieldState, Ledger, Mesh1D, Problem, StepRecord, Trajectory};
use crate::thermo::ThermoState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Mass residual allowed per step.
    pub mass_per_step: f64,
    /// Entropy production floor per unit domain measure and unit time.
    pub entropy: f64,
    /// Energy residual allowed per unit domain measure and unit time.
    pub energy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mass_per_step: 1e-11,
            entropy: 1e-8,
            energy: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    /// Relation the value must satisfy against `tol`, e.g. `|x| <= tol`.
    pub rule: &'static str,
    pub pass: bool,
}

impl Verdict {
    fn abs_le(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, rule: "|x| <= tol", pass: value.abs() <= tol }
    }

    fn le(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, rule: "x <= tol", pass: value <= tol }
    }

    fn ge_neg(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.into(), value, tol, rule: "x >= -tol", pass: value >= -tol }
    }

    pub fn label(&self) -> &'static str {
        if self.pass {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetReport {
    pub window: (f64, f64),
    pub steps: usize,
    pub mass_residual: f64,
    pub energy_residual: f64,
    pub entropy_production: f64,
    pub boundary_terms: BTreeMap<String, f64>,
    /// Every recorded term over the window.
    pub terms: BTreeMap<String, f64>,
    pub apriori: BTreeMap<String, f64>,
    pub verdicts: Vec<Verdict>,
}

impl BudgetReport {
    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Start and end records of a window, plus the number of steps inside it.
fn window<'a>(traj: &'a Trajectory, t0: f64, t1: f64) -> Result<(&'a StepRecord, &'a StepRecord, usize)> {
    let a = traj
        .record_at(t0)
        .ok_or_else(|| NsfError::Misuse(format!("trajectory has no record at t0 = {t0}")))?;
    let b = traj
        .record_at(t1)
        .ok_or_else(|| NsfError::Misuse(format!("trajectory has no record at t1 = {t1}")))?;
    if b.t < a.t {
        return Err(NsfError::Misuse(format!("window [{t0}, {t1}] is reversed")));
    }
    let steps = traj.steps.iter().filter(|r| r.t > a.t && r.t <= b.t).count();
    Ok((a, b, steps))
}

fn mass_of(d: &Ledger, dm: f64) -> f64 {
    dm + d.m_in + d.m_out - d.m_source
}

fn energy_of(d: &Ledger, de: f64) -> f64 {
    let lhs = de + d.e_out_int + d.e_out_delta + d.e_in_flux + d.e_in_delta_breg + d.e_in_delta_sq;
    let rhs = d.e_conv_ub
        + d.e_kin_ub
        + d.e_visc_ub
        + d.e_grav
        + d.e_src_delta
        + d.e_src_eps
        + d.e_in_delta_rhs
        + d.e_eps_ub
        + d.e_source;
    lhs - rhs
}

fn entropy_of(d: &Ledger, ds: f64) -> f64 {
    ds + d.s_out - (d.s_heat + d.s_visc + d.s_delta_src + d.s_eps_rho + d.s_eps_theta + d.s_eps_mu + d.s_in + d.s_source)
}

/// `[int rho] + int int (rho_b u_b.n on inflow + rho u_b.n on outflow) - sources`.
pub fn mass_budget(traj: &Trajectory, t0: f64, t1: f64) -> Result<f64> {
    let (a, b, _) = window(traj, t0, t1)?;
    Ok(mass_of(&b.ledger.diff(&a.ledger), b.storage.mass - a.storage.mass))
}

/// Signed residual `LHS - RHS` of the total energy balance with unit test function.
pub fn energy_budget(traj: &Trajectory, t0: f64, t1: f64) -> Result<(f64, Ledger)> {
    let (a, b, _) = window(traj, t0, t1)?;
    let d = b.ledger.diff(&a.ledger);
    Ok((energy_of(&d, b.storage.energy - a.storage.energy), d))
}

/// Entropy production `LHS - RHS` of the entropy inequality with unit test function.
pub fn entropy_budget(traj: &Trajectory, t0: f64, t1: f64) -> Result<(f64, Ledger)> {
    let (a, b, _) = window(traj, t0, t1)?;
    let d = b.ledger.diff(&a.ledger);
    Ok((entropy_of(&d, b.storage.entropy - a.storage.entropy), d))
}

/// Quantities bounded a priori, up to the last record of the trajectory.
pub fn apriori_monitor(p: &Problem, traj: &Trajectory) -> BTreeMap<String, f64> {
    let cfg = &p.config;
    let last = traj.steps.last().expect("trajectory has the initial record");
    let l = &last.ledger;
    let mut m = BTreeMap::new();
    m.insert("sup_free_energy".into(), last.sup_free);
    m.insert("dissipation".into(), cfg.theta_bar * (l.s_visc + l.s_heat));
    m.insert("inflow_theta".into(), l.mon_in_theta);
    m.insert("outflow_free_energy".into(), l.mon_out_free);
    m.insert("delta_inv_theta3".into(), cfg.delta * l.mon_inv_theta3);
    m.insert("eps_theta5".into(), cfg.epsilon * l.mon_theta5);
    m.insert("delta_rho_outflow".into(), cfg.delta * l.mon_rho_out);
    m.insert("delta_rho_inflow".into(), cfg.delta * l.mon_rho_in);
    m.insert("eps_delta_grad_rho".into(), cfg.epsilon * cfg.delta * l.mon_eps_delta_rho);
    m
}

/// Full report over `[t0, t1]`.
pub fn audit(p: &Problem, traj: &Trajectory, t0: f64, t1: f64, tol: &Tolerances) -> Result<BudgetReport> {
    let (a, b, steps) = window(traj, t0, t1)?;
    let d = b.ledger.diff(&a.ledger);
    let mass_residual = mass_of(&d, b.storage.mass - a.storage.mass);
    let energy_residual = energy_of(&d, b.storage.energy - a.storage.energy);
    let entropy_production = entropy_of(&d, b.storage.entropy - a.storage.entropy);

    let mut boundary_terms = BTreeMap::new();
    boundary_terms.insert("inflow_energy_flux".into(), d.e_in_flux);
    boundary_terms.insert("outflow_internal_energy".into(), d.e_out_int);
    boundary_terms.insert("outflow_entropy".into(), d.s_out);
    boundary_terms.insert("inflow_entropy".into(), d.s_in);
    boundary_terms.insert("inflow_mass".into(), d.m_in);
    boundary_terms.insert("outflow_mass".into(), d.m_out);

    let scale = p.mesh.measure() * (b.t - a.t);
    let verdicts = vec![
        Verdict::abs_le("mass_residual", mass_residual, tol.mass_per_step * steps.max(1) as f64),
        Verdict::le("energy_residual", energy_residual, tol.energy * scale.max(f64::MIN_POSITIVE)),
        Verdict::ge_neg("entropy_production", entropy_production, tol.entropy * scale),
    ];
    Ok(BudgetReport {
        window: (a.t, b.t),
        steps,
        mass_residual,
        energy_residual,
        entropy_production,
        boundary_terms,
        terms: d.entries().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        apriori: apriori_monitor(p, traj),
        verdicts,
    })
}

/// Budgets over consecutive step windows, as `(t0, t1, mass, energy, entropy)`.
pub fn windowed(traj: &Trajectory) -> Vec<[f64; 5]> {
    traj.steps
        .windows(2)
        .map(|w| {
            let d = w[1].ledger.diff(&w[0].ledger);
            [
                w[0].t,
                w[1].t,
                mass_of(&d, w[1].storage.mass - w[0].storage.mass),
                energy_of(&d, w[1].storage.energy - w[0].storage.energy),
                entropy_of(&d, w[1].storage.entropy - w[0].storage.entropy),
            ]
        })
        .collect()
}

/// Cell averages of a fine-mesh state on a mesh `ratio` times coarser,
/// averaging mass, momentum and internal energy.
pub fn restrict(p_fine: &Problem, fine: &FieldState, ratio: usize) -> Result<FieldState> {
    let cfg = &p_fine.config;
    let c = Conserved::from_fields(&p_fine.eos, cfg, fine);
    let n = fine.len() / ratio;
    let avg = |v: &[f64], i: usize| v[i * ratio..(i + 1) * ratio].iter().sum::<f64>() / ratio as f64;
    let mut out = FieldState { t: fine.t, rho: vec![0.0; n], u: vec![0.0; n], theta: vec![0.0; n] };
    for i in 0..n {
        let rho = avg(&c.rho, i);
        let eint = avg(&c.eint, i);
        let hint = avg(&fine.theta, i);
        out.rho[i] = rho;
        out.u[i] = avg(&c.m, i) / rho;
        out.theta[i] = temperature_from_energy(&p_fine.eos, cfg.delta, rho, eint, hint)?;
    }
    Ok(out)
}

/// Relative-energy trace of a coarse run against a finer reference run,
/// with the envelope `E(t) <= (E(0) + eta) exp(L t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakStrongTrace {
    pub trace: RelEnergyTrace,
    pub eta: f64,
    pub rate: f64,
}

impl WeakStrongTrace {
    pub fn envelope(&self, t: f64) -> f64 {
        (self.trace.integrals[0] + self.eta) * (self.rate * t).exp()
    }

    /// Whether every trace point sits under the envelope, to rounding.
    pub fn enveloped(&self) -> bool {
        self.trace
            .times
            .iter()
            .zip(&self.trace.integrals)
            .all(|(&t, &e)| e <= self.envelope(t) * (1.0 + 1e-12) + 1e-300)
    }
}

fn same_mesh_family(c: &Mesh1D, f: &Mesh1D) -> Result<usize> {
    let tol = 1e-12 * (c.x1 - c.x0).abs();
    if (c.x0 - f.x0).abs() > tol || (c.x1 - f.x1).abs() > tol {
        return Err(NsfError::Misuse("coarse and fine runs cover different domains".into()));
    }
    if f.n % c.n != 0 || f.n / c.n < 4 {
        return Err(NsfError::Misuse(format!(
            "reference mesh must be an integer factor of at least 4 finer; got {} vs {} cells",
            f.n, c.n
        )));
    }
    Ok(f.n / c.n)
}

/// Growth rate and offset of the tightest exponential envelope: the rate is
/// the least-squares slope of `log E` (clamped at zero) and the offset the
/// smallest lift of `E(0)` that keeps every point below the envelope.
pub fn gronwall_fit(times: &[f64], values: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(_, &e)| e > 0.0)
        .map(|(&t, &e)| (t, e.ln()))
        .collect();
    let rate = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - ml)).sum();
        if sxx > 0.0 {
            (sxy / sxx).max(0.0)
        } else {
            0.0
        }
    } else {
        0.0
    };
    let e0 = values.first().copied().unwrap_or(0.0);
    let lift = times
        .iter()
        .zip(values)
        .map(|(&t, &e)| e * (-rate * t).exp())
        .fold(e0, f64::max);
    (lift - e0, rate)
}

/// Relative energy of `coarse` with the cell-averaged `fine` run as reference,
/// at every snapshot time shared by both runs.
pub fn weak_strong_trace(
    p_coarse: &Problem,
    coarse: &Trajectory,
    p_fine: &Problem,
    fine: &Trajectory,
) -> Result<WeakStrongTrace> {
    let ratio = same_mesh_family(&p_coarse.mesh, &p_fine.mesh)?;
    if p_coarse.eos != p_fine.eos || p_coarse.transport != p_fine.transport {
        return Err(NsfError::Misuse("coarse and fine runs use different constitutive data".into()));
    }
    if coarse.snapshots.len() != fine.snapshots.len() {
        return Err(NsfError::Misuse(format!(
            "runs have {} and {} snapshots",
            coarse.snapshots.len(),
            fine.snapshots.len()
        )));
    }
    let mut trace = RelEnergyTrace::new(format!("cell average of {}-cell run", p_fine.mesh.n));
    for (c, f) in coarse.snapshots.iter().zip(&fine.snapshots) {
        if (c.t - f.t).abs() > 1e-12 * (1.0 + c.t.abs()) {
            return Err(NsfError::Misuse(format!("snapshot times differ: {} vs {}", c.t, f.t)));
        }
        let reference = if ratio == 1 { f.clone() } else { restrict(p_fine, f, ratio)? };
        let fields: Vec<ThermoState> = c.cells();
        let refs: Vec<ThermoState> = reference.cells();
        let sample = relative_energy_integral_split(&p_coarse.eos, &fields, &refs, &p_coarse.mesh, p_coarse.config.exec)?;
        trace.push(c.t, sample);
    }
    let (eta, rate) = gronwall_fit(&trace.times, &trace.integrals);
    Ok(WeakStrongTrace { trace, eta, rate })
}

/// Trace of a run against itself, which must vanish identically.
pub fn self_trace(p: &Problem, traj: &Trajectory) -> Result<WeakStrongTrace> {
    let mut trace = RelEnergyTrace::new("self");
    for s in &traj.snapshots {
        let cells = s.cells();
        let sample = relative_energy_integral_split(&p.eos, &cells, &cells, &p.mesh, p.config.exec)?;
        trace.push(s.t, sample);
    }
    let (eta, rate) = gronwall_fit(&trace.times, &trace.integrals);
    Ok(WeakStrongTrace { trace, eta, rate })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gronwall_fit_recovers_pure_exponential() {
        let t: Vec<f64> = (0..10).map(|k| 0.1 * k as f64).collect();
        let e: Vec<f64> = t.iter().map(|t| 2.0 * (0.7 * t).exp()).collect();
        let (eta, rate) = gronwall_fit(&t, &e);
        assert!((rate - 0.7).abs() < 1e-12);
        assert!(eta.abs() < 1e-12);
    }

    #[test]
    fn gronwall_fit_clamps_decay_to_zero_rate() {
        let t = [0.0, 1.0, 2.0];
        let e = [1.0, 0.5, 0.25];
        let (eta, rate) = gronwall_fit(&t, &e);
        assert_eq!(rate, 0.0);
        assert_eq!(eta, 0.0);
    }

    #[test]
    fn gronwall_fit_lifts_zero_start() {
        let t = [0.0, 1.0, 2.0];
        let e = [0.0, 1e-3, 4e-3];
        let (eta, rate) = gronwall_fit(&t, &e);
        assert!(rate > 0.0);
        assert!(eta > 0.0);
        for (t, e) in t.iter().zip(e) {
            assert!(e <= eta * (rate * t).exp() * (1.0 + 1e-12));
        }
    }
}
