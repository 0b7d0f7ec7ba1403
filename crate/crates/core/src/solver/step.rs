//! SSP-RK2 time stepping with step rejection, run driver and trajectories.

use serde::Serialize;

use super::fluxes::{conductivity, viscosity};
use super::ledger::{Ledger, Storage};
use super::scheme::{evaluate, storage};
use super::state::{internal_energy_density, temperature_from_energy, Conserved, FieldState, Problem};
use crate::error::{NsfError, Result};
use crate::par::map_indexed;

/// Why a trial step was thrown away.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Rejection {
    DensityFloor { cell: usize, rho: f64 },
    TemperatureFloor { cell: usize, theta: f64 },
    Inversion { cell: usize, detail: String },
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rejection::DensityFloor { cell, rho } => write!(f, "density {rho:e} below floor in cell {cell}"),
            Rejection::TemperatureFloor { cell, theta } => write!(f, "temperature {theta:e} below floor in cell {cell}"),
            Rejection::Inversion { cell, detail } => write!(f, "temperature recovery failed in cell {cell}: {detail}"),
        }
    }
}

impl Rejection {
    fn is_floor(&self) -> bool {
        !matches!(self, Rejection::Inversion { .. })
    }
}

/// Largest stable step: acoustic, viscous, thermal and density-diffusion limits.
pub fn stable_dt(p: &Problem, s: &FieldState) -> f64 {
    let cfg = &p.config;
    let h = p.mesh.h();
    let delta = cfg.delta;
    let limits = map_indexed(cfg.exec, p.mesh.n, |i| {
        let (rho, u, th) = (s.rho[i], s.u[i], s.theta[i]);
        let d = p.eos.derivatives_unchecked(rho, th);
        let e_th = d.e_theta + delta;
        let p_rho = d.p_rho + delta * (cfg.gamma * rho.powf(cfg.gamma - 1.0) + 2.0 * rho);
        let c2 = p_rho + d.p_theta * d.p_theta * th / (rho * rho * e_th);
        let adv = h / (u.abs() + c2.max(0.0).sqrt());
        let nu = viscosity(&p.transport, cfg, th) / rho;
        let chi = conductivity(&p.transport, cfg, th) / (rho * e_th);
        let diff = nu.max(chi).max(cfg.epsilon);
        let par = if diff > 0.0 { h * h / (2.0 * diff) } else { f64::INFINITY };
        adv.min(par)
    });
    cfg.cfl * limits.into_iter().fold(f64::INFINITY, f64::min)
}

fn primitive(p: &Problem, c: &Conserved, hint: &FieldState, t: f64) -> std::result::Result<FieldState, Rejection> {
    let cfg = &p.config;
    let out = map_indexed(cfg.exec, p.mesh.n, |i| {
        let rho = c.rho[i];
        if !(rho >= cfg.rho_floor) {
            return Err(Rejection::DensityFloor { cell: i, rho });
        }
        let th = temperature_from_energy(&p.eos, cfg.delta, rho, c.eint[i], hint.theta[i])
            .map_err(|e| Rejection::Inversion { cell: i, detail: e.to_string() })?;
        if !(th >= cfg.theta_floor) {
            return Err(Rejection::TemperatureFloor { cell: i, theta: th });
        }
        Ok((rho, c.m[i] / rho, th))
    });
    let mut s = FieldState {
        t,
        rho: Vec::with_capacity(out.len()),
        u: Vec::with_capacity(out.len()),
        theta: Vec::with_capacity(out.len()),
    };
    for r in out {
        let (rho, u, th) = r?;
        s.rho.push(rho);
        s.u.push(u);
        s.theta.push(th);
    }
    Ok(s)
}

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(x, y)| x + a * y).collect()
}

fn heun(x: &[f64], dt: f64, y0: &[f64], y1: &[f64]) -> Vec<f64> {
    x.iter().zip(y0.iter().zip(y1)).map(|(x, (a, b))| x + 0.5 * dt * (a + b)).collect()
}

/// One SSP-RK2 (Heun) step of size `dt`; returns the new state and the
/// budget terms integrated over the step.
pub fn try_step(p: &Problem, s: &FieldState, dt: f64) -> std::result::Result<(FieldState, Ledger), Rejection> {
    let c0 = Conserved::from_fields(&p.eos, &p.config, s);
    let r0 = evaluate(p, s);
    let c1 = Conserved {
        rho: axpy(&c0.rho, dt, &r0.drho),
        m: axpy(&c0.m, dt, &r0.dm),
        eint: axpy(&c0.eint, dt, &r0.deint),
    };
    let s1 = primitive(p, &c1, s, s.t + dt)?;
    let r1 = evaluate(p, &s1);
    let c2 = Conserved {
        rho: heun(&c0.rho, dt, &r0.drho, &r1.drho),
        m: heun(&c0.m, dt, &r0.dm, &r1.dm),
        eint: heun(&c0.eint, dt, &r0.deint, &r1.deint),
    };
    let s2 = primitive(p, &c2, &s1, s.t + dt)?;
    let mut ledger = Ledger::default();
    ledger.axpy(0.5 * dt, &r0.rates);
    ledger.axpy(0.5 * dt, &r1.rates);
    Ok((s2, ledger))
}

/// Step with rejection: halve `dt` until the step is accepted, at most
/// `max_rejections` times.
pub fn step(p: &Problem, s: &FieldState, dt: f64) -> Result<StepOutcome> {
    let mut dt = dt;
    let mut floor_hits = 0;
    let mut rejections = 0;
    loop {
        match try_step(p, s, dt) {
            Ok((state, ledger)) => {
                return Ok(StepOutcome { state, ledger, dt, rejections, floor_hits });
            }
            Err(why) => {
                rejections += 1;
                floor_hits += why.is_floor() as u32;
                if rejections >= p.config.max_rejections {
                    return Err(NsfError::Abort {
                        t: s.t,
                        reason: format!("{rejections} consecutive rejections, last: {why}"),
                    });
                }
                dt *= 0.5;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: FieldState,
    pub ledger: Ledger,
    /// Step size actually taken.
    pub dt: f64,
    pub rejections: u32,
    pub floor_hits: u32,
}

/// Stored quantities and cumulative budget terms after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub t: f64,
    pub storage: Storage,
    pub ledger: Ledger,
    /// Largest stored-quantity `E_15` integrand seen so far.
    pub sup_free: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub snapshots: Vec<FieldState>,
    pub steps: Vec<StepRecord>,
    pub rejections: u32,
    pub floor_hits: u32,
    /// Diagnostic message and state at the time of an abort.
    pub aborted: Option<String>,
    #[serde(skip)]
    pub abort_state: Option<FieldState>,
}

impl Trajectory {
    pub fn final_state(&self) -> &FieldState {
        self.snapshots.last().expect("trajectory has the initial snapshot")
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    /// Record whose time matches `t` to rounding.
    pub fn record_at(&self, t: f64) -> Option<&StepRecord> {
        let tol = 1e-12 * (1.0 + t.abs());
        self.steps.iter().find(|r| (r.t - t).abs() <= tol)
    }

    pub fn snapshot_at(&self, t: f64) -> Option<&FieldState> {
        let tol = 1e-12 * (1.0 + t.abs());
        self.snapshots.iter().find(|s| (s.t - t).abs() <= tol)
    }

    pub fn into_result(self) -> Result<Self> {
        match &self.aborted {
            Some(msg) => Err(NsfError::Abort {
                t: self.steps.last().map_or(0.0, |r| r.t),
                reason: msg.clone(),
            }),
            None => Ok(self),
        }
    }
}

/// Integrate from `initial` to `t_end`, landing exactly on every output time.
pub fn run(p: &Problem, initial: &FieldState, output_times: &[f64]) -> Trajectory {
    let t_end = p.config.t_end;
    let mut outputs: Vec<f64> = output_times.iter().copied().filter(|t| *t > initial.t && *t < t_end).collect();
    if t_end > initial.t {
        outputs.push(t_end);
    }
    outputs.sort_by(f64::total_cmp);
    outputs.dedup();

    let mut state = initial.clone();
    let st0 = storage(p, &state);
    let mut traj = Trajectory {
        snapshots: vec![state.clone()],
        steps: vec![StepRecord { t: state.t, storage: st0, ledger: Ledger::default(), sup_free: st0.free }],
        rejections: 0,
        floor_hits: 0,
        aborted: None,
        abort_state: None,
    };
    let mut cum = Ledger::default();
    let mut sup_free = st0.free;
    for &target in &outputs {
        while state.t < target {
            let mut dt = stable_dt(p, &state);
            if let Some(m) = p.config.dt_max {
                dt = dt.min(m);
            }
            let remaining = target - state.t;
            // Avoid leaving a sliver before the output time.
            let landing = dt >= remaining || remaining - dt < 1e-9 * dt;
            if landing {
                dt = remaining;
            }
            match step(p, &state, dt) {
                Ok(out) => {
                    traj.rejections += out.rejections;
                    traj.floor_hits += out.floor_hits;
                    let mut next = out.state;
                    next.t = if landing && out.dt == dt { target } else { state.t + out.dt };
                    cum.axpy(1.0, &out.ledger);
                    let st = storage(p, &next);
                    sup_free = sup_free.max(st.free);
                    traj.steps.push(StepRecord { t: next.t, storage: st, ledger: cum, sup_free });
                    state = next;
                }
                Err(e) => {
                    traj.aborted = Some(e.to_string());
                    traj.abort_state = Some(state.clone());
                    return traj;
                }
            }
        }
        traj.snapshots.push(state.clone());
    }
    traj
}

/// Advance only the internal-energy balance with density and velocity frozen.
pub fn temperature_subproblem_step(p: &Problem, frozen: &FieldState, theta: &[f64], dt: f64) -> Result<Vec<f64>> {
    let cfg = &p.config;
    let mut s = frozen.clone();
    s.theta = theta.to_vec();
    let eint0: Vec<f64> = (0..s.len()).map(|i| internal_energy_density(&p.eos, cfg.delta, s.rho[i], s.theta[i])).collect();
    let recover = |eint: &[f64], hint: &[f64]| -> Result<Vec<f64>> {
        let out = map_indexed(cfg.exec, eint.len(), |i| temperature_from_energy(&p.eos, cfg.delta, s.rho[i], eint[i], hint[i]));
        out.into_iter().collect()
    };
    let r0 = evaluate(p, &s);
    let e1 = axpy(&eint0, dt, &r0.deint);
    let mut s1 = s.clone();
    s1.theta = recover(&e1, &s.theta)?;
    s1.t += dt;
    let r1 = evaluate(p, &s1);
    let e2 = heun(&eint0, dt, &r0.deint, &r1.deint);
    recover(&e2, &s1.theta)
}
