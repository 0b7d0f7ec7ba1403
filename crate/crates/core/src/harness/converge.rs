//! Grid-refinement studies on manufactured solutions.

use std::collections::BTreeMap;

use serde::Serialize;

use super::mms::MmsCase;
use crate::budgets::energy_budget;
use crate::error::{NsfError, Result};
use crate::par::{map_slice, Execution};
use crate::solver::run;

pub const FIELDS: [&str; 3] = ["rho", "u", "theta"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldConvergence {
    /// L1 error at the final time, one per resolution.
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log h`.
    pub order: f64,
    /// Whether the errors decrease strictly with refinement.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub case: String,
    pub resolutions: Vec<usize>,
    pub t_end: f64,
    pub fields: BTreeMap<String, FieldConvergence>,
    /// Energy balance residual over the whole run, per resolution.
    pub energy_residuals: Vec<f64>,
    pub energy_order: f64,
    pub steps: Vec<usize>,
}

impl ConvergenceReport {
    /// Non-monotone sequences are reported instead of being fitted silently.
    pub fn flagged(&self) -> Vec<&str> {
        self.fields.iter().filter(|(_, f)| !f.monotone).map(|(k, _)| k.as_str()).collect()
    }
}

/// Least-squares slope of `log e` against `log h`.
pub fn observed_order(h: &[f64], e: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = h.iter().zip(e).map(|(h, e)| (h.ln(), e.max(f64::MIN_POSITIVE).ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

struct Level {
    errors: [f64; 3],
    energy: f64,
    steps: usize,
}

fn level(case: &MmsCase, n: usize, t_end: f64, cfl: f64) -> Result<Level> {
    let mut p = case.problem(n)?;
    p.config.t_end = t_end;
    p.config.cfl = cfl;
    p.config.exec = Execution::Sequential;
    let init = case.sample(&p.mesh, 0.0);
    let traj = run(&p, &init, &[]).into_result()?;
    let fin = traj.final_state();
    let exact = case.sample(&p.mesh, fin.t);
    let h = p.mesh.h();
    let l1 = |a: &[f64], b: &[f64]| h * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>();
    let energy = energy_budget(&traj, 0.0, fin.t)?.0;
    Ok(Level {
        errors: [l1(&fin.rho, &exact.rho), l1(&fin.u, &exact.u), l1(&fin.theta, &exact.theta)],
        energy,
        steps: traj.n_steps(),
    })
}

/// Run `case` on every resolution (each twice the previous) and fit orders.
pub fn convergence_study(case: &MmsCase, resolutions: &[usize], t_end: Option<f64>, cfl: Option<f64>, exec: Execution) -> Result<ConvergenceReport> {
    if resolutions.len() < 3 || resolutions.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(NsfError::Misuse(format!("need at least three resolutions, each doubling the previous; got {resolutions:?}")));
    }
    let t_end = t_end.unwrap_or(case.t_end);
    let cfl = cfl.unwrap_or(case.config().cfl);
    let levels = map_slice(exec, resolutions, |&n| level(case, n, t_end, cfl));
    let levels: Vec<Level> = levels.into_iter().collect::<Result<_>>()?;
    let h: Vec<f64> = resolutions.iter().map(|&n| (case.x1 - case.x0) / n as f64).collect();
    let mut fields = BTreeMap::new();
    for (k, name) in FIELDS.iter().enumerate() {
        let errors: Vec<f64> = levels.iter().map(|l| l.errors[k]).collect();
        fields.insert(
            name.to_string(),
            FieldConvergence {
                order: observed_order(&h, &errors),
                monotone: errors.windows(2).all(|w| w[1] < w[0]),
                errors,
            },
        );
    }
    let energy_residuals: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    let abs: Vec<f64> = energy_residuals.iter().map(|e| e.abs()).collect();
    Ok(ConvergenceReport {
        case: case.kind.name().into(),
        resolutions: resolutions.to_vec(),
        t_end,
        fields,
        energy_order: observed_order(&h, &abs),
        energy_residuals,
        steps: levels.iter().map(|l| l.steps).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_exact_power_law() {
        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|h: &f64| 3.0 * h.powf(1.5)).collect();
        assert!((observed_order(&h, &e) - 1.5).abs() < 1e-12);
    }
}
