use serde::{Deserialize, Serialize};

use crate::error::{hyp, NsfError, Result, Violation};
use crate::par::Execution;

/// Regularisation levels, time stepping and safeguards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    /// Parabolic density regularisation.
    #[serde(default)]
    pub epsilon: f64,
    /// Pressure, viscosity and heat-flux regularisation.
    #[serde(default)]
    pub delta: f64,
    #[serde(rename = "Gamma", default = "default_gamma")]
    pub gamma: f64,
    /// Dimension entering the deviatoric factor `2 (1 - 1/d)`.
    #[serde(default = "default_d")]
    pub d: u8,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    pub t_end: f64,
    /// Constant body force.
    #[serde(default)]
    pub g: f64,
    #[serde(default = "default_floor")]
    pub rho_floor: f64,
    #[serde(default = "default_floor")]
    pub theta_floor: f64,
    /// Reference temperature of the a-priori monitors.
    #[serde(default = "one")]
    pub theta_bar: f64,
    /// Upper bound on the step, applied on top of the stability limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_max: Option<f64>,
    #[serde(default = "default_rejections")]
    pub max_rejections: u32,
    #[serde(default)]
    pub exec: Execution,
}

fn default_gamma() -> f64 {
    4.0
}
fn default_d() -> u8 {
    3
}
fn default_cfl() -> f64 {
    0.4
}
fn default_floor() -> f64 {
    1e-10
}
fn one() -> f64 {
    1.0
}
fn default_rejections() -> u32 {
    20
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            delta: 0.0,
            gamma: default_gamma(),
            d: default_d(),
            cfl: default_cfl(),
            t_end: 1.0,
            g: 0.0,
            rho_floor: default_floor(),
            theta_floor: default_floor(),
            theta_bar: 1.0,
            dt_max: None,
            max_rejections: default_rejections(),
            exec: Execution::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let mut need = |ok: bool, field: &str, msg: &str| {
            if !ok {
                bad.push(Violation::new(format!("config.{field}"), hyp::SCHEMA, msg));
            }
        };
        need(self.epsilon >= 0.0 && self.epsilon.is_finite(), "epsilon", "must be finite and nonnegative");
        need(self.delta >= 0.0 && self.delta.is_finite(), "delta", "must be finite and nonnegative");
        need(self.gamma > 2.0 && self.gamma.is_finite(), "Gamma", "must exceed 2");
        need((1..=3).contains(&self.d), "d", "must be 1, 2 or 3");
        need(self.cfl > 0.0 && self.cfl < 1.0, "cfl", "must lie in (0, 1)");
        need(self.t_end >= 0.0 && self.t_end.is_finite(), "t_end", "must be finite and nonnegative");
        need(self.g.is_finite(), "g", "must be finite");
        need(self.rho_floor > 0.0, "rho_floor", "must be positive");
        need(self.theta_floor > 0.0 && self.theta_floor < 1.0, "theta_floor", "must lie in (0, 1)");
        need(self.theta_bar > 0.0 && self.theta_bar.is_finite(), "theta_bar", "must be positive");
        need(self.dt_max.map_or(true, |d| d > 0.0), "dt_max", "must be positive");
        if bad.is_empty() {
            Ok(())
        } else {
            Err(NsfError::Invalid(bad))
        }
    }

    /// `2 (1 - 1/d)`.
    pub fn deviatoric_factor(&self) -> f64 {
        2.0 * (1.0 - 1.0 / self.d as f64)
    }
}
