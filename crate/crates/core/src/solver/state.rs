use std::sync::Arc;

use serde::Serialize;

use super::config::SolverConfig;
use super::mesh::Mesh1D;
use crate::boundary::{Boundary, FaceKind};
use crate::error::{NsfError, Result};
use crate::thermo::{EosSpec, ThermoState, TransportSpec};

/// Volumetric sources `(Q_rho, F_m, Q_e)` added to the three balances.
pub trait Forcing: Send + Sync + std::fmt::Debug {
    fn source(&self, t: f64, x: f64) -> [f64; 3];
}

/// Everything a run needs besides the initial state.
#[derive(Debug, Clone)]
pub struct Problem {
    pub mesh: Mesh1D,
    pub eos: EosSpec,
    pub transport: TransportSpec,
    pub boundary: Boundary,
    pub config: SolverConfig,
    pub forcing: Option<Arc<dyn Forcing>>,
}

impl Problem {
    /// Boundary velocity extended linearly into the domain.
    pub fn u_b_at(&self, x: f64) -> f64 {
        let (l, r) = (self.boundary.left.u_b, self.boundary.right.u_b);
        l + (r - l) * (x - self.mesh.x0) / self.mesh.measure()
    }

    pub fn u_b_slope(&self) -> f64 {
        (self.boundary.right.u_b - self.boundary.left.u_b) / self.mesh.measure()
    }

    pub fn has_inflow(&self) -> bool {
        self.boundary.faces().iter().any(|f| f.kind == FaceKind::In)
    }
}

/// Cell values of density, velocity and temperature at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldState {
    pub t: f64,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub theta: Vec<f64>,
}

impl FieldState {
    pub fn uniform(mesh: &Mesh1D, rho: f64, u: f64, theta: f64) -> Self {
        Self {
            t: 0.0,
            rho: vec![rho; mesh.n],
            u: vec![u; mesh.n],
            theta: vec![theta; mesh.n],
        }
    }

    pub fn from_fn(mesh: &Mesh1D, f: impl Fn(f64) -> (f64, f64, f64)) -> Self {
        let mut s = Self::uniform(mesh, 0.0, 0.0, 0.0);
        for i in 0..mesh.n {
            let (r, u, th) = f(mesh.center(i));
            s.rho[i] = r;
            s.u[i] = u;
            s.theta[i] = th;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn cell(&self, i: usize) -> ThermoState {
        ThermoState::new_1d(self.rho[i], self.u[i], self.theta[i])
    }

    pub fn cells(&self) -> Vec<ThermoState> {
        (0..self.len()).map(|i| self.cell(i)).collect()
    }

    pub fn check_shape(&self, mesh: &Mesh1D) -> Result<()> {
        if self.rho.len() == mesh.n && self.u.len() == mesh.n && self.theta.len() == mesh.n {
            Ok(())
        } else {
            Err(NsfError::Shape(format!(
                "mesh has {} cells, fields have {}/{}/{}",
                mesh.n,
                self.rho.len(),
                self.u.len(),
                self.theta.len()
            )))
        }
    }
}

/// Conserved variables advanced by the time integrator: `rho`, `rho u` and
/// `rho e_delta` with `e_delta = e + delta theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct Conserved {
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    pub eint: Vec<f64>,
}

pub(crate) fn internal_energy_density(eos: &EosSpec, delta: f64, rho: f64, theta: f64) -> f64 {
    eos.energy_density(rho, theta) + delta * rho * theta
}

/// `e_delta(rho, .)` is strictly increasing, so the temperature is recovered by monotone inversion.
pub(crate) fn temperature_from_energy(eos: &EosSpec, delta: f64, rho: f64, eint: f64, hint: f64) -> Result<f64> {
    crate::thermo::invert::invert_increasing(
        |t| {
            let d = eos.derivatives_unchecked(rho, t);
            (rho * (d.e + delta * t), rho * (d.e_theta + delta))
        },
        eint,
        Some(hint),
    )
}

impl Conserved {
    pub fn from_fields(eos: &EosSpec, cfg: &SolverConfig, s: &FieldState) -> Self {
        let n = s.len();
        let mut c = Self {
            rho: s.rho.clone(),
            m: vec![0.0; n],
            eint: vec![0.0; n],
        };
        for i in 0..n {
            c.m[i] = s.rho[i] * s.u[i];
            c.eint[i] = internal_energy_density(eos, cfg.delta, s.rho[i], s.theta[i]);
        }
        c
    }
}
