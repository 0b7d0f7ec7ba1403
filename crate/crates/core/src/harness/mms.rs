//! Manufactured solutions: closed-form fields with the sources that make
//! them exact solutions of the unregularised system.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryFace, BoundarySpec};
use crate::error::Result;
use crate::solver::fluxes::{conductivity, viscosity};
use crate::solver::{FieldState, Forcing, Mesh1D, Problem, SolverConfig};
use crate::thermo::{EosSpec, PowerLaw, TransportSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MmsKind {
    ThermalRelaxation,
    AcousticSmooth,
    Throughflow,
}

impl MmsKind {
    pub const ALL: [MmsKind; 3] = [MmsKind::ThermalRelaxation, MmsKind::AcousticSmooth, MmsKind::Throughflow];

    pub fn name(self) -> &'static str {
        match self {
            MmsKind::ThermalRelaxation => "thermal_relaxation",
            MmsKind::AcousticSmooth => "acoustic_smooth",
            MmsKind::Throughflow => "throughflow",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Value with first time derivative and first and second space derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet {
    v: f64,
    t: f64,
    x: f64,
    xx: f64,
}

impl Jet {
    fn constant(v: f64) -> Self {
        Self { v, t: 0.0, x: 0.0, xx: 0.0 }
    }
}

/// A manufactured solution with its constitutive data and boundary traces.
#[derive(Debug, Clone)]
pub struct MmsCase {
    pub kind: MmsKind,
    pub eos: EosSpec,
    pub transport: TransportSpec,
    pub boundary: BoundarySpec,
    pub x0: f64,
    pub x1: f64,
    pub t_end: f64,
}

/// `1 + a sin(pi x) c(t)` and friends are all built from these profiles.
fn sin_px(x: f64) -> (f64, f64, f64) {
    let (s, c) = (PI * x).sin_cos();
    (s, PI * c, -PI * PI * s)
}

fn cos_px(x: f64) -> (f64, f64, f64) {
    let (s, c) = (PI * x).sin_cos();
    (c, -PI * s, -PI * PI * c)
}

/// `base + amp f(x) g(t)`.
fn separable(base: f64, amp: f64, fx: (f64, f64, f64), gt: (f64, f64)) -> Jet {
    Jet {
        v: base + amp * fx.0 * gt.0,
        t: amp * fx.0 * gt.1,
        x: amp * fx.1 * gt.0,
        xx: amp * fx.2 * gt.0,
    }
}

pub fn manufactured_case(kind: MmsKind) -> MmsCase {
    let eos = EosSpec::iconic(1.0, 1.0).expect("iconic closure with a = p_inf = 1 is valid");
    let walls = BoundarySpec {
        faces: vec![
            BoundaryFace { pos: 0.0, u_b: 0.0, rho_b: None, f_ib: None, wall: true },
            BoundaryFace { pos: 1.0, u_b: 0.0, rho_b: None, f_ib: None, wall: true },
        ],
    };
    let light = TransportSpec {
        lambda_exp: 0.5,
        mu: PowerLaw::new(0.01, 0.01),
        eta: PowerLaw::new(0.0, 0.0),
        kappa: PowerLaw::new(0.01, 0.01),
    };
    match kind {
        MmsKind::ThermalRelaxation => MmsCase {
            kind,
            eos,
            transport: TransportSpec::default(),
            boundary: walls,
            x0: 0.0,
            x1: 1.0,
            t_end: 0.1,
        },
        MmsKind::AcousticSmooth => MmsCase {
            kind,
            eos,
            transport: light,
            boundary: walls,
            x0: 0.0,
            x1: 1.0,
            t_end: 0.25,
        },
        MmsKind::Throughflow => {
            let mut case = MmsCase {
                kind,
                eos,
                transport: light,
                boundary: walls,
                x0: 0.0,
                x1: 1.0,
                t_end: 0.25,
            };
            // Traces at x = 0 are time independent: rho = 1, u = 1/2, theta = 1, theta_x = 0.
            let u_b = case.exact(0.0, 0.0).1;
            let f_ib = -case.eos.energy_density(1.0, 1.0) * u_b;
            case.boundary = BoundarySpec {
                faces: vec![
                    BoundaryFace { pos: 0.0, u_b, rho_b: Some(1.0), f_ib: Some(f_ib), wall: false },
                    BoundaryFace { pos: 1.0, u_b: case.exact(0.0, 1.0).1, rho_b: None, f_ib: None, wall: false },
                ],
            };
            case
        }
    }
}

impl MmsCase {
    fn jets(&self, t: f64, x: f64) -> [Jet; 3] {
        match self.kind {
            MmsKind::ThermalRelaxation => {
                let d = (-t).exp();
                [Jet::constant(1.0), Jet::constant(0.0), separable(1.0, 0.1, cos_px(x), (d, -d))]
            }
            MmsKind::AcousticSmooth => {
                let (s1, c1) = t.sin_cos();
                [
                    separable(1.0, 0.1, cos_px(x), (c1, -s1)),
                    separable(0.0, 0.1, sin_px(x), (s1, c1)),
                    separable(1.0, 0.05, cos_px(x), (c1, -s1)),
                ]
            }
            MmsKind::Throughflow => {
                let d = (-t).exp();
                let (st, ct) = t.sin_cos();
                let (s, sx, sxx) = sin_px(x);
                // sin^2(pi x) with derivatives.
                let sq = (s * s, 2.0 * s * sx, 2.0 * (sx * sx + s * sxx));
                [
                    separable(1.0, 0.1, (s, sx, sxx), (ct, -st)),
                    separable(0.5, 0.1, (s, sx, sxx), (d, -d)),
                    separable(1.0, 0.1, sq, (d, -d)),
                ]
            }
        }
    }

    /// Closed-form `(rho, u, theta)`.
    pub fn exact(&self, t: f64, x: f64) -> (f64, f64, f64) {
        let [r, u, th] = self.jets(t, x);
        (r.v, u.v, th.v)
    }

    pub fn config(&self) -> SolverConfig {
        SolverConfig { t_end: self.t_end, ..SolverConfig::default() }
    }

    /// Sources `[Q_rho, F_m, Q_e]` from the analytic derivatives.
    pub fn sources(&self, t: f64, x: f64) -> [f64; 3] {
        let [r, u, th] = self.jets(t, x);
        let cfg = self.config();
        let d = self.eos.derivatives_unchecked(r.v, th.v);
        let nu = viscosity(&self.transport, &cfg, th.v);
        let dnu = self.transport.dmu(th.v) * cfg.deviatoric_factor() + self.transport.deta(th.v);
        let k = conductivity(&self.transport, &cfg, th.v);
        let dk = self.transport.dkappa(th.v);

        let q_rho = r.t + r.x * u.v + r.v * u.x;
        let p_x = d.p_rho * r.x + d.p_theta * th.x;
        let sigma_x = dnu * th.x * u.x + nu * u.xx;
        let f_m = r.t * u.v + r.v * u.t + r.x * u.v * u.v + 2.0 * r.v * u.v * u.x + p_x - sigma_x - r.v * cfg.g;
        let drho_e = d.e + r.v * d.e_rho;
        let rho_e_t = drho_e * r.t + r.v * d.e_theta * th.t;
        let rho_e_x = drho_e * r.x + r.v * d.e_theta * th.x;
        let div_q = -(dk * th.x * th.x + k * th.xx);
        let sigma = nu * u.x;
        let q_e = rho_e_t + rho_e_x * u.v + r.v * d.e * u.x + div_q + d.p * u.x - sigma * u.x;
        [q_rho, f_m, q_e]
    }

    pub fn mesh(&self, n: usize) -> Result<Mesh1D> {
        Mesh1D::new(self.x0, self.x1, n)
    }

    pub fn problem(&self, n: usize) -> Result<Problem> {
        let mesh = self.mesh(n)?;
        Ok(Problem {
            mesh,
            eos: self.eos.clone(),
            transport: self.transport.clone(),
            boundary: self.boundary.resolve(&mesh)?,
            config: self.config(),
            forcing: Some(Arc::new(self.clone())),
        })
    }

    /// Exact fields sampled at cell centres.
    pub fn sample(&self, mesh: &Mesh1D, t: f64) -> FieldState {
        let mut s = FieldState::from_fn(mesh, |x| self.exact(t, x));
        s.t = t;
        s
    }

    /// Largest PDE residual of the closed form plus sources, with every
    /// derivative taken by fourth-order finite differences on `points`
    /// equispaced probe locations at three instants.
    pub fn residual_probe(&self, points: usize) -> f64 {
        let cfg = self.config();
        let h = 1e-3;
        let d1 = |f: &dyn Fn(f64) -> f64, y: f64| (-f(y + 2.0 * h) + 8.0 * f(y + h) - 8.0 * f(y - h) + f(y - 2.0 * h)) / (12.0 * h);
        let mut worst: f64 = 0.0;
        for &t in &[0.0, 0.5 * self.t_end, self.t_end] {
            for k in 0..points {
                let x = self.x0 + (self.x1 - self.x0) * (k as f64 + 0.5) / points as f64;
                let fields = |t: f64, x: f64| self.exact(t, x);
                let p = |t: f64, x: f64| {
                    let (r, _, th) = fields(t, x);
                    self.eos.pressure_unchecked(r, th)
                };
                let rho_e = |t: f64, x: f64| {
                    let (r, _, th) = fields(t, x);
                    self.eos.energy_density(r, th)
                };
                let u_x = |t: f64, x: f64| d1(&|y| fields(t, y).1, x);
                let sigma = |t: f64, x: f64| viscosity(&self.transport, &cfg, fields(t, x).2) * u_x(t, x);
                let q = |t: f64, x: f64| -conductivity(&self.transport, &cfg, fields(t, x).2) * d1(&|y| fields(t, y).2, x);

                let [q_rho, f_m, q_e] = self.sources(t, x);
                let r_mass = d1(&|s| fields(s, x).0, t) + d1(&|y| fields(t, y).0 * fields(t, y).1, x) - q_rho;
                let r_mom = d1(&|s| fields(s, x).0 * fields(s, x).1, t)
                    + d1(&|y| {
                        let (r, u, _) = fields(t, y);
                        r * u * u + p(t, y) - sigma(t, y)
                    }, x)
                    - fields(t, x).0 * cfg.g
                    - f_m;
                let ux = u_x(t, x);
                let r_energy = d1(&|s| rho_e(s, x), t)
                    + d1(&|y| rho_e(t, y) * fields(t, y).1 + q(t, y), x)
                    + p(t, x) * ux
                    - sigma(t, x) * ux
                    - q_e;
                worst = worst.max(r_mass.abs()).max(r_mom.abs()).max(r_energy.abs());
            }
        }
        worst
    }
}

impl Forcing for MmsCase {
    fn source(&self, t: f64, x: f64) -> [f64; 3] {
        self.sources(t, x)
    }
}
