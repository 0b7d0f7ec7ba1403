//! Semi-discrete right-hand side: first-order upwind convection, central
//! pressure, two-point diffusion, one ghost layer per boundary face.

use super::fluxes::{conductivity, viscosity};
use super::ledger::{Ledger, Storage};
use super::state::{FieldState, Problem};
use crate::boundary::{Face, FaceKind};
use crate::par::{map_indexed, pairwise_sum};

/// Time derivatives of the conserved variables plus the budget rates.
#[derive(Debug, Clone)]
pub struct Rhs {
    pub drho: Vec<f64>,
    pub dm: Vec<f64>,
    pub deint: Vec<f64>,
    pub rates: Ledger,
}

/// Per-cell thermodynamic data.
#[derive(Debug, Clone, Copy)]
struct CellData {
    rho: f64,
    u: f64,
    theta: f64,
    p: f64,
    p_delta: f64,
    e_delta: f64,
    eint: f64,
    s_delta: f64,
    mu_hat: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct FaceFlux {
    u: f64,
    mass: f64,
    mom: f64,
    energy: f64,
    /// `sigma (du) / h`, the viscous power density carried by the face.
    phi: f64,
    sigma: f64,
    d_heat: f64,
    eps_mu: f64,
}

fn cell_data(p: &Problem, rho: f64, u: f64, theta: f64) -> CellData {
    let cfg = &p.config;
    let d = p.eos.derivatives_unchecked(rho, theta);
    let delta = cfg.delta;
    let p_delta = d.p + delta * (rho.powf(cfg.gamma) + rho * rho);
    let e_delta = d.e + delta * theta;
    let s_delta = d.s + delta * theta.ln();
    CellData {
        rho,
        u,
        theta,
        p: d.p,
        p_delta,
        e_delta,
        eint: rho * e_delta,
        s_delta,
        mu_hat: (e_delta - theta * s_delta + d.p / rho) / theta,
    }
}

/// Ghost-layer values `(rho, u, theta)` across a boundary face.
fn ghost(face: &Face, adj: &CellData) -> (f64, f64, f64) {
    let rho = if face.kind == FaceKind::In { face.rho_b } else { adj.rho };
    (rho, 2.0 * face.u_b - adj.u, adj.theta)
}

pub(crate) fn delta_potential(gamma: f64, rho: f64) -> f64 {
    rho.powf(gamma) / (gamma - 1.0) + rho * rho
}

/// Stored quantities of a field state.
pub fn storage(p: &Problem, s: &FieldState) -> Storage {
    let cfg = &p.config;
    let h = p.mesh.h();
    let n = p.mesh.n;
    let rows = map_indexed(cfg.exec, n, |i| {
        let c = cell_data(p, s.rho[i], s.u[i], s.theta[i]);
        let w = s.u[i] - p.u_b_at(p.mesh.center(i));
        let energy = 0.5 * c.rho * w * w + cfg.delta * delta_potential(cfg.gamma, c.rho) + c.eint;
        let total = 0.5 * c.rho * c.u * c.u + c.eint;
        [c.rho, energy, c.rho * c.s_delta, total]
    });
    let col = |k: usize| h * pairwise_sum(&rows.iter().map(|r| r[k]).collect::<Vec<_>>());
    let (mass, energy, entropy, total_energy) = (col(0), col(1), col(2), col(3));
    Storage {
        mass,
        energy,
        entropy,
        free: energy - cfg.theta_bar * entropy,
        total_energy,
    }
}

/// Evaluate the semi-discrete right-hand side at time `t`.
pub fn evaluate(p: &Problem, s: &FieldState) -> Rhs {
    let cfg = &p.config;
    let exec = cfg.exec;
    let n = p.mesh.n;
    let h = p.mesh.h();
    let eps = cfg.epsilon;
    let delta = cfg.delta;
    let gamma = cfg.gamma;

    let cells: Vec<CellData> = map_indexed(exec, n, |i| cell_data(p, s.rho[i], s.u[i], s.theta[i]));
    let left = p.boundary.left;
    let right = p.boundary.right;
    let gl = ghost(&left, &cells[0]);
    let gr = ghost(&right, &cells[n - 1]);

    // Extended primitive arrays, ghosts at both ends.
    let ext = |k: usize| -> (f64, f64, f64) {
        if k == 0 {
            gl
        } else if k == n + 1 {
            gr
        } else {
            let c = &cells[k - 1];
            (c.rho, c.u, c.theta)
        }
    };

    let faces: Vec<FaceFlux> = map_indexed(exec, n + 1, |f| {
        let (rl, ul, tl) = ext(f);
        let (rr, ur, tr) = ext(f + 1);
        let th_f = 0.5 * (tl + tr);
        let nu = viscosity(&p.transport, cfg, th_f);
        let du = ur - ul;
        let sigma = nu * du / h;
        let phi = sigma * du / h;
        let boundary = if f == 0 {
            Some((&left, &cells[0]))
        } else if f == n {
            Some((&right, &cells[n - 1]))
        } else {
            None
        };
        match boundary {
            None => {
                let cl = &cells[f - 1];
                let cr = &cells[f];
                let u_f = 0.5 * (ul + ur);
                let (up, rho_up, u_up) = if u_f >= 0.0 { (cl, rl, ul) } else { (cr, rr, ur) };
                let mass_conv = u_f * rho_up;
                let k = conductivity(&p.transport, cfg, th_f);
                let q = -k * (tr - tl) / h;
                FaceFlux {
                    u: u_f,
                    mass: mass_conv - eps * (rr - rl) / h,
                    mom: mass_conv * u_up + 0.5 * (cl.p_delta + cr.p_delta) - sigma,
                    energy: u_f * up.eint + q,
                    phi,
                    sigma,
                    d_heat: -q * (tr - tl) / (tl * tr),
                    eps_mu: eps * (rr - rl) * (cr.mu_hat - cl.mu_hat) / h,
                }
            }
            Some((face, adj)) => {
                let ub = face.u_b;
                let (mass, energy) = match face.kind {
                    FaceKind::In => (face.rho_b * ub, face.f_ib * face.normal),
                    FaceKind::Out => (adj.rho * ub, adj.eint * ub),
                    FaceKind::Wall => (0.0, 0.0),
                };
                FaceFlux {
                    u: ub,
                    mass,
                    mom: mass * ub + adj.p_delta - sigma,
                    energy,
                    phi,
                    sigma,
                    d_heat: 0.0,
                    eps_mu: 0.0,
                }
            }
        }
    });

    let ub_slope = p.u_b_slope();
    let forcing = p.forcing.as_deref();
    // Per-cell rates and the volume contributions to the ledger.
    let rows: Vec<[f64; 20]> = map_indexed(exec, n, |i| {
        let c = &cells[i];
        let (fl, fr) = (&faces[i], &faces[i + 1]);
        let x = p.mesh.center(i);
        let u_x = (fr.u - fl.u) / h;
        let rho_x = (ext(i + 2).0 - ext(i).0) / (2.0 * h);
        let phi = 0.5 * (fl.phi + fr.phi);
        let sigma = 0.5 * (fl.sigma + fr.sigma);
        let th = c.theta;
        let [q_rho, f_m, q_e] = forcing.map_or([0.0; 3], |fo| fo.source(s.t, x));

        let reg_rho = if eps > 0.0 && delta > 0.0 {
            eps * delta * (gamma * c.rho.powf(gamma - 2.0) + 2.0) * rho_x * rho_x
        } else {
            0.0
        };
        let src_delta = if delta > 0.0 { delta / (th * th) } else { 0.0 };
        let src_eps = if eps > 0.0 { -eps * th.powi(5) } else { 0.0 };

        let drho = -(fr.mass - fl.mass) / h + q_rho;
        let dm = -(fr.mom - fl.mom) / h + c.rho * cfg.g - eps * rho_x * u_x + f_m;
        let deint = -(fr.energy - fl.energy) / h - c.p * u_x + phi + reg_rho + src_delta + src_eps + q_e;

        let ub = p.u_b_at(x);
        let w = c.u - ub;
        let e_source = q_e + f_m * w - 0.5 * q_rho * (c.u * c.u - ub * ub)
            + delta * (gamma / (gamma - 1.0) * c.rho.powf(gamma - 1.0) + 2.0 * c.rho) * q_rho;
        let kin_mon = (gamma * c.rho.powf(gamma - 2.0) + 2.0) * rho_x * rho_x / th;
        [
            drho,
            dm,
            deint,
            q_rho,
            -(c.rho * c.u * c.u + c.p_delta) * ub_slope,
            c.rho * c.u * ub * ub_slope,
            sigma * ub_slope,
            c.rho * cfg.g * w,
            src_delta,
            src_eps,
            eps * rho_x * (u_x - ub_slope) * ub,
            e_source,
            phi / th,
            src_delta / th,
            reg_rho / th,
            src_eps / th,
            q_e / th - c.mu_hat * q_rho,
            th.powi(-3),
            th.powi(5),
            kin_mon,
        ]
    });
    let col = |k: usize| h * pairwise_sum(&rows.iter().map(|r| r[k]).collect::<Vec<_>>());

    let mut r = Ledger {
        m_source: col(3),
        e_conv_ub: col(4),
        e_kin_ub: col(5),
        e_visc_ub: col(6),
        e_grav: col(7),
        e_src_delta: col(8),
        e_src_eps: col(9),
        e_eps_ub: col(10),
        e_source: col(11),
        s_visc: col(12),
        s_delta_src: col(13),
        s_eps_rho: col(14),
        s_eps_theta: col(15),
        s_source: col(16),
        mon_inv_theta3: col(17),
        mon_theta5: col(18),
        mon_eps_delta_rho: col(19),
        s_heat: pairwise_sum(&faces.iter().map(|f| f.d_heat).collect::<Vec<_>>()),
        s_eps_mu: pairwise_sum(&faces.iter().map(|f| f.eps_mu).collect::<Vec<_>>()),
        ..Ledger::default()
    };

    for (face, adj) in [(&left, &cells[0]), (&right, &cells[n - 1])] {
        let vn = face.vn;
        match face.kind {
            FaceKind::In => {
                let (rb, th) = (face.rho_b, adj.theta);
                let inv = 1.0 / (gamma - 1.0);
                r.m_in += rb * vn;
                r.e_in_flux += face.f_ib;
                if delta > 0.0 {
                    let rr = adj.rho;
                    let breg = inv * rb.powf(gamma) - gamma * inv * rr.powf(gamma - 1.0) * (rb - rr) - inv * rr.powf(gamma);
                    r.e_in_delta_breg -= delta * breg * vn;
                    r.e_in_delta_sq -= delta * (rr - rb) * (rr - rb) * vn;
                    r.e_in_delta_rhs -= delta * inv * rb.powf(gamma) * vn;
                }
                let d = p.eos.derivatives_unchecked(rb, th);
                r.s_in += delta * rb * (1.0 - th.ln()) * vn - face.f_ib / th + (d.e / th - d.s) * rb * vn;
                r.mon_in_theta += 1.0 / th + th.powi(3) * vn.abs();
                r.mon_rho_in += (adj.rho - rb) * (adj.rho - rb) * vn.abs();
            }
            FaceKind::Out => {
                r.m_out += adj.rho * vn;
                r.e_out_int += adj.eint * vn;
                r.e_out_delta += delta * delta_potential(gamma, adj.rho) * vn;
                r.s_out += adj.rho * adj.s_delta * vn;
                r.mon_out_free += adj.rho * (adj.e_delta - cfg.theta_bar * adj.s_delta) * vn;
                r.mon_rho_out += delta_potential(gamma, adj.rho) * vn.abs();
            }
            FaceKind::Wall => {}
        }
    }

    let mut drho = Vec::with_capacity(n);
    let mut dm = Vec::with_capacity(n);
    let mut deint = Vec::with_capacity(n);
    for row in &rows {
        drho.push(row[0]);
        dm.push(row[1]);
        deint.push(row[2]);
    }
    Rhs { drho, dm, deint, rates: r }
}
