//! Time-integrated budget terms recorded by the integrator.
//!
//! Each entry is the integral over space of one term of the mass, energy or
//! entropy balance, accumulated with the same weights the time integrator
//! applies to the right-hand side, so storage changes and recorded terms
//! telescope exactly up to rounding.

use serde::Serialize;

macro_rules! ledger {
    ($( $(#[$doc:meta])* $name:ident ),* $(,)?) => {
        #[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
        pub struct Ledger {
            $( $(#[$doc])* pub $name: f64, )*
        }

        impl Ledger {
            pub const NAMES: &'static [&'static str] = &[$( stringify!($name) ),*];

            /// `self += a * other`.
            pub fn axpy(&mut self, a: f64, other: &Ledger) {
                $( self.$name += a * other.$name; )*
            }

            pub fn diff(&self, earlier: &Ledger) -> Ledger {
                Ledger { $( $name: self.$name - earlier.$name, )* }
            }

            pub fn entries(&self) -> Vec<(&'static str, f64)> {
                vec![$( (stringify!($name), self.$name) ),*]
            }
        }
    };
}

ledger! {
    /// Outward mass flux through inflow faces, `rho_b u_b.n`.
    m_in,
    /// Outward mass flux through outflow faces, `rho u_b.n`.
    m_out,
    m_source,

    /// `rho e_delta u_b.n` on outflow faces.
    e_out_int,
    /// `delta (rho^G/(G-1) + rho^2) u_b.n` on outflow faces.
    e_out_delta,
    /// Prescribed `F_ib` on inflow faces.
    e_in_flux,
    /// Bregman remainder of `rho^G/(G-1)` at inflow faces, times `-delta u_b.n`.
    e_in_delta_breg,
    /// `-delta (rho - rho_b)^2 u_b.n` on inflow faces.
    e_in_delta_sq,
    /// `-(rho u^2 + p_delta) du_b/dx`.
    e_conv_ub,
    /// `rho u u_b du_b/dx`.
    e_kin_ub,
    /// `sigma du_b/dx`.
    e_visc_ub,
    /// `rho g (u - u_b)`.
    e_grav,
    /// `delta / theta^2`.
    e_src_delta,
    /// `-eps theta^5`.
    e_src_eps,
    /// `-delta rho_b^G/(G-1) u_b.n` on inflow faces.
    e_in_delta_rhs,
    /// `eps rho_x (u - u_b)_x u_b`.
    e_eps_ub,
    /// Power of the external sources.
    e_source,

    /// `rho s_delta u_b.n` on outflow faces.
    s_out,
    /// Inflow entropy terms evaluated at the adjacent cell temperature.
    s_in,
    /// Heat-conduction dissipation `-q . grad theta / theta^2`.
    s_heat,
    /// Viscous dissipation `S : grad u / theta`.
    s_visc,
    /// `delta / theta^3`.
    s_delta_src,
    /// `eps delta (G rho^(G-2) + 2) rho_x^2 / theta`.
    s_eps_rho,
    /// `-eps theta^4`.
    s_eps_theta,
    /// `eps grad rho . grad (mu_hat)` with `mu_hat = (e_delta - theta s_delta + p/rho)/theta`.
    s_eps_mu,
    /// Entropy supplied by the external sources.
    s_source,

    /// `int theta^-3` (weighted by delta when reported).
    mon_inv_theta3,
    /// `int theta^5` (weighted by eps).
    mon_theta5,
    /// `int (1/theta + theta^3 |u_b.n|)` over inflow faces.
    mon_in_theta,
    /// `rho (e_delta - theta_bar s_delta) u_b.n` over outflow faces.
    mon_out_free,
    /// `(rho^G/(G-1) + rho^2) |u_b.n|` over outflow faces (weighted by delta).
    mon_rho_out,
    /// `(rho - rho_b)^2 |u_b.n|` over inflow faces (weighted by delta).
    mon_rho_in,
    /// `(G rho^(G-2) + 2) rho_x^2 / theta` (weighted by eps delta).
    mon_eps_delta_rho,
}

/// Spatial integrals of the stored quantities at one instant.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Storage {
    pub mass: f64,
    /// `int 1/2 rho |u - u_b|^2 + delta (rho^G/(G-1) + rho^2) + rho e_delta`.
    pub energy: f64,
    /// `int rho s_delta` with `s_delta = s + delta log theta`.
    pub entropy: f64,
    /// `energy - theta_bar entropy`.
    pub free: f64,
    /// Plain total energy `int 1/2 rho u^2 + rho e_delta`.
    pub total_energy: f64,
}
