//! Randomised consistency checks of a closure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::thermo::EosSpec;

/// Seed from `NSF_SEED`, falling back to a fixed value.
pub fn seed_from_env() -> u64 {
    std::env::var("NSF_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(20_240_917)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Log-uniform sample in `[lo, hi]`.
pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EosCheck {
    pub samples: usize,
    pub seed: u64,
    pub max_gibbs_theta: f64,
    pub max_gibbs_rho: f64,
    pub min_p_rho: f64,
    pub min_e_theta: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Gibbs residuals and stability margins at `samples` log-uniform states
/// with `rho, theta` in `[range.0, range.1]`.
pub fn eos_check(eos: &EosSpec, samples: usize, seed: u64, range: (f64, f64), tol: f64) -> EosCheck {
    let mut r = rng(seed);
    let mut out = EosCheck {
        samples,
        seed,
        max_gibbs_theta: 0.0,
        max_gibbs_rho: 0.0,
        min_p_rho: f64::INFINITY,
        min_e_theta: f64::INFINITY,
        tol,
        pass: true,
    };
    for _ in 0..samples {
        let rho = log_uniform(&mut r, range.0, range.1);
        let theta = log_uniform(&mut r, range.0, range.1);
        match (eos.gibbs_residual(rho, theta), eos.stability_margins(rho, theta)) {
            (Ok((g1, g2)), Ok((pr, et))) => {
                out.max_gibbs_theta = out.max_gibbs_theta.max(g1.abs());
                out.max_gibbs_rho = out.max_gibbs_rho.max(g2.abs());
                out.min_p_rho = out.min_p_rho.min(pr);
                out.min_e_theta = out.min_e_theta.min(et);
            }
            _ => out.pass = false,
        }
    }
    out.pass &= out.max_gibbs_theta < tol && out.max_gibbs_rho < tol && out.min_p_rho > 0.0 && out.min_e_theta > 0.0;
    out
}
