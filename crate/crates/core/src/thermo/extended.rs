use super::eos::EosSpec;
use super::invert::invert_increasing;
use crate::error::{NsfError, Result};

/// Anchor of the rays used to approach boundary points of the admissible set.
const ANCHOR: (f64, f64) = (1.0, 1.0);
const RAY_RTOL: f64 = 1e-6;
const RAY_MAX_HALVINGS: usize = 80;

impl EosSpec {
    /// Whether `(rho, S)` lies in the open admissible set.
    pub fn is_interior(&self, rho: f64, s: f64) -> bool {
        rho > 0.0 && rho.is_finite() && s.is_finite() && (!self.third_law || s > 0.0)
    }

    /// Temperature solving `rho s(rho, theta) = S`.
    pub fn temperature_from_entropy(&self, rho: f64, s_total: f64, hint: Option<f64>) -> Result<f64> {
        if !self.is_interior(rho, s_total) {
            return Err(NsfError::OutOfDomain { rho, entropy: s_total });
        }
        invert_increasing(
            |t| {
                let d = self.derivatives_unchecked(rho, t);
                // d(rho s)/d theta = rho s_theta = (rho / theta) e_theta > 0
                (rho * d.s, rho * d.s_theta)
            },
            s_total,
            hint,
        )
    }

    /// `E_int(rho, S)`: `rho e` in the interior, lower-semicontinuous
    /// extension on the boundary, `+inf` elsewhere.
    pub fn extended_internal_energy(&self, rho: f64, s_total: f64) -> f64 {
        if rho.is_nan() || s_total.is_nan() || rho < 0.0 || rho == f64::INFINITY {
            return f64::INFINITY;
        }
        if rho == 0.0 {
            return self.vacuum_energy(s_total);
        }
        if s_total == f64::INFINITY {
            return f64::INFINITY;
        }
        if self.third_law {
            if s_total < 0.0 {
                return f64::INFINITY;
            }
            if s_total == 0.0 {
                return self.ray_liminf(rho, s_total);
            }
        } else if s_total == f64::NEG_INFINITY {
            return self.cold_limit(rho);
        }
        self.interior_energy(rho, s_total)
    }

    fn interior_energy(&self, rho: f64, s_total: f64) -> f64 {
        match self.temperature_from_entropy(rho, s_total, None) {
            Ok(t) => self.energy_density(rho, t),
            // Entropy below anything reachable from theta >= 1e-100: the
            // energy is indistinguishable from its cold limit.
            Err(NsfError::Bracket { f_lo, target, .. }) if f_lo > target => self.cold_limit(rho),
            Err(_) => f64::INFINITY,
        }
    }

    /// `lim_{theta -> 0} rho e(rho, theta) = (3/2) p_inf rho^{5/3}`.
    pub fn cold_limit(&self, rho: f64) -> f64 {
        1.5 * self.p_inf() * rho.powf(5.0 / 3.0)
    }

    /// Limits as `rho -> 0+` at fixed total entropy.
    fn vacuum_energy(&self, s_total: f64) -> f64 {
        if s_total > 0.0 {
            if self.a > 0.0 {
                let th3 = 3.0 * s_total / (4.0 * self.a);
                self.a * th3.powf(4.0 / 3.0)
            } else {
                f64::INFINITY
            }
        } else if s_total == 0.0 {
            0.0
        } else if self.third_law {
            f64::INFINITY
        } else {
            0.0
        }
    }

    /// Limit of `E_int` along the ray from a fixed interior anchor towards
    /// the boundary point, halving the distance until it settles.
    fn ray_liminf(&self, rho: f64, s_total: f64) -> f64 {
        let (ra, sa) = ANCHOR;
        let mut t = 1.0;
        let mut prev = self.interior_energy(ra, sa);
        for _ in 0..RAY_MAX_HALVINGS {
            t *= 0.5;
            let r = rho + t * (ra - rho);
            let s = s_total + t * (sa - s_total);
            let e = self.interior_energy(r, s);
            if (e - prev).abs() <= RAY_RTOL * e.abs().max(f64::MIN_POSITIVE) {
                return e;
            }
            prev = e;
        }
        prev
    }
}

/// Free-function form of [`EosSpec::extended_internal_energy`].
pub fn extended_internal_energy(eos: &EosSpec, rho: f64, s_total: f64) -> f64 {
    eos.extended_internal_energy(rho, s_total)
}
