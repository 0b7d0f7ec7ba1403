//! Scalar inversion of functions that increase strictly in temperature.

use crate::error::{NsfError, Result};

const LO0: f64 = 1e-8;
const HI0: f64 = 1e8;
const LO_MIN: f64 = 1e-100;
const HI_MAX: f64 = 1e100;
const MAX_ITER: usize = 200;

/// Solve `f(theta) = target` for `theta > 0` given `fdf(theta) = (f, df/dtheta)`.
///
/// Bisection in `ln theta` on a bracket seeded at `[1e-8, 1e8]` (widened by
/// decades down to `1e-100` and up to `1e100` if needed), polished by Newton
/// steps that are only accepted while they stay inside the bracket.
pub fn invert_increasing<F>(fdf: F, target: f64, hint: Option<f64>) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    if !target.is_finite() {
        return Err(bracket_err(target, LO0, HI0, f64::NAN, f64::NAN));
    }
    let resid = |t: f64| {
        let (f, df) = fdf(t);
        (f - target, df)
    };
    let mut lo = LO0;
    let mut hi = HI0;
    let mut f_lo = resid(lo).0;
    let mut f_hi = resid(hi).0;
    // Hints inside the seed bracket tighten it cheaply.
    if let Some(h) = hint.filter(|h| *h > LO0 && *h < HI0) {
        for (a, b) in [(h / 1.5, h * 1.5), (h / 10.0, h * 10.0)] {
            let fa = resid(a.max(LO0)).0;
            let fb = resid(b.min(HI0)).0;
            if fa <= 0.0 && fb >= 0.0 {
                lo = a.max(LO0);
                hi = b.min(HI0);
                f_lo = fa;
                f_hi = fb;
                break;
            }
        }
    }
    while !(f_lo <= 0.0) && lo > LO_MIN {
        hi = lo;
        f_hi = f_lo;
        lo = (lo * 1e-4).max(LO_MIN);
        f_lo = resid(lo).0;
    }
    while !(f_hi >= 0.0) && hi < HI_MAX {
        lo = hi;
        f_lo = f_hi;
        hi = (hi * 1e4).min(HI_MAX);
        f_hi = resid(hi).0;
    }
    if !(f_lo <= 0.0 && f_hi >= 0.0) {
        return Err(bracket_err(target, lo, hi, f_lo + target, f_hi + target));
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    let mut x_lo = lo.ln();
    let mut x_hi = hi.ln();
    let mut x = match hint {
        Some(h) if h > lo && h < hi => h.ln(),
        _ => 0.5 * (x_lo + x_hi),
    };
    for _ in 0..MAX_ITER {
        let t = x.exp();
        let (f, df) = resid(t);
        if f == 0.0 {
            return Ok(t);
        }
        if f < 0.0 {
            x_lo = x;
        } else {
            x_hi = x;
        }
        let slope = df * t;
        let newton = x - f / slope;
        let next = if slope > 0.0 && newton.is_finite() && newton > x_lo && newton < x_hi {
            newton
        } else {
            0.5 * (x_lo + x_hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 4.0 * f64::EPSILON * x.abs().max(1.0) || x_hi - x_lo <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return Ok(x.exp());
        }
    }
    Ok(x.exp())
}

fn bracket_err(target: f64, lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> NsfError {
    NsfError::Bracket { target, lo, hi, f_lo, f_hi }
}
