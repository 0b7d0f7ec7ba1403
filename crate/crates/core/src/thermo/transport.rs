use serde::{Deserialize, Serialize};

use crate::error::{hyp, NsfError, Result, Violation};

/// Affine-in-power law `c0 + c1 theta^k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub c0: f64,
    pub c1: f64,
}

impl PowerLaw {
    pub const fn new(c0: f64, c1: f64) -> Self {
        Self { c0, c1 }
    }

    fn eval(&self, theta: f64, k: f64) -> f64 {
        self.c0 + self.c1 * theta.powf(k)
    }
}

/// Viscosities and heat conductivity as functions of temperature.
///
/// `mu = mu.c0 + mu.c1 theta^L`, `eta` likewise, `kappa = kappa.c0 + kappa.c1 theta^3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportSpec {
    #[serde(default = "default_lambda")]
    pub lambda_exp: f64,
    #[serde(default = "default_mu")]
    pub mu: PowerLaw,
    #[serde(default = "default_eta")]
    pub eta: PowerLaw,
    #[serde(default = "default_kappa")]
    pub kappa: PowerLaw,
}

fn default_lambda() -> f64 {
    0.5
}
fn default_mu() -> PowerLaw {
    PowerLaw::new(1.0, 1.0)
}
fn default_eta() -> PowerLaw {
    PowerLaw::new(0.0, 0.0)
}
fn default_kappa() -> PowerLaw {
    PowerLaw::new(1.0, 1.0)
}

impl Default for TransportSpec {
    fn default() -> Self {
        Self {
            lambda_exp: default_lambda(),
            mu: default_mu(),
            eta: default_eta(),
            kappa: default_kappa(),
        }
    }
}

/// Constants of the growth envelopes the coefficients sit in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub mu_under: f64,
    pub mu_over: f64,
    pub eta_over: f64,
    pub kappa_under: f64,
    pub kappa_over: f64,
}

impl TransportSpec {
    pub fn constant(mu: f64, eta: f64, kappa: f64) -> Self {
        Self {
            lambda_exp: 0.5,
            mu: PowerLaw::new(mu, 0.0),
            eta: PowerLaw::new(eta, 0.0),
            kappa: PowerLaw::new(kappa, 0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let l = self.lambda_exp;
        if !(l > 0.4 && l <= 1.0) {
            bad.push(Violation::new("transport.lambda_exp", hyp::TRANSPORT, format!("exponent {l} outside (2/5, 1]")));
        }
        for (name, law, need_pos) in [("mu", self.mu, true), ("eta", self.eta, false), ("kappa", self.kappa, true)] {
            let fin = law.c0.is_finite() && law.c1.is_finite();
            let nonneg = law.c0 >= 0.0 && law.c1 >= 0.0;
            let pos = law.c0 > 0.0 && law.c1 > 0.0;
            if !fin || !nonneg || (need_pos && !pos) {
                let what = if need_pos { "positive" } else { "nonnegative" };
                bad.push(Violation::new(
                    format!("transport.{name}"),
                    hyp::TRANSPORT,
                    format!("coefficients must be finite and {what} to stay within the growth envelope"),
                ));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(NsfError::Invalid(bad))
        }
    }

    /// Validation variant used by the discrete scheme, which also accepts
    /// constant coefficients (the envelope is then only satisfied on bounded
    /// temperature ranges).
    pub fn validate_relaxed(&self) -> Result<()> {
        let mut bad = Vec::new();
        for (name, law) in [("mu", self.mu), ("eta", self.eta), ("kappa", self.kappa)] {
            if !(law.c0 >= 0.0 && law.c1 >= 0.0 && law.c0.is_finite() && law.c1.is_finite()) {
                bad.push(Violation::new(format!("transport.{name}"), hyp::TRANSPORT, "coefficients must be finite and nonnegative"));
            }
        }
        if !(self.mu.c0 + self.mu.c1 > 0.0) {
            bad.push(Violation::new("transport.mu", hyp::TRANSPORT, "shear viscosity must be positive"));
        }
        if !(self.kappa.c0 + self.kappa.c1 > 0.0) {
            bad.push(Violation::new("transport.kappa", hyp::TRANSPORT, "conductivity must be positive"));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(NsfError::Invalid(bad))
        }
    }

    pub fn envelope(&self) -> Envelope {
        Envelope {
            mu_under: self.mu.c0.min(self.mu.c1),
            mu_over: self.mu.c0.max(self.mu.c1),
            eta_over: self.eta.c0.max(self.eta.c1),
            kappa_under: self.kappa.c0.min(self.kappa.c1),
            kappa_over: self.kappa.c0.max(self.kappa.c1),
        }
    }

    pub fn mu(&self, theta: f64) -> f64 {
        self.mu.eval(theta, self.lambda_exp)
    }

    pub fn eta(&self, theta: f64) -> f64 {
        self.eta.eval(theta, self.lambda_exp)
    }

    pub fn kappa(&self, theta: f64) -> f64 {
        self.kappa.eval(theta, 3.0)
    }

    /// `d mu / d theta`.
    pub fn dmu(&self, theta: f64) -> f64 {
        self.mu.c1 * self.lambda_exp * theta.powf(self.lambda_exp - 1.0)
    }

    pub fn dkappa(&self, theta: f64) -> f64 {
        3.0 * self.kappa.c1 * theta * theta
    }

    pub fn deta(&self, theta: f64) -> f64 {
        self.eta.c1 * self.lambda_exp * theta.powf(self.lambda_exp - 1.0)
    }
}

/// `(mu, eta, kappa)` at temperature `theta`.
pub fn transport_coefficients(ts: &TransportSpec, theta: f64) -> (f64, f64, f64) {
    (ts.mu(theta), ts.eta(theta), ts.kappa(theta))
}
