use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum NsfError {
    /// An argument lies outside the domain of a thermodynamic function.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A conservative state lies outside the admissible (rho, S) set.
    #[error("state (rho={rho}, S={entropy}) lies outside the admissible set")]
    OutOfDomain { rho: f64, entropy: f64 },

    /// Monotone root bracketing failed.
    #[error("temperature inversion failed: target {target} not bracketed in [{lo:e}, {hi:e}] (values {f_lo:e}..{f_hi:e})")]
    Bracket {
        target: f64,
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// An operation was applied to a boundary face of the wrong kind.
    #[error("misuse: {0}")]
    Misuse(String),

    /// Arrays sampled on different meshes.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invariant violation detected while validating input data.
    #[error("{}", format_violations(.0))]
    Invalid(Vec<Violation>),

    /// A time step was rejected too many times in a row.
    #[error("run aborted at t={t}: {reason}")]
    Abort { t: f64, reason: String },

    #[error("expression error: {0}")]
    Expr(String),

    #[error("I/O error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// One failed check, naming the offending field and the hypothesis it violates.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Violation {
    pub field: String,
    pub hypothesis: String,
    pub message: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, hypothesis: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            hypothesis: hypothesis.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} [{}]: {}", self.field, self.hypothesis, self.message)
    }
}

fn format_violations(v: &[Violation]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("validation failed: {}", items.join("; "))
}

pub type Result<T> = std::result::Result<T, NsfError>;

pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> NsfError {
    NsfError::Domain {
        op,
        detail: detail.into(),
    }
}

/// Names of the modelling hypotheses that input validation enforces.
pub mod hyp {
    pub const STATE_LAW: &str = "state-law form";
    pub const ENTROPY_CONST: &str = "finite entropy constant";
    pub const MONOTONE_PRESSURE: &str = "monotone pressure shape";
    pub const COLD_ASYMPTOTE: &str = "positive cold-pressure asymptote";
    pub const PRESSURE_ORIGIN: &str = "pressure vanishing at zero density";
    pub const THIRD_LAW: &str = "third-law normalisation";
    pub const TRANSPORT: &str = "transport coefficient growth";
    pub const INFLOW_DENSITY: &str = "positive inflow density";
    pub const INFLOW_FLUX: &str = "inflow flux admissibility";
    pub const INITIAL_DATA: &str = "admissible initial data";
    pub const SCHEMA: &str = "scenario schema";
}
