//! Scenario files: loading, total validation and problem assembly.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::expr::Expr;
use crate::boundary::{admissibility_check, Boundary, BoundarySpec};
use crate::error::{hyp, NsfError, Result, Violation};
use crate::solver::{FieldState, Mesh1D, Problem, SolverConfig, Trajectory};
use crate::thermo::{EosDoc, EosSpec, TransportSpec};

/// Initial field: an expression in `x`, a constant, or one value per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldInit {
    Constant(f64),
    Expr(String),
    Array(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDoc {
    pub rho: FieldInit,
    pub u: FieldInit,
    pub theta: FieldInit,
}

/// On-disk layout of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mesh: Mesh1D,
    #[serde(default)]
    pub eos: EosDoc,
    #[serde(default)]
    pub transport: TransportSpec,
    /// Closed box when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    pub config: SolverConfig,
    pub initial: InitialDoc,
    /// Intermediate output times; `t_end` is always an output.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<f64>,
}

/// A validated scenario ready to run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub doc: ScenarioDoc,
    pub mesh: Mesh1D,
    pub eos: EosSpec,
    pub transport: TransportSpec,
    pub boundary: Boundary,
    pub config: SolverConfig,
    pub initial: FieldState,
    pub outputs: Vec<f64>,
    /// Number of initial temperatures clamped into `[theta_floor, 1/theta_floor]`.
    pub theta_clamps: usize,
}

fn sample(field: &str, init: &FieldInit, mesh: &Mesh1D, bad: &mut Vec<Violation>) -> Option<Vec<f64>> {
    let path = format!("initial.{field}");
    match init {
        FieldInit::Constant(c) => Some(vec![*c; mesh.n]),
        FieldInit::Expr(src) => match Expr::parse(src) {
            Ok(e) => Some(mesh.centers().into_iter().map(|x| e.eval(x)).collect()),
            Err(err) => {
                bad.push(Violation::new(path, hyp::SCHEMA, err.to_string()));
                None
            }
        },
        FieldInit::Array(v) if v.len() == mesh.n => Some(v.clone()),
        FieldInit::Array(v) => {
            bad.push(Violation::new(path, hyp::SCHEMA, format!("array has {} entries, mesh has {} cells", v.len(), mesh.n)));
            None
        }
    }
}

fn collect(r: Result<()>, bad: &mut Vec<Violation>) {
    match r {
        Ok(()) => {}
        Err(NsfError::Invalid(v)) => bad.extend(v),
        Err(e) => bad.push(Violation::new("scenario", hyp::SCHEMA, e.to_string())),
    }
}

impl Scenario {
    /// Validate every part of a document, reporting all failures together.
    pub fn from_doc(doc: ScenarioDoc) -> Result<Self> {
        let mut bad = Vec::new();
        let mesh_ok = doc.mesh.validate();
        let mesh_valid = mesh_ok.is_ok();
        collect(mesh_ok, &mut bad);
        let eos = match EosSpec::try_from(doc.eos.clone()) {
            Ok(e) => Some(e),
            Err(e) => {
                collect(Err(e), &mut bad);
                None
            }
        };
        collect(doc.transport.validate(), &mut bad);
        collect(doc.config.validate(), &mut bad);

        let mut boundary = None;
        if mesh_valid {
            let spec = doc.boundary.clone().unwrap_or_else(|| BoundarySpec::walls(&doc.mesh));
            match spec.resolve(&doc.mesh) {
                Ok(b) => boundary = Some(b),
                Err(e) => collect(Err(e), &mut bad),
            }
        }
        if let (Some(eos), Some(b)) = (&eos, &boundary) {
            bad.extend(admissibility_check(eos, b).failures);
        }

        let mut initial = None;
        let mut theta_clamps = 0;
        if mesh_valid {
            let m = &doc.mesh;
            let rho = sample("rho", &doc.initial.rho, m, &mut bad);
            let u = sample("u", &doc.initial.u, m, &mut bad);
            let theta = sample("theta", &doc.initial.theta, m, &mut bad);
            if let (Some(rho), Some(u), Some(mut theta)) = (rho, u, theta) {
                if let Some(i) = rho.iter().position(|r| !(*r > 0.0 && r.is_finite())) {
                    bad.push(Violation::new("initial.rho", hyp::INITIAL_DATA, format!("density must be positive and finite, got {} in cell {i}", rho[i])));
                }
                if let Some(i) = u.iter().position(|v| !v.is_finite()) {
                    bad.push(Violation::new("initial.u", hyp::INITIAL_DATA, format!("velocity must be finite, got {} in cell {i}", u[i])));
                }
                if let Some(i) = theta.iter().position(|t| !(*t > 0.0) || t.is_nan()) {
                    bad.push(Violation::new("initial.theta", hyp::INITIAL_DATA, format!("temperature must be positive, got {} in cell {i}", theta[i])));
                } else {
                    let lo = doc.config.theta_floor;
                    let hi = 1.0 / lo;
                    for t in theta.iter_mut() {
                        if *t < lo || *t > hi {
                            *t = t.clamp(lo, hi);
                            theta_clamps += 1;
                        }
                    }
                }
                initial = Some(FieldState { t: 0.0, rho, u, theta });
            }
        }
        for (k, t) in doc.outputs.iter().enumerate() {
            if !(t.is_finite() && *t >= 0.0) {
                bad.push(Violation::new(format!("outputs[{k}]"), hyp::SCHEMA, "output times must be finite and nonnegative"));
            }
        }

        if !bad.is_empty() {
            return Err(NsfError::Invalid(bad));
        }
        let (eos, boundary, initial) = (eos.unwrap(), boundary.unwrap(), initial.unwrap());
        Ok(Self {
            name: doc.name.clone().unwrap_or_else(|| "scenario".into()),
            mesh: doc.mesh,
            eos,
            transport: doc.transport.clone(),
            boundary,
            config: doc.config.clone(),
            initial,
            outputs: doc.outputs.clone(),
            theta_clamps,
            doc,
        })
    }

    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let doc: ScenarioDoc = serde_json::from_str(text).map_err(|source| NsfError::Json {
            path: origin.to_path_buf(),
            source,
        })?;
        Self::from_doc(doc)
    }

    pub fn problem(&self) -> Problem {
        Problem {
            mesh: self.mesh,
            eos: self.eos.clone(),
            transport: self.transport.clone(),
            boundary: self.boundary,
            config: self.config.clone(),
            forcing: None,
        }
    }

    pub fn run(&self) -> Trajectory {
        crate::solver::run(&self.problem(), &self.initial, &self.outputs)
    }

    /// Same scenario on a mesh with `n` cells; initial arrays cannot be resampled.
    pub fn with_cells(&self, n: usize) -> Result<Self> {
        let init = &self.doc.initial;
        if [&init.rho, &init.u, &init.theta].iter().any(|f| matches!(f, FieldInit::Array(_))) && n != self.mesh.n {
            return Err(NsfError::Misuse("initial data given as arrays cannot be resampled to another mesh".into()));
        }
        let mut doc = self.doc.clone();
        doc.mesh.n = n;
        Self::from_doc(doc)
    }
}

/// Parse a scenario file without validating it.
pub fn read_doc(path: impl AsRef<Path>) -> Result<ScenarioDoc> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| NsfError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| NsfError::Json {
        path: path.to_path_buf(),
        source,
    })
}

/// Read and validate a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let mut s = Scenario::from_doc(read_doc(path)?)?;
    if s.doc.name.is_none() {
        if let Some(stem) = path.file_stem() {
            s.name = stem.to_string_lossy().into_owned();
        }
    }
    Ok(s)
}
