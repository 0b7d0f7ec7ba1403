//! Scenario ingestion, manufactured solutions, convergence studies and output.

pub mod checks;
pub mod converge;
pub mod export;
pub mod expr;
pub mod mms;
pub mod scenario;

pub use checks::{eos_check, seed_from_env, EosCheck};
pub use converge::{convergence_study, observed_order, ConvergenceReport};
pub use export::{budget_csv, export_timeseries, write_json};
pub use expr::Expr;
pub use mms::{manufactured_case, MmsCase, MmsKind};
pub use scenario::{load_scenario, read_doc, FieldInit, InitialDoc, Scenario, ScenarioDoc};
