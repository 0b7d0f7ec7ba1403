//! One-dimensional finite-volume discretisation of the regularised system.

pub mod config;
pub mod fluxes;
pub mod ledger;
pub mod mesh;
pub mod scheme;
pub mod state;
pub mod step;

pub use config::SolverConfig;
pub use fluxes::{heat_flux, viscous_stress};
pub use ledger::{Ledger, Storage};
pub use mesh::Mesh1D;
pub use scheme::{evaluate, storage, Rhs};
pub use state::{Conserved, FieldState, Forcing, Problem};
pub use step::{run, stable_dt, step, temperature_subproblem_step, try_step, Rejection, StepOutcome, StepRecord, Trajectory};
