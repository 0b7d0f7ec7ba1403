//! Compressible Navier–Stokes–Fourier toolkit for open domains with
//! prescribed inflow and outflow.

pub mod boundary;
pub mod budgets;
pub mod error;
pub mod harness;
pub mod par;
pub mod relent;
pub mod solver;
pub mod thermo;

pub use error::{NsfError, Result};
