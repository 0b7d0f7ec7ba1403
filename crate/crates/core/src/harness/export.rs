//! CSV and JSON output of trajectories and budgets.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::budgets::windowed;
use crate::error::{NsfError, Result};
use crate::solver::{Mesh1D, Trajectory};

const BOUNDARY_COLUMNS: [&str; 7] = ["m_in", "m_out", "e_in_flux", "e_out_int", "e_out_delta", "s_in", "s_out"];

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| NsfError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn state_file_name(t: f64) -> String {
    format!("state_{t:.6}.csv")
}

/// One `state_<t>.csv` per snapshot, `fluxes.csv` with the cumulative
/// boundary integrals and `budget.csv` with per-step budgets. Returns the
/// paths written.
pub fn export_timeseries(traj: &Trajectory, mesh: &Mesh1D, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|source| NsfError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for s in &traj.snapshots {
        let mut text = String::from("x,rho,u,theta\n");
        for i in 0..s.len() {
            let _ = writeln!(text, "{},{},{},{}", mesh.center(i), s.rho[i], s.u[i], s.theta[i]);
        }
        let path = dir.join(state_file_name(s.t));
        write(&path, &text)?;
        written.push(path);
    }

    let mut text = format!("t,{}\n", BOUNDARY_COLUMNS.join(","));
    for r in &traj.steps {
        let entries = r.ledger.entries();
        let vals: Vec<String> = BOUNDARY_COLUMNS
            .iter()
            .map(|c| entries.iter().find(|(k, _)| k == c).map(|(_, v)| format!("{v:e}")).unwrap_or_default())
            .collect();
        let _ = writeln!(text, "{:e},{}", r.t, vals.join(","));
    }
    let path = dir.join("fluxes.csv");
    write(&path, &text)?;
    written.push(path);

    let path = dir.join("budget.csv");
    write(&path, &budget_csv(traj))?;
    written.push(path);
    Ok(written)
}

/// Per-step windowed budgets.
pub fn budget_csv(traj: &Trajectory) -> String {
    let mut text = String::from("t0,t1,mass_res,energy_res,entropy_prod\n");
    for [t0, t1, m, e, s] in windowed(traj) {
        let _ = writeln!(text, "{t0:e},{t1:e},{m:e},{e:e},{s:e}");
    }
    text
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|source| NsfError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    write(path, &(text + "\n"))
}
