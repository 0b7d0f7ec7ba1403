use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nsf::boundary::{admissibility_check, BoundarySpec};
use nsf::budgets::{audit, weak_strong_trace, Tolerances};
use nsf::harness::{
    budget_csv, convergence_study, eos_check, export_timeseries, load_scenario, manufactured_case, read_doc, seed_from_env, write_json,
    MmsKind,
};
use nsf::par::Execution;
use nsf::thermo::EosSpec;
use nsf::{NsfError, Result};

#[derive(Parser)]
#[command(name = "nsf", version, about = "Compressible Navier-Stokes-Fourier toolkit for open domains")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample the closure of a scenario and check Gibbs consistency and stability.
    CheckEos {
        scenario: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Classify the boundary faces and print the inflow admissibility margins.
    AuditBoundary { scenario: PathBuf },
    /// Integrate a scenario and write state, flux and budget files.
    Run {
        scenario: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a scenario and audit its mass, energy and entropy budgets.
    Audit {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-step budgets to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Grid-refinement study on a manufactured solution.
    Converge {
        /// thermal_relaxation, acoustic_smooth or throughflow.
        case: String,
        #[arg(long, value_delimiter = ',', default_values_t = [32usize, 64, 128])]
        resolutions: Vec<usize>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        cfl: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accepted range of observed orders.
        #[arg(long, default_value_t = 0.8)]
        min_order: f64,
        #[arg(long, default_value_t = 1.5)]
        max_order: f64,
    },
    /// Relative energy of coarse runs against a finer reference run.
    WeakStrong {
        scenario: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [32usize, 64, 128])]
        cells: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        factor: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check_eos(path: PathBuf, samples: usize, tol: f64) -> Result<bool> {
    let doc = read_doc(&path)?;
    let eos = EosSpec::try_from(doc.eos)?;
    let seed = seed_from_env();
    let r = eos_check(&eos, samples, seed, (0.1, 10.0), tol);
    println!("closure: {} (a = {}, third law: {})", eos.shape.name(), eos.a, eos.third_law);
    println!("samples: {} (seed {})", r.samples, r.seed);
    println!("max |gibbs residual| d/dtheta: {:.3e}  d/drho: {:.3e}  tol {:.1e}", r.max_gibbs_theta, r.max_gibbs_rho, r.tol);
    println!("min dp/drho: {:.6e}  min de/dtheta: {:.6e}", r.min_p_rho, r.min_e_theta);
    println!("{}", verdict(r.pass));
    Ok(r.pass)
}

fn audit_boundary(path: PathBuf) -> Result<bool> {
    let doc = read_doc(&path)?;
    doc.mesh.validate()?;
    let eos = EosSpec::try_from(doc.eos)?;
    let spec = doc.boundary.unwrap_or_else(|| BoundarySpec::walls(&doc.mesh));
    let boundary = spec.resolve(&doc.mesh)?;
    let report = admissibility_check(&eos, &boundary);
    for f in &report.faces {
        match f.margin {
            Some(m) => println!("x = {:<8} {:?}  u_b.n = {:+.6}  margin = {:+.6e}", f.pos, f.kind, f.vn, m),
            None => println!("x = {:<8} {:?}  u_b.n = {:+.6}", f.pos, f.kind, f.vn),
        }
    }
    for v in &report.failures {
        println!("  {v}");
    }
    println!("{}", verdict(report.pass));
    Ok(report.pass)
}

fn run(path: PathBuf, out: PathBuf) -> Result<bool> {
    let s = load_scenario(&path)?;
    if s.theta_clamps > 0 {
        eprintln!("note: {} initial temperatures clamped to [theta_floor, 1/theta_floor]", s.theta_clamps);
    }
    let traj = s.run();
    let files = export_timeseries(&traj, &s.mesh, &out)?;
    println!("{}: {} steps, {} rejections, {} floor hits, {} files in {}", s.name, traj.n_steps(), traj.rejections, traj.floor_hits, files.len(), out.display());
    if let Some(msg) = &traj.aborted {
        println!("aborted: {msg}");
    }
    println!("{}", verdict(traj.aborted.is_none()));
    Ok(traj.aborted.is_none())
}

fn audit_cmd(path: PathBuf, out: Option<PathBuf>, csv: Option<PathBuf>) -> Result<bool> {
    let s = load_scenario(&path)?;
    let traj = s.run();
    let last = traj.steps.last().map_or(0.0, |r| r.t);
    let report = audit(&s.problem(), &traj, 0.0, last, &Tolerances::default())?;
    println!("{}: window [{}, {}], {} steps", s.name, report.window.0, report.window.1, report.steps);
    for v in &report.verdicts {
        println!("{:<20} {:+.6e}  ({}, tol {:.1e})  {}", v.name, v.value, v.rule, v.tol, v.label());
    }
    if let Some(msg) = &traj.aborted {
        println!("aborted: {msg}");
    }
    if let Some(p) = out {
        write_json(&report, &p)?;
    }
    if let Some(p) = csv {
        std::fs::write(&p, budget_csv(&traj)).map_err(|source| NsfError::Io { path: p.clone(), source })?;
    }
    let pass = report.pass() && traj.aborted.is_none();
    println!("{}", verdict(pass));
    Ok(pass)
}

#[allow(clippy::too_many_arguments)]
fn converge(case: String, res: Vec<usize>, t_end: Option<f64>, cfl: Option<f64>, out: Option<PathBuf>, lo: f64, hi: f64) -> Result<bool> {
    let kind = MmsKind::parse(&case).ok_or_else(|| NsfError::Misuse(format!("unknown case {case:?}")))?;
    let r = convergence_study(&manufactured_case(kind), &res, t_end, cfl, Execution::Parallel)?;
    let mut pass = true;
    for (name, f) in &r.fields {
        let ok = f.monotone && f.order >= lo && f.order <= hi;
        pass &= ok;
        let errs: Vec<String> = f.errors.iter().map(|e| format!("{e:.3e}")).collect();
        let flag = if f.monotone { "" } else { " (non-monotone)" };
        println!("{name:<6} L1 errors [{}]  order {:.3}{flag}  {}", errs.join(", "), f.order, verdict(ok));
    }
    let res_str: Vec<String> = r.energy_residuals.iter().map(|e| format!("{e:.3e}")).collect();
    println!("energy residuals [{}]  order {:.3}", res_str.join(", "), r.energy_order);
    if let Some(p) = out {
        write_json(&r, &p)?;
    }
    println!("{}", verdict(pass));
    Ok(pass)
}

fn weak_strong(path: PathBuf, cells: Vec<usize>, factor: usize, out: Option<PathBuf>) -> Result<bool> {
    let base = load_scenario(&path)?;
    let mut finals = Vec::new();
    let mut pass = true;
    let mut traces = Vec::new();
    for &n in &cells {
        let coarse = base.with_cells(n)?;
        let fine = base.with_cells(factor * n)?;
        let (tc, tf) = (coarse.run().into_result()?, fine.run().into_result()?);
        let ws = weak_strong_trace(&coarse.problem(), &tc, &fine.problem(), &tf)?;
        let last = *ws.trace.integrals.last().unwrap_or(&0.0);
        println!("n = {n:<5} E(t_end) = {last:.6e}  eta = {:.3e}  L = {:.4}", ws.eta, ws.rate);
        pass &= ws.rate >= 0.0 && ws.enveloped();
        finals.push(last);
        traces.push(ws);
    }
    let decreasing = finals.windows(2).all(|w| w[1] < w[0]);
    println!("monotone decrease under refinement: {}", verdict(decreasing));
    pass &= decreasing;
    if let Some(p) = out {
        write_json(&traces, &p)?;
    }
    println!("{}", verdict(pass));
    Ok(pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::CheckEos { scenario, samples, tol } => check_eos(scenario, samples, tol),
        Cmd::AuditBoundary { scenario } => audit_boundary(scenario),
        Cmd::Run { scenario, out } => run(scenario, out),
        Cmd::Audit { scenario, out, csv } => audit_cmd(scenario, out, csv),
        Cmd::Converge { case, resolutions, t_end, cfl, out, min_order, max_order } => {
            converge(case, resolutions, t_end, cfl, out, min_order, max_order)
        }
        Cmd::WeakStrong { scenario, cells, factor, out } => weak_strong(scenario, cells, factor, out),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
