use nsf::boundary::{BoundaryFace, BoundarySpec};
use nsf::solver::{
    evaluate, heat_flux, run, stable_dt, storage, temperature_subproblem_step, try_step, viscous_stress, FieldState, Mesh1D, Problem,
    SolverConfig,
};
use nsf::thermo::{EosSpec, PowerLaw, TransportSpec};
use proptest::prelude::*;

fn eos() -> EosSpec {
    EosSpec::iconic(1.0, 1.0).unwrap()
}

fn light() -> TransportSpec {
    TransportSpec {
        mu: PowerLaw::new(0.01, 0.01),
        kappa: PowerLaw::new(0.01, 0.01),
        ..TransportSpec::default()
    }
}

fn inviscid() -> TransportSpec {
    TransportSpec {
        mu: PowerLaw::new(0.0, 0.0),
        kappa: PowerLaw::new(0.0, 0.0),
        ..TransportSpec::default()
    }
}

fn channel(u0: f64, u1: f64, rho_b: f64, f_ib: f64) -> BoundarySpec {
    let face = |pos: f64, u_b: f64| BoundaryFace { pos, u_b, rho_b: Some(rho_b), f_ib: Some(f_ib), wall: false };
    BoundarySpec { faces: vec![face(0.0, u0), face(1.0, u1)] }
}

fn problem(n: usize, transport: TransportSpec, spec: Option<BoundarySpec>, config: SolverConfig) -> Problem {
    let mesh = Mesh1D::new(0.0, 1.0, n).unwrap();
    let spec = spec.unwrap_or_else(|| BoundarySpec::walls(&mesh));
    Problem {
        mesh,
        eos: eos(),
        transport,
        boundary: spec.resolve(&mesh).unwrap(),
        config,
        forcing: None,
    }
}

fn bump(x: f64) -> (f64, f64, f64) {
    let w = (std::f64::consts::PI * x).cos();
    (1.0 + 0.1 * w, 0.0, 1.0 + 0.05 * w)
}

fn l1(a: &[f64], b: &[f64], h: f64) -> f64 {
    h * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[test]
fn constitutive_flux_examples() {
    let cfg = SolverConfig::default();
    let unit_mu = TransportSpec {
        mu: PowerLaw::new(1.0, 0.0),
        ..TransportSpec::default()
    };
    assert!((viscous_stress(&unit_mu, &cfg, 1.0, 1.0) - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(viscous_stress(&unit_mu, &cfg, 1.0, 0.0), 0.0);
    let d2 = SolverConfig { d: 2, ..SolverConfig::default() };
    let bulk = TransportSpec {
        eta: PowerLaw::new(1.0, 0.0),
        ..unit_mu.clone()
    };
    assert!((viscous_stress(&bulk, &d2, 1.0, 1.0) - 2.0).abs() < 1e-15);

    let ts = TransportSpec::default();
    assert!((heat_flux(&ts, &cfg, 1.0, 1.0) + 2.0).abs() < 1e-15);
    assert_eq!(heat_flux(&ts, &cfg, 1.0, 0.0), 0.0);
    let reg = SolverConfig { delta: 1.0, gamma: 3.0, ..SolverConfig::default() };
    assert!((heat_flux(&ts, &reg, 1.0, 1.0) + 4.0).abs() < 1e-15);
}

#[test]
fn inflow_face_carries_boundary_density() {
    // u_b = 1 at the left end: u_b.n = -1, inflow with rho_b = 2
    let p = problem(8, light(), Some(channel(1.0, 1.0, 2.0, -10.0)), SolverConfig::default());
    let s = FieldState::uniform(&p.mesh, 1.0, 1.0, 1.0);
    let r = evaluate(&p, &s).rates;
    assert!((r.m_in + 2.0).abs() < 1e-15);
    assert!((r.m_out - 1.0).abs() < 1e-15);
}

#[test]
fn uniform_rest_state_has_zero_rates() {
    for delta in [0.0, 0.1] {
        let cfg = SolverConfig { delta, ..SolverConfig::default() };
        let p = problem(16, TransportSpec::default(), None, cfg);
        let s = FieldState::uniform(&p.mesh, 1.3, 0.0, 0.8);
        let r = evaluate(&p, &s);
        assert!(r.drho.iter().all(|v| *v == 0.0));
        assert!(r.dm.iter().all(|v| v.abs() < 1e-13), "{:?}", r.dm);
        if delta == 0.0 {
            assert!(r.deint.iter().all(|v| v.abs() < 1e-13));
        }
    }
}

#[test]
fn robin_flux_vanishes_at_matching_inflow_density() {
    let cfg = SolverConfig { epsilon: 0.05, ..SolverConfig::default() };
    let p = problem(16, light(), Some(channel(0.5, 0.5, 1.0, -10.0)), cfg);
    let s = FieldState::uniform(&p.mesh, 1.0, 0.5, 1.0);
    let r = evaluate(&p, &s);
    assert!(r.drho.iter().all(|v| v.abs() < 1e-14), "{:?}", r.drho);
}

#[test]
fn delta_source_heats_uniform_rest() {
    let delta = 0.01;
    let cfg = SolverConfig { delta, ..SolverConfig::default() };
    let p = problem(8, TransportSpec::default(), None, cfg);
    let r = evaluate(&p, &FieldState::uniform(&p.mesh, 1.0, 0.0, 1.0));
    for v in &r.deint {
        assert!((v - delta).abs() < 1e-14, "{v}");
    }
}

#[test]
fn uniform_compression_work() {
    // u = -x with uniform rho, theta and no transport: d(rho e)/dt = rho e + p
    let p = problem(32, inviscid(), None, SolverConfig::default());
    let s = FieldState::from_fn(&p.mesh, |x| (1.0, -x, 1.0));
    let r = evaluate(&p, &s);
    let want = 4.0 + 7.0 / 3.0;
    for i in 2..30 {
        assert!((r.deint[i] - want).abs() < 1e-12, "cell {i}: {}", r.deint[i]);
    }
}

#[test]
fn dt_scaling() {
    let cfg = SolverConfig::default();
    let heavy = TransportSpec {
        mu: PowerLaw::new(50.0, 50.0),
        ..TransportSpec::default()
    };
    let (p1, p2) = (problem(32, heavy.clone(), None, cfg.clone()), problem(64, heavy, None, cfg.clone()));
    let (s1, s2) = (FieldState::uniform(&p1.mesh, 1.0, 0.0, 1.0), FieldState::uniform(&p2.mesh, 1.0, 0.0, 1.0));
    let ratio = stable_dt(&p1, &s1) / stable_dt(&p2, &s2);
    assert!((ratio - 4.0).abs() < 1e-12, "{ratio}");

    // acoustic limit with a = 0; sound speed from finite differences of p
    let e0 = EosSpec::iconic(0.0, 1.0).unwrap();
    let p = Problem { eos: e0.clone(), ..problem(32, inviscid(), None, cfg.clone()) };
    let s = FieldState::uniform(&p.mesh, 1.0, 0.0, 1.0);
    let h = 1e-5;
    let p_rho = (e0.pressure(1.0 + h, 1.0).unwrap() - e0.pressure(1.0 - h, 1.0).unwrap()) / (2.0 * h);
    let p_th = (e0.pressure(1.0, 1.0 + h).unwrap() - e0.pressure(1.0, 1.0 - h).unwrap()) / (2.0 * h);
    let e_th = (e0.specific_internal_energy(1.0, 1.0 + h).unwrap() - e0.specific_internal_energy(1.0, 1.0 - h).unwrap()) / (2.0 * h);
    let c = (p_rho + p_th * p_th / e_th).sqrt();
    let want = cfg.cfl * p.mesh.h() / c;
    assert!((stable_dt(&p, &s) - want).abs() < 1e-8 * want);
}

#[test]
fn zero_horizon_returns_initial_state() {
    let cfg = SolverConfig { t_end: 0.0, ..SolverConfig::default() };
    let p = problem(16, light(), None, cfg);
    let s0 = FieldState::from_fn(&p.mesh, bump);
    let traj = run(&p, &s0, &[]);
    assert_eq!(traj.n_steps(), 0);
    assert_eq!(traj.final_state(), &s0);
}

#[test]
fn rest_state_is_a_fixed_point() {
    let cfg = SolverConfig { t_end: 1.0, ..SolverConfig::default() };
    let p = problem(16, TransportSpec::default(), None, cfg);
    let s0 = FieldState::uniform(&p.mesh, 1.0, 0.0, 1.0);
    let (s1, _) = try_step(&p, &s0, stable_dt(&p, &s0)).unwrap();
    for i in 0..16 {
        assert!((s1.rho[i] - 1.0).abs() < 1e-13 && s1.u[i].abs() < 1e-13 && (s1.theta[i] - 1.0).abs() < 1e-13);
    }
    let traj = run(&p, &s0, &[]);
    assert!(traj.aborted.is_none());
    let end = traj.final_state();
    assert_eq!(end.t, 1.0);
    for i in 0..16 {
        assert!((end.rho[i] - 1.0).abs() < 1e-10 && end.u[i].abs() < 1e-10 && (end.theta[i] - 1.0).abs() < 1e-10);
    }
}

#[test]
fn mass_identity_every_step() {
    let cfg = SolverConfig { t_end: 0.2, epsilon: 1e-3, ..SolverConfig::default() };
    let p = problem(64, light(), Some(channel(0.5, 0.5, 1.0, -1.25)), cfg);
    let traj = run(&p, &FieldState::from_fn(&p.mesh, |x| (1.0 + 0.1 * (3.0 * x).sin(), 0.5, 1.0)), &[]);
    assert!(traj.aborted.is_none());
    for w in traj.steps.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let flux = (b.ledger.m_in - a.ledger.m_in) + (b.ledger.m_out - a.ledger.m_out);
        let res = b.storage.mass - a.storage.mass + flux;
        assert!(res.abs() < 1e-12, "t = {}: {res:e}", b.t);
    }
}

#[test]
fn walls_conserve_mass_and_energy() {
    let mut drifts = Vec::new();
    for n in [32, 64, 128] {
        let cfg = SolverConfig { t_end: 0.2, ..SolverConfig::default() };
        let p = problem(n, light(), None, cfg);
        let traj = run(&p, &FieldState::from_fn(&p.mesh, bump), &[]);
        let (first, last) = (traj.steps.first().unwrap(), traj.steps.last().unwrap());
        assert!((last.storage.mass - first.storage.mass).abs() < 1e-13);
        drifts.push(last.storage.total_energy - first.storage.total_energy);
    }
    // upwinding removes kinetic energy, so the drift is a first-order sink
    // rather than roundoff
    assert!(drifts.iter().all(|d| *d < 0.0), "{drifts:?}");
    for w in drifts.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!(order > 0.9, "{drifts:?}");
    }
}

#[test]
fn reversed_flow_mirrors_the_update() {
    let m = 24;
    let fwd = problem(m, light(), Some(channel(0.5, 0.5, 1.2, -3.0)), SolverConfig::default());
    let back = problem(m, light(), Some(channel(-0.5, -0.5, 1.2, -3.0)), SolverConfig::default());
    let f = |x: f64| (1.0 + 0.2 * x * x, 0.5 + 0.1 * x, 1.0 + 0.3 * x);
    let s = FieldState::from_fn(&fwd.mesh, f);
    let mirrored = FieldState::from_fn(&back.mesh, |x| {
        let (r, u, t) = f(1.0 - x);
        (r, -u, t)
    });
    let (ra, rb) = (evaluate(&fwd, &s), evaluate(&back, &mirrored));
    for i in 0..m {
        let j = m - 1 - i;
        assert!((ra.drho[i] - rb.drho[j]).abs() < 1e-12);
        assert!((ra.dm[i] + rb.dm[j]).abs() < 1e-12);
        assert!((ra.deint[i] - rb.deint[j]).abs() < 1e-12);
    }
    assert!((ra.rates.m_in - rb.rates.m_in).abs() < 1e-14);
    assert!((ra.rates.m_out - rb.rates.m_out).abs() < 1e-14);
}

#[test]
fn half_steps_agree_to_third_order() {
    let p = problem(32, light(), None, SolverConfig::default());
    let s0 = FieldState::from_fn(&p.mesh, bump);
    let base = stable_dt(&p, &s0);
    let gap = |dt: f64| {
        let (full, _) = try_step(&p, &s0, dt).unwrap();
        let (half, _) = try_step(&p, &s0, 0.5 * dt).unwrap();
        let (half, _) = try_step(&p, &half, 0.5 * dt).unwrap();
        l1(&full.rho, &half.rho, p.mesh.h()) + l1(&full.u, &half.u, p.mesh.h()) + l1(&full.theta, &half.theta, p.mesh.h())
    };
    let (g1, g2, g3) = (gap(base), gap(0.5 * base), gap(0.25 * base));
    let (o1, o2) = ((g1 / g2).log2(), (g2 / g3).log2());
    assert!(o1 > 2.7 && o2 > 2.7, "local orders {o1} {o2}");
}

#[test]
fn regularised_runs_approach_the_target() {
    let base = problem(32, light(), None, SolverConfig { t_end: 0.1, ..SolverConfig::default() });
    let s0 = FieldState::from_fn(&base.mesh, bump);
    let target = run(&base, &s0, &[]).into_result().unwrap();
    let target = target.final_state();
    let mut prev = f64::INFINITY;
    for k in 2..6 {
        let c = 2f64.powi(-k);
        let cfg = SolverConfig { epsilon: c, delta: c, ..base.config.clone() };
        let p = Problem { config: cfg, ..base.clone() };
        let traj = run(&p, &s0, &[]).into_result().unwrap();
        let end = traj.final_state();
        let d = l1(&end.rho, &target.rho, base.mesh.h()) + l1(&end.u, &target.u, base.mesh.h()) + l1(&end.theta, &target.theta, base.mesh.h());
        assert!(d < prev, "k = {k}: {d} after {prev}");
        prev = d;
    }
}

#[test]
fn accepted_states_respect_floors() {
    let cfg = SolverConfig { t_end: 0.3, ..SolverConfig::default() };
    let p = problem(48, light(), Some(channel(0.5, 0.5, 1.0, -1.25)), cfg.clone());
    let traj = run(&p, &FieldState::from_fn(&p.mesh, |x| (1.0 + 0.5 * (8.0 * x).sin(), 0.5, 1.0)), &[0.1, 0.2]);
    assert!(traj.aborted.is_none());
    for s in &traj.snapshots {
        assert!(s.rho.iter().all(|r| *r >= cfg.rho_floor));
        assert!(s.theta.iter().all(|t| *t >= cfg.theta_floor));
    }
    let st = storage(&p, traj.final_state());
    assert!(st.mass > 0.0);
}

#[test]
fn insulated_constant_temperature_is_unchanged() {
    let p = problem(16, TransportSpec::default(), None, SolverConfig::default());
    let frozen = FieldState::uniform(&p.mesh, 1.0, 0.0, 1.0);
    let theta = temperature_subproblem_step(&p, &frozen, &frozen.theta, 1e-3).unwrap();
    assert!(theta.iter().all(|t| (t - 1.0).abs() < 1e-14));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn comparison_principle(amp in 0.01f64..0.3, k in 1usize..4, gap in 0.01f64..0.2, shift in 0.0f64..1.0) {
        let p = problem(32, light(), None, SolverConfig::default());
        let frozen = FieldState::from_fn(&p.mesh, |x| (1.0 + 0.1 * (std::f64::consts::PI * x).cos(), 0.05 * (std::f64::consts::PI * x).sin(), 1.0));
        let wave = |x: f64| amp * (k as f64 * std::f64::consts::PI * (x + shift)).sin();
        let mut lo: Vec<f64> = p.mesh.centers().iter().map(|&x| 1.0 + wave(x)).collect();
        let mut hi: Vec<f64> = p.mesh.centers().iter().map(|&x| 1.0 + gap + wave(x) + 0.5 * gap * (3.0 * x).cos()).collect();
        let (min0, max0) = (lo.iter().cloned().fold(f64::INFINITY, f64::min), hi.iter().cloned().fold(0.0, f64::max));
        for _ in 0..100 {
            let mut s = frozen.clone();
            s.theta = hi.clone();
            let dt = stable_dt(&p, &s);
            lo = temperature_subproblem_step(&p, &frozen, &lo, dt).unwrap();
            hi = temperature_subproblem_step(&p, &frozen, &hi, dt).unwrap();
            for i in 0..lo.len() {
                prop_assert!(lo[i] <= hi[i], "order lost in cell {i}");
            }
        }
        // compression heating is bounded over the short horizon
        prop_assert!(lo.iter().all(|t| *t > 0.5 * min0));
        prop_assert!(hi.iter().all(|t| *t < 2.0 * max0));
    }
}
