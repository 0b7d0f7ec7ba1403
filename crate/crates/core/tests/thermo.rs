use nsf::thermo::{from_conservative, to_conservative, transport_coefficients, EosSpec, PowerLaw, ThermoState, TransportSpec};
use proptest::prelude::*;

fn iconic(a: f64) -> EosSpec {
    EosSpec::iconic(a, 1.0).unwrap()
}

fn iconic_table(third_law: bool) -> EosSpec {
    let mut z = vec![0.0];
    let mut p = vec![0.0];
    for k in 0..=60 {
        let zz = 10f64.powf(-3.0 + 0.1 * k as f64);
        z.push(zz);
        p.push(zz + zz.powf(5.0 / 3.0));
    }
    EosSpec::tabulated(1.0, z, p, third_law).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn hand_evaluated_values() {
    let e1 = iconic(1.0);
    let e0 = iconic(0.0);
    assert!((e1.pressure(1.0, 1.0).unwrap() - 7.0 / 3.0).abs() < 1e-14);
    assert!((e1.pressure(0.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    assert!((e0.pressure(2.0, 1.0).unwrap() - (2.0 + 2f64.powf(5.0 / 3.0))).abs() < 1e-13);
    assert!((e1.specific_internal_energy(1.0, 1.0).unwrap() - 4.0).abs() < 1e-14);
    assert!((e0.specific_internal_energy(1.0, 2.0).unwrap() - 4.5).abs() < 1e-13);
    assert!((e1.specific_entropy(1.0, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
    assert!((e0.specific_entropy(1.0, (2.0f64 / 3.0).exp()).unwrap() - 1.0).abs() < 1e-13);
    let (p_rho, _) = e0.stability_margins(1.0, 1.0).unwrap();
    let (_, e_theta) = e1.stability_margins(1.0, 1.0).unwrap();
    assert!((p_rho - 8.0 / 3.0).abs() < 1e-13);
    assert!((e_theta - 5.5).abs() < 1e-13);
}

#[test]
fn iconic_energy_split() {
    let eos = iconic(0.7);
    for &(r, t) in &[(0.3, 0.5), (2.0, 1.7), (5.0, 0.2)] {
        let rho_e = r * eos.specific_internal_energy(r, t).unwrap();
        let split = 1.5 * r * t + 1.5 * r.powf(5.0 / 3.0) + 0.7 * t.powi(4);
        assert!(close(rho_e, split, 1e-13), "{rho_e} vs {split}");
    }
}

#[test]
fn entropy_profile_decreases() {
    for eos in [iconic(1.0), iconic_table(false)] {
        assert!(eos.entropy_profile(2.0) < eos.entropy_profile(1.0));
    }
}

#[test]
fn entropy_constant_does_not_enter_gibbs_residual() {
    let a = EosSpec::iconic(1.0, 1.0).unwrap();
    let b = EosSpec::iconic_with_entropy_const(1.0, 1.0, 37.5).unwrap();
    for &(r, t) in &[(0.2, 3.0), (1.0, 1.0), (7.0, 0.4)] {
        assert_eq!(a.gibbs_residual(r, t).unwrap(), b.gibbs_residual(r, t).unwrap());
    }
}

#[test]
fn conservative_examples() {
    let e1 = iconic(1.0);
    let c = to_conservative(&e1, &ThermoState::new_1d(1.0, 0.0, 1.0)).unwrap();
    assert!((c.s - 4.0 / 3.0).abs() < 1e-14 && c.rho == 1.0 && c.m == [0.0; 3]);
    let back = from_conservative(&e1, &c).unwrap();
    assert!((back.theta - 1.0).abs() < 1e-12);
    let c0 = nsf::thermo::ConservativeState { rho: 1.0, m: [0.0; 3], s: 0.0 };
    assert!((from_conservative(&iconic(0.0), &c0).unwrap().theta - 1.0).abs() < 1e-12);
    let fast = to_conservative(&e1, &ThermoState::new_1d(1.0, 2.0, 1.0)).unwrap();
    let slow = to_conservative(&e1, &ThermoState::new_1d(1.0, 1.0, 1.0)).unwrap();
    assert_eq!(fast.m[0], 2.0 * slow.m[0]);
    assert_eq!((fast.rho, fast.s), (slow.rho, slow.s));
}

#[test]
fn extended_energy_examples() {
    let third = iconic_table(true);
    assert_eq!(third.extended_internal_energy(0.0, 0.0), 0.0);
    assert_eq!(third.extended_internal_energy(1.0, -1.0), f64::INFINITY);
    let e1 = iconic(1.0);
    assert!((e1.extended_internal_energy(1.0, 4.0 / 3.0) - 4.0).abs() < 1e-10);
}

#[test]
fn pressure_shape_ratio_is_nonincreasing() {
    for eos in [iconic(1.0), iconic_table(false)] {
        let mut prev = f64::INFINITY;
        for k in 0..=600 {
            let z = 10f64.powf(-3.0 + 0.01 * k as f64);
            let r = eos.shape.p(z) / z.powf(5.0 / 3.0);
            assert!(r <= prev * (1.0 + 1e-12), "ratio rises at Z = {z}");
            prev = r;
        }
        assert!(prev > 0.0);
    }
}

#[test]
fn entropy_profile_slope_matches_pressure_shape() {
    for eos in [iconic(1.0), iconic_table(false)] {
        for k in 0..=40 {
            let z = 10f64.powf(-2.0 + 0.1 * k as f64);
            let h = 1e-5 * z;
            let fd = (eos.entropy_profile(z + h) - eos.entropy_profile(z - h)) / (2.0 * h);
            let p = eos.shape.p(z);
            let dp = (eos.shape.p(z + h) - eos.shape.p(z - h)) / (2.0 * h);
            let want = -1.5 * (5.0 / 3.0 * p - dp * z) / (z * z);
            assert!(close(fd, want, 1e-6), "Z = {z}: {fd} vs {want}");
        }
    }
}

#[test]
fn transport_examples() {
    let ts = TransportSpec::default();
    let (mu, eta, _) = transport_coefficients(&ts, 1.0);
    assert!((mu - 2.0).abs() < 1e-15);
    assert_eq!(eta, 0.0);
    assert!(ts.validate().is_ok());
    assert!((transport_coefficients(&ts, 2.0).2 - 9.0).abs() < 1e-14);
    let off = TransportSpec {
        kappa: PowerLaw::new(-1.0, 1.0),
        ..TransportSpec::default()
    };
    assert!(off.validate().is_err());
}

fn state() -> impl Strategy<Value = (f64, f64)> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| (10f64.powf(a), 10f64.powf(b)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn gibbs_residual_vanishes((r, t) in state(), a in prop_oneof![Just(0.0), Just(1.0)], table in any::<bool>()) {
        let eos = if table { iconic_table(false) } else { iconic(a) };
        let (g1, g2) = eos.gibbs_residual(r, t).unwrap();
        if table {
            // tabulated shapes carry interpolation error in P' only, not in
            // the Gibbs structure
            prop_assert!(g1.abs() < 1e-8 && g2.abs() < 1e-8, "{g1} {g2}");
        } else {
            prop_assert!(g1.abs() < 1e-10 && g2.abs() < 1e-10, "{g1} {g2}");
        }
    }

    #[test]
    fn stability_margins_positive((r, t) in state(), a in 0.0f64..2.0) {
        let (p_rho, e_theta) = iconic(a).stability_margins(r, t).unwrap();
        prop_assert!(p_rho > 0.0 && e_theta > 0.0);
    }

    #[test]
    fn conservative_round_trip((r, t) in state(), u in -5.0f64..5.0, table in any::<bool>()) {
        let eos = if table { iconic_table(false) } else { iconic(1.0) };
        let s = ThermoState::new_1d(r, u, t);
        let back = from_conservative(&eos, &to_conservative(&eos, &s).unwrap()).unwrap();
        prop_assert!(close(back.rho, r, 1e-12));
        prop_assert!(close(back.u[0], u, 1e-12));
        prop_assert!(close(back.theta, t, 1e-10), "{} vs {t}", back.theta);
    }

    #[test]
    fn extended_energy_is_convex((r1, t1) in state(), (r2, t2) in state(), k in 1usize..4) {
        let eos = iconic(1.0);
        let s1 = r1 * eos.specific_entropy(r1, t1).unwrap();
        let s2 = r2 * eos.specific_entropy(r2, t2).unwrap();
        let lam = 0.25 * k as f64;
        let e1 = eos.extended_internal_energy(r1, s1);
        let e2 = eos.extended_internal_energy(r2, s2);
        let mid = eos.extended_internal_energy(lam * r1 + (1.0 - lam) * r2, lam * s1 + (1.0 - lam) * s2);
        prop_assert!(mid <= lam * e1 + (1.0 - lam) * e2 + 1e-9 * (1.0 + e1.abs() + e2.abs()));
    }

    #[test]
    fn temperature_and_pressure_identities((r, t) in state()) {
        let eos = iconic(1.0);
        let s = r * eos.specific_entropy(r, t).unwrap();
        let h = 1e-5;
        let de_ds = (eos.extended_internal_energy(r, s + h) - eos.extended_internal_energy(r, s - h)) / (2.0 * h);
        let theta = from_conservative(&eos, &nsf::thermo::ConservativeState { rho: r, m: [0.0; 3], s }).unwrap().theta;
        prop_assert!(close(de_ds, theta, 1e-6), "{de_ds} vs {theta}");

        let hr = 1e-5 * r;
        let de_dr = (eos.extended_internal_energy(r + hr, s) - eos.extended_internal_energy(r - hr, s)) / (2.0 * hr);
        let e = eos.specific_internal_energy(r, t).unwrap();
        let sp = eos.specific_entropy(r, t).unwrap();
        let p = eos.pressure(r, t).unwrap();
        let want = e - t * sp + p / r;
        // the three terms nearly cancel at high temperature, so the
        // tolerance is relative to their size
        let scale = 1.0 + e.abs() + (t * sp).abs() + (p / r).abs();
        prop_assert!((de_dr - want).abs() <= 1e-6 * scale, "{de_dr} vs {want}");
    }

    #[test]
    fn pressure_increases_in_density((r, t) in state(), f in 1.001f64..2.0) {
        let eos = iconic(1.0);
        prop_assert!(eos.pressure(r * f, t).unwrap() > eos.pressure(r, t).unwrap());
        prop_assert!(eos.specific_internal_energy(r, t * f).unwrap() > eos.specific_internal_energy(r, t).unwrap());
    }
}
