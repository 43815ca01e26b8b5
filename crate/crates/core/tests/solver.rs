mod common;

use common::*;
use nssp_core::lab::advection_inner;
use nssp_core::*;

fn max_err(a: &RealField, b: &RealField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn closed_form_initial_conditions() {
    let g = GridSpec::new(2, 16, 0.01).unwrap();
    let u = make_initial(InitialKind::TaylorGreen2d, &g, 0, 0.0).unwrap();
    let want = RealField::from_fn(g, |x| {
        [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0]
    });
    assert!(max_err(&to_physical(&u, 1).unwrap(), &want) < 1e-14);
    assert!(u.divergence_residual() <= 1e-12 && u.is_divergence_free());

    let g = GridSpec::new(3, 16, 0.01).unwrap();
    let u = make_initial(InitialKind::Abc, &g, 0, 0.0).unwrap();
    let want = RealField::from_fn(g, |x| {
        [
            x[2].sin() + x[1].cos(),
            x[0].sin() + x[2].cos(),
            x[1].sin() + x[0].cos(),
        ]
    });
    assert!(max_err(&to_physical(&u, 1).unwrap(), &want) < 1e-14);
    assert!(u.is_divergence_free());

    let u = make_initial(InitialKind::TaylorGreen3d, &g, 0, 0.0).unwrap();
    assert!(u.is_divergence_free() && !u.is_zero());
}

#[test]
fn kind_dimension_mismatch() {
    let g2 = GridSpec::new(2, 16, 0.01).unwrap();
    let g3 = GridSpec::new(3, 16, 0.01).unwrap();
    assert!(make_initial(InitialKind::TaylorGreen2d, &g3, 0, 0.0).is_err());
    assert!(make_initial(InitialKind::Abc, &g2, 0, 0.0).is_err());
    assert!(make_initial(InitialKind::TaylorGreen3d, &g2, 0, 0.0).is_err());
    assert!(make_initial(InitialKind::RandomDivfree, &g2, 1, -2.0).is_ok());
}

#[test]
fn random_initial_is_deterministic_and_normalized() {
    let g = GridSpec::new(3, 16, 0.05).unwrap();
    let a = make_initial(InitialKind::RandomDivfree, &g, 42, -2.0).unwrap();
    let b = make_initial(InitialKind::RandomDivfree, &g, 42, -2.0).unwrap();
    let c = make_initial(InitialKind::RandomDivfree, &g, 43, -2.0).unwrap();
    assert_eq!(a.coeffs(), b.coeffs());
    assert_ne!(a.coeffs(), c.coeffs());
    assert!(a.is_divergence_free());
    assert_eq!(a.hermitian_defect(), 0.0);
    assert!(rel(l2_norm(&a).powi(2), (2.0 * std::f64::consts::PI).powi(3)) < 1e-12);
    // only dealias-retained modes
    for m in g.modes() {
        if 3 * m.k.iter().map(|x| x.unsigned_abs()).max().unwrap() as usize >= 16 {
            assert!((0..3).all(|c| a.component(c)[m.index].norm() == 0.0));
        }
    }
}

#[test]
fn random_initial_independent_of_resolution() {
    let a = random_divfree(&GridSpec::new(3, 16, 0.05).unwrap(), 5, -5.0 / 3.0, Some(4.0)).unwrap();
    let b = random_divfree(&GridSpec::new(3, 32, 0.05).unwrap(), 5, -5.0 / 3.0, Some(4.0)).unwrap();
    let ga = *a.grid();
    let gb = *b.grid();
    for m in gb.modes() {
        let v = b.at(m.index);
        if m.k2 > 16 {
            assert!(v.iter().all(|z| z.norm() == 0.0));
            continue;
        }
        let ma = ga.modes().find(|x| x.k == m.k).unwrap();
        let w = a.at(ma.index);
        for c in 0..3 {
            assert!((v[c] - w[c]).norm() < 1e-14);
        }
    }
}

#[test]
fn zero_field_is_fixed() {
    let g = GridSpec::new(3, 16, 0.05).unwrap();
    let cfg = SolverConfig::new(g, 0.01, 0.1);
    let z = leray_project(&SpectralField::zeros(g));
    assert!(step(&z, &cfg).unwrap().is_zero());
}

#[test]
fn taylor_green_decay_short() {
    let g = GridSpec::new(2, 32, 0.01).unwrap();
    let u0 = make_initial(InitialKind::TaylorGreen2d, &g, 0, 0.0).unwrap();
    let cfg = SolverConfig::new(g, 1e-3, 0.2);
    let rec = run(&u0, &cfg).unwrap();
    let last = rec.checkpoints.last().unwrap();
    let ratio = l2_norm(last) / l2_norm(&u0);
    assert!(rel(ratio, (-2.0 * 0.01 * 0.2f64).exp()) < 1e-6);
}

#[test]
fn inviscid_energy_conserved_per_step() {
    let g = GridSpec::new(3, 16, 0.05).unwrap();
    let u0 = random_divfree(&g, 3, -2.0, None).unwrap();
    let mut cfg = SolverConfig::new(g, 1e-3, 1e-3);
    cfg.inviscid = true;
    let mut u = u0;
    for _ in 0..5 {
        let next = step(&u, &cfg).unwrap();
        let drift = (l2_norm(&next).powi(2) - l2_norm(&u).powi(2)).abs() / l2_norm(&u).powi(2);
        // Heun leaves an O(dt³) energy error per step; the nonlinearity itself is exactly skew
        assert!(drift < 1e-8, "{drift}");
        let n = nonlinear_term(&u, &cfg).unwrap();
        assert!(n.inner(&u).abs() <= 1e-10 * l2_norm(&u) * l2_norm(&n));
        u = next;
    }
}

#[test]
fn cancellation_identities() {
    let g = GridSpec::new(3, 16, 0.05).unwrap();
    for seed in 0..4 {
        let u = random_divfree(&g, seed, -5.0 / 3.0, None).unwrap();
        for form in [NonlinearForm::Rotational, NonlinearForm::Convective] {
            let mut cfg = SolverConfig::new(g, 1e-2, 1e-2);
            cfg.nonlinear_form = form;
            let n = nonlinear_term(&u, &cfg).unwrap();
            assert!(n.inner(&u).abs() <= 1e-10 * l2_norm(&u) * l2_norm(&n));
            assert!(n.is_divergence_free());
        }
        for k in [2.0, 4.0] {
            let uk = highpass(&u, k);
            let p = advection_inner(&u, &uk, &uk).unwrap();
            let scale = grad_l2_norm(&uk) * l2_norm(&uk) * linf_norm(&u, 2).unwrap();
            assert!(p.abs() <= 1e-10 * scale, "{p} vs {scale}");
        }
    }
}

#[test]
fn forms_agree_after_projection() {
    let g = GridSpec::new(3, 16, 0.05).unwrap();
    let u = random_divfree(&g, 9, -2.0, None).unwrap();
    let mut cfg = SolverConfig::new(g, 1e-2, 1e-2);
    let a = nonlinear_term(&u, &cfg).unwrap();
    cfg.nonlinear_form = NonlinearForm::Convective;
    let b = nonlinear_term(&u, &cfg).unwrap();
    assert!(l2_norm(&a.sub(&b)) <= 1e-12 * l2_norm(&a));
}

#[test]
fn record_shapes() {
    let g = GridSpec::new(3, 8, 0.05).unwrap();
    let u0 = random_divfree(&g, 1, -2.0, None).unwrap();
    let mut cfg = SolverConfig::new(g, 0.01, 0.0);
    let rec = run(&u0, &cfg).unwrap();
    assert_eq!(rec.len(), 1);
    assert_eq!(rec.times, vec![0.0]);

    cfg.t_end = 0.23;
    cfg.sample_every = 5;
    cfg.k_ladder = vec![1.0, 2.0];
    let rec = run(&u0, &cfg).unwrap();
    assert_eq!(rec.len(), 23 / 5 + 1);
    assert!(rec.times.windows(2).all(|w| w[0] < w[1]));
    assert!(rec.checkpoints.iter().all(|u| u.is_divergence_free()));
    assert!(rec
        .diagnostics
        .windows(2)
        .all(|w| w[1].dissipation_integral >= w[0].dissipation_integral));
    for row in &rec.diagnostics {
        assert!(row.energy >= 0.0);
        assert_eq!(row.truncated_energies.len(), 2);
    }
}

#[test]
fn runs_are_bitwise_reproducible() {
    let g = GridSpec::new(3, 8, 0.05).unwrap();
    let u0 = random_divfree(&g, 1, -2.0, None).unwrap();
    let cfg = SolverConfig::new(g, 0.01, 0.1);
    let a = run(&u0, &cfg).unwrap();
    let b = run(&u0, &cfg).unwrap();
    for (x, y) in a.checkpoints.iter().zip(&b.checkpoints) {
        assert_eq!(x.coeffs(), y.coeffs());
    }
}

#[test]
fn config_validation() {
    let g = GridSpec::new(3, 16, 0.05).unwrap();
    let u0 = random_divfree(&g, 1, -2.0, None).unwrap();
    for bad in [
        SolverConfig::new(g, 0.0, 1.0),
        SolverConfig::new(g, 0.01, 0.015),
        SolverConfig::new(g, 100.0, 100.0),
        SolverConfig { sample_every: 0, ..SolverConfig::new(g, 0.01, 0.1) },
        SolverConfig { k_ladder: vec![2.0, 1.0], ..SolverConfig::new(g, 0.01, 0.1) },
    ] {
        assert!(run(&u0, &bad).is_err());
    }
    // the dealiased stepper refuses input outside the retained set
    let raw = leray_project(&random_field(g, 2));
    assert!(step(&raw, &SolverConfig::new(g, 0.01, 0.01)).is_err());
    let cfg = SolverConfig { dealias: Dealias::None, ..SolverConfig::new(g, 0.01, 0.01) };
    assert!(step(&raw, &cfg).is_ok());
    // non-solenoidal input
    let mut plain = random_field(g, 2);
    plain = plain.masked(|m| 3 * m.k.iter().map(|x| x.unsigned_abs()).max().unwrap() < 16);
    assert!(step(&plain, &SolverConfig::new(g, 0.01, 0.01)).is_err());
}

#[test]
fn blow_up_is_reported_with_last_state() {
    let g = GridSpec::new(3, 8, 0.05).unwrap();
    let u0 = random_divfree(&g, 1, 0.0, None).unwrap().scaled(1e3);
    let mut cfg = SolverConfig::new(g, 0.5, 500.0);
    cfg.dealias = Dealias::None;
    cfg.inviscid = true;
    let rec = run(&u0, &cfg).unwrap();
    match rec.abort {
        Some(Error::BlowUpSuspected { time, last_finite }) => {
            assert!(time > 0.0 && time <= 500.0);
            assert!(last_finite.all_finite());
        }
        other => panic!("expected abort, got {other:?}"),
    }
    assert!(rec.checkpoints.iter().all(|u| u.all_finite()));
}
