mod common;

use common::*;
use nssp_core::lab::*;
use nssp_core::*;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((2, 8)), Just((2, 16)), Just((3, 8)), Just((3, 16))]
}

fn mean_square(v: &RealField) -> f64 {
    let g = v.grid();
    let vol = (2.0 * std::f64::consts::PI).powi(g.dim() as i32);
    v.values().iter().map(|x| x * x).sum::<f64>() * vol / g.points() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval((d, n) in dims(), seed in any::<u64>(), os in 1usize..=2) {
        let mut f = random_field(grid(d, n), seed);
        if os == 2 {
            // the interpolant splits Nyquist content, which carries base-lattice weight
            f = f.masked(|m| !m.nyquist);
        }
        let l2 = l2_norm(&f).powi(2);
        let ms = mean_square(&to_physical(&f, os).unwrap());
        prop_assert!((l2 - ms).abs() <= 1e-10 * l2);
    }

    #[test]
    fn round_trip_keeps_symmetry((d, n) in dims(), seed in any::<u64>()) {
        let f = random_field(grid(d, n), seed);
        prop_assert_eq!(f.hermitian_defect(), 0.0);
        let back = to_spectral(&to_physical(&f, 1).unwrap()).unwrap();
        prop_assert_eq!(back.hermitian_defect(), 0.0);
        prop_assert!(l2_norm(&back.sub(&f)) <= 1e-12 * l2_norm(&f));
    }

    #[test]
    fn leray_is_orthogonal_projection((d, n) in dims(), a in any::<u64>(), b in any::<u64>()) {
        let g = grid(d, n);
        let (u, v) = (random_field(g, a), random_field(g, b));
        let (pu, pv) = (leray_project(&u), leray_project(&v));
        prop_assert!(pu.divergence_residual() <= DIVERGENCE_TOL);
        prop_assert!(l2_norm(&leray_project(&pu).sub(&pu)) <= 1e-13 * l2_norm(&pu));
        let scale = l2_norm(&u) * l2_norm(&v);
        prop_assert!((pu.inner(&v) - u.inner(&pv)).abs() <= 1e-12 * scale);
        prop_assert!(l2_norm(&pu) <= l2_norm(&u) * (1.0 + 1e-14));
    }

    #[test]
    fn refined_linf_never_smaller((d, n) in dims(), seed in any::<u64>()) {
        let f = random_field(grid(d, n), seed);
        prop_assert!(linf_norm(&f, 2).unwrap() >= linf_norm(&f, 1).unwrap());
    }

    #[test]
    fn masks_are_exact((d, n) in dims(), seed in any::<u64>(), k in 0.0f64..12.0, h in 0.0f64..12.0) {
        let u = random_field(grid(d, n), seed);
        let hp = highpass(&u, k);
        prop_assert!(highpass(&hp, k).coeffs() == hp.coeffs());
        prop_assert!(lowpass(&u, k).add(&hp).coeffs() == u.coeffs());
        let (lo, hi) = if h < k { (h, k) } else { (k, h + 1.0) };
        let b = band(&u, lo, hi).unwrap();
        prop_assert!(b.add(&highpass(&u, hi)).coeffs() == highpass(&u, lo).coeffs());
    }

    #[test]
    fn besov_monotone_and_homogeneous(seed in any::<u64>(), lambda in -5.0f64..5.0, sigma in -1.0f64..=0.0) {
        let u = random_field(grid(3, 8), seed).masked(|m| m.k2 > 0);
        let p = BesovParams::new(sigma, true).unwrap();
        let base = besov_norm(&u, p).unwrap();
        let scaled = besov_norm(&u.scaled(lambda), p).unwrap();
        prop_assert!((scaled - lambda.abs() * base).abs() <= 1e-12 * base.max(1e-300));
        let m1 = BesovParams::new(-1.0, false).unwrap();
        let mut prev = f64::INFINITY;
        // cutoffs on block boundaries remove whole blocks
        for k in [0.0, 1.0, 2.0, 4.0, 8.0] {
            let b = besov_norm(&highpass(&u, k), m1).unwrap();
            prop_assert!(b <= prev * (1.0 + 1e-12));
            prev = b;
        }
    }

    #[test]
    fn decomposition_reconstructs((d, n) in dims(), seed in any::<u64>()) {
        let u = random_field(grid(d, n), seed);
        let dec = dyadic_decompose(&u);
        prop_assert!(l2_norm(&dec.reconstruct().sub(&u)) <= 1e-12 * l2_norm(&u));
    }

    #[test]
    fn orthogonality_and_bernstein((d, n) in dims(), seed in any::<u64>(),
                                  k in 0.1f64..10.0, dl in 0.0f64..5.0, alpha in 0.05f64..3.0) {
        let u = random_field(grid(d, n), seed);
        prop_assert!(check_orthogonality(&u, k, k + dl).unwrap().passed());
        prop_assert!(check_bernstein(&u, k, alpha).unwrap().passed());
    }

    #[test]
    fn product_support_random(seed in any::<u64>(), k in 1.0f64..4.0, l in 1.0f64..4.0) {
        let u = random_field(grid(3, 8), seed);
        prop_assert!(check_product_support(&u, k, l).unwrap().passed());
    }

    #[test]
    fn solver_step_keeps_solenoidal(seed in any::<u64>(), slope in -3.0f64..0.0) {
        let g = GridSpec::new(3, 8, 0.05).unwrap();
        let u = random_divfree(&g, seed, slope, None).unwrap();
        let next = step(&u, &SolverConfig::new(g, 0.01, 0.01)).unwrap();
        prop_assert!(next.is_divergence_free());
        prop_assert_eq!(next.hermitian_defect(), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn shell_identities(n in prop_oneof![Just(16usize), Just(32)], seed in any::<u64>(),
                        k in 1u64..=3, s in 1u32..=3) {
        let u = random_field(grid(3, n), seed);
        prop_assert!(superposition_identity(&u, k).unwrap().passed());
        prop_assert!(poly_superposition_identity(&u, k, s).unwrap().passed());
        let h = hhalf_equivalence(&u, k).unwrap();
        prop_assert!(h.passed() && (1.0..=2.0).contains(&h.margin));
    }

    #[test]
    fn rearrangement_identity(seed in any::<u64>(), s in 1u32..=3, l1 in 1u64..=3, i_frac in 0.0f64..1.0) {
        let i = 1 + (i_frac * (2 * s - 1) as f64) as u32;
        let i = i.min(2 * s - 1);
        let u = random_field(grid(3, 16), seed);
        prop_assert!(weighted_rearrangement(&u, l1, i, s).unwrap().passed());
    }

    #[test]
    fn power_sums(i in 1u32..=POWER_SUM_LIMIT, j in 1u32..=POWER_SUM_LIMIT) {
        prop_assert!(power_sum_bounds(i, j).unwrap().passed());
    }

    #[test]
    fn a_of_s_decreasing(c2 in 1e-4f64..10.0, m in 1e-3f64..10.0, mt in 0.51f64..1e3) {
        let mut prev = f64::INFINITY;
        for s in 1..=64 {
            let a = a_of_s(c2, m, mt, s);
            prop_assert!(a < prev);
            prev = a;
        }
    }
}
