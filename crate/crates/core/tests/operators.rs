mod common;

use common::*;
use nssp_core::*;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

#[test]
fn leray_annihilates_gradients() {
    let g = grid(3, 16);
    let phi = random_field(g, 9);
    let mut coeffs = vec![C::new(0.0, 0.0); g.spectral_len() * 3];
    let l = g.spectral_len();
    for m in g.modes() {
        let p = phi.component(0)[m.index];
        for a in 0..3 {
            coeffs[a * l + m.index] = C::new(0.0, 1.0) * p * m.k[a] as f64;
        }
    }
    let grad = SpectralField::from_coeffs(g, coeffs).unwrap();
    let out = leray_project(&grad);
    assert!(l2_norm(&out) <= 1e-13 * l2_norm(&grad));
    assert!(out.is_divergence_free());
}

#[test]
fn leray_keeps_solenoidal_field() {
    let g = grid(3, 16);
    let f = to_spectral(&RealField::from_fn(g, |x| [0.0, x[0].sin(), 0.0])).unwrap();
    let p = leray_project(&f);
    assert!(l2_norm(&p.sub(&f)) <= 1e-14 * l2_norm(&f));
}

#[test]
fn leray_idempotent_on_random_field() {
    let f = random_field(grid(3, 16), 2);
    let p = leray_project(&f);
    let pp = leray_project(&p);
    assert!(p.divergence_residual() <= DIVERGENCE_TOL);
    assert!(l2_norm(&pp.sub(&p)) <= 1e-12 * l2_norm(&p));
    assert!(p.hermitian_defect() == 0.0);
}

#[test]
fn norms_of_sine() {
    for dim in [2, 3] {
        let g = grid(dim, 16);
        let f = to_spectral(&RealField::from_fn(g, |x| {
            let mut v = [0.0; 3];
            v[1] = x[0].sin();
            v
        }))
        .unwrap();
        let want = (2.0 * PI).powi(dim as i32) / 2.0;
        assert!(rel(l2_norm(&f).powi(2), want) < 1e-13);
        assert!(rel(grad_l2_norm(&f).powi(2), want) < 1e-13);
        assert!((linf_norm(&f, 1).unwrap() - 1.0).abs() < 1e-13);
        assert!((linf_norm(&f, 2).unwrap() - 1.0).abs() < 1e-13);
    }
}

#[test]
fn sobolev_of_single_mode() {
    let g = grid(3, 16);
    let f = cos_mode(g, [3, 4, 0], 2);
    let unit = f.scaled(1.0 / l2_norm(&f));
    for alpha in [-1.0, 0.5, 1.0, 2.0] {
        let s = sobolev_norm(&unit, alpha, true).unwrap();
        assert!(rel(s, 5f64.powf(alpha)) < 1e-13, "alpha {alpha}");
        let s = sobolev_norm(&unit, alpha, false).unwrap();
        assert!(rel(s, 26f64.powf(alpha / 2.0)) < 1e-13);
    }
}

#[test]
fn negative_homogeneous_norm_needs_zero_mean() {
    let g = grid(2, 8);
    let f = to_spectral(&RealField::from_fn(g, |_| [1.0, 0.0, 0.0])).unwrap();
    assert!(sobolev_norm(&f, -0.5, true).is_err());
    assert!(sobolev_norm(&f, -0.5, false).is_ok());
    assert!(sobolev_norm(&f, 0.5, true).is_ok());
}

#[test]
fn gradient_norm_matches_finite_differences() {
    let g = GridSpec::new(3, 64, 0.05).unwrap();
    let f = random_divfree(&g, 4, -3.0, Some(3.0)).unwrap();
    let v = to_physical(&f, 1).unwrap();
    let n = 64usize;
    let h = 2.0 * PI / n as f64;
    let mut sum = 0.0;
    for c in 0..3 {
        let comp = v.component(c);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let at = |a: usize, b: usize, d: usize| comp[(a % n * n + b % n) * n + d % n];
                    let dx = (at(i + 1, j, k) - at(i + n - 1, j, k)) / (2.0 * h);
                    let dy = (at(i, j + 1, k) - at(i, j + n - 1, k)) / (2.0 * h);
                    let dz = (at(i, j, k + 1) - at(i, j, k + n - 1)) / (2.0 * h);
                    sum += dx * dx + dy * dy + dz * dz;
                }
            }
        }
    }
    let fd = sum * (2.0 * PI).powi(3) / (n * n * n) as f64;
    let spectral = grad_l2_norm(&f).powi(2);
    assert!(rel(fd, spectral) < 0.01, "{}", rel(fd, spectral));
}
