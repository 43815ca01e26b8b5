use alloc::format;
use num_complex::Complex64 as C;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{precondition, Result};
use crate::field::{SpectralField, Trig};
use crate::grid::{radius, GridSpec, BOX_LENGTH};
use crate::ops::l2_norm;

use super::integrator::dealias_retains;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    /// `(sin x cos y, -cos x sin y)`
    TaylorGreen2d,
    /// `(sin x cos y cos z, -cos x sin y cos z, 0)`
    TaylorGreen3d,
    /// Arnold-Beltrami-Childress flow with `A = B = C = 1`.
    Abc,
    /// Random solenoidal field with a power-law shell spectrum.
    RandomDivfree,
}

impl InitialKind {
    pub fn dim(&self) -> Option<usize> {
        match self {
            InitialKind::TaylorGreen2d => Some(2),
            InitialKind::TaylorGreen3d | InitialKind::Abc => Some(3),
            InitialKind::RandomDivfree => None,
        }
    }
}

/// Canonical initial data. `seed` and `spectrum_slope` only affect
/// [`InitialKind::RandomDivfree`], which fills every mode kept by the 2/3 rule.
pub fn make_initial(
    kind: InitialKind,
    grid: &GridSpec,
    seed: u64,
    spectrum_slope: f64,
) -> Result<SpectralField> {
    if let Some(d) = kind.dim() {
        if d != grid.dim() {
            return precondition(format!("{kind:?} needs dim {d}, grid has {}", grid.dim()));
        }
    }
    use Trig::{Cos, Sin};
    let mut u = SpectralField::zeros(*grid);
    match kind {
        InitialKind::TaylorGreen2d => {
            u.add_separable(0, 1.0, &[(Sin, 1), (Cos, 1)]);
            u.add_separable(1, -1.0, &[(Cos, 1), (Sin, 1)]);
        }
        InitialKind::TaylorGreen3d => {
            u.add_separable(0, 1.0, &[(Sin, 1), (Cos, 1), (Cos, 1)]);
            u.add_separable(1, -1.0, &[(Cos, 1), (Sin, 1), (Cos, 1)]);
        }
        InitialKind::Abc => {
            u.add_separable(0, 1.0, &[(Cos, 0), (Cos, 0), (Sin, 1)]);
            u.add_separable(0, 1.0, &[(Cos, 0), (Cos, 1), (Cos, 0)]);
            u.add_separable(1, 1.0, &[(Sin, 1), (Cos, 0), (Cos, 0)]);
            u.add_separable(1, 1.0, &[(Cos, 0), (Cos, 0), (Cos, 1)]);
            u.add_separable(2, 1.0, &[(Cos, 0), (Sin, 1), (Cos, 0)]);
            u.add_separable(2, 1.0, &[(Cos, 1), (Cos, 0), (Cos, 0)]);
        }
        InitialKind::RandomDivfree => return random_divfree(grid, seed, spectrum_slope, None),
    }
    Ok(u)
}

/// Random divergence-free field normalized to unit mean-square velocity.
///
/// Coefficients are drawn from a ChaCha8 stream over the cube
/// `|ξ_i| ≤ K` in a fixed order, with `K = ⌊k_cut⌋` when a cutoff is given and
/// the 2/3-rule limit otherwise. With `k_cut` below `n/3` the field is
/// therefore the same function at every resolution. Each mode gets amplitude
/// `|ξ|^{(slope-(d-1))/2}` so the shell-summed spectrum scales as `|ξ|^slope`.
pub fn random_divfree(
    grid: &GridSpec,
    seed: u64,
    spectrum_slope: f64,
    k_cut: Option<f64>,
) -> Result<SpectralField> {
    if !spectrum_slope.is_finite() {
        return precondition("spectrum slope must be finite");
    }
    if let Some(kc) = k_cut {
        if !(kc >= 1.0) || !kc.is_finite() {
            return precondition("k_cut must be finite and >= 1");
        }
    }
    let d = grid.dim();
    let n = grid.n() as i32;
    let h = grid.half();
    let l = grid.spectral_len();
    let kk = match k_cut {
        Some(kc) => libm::floor(kc) as i32,
        None => (n - 1) / 3,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = SpectralField::zeros(*grid);
    let expo = (spectrum_slope - (d as f64 - 1.0)) / 2.0;
    let side = (2 * kk + 1) as usize;
    let total = side.pow(d as u32);
    let coeffs = u.coeffs_mut();
    for flat in 0..total {
        let mut k = [0i32; 3];
        let mut r = flat;
        for a in (0..d).rev() {
            k[a] = (r % side) as i32 - kk;
            r /= side;
        }
        // Canonical half space: last nonzero component positive.
        let lead = k[..d].iter().rev().find(|&&x| x != 0).copied().unwrap_or(0);
        if lead <= 0 {
            continue;
        }
        let mut z = [C::new(0.0, 0.0); 3];
        for c in z.iter_mut().take(d) {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *c = C::new(re, im);
        }
        let k2: u64 = k[..d].iter().map(|&x| (x * x) as u64).sum();
        let inside = k_cut.map_or(true, |kc| radius(k2) <= kc);
        if !inside || !dealias_retains(n as usize, &k[..d]) {
            continue;
        }
        let amp = libm::pow(k2 as f64, expo / 2.0);
        let mut dot = C::new(0.0, 0.0);
        for a in 0..d {
            dot += z[a] * k[a] as f64;
        }
        for a in 0..d {
            z[a] = (z[a] - dot * (k[a] as f64 / k2 as f64)) * amp;
        }
        let index = |k: &[i32; 3]| {
            let mut f = 0usize;
            for a in 0..d - 1 {
                f = f * grid.n() + k[a].rem_euclid(n) as usize;
            }
            f * h + k[d - 1] as usize
        };
        let at = index(&k);
        for c in 0..d {
            coeffs[c * l + at] = z[c];
        }
        if k[d - 1] == 0 {
            let mut m = [0i32; 3];
            for a in 0..d {
                m[a] = -k[a];
            }
            let at = index(&m);
            for c in 0..d {
                coeffs[c * l + at] = z[c].conj();
            }
        }
    }
    let norm = l2_norm(&u);
    if norm == 0.0 {
        return precondition("no modes selected for the random field");
    }
    let target = libm::sqrt(libm::pow(BOX_LENGTH, d as f64));
    let mut u = u.scaled(target / norm);
    let sol = u.divergence_residual() <= crate::field::DIVERGENCE_TOL;
    u.set_solenoidal(sol);
    Ok(u)
}
