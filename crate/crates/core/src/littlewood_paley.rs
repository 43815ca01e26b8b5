//! Sharp frequency projections, the dyadic decomposition and `B^σ_{∞,∞}` norms.
//!
//! Cutoffs are characteristic functions of `|ξ|`: `u^k` keeps `|ξ| ≥ k`,
//! `u_k = u - u^k` keeps `|ξ| < k`, `Δ_j` keeps `2^{j-1} ≤ |ξ| < 2^j` and
//! `Δ̃₀` keeps `|ξ| < 1`, which on the integer lattice is the mean mode.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{precondition, Result};
use crate::field::SpectralField;
use crate::grid::{radius, GridSpec};
use crate::ops::linf_norm;

/// `u^k`: modes with `|ξ| ≥ k`.
pub fn highpass(u: &SpectralField, k: f64) -> SpectralField {
    u.masked(|m| m.radius() >= k)
}

/// `u_k = u - u^k`: modes with `|ξ| < k`.
pub fn lowpass(u: &SpectralField, k: f64) -> SpectralField {
    u.masked(|m| !(m.radius() >= k))
}

/// `u_{h,k} = u^h - u^k`: modes with `h ≤ |ξ| < k`.
pub fn band(u: &SpectralField, h: f64, k: f64) -> Result<SpectralField> {
    if !(h >= 0.0 && h < k) {
        return precondition("band requires 0 <= h < k");
    }
    Ok(u.masked(|m| {
        let r = m.radius();
        r >= h && r < k
    }))
}

/// `Δ_j u`. Blocks with `j ≤ 0` contain no lattice points and come back zero.
pub fn dyadic_block(u: &SpectralField, j: i32) -> SpectralField {
    if j <= 0 {
        return u.masked(|_| false);
    }
    let (lo, hi) = block_bounds(j);
    u.masked(|m| {
        let r = m.radius();
        r >= lo && r < hi
    })
}

fn block_bounds(j: i32) -> (f64, f64) {
    (libm::ldexp(1.0, j - 1), libm::ldexp(1.0, j))
}

/// Largest `j` whose block intersects the grid.
pub(crate) fn max_block(grid: &GridSpec) -> i32 {
    let mut j = 1;
    while libm::ldexp(1.0, j) <= grid.max_radius() {
        j += 1;
    }
    j
}

/// Blocks `Δ_j u` for every `j ≥ 1` that holds lattice points, plus `Δ̃₀ u`.
#[derive(Debug, Clone)]
pub struct DyadicDecomposition {
    pub blocks: BTreeMap<i32, SpectralField>,
    pub tilde_block: SpectralField,
    pub source_grid: GridSpec,
}

impl DyadicDecomposition {
    /// Sum of all blocks and the mean block.
    pub fn reconstruct(&self) -> SpectralField {
        self.blocks
            .values()
            .fold(self.tilde_block.clone(), |acc, b| acc.add(b))
    }

    pub fn l2_norms(&self) -> BTreeMap<i32, f64> {
        self.blocks
            .iter()
            .map(|(&j, b)| (j, crate::ops::l2_norm(b)))
            .collect()
    }

    pub fn linf_norms(&self, oversample: usize) -> Result<BTreeMap<i32, f64>> {
        self.blocks
            .iter()
            .map(|(&j, b)| Ok((j, linf_norm(b, oversample)?)))
            .collect()
    }
}

pub fn dyadic_decompose(u: &SpectralField) -> DyadicDecomposition {
    let grid = *u.grid();
    let jmax = max_block(&grid);
    let mut blocks = BTreeMap::new();
    for j in 1..=jmax {
        let (lo, hi) = block_bounds(j);
        let present = grid.modes().any(|m| {
            let r = m.radius();
            r >= lo && r < hi
        });
        if present {
            blocks.insert(j, dyadic_block(u, j));
        }
    }
    DyadicDecomposition {
        blocks,
        tilde_block: u.masked(|m| m.k2 == 0),
        source_grid: grid,
    }
}

/// Parameters of `B^σ_{∞,∞}`. Both summability indices are fixed at `∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovParams {
    sigma: f64,
    homogeneous: bool,
}

impl BesovParams {
    pub fn new(sigma: f64, homogeneous: bool) -> Result<Self> {
        if !(-1.0..=0.0).contains(&sigma) {
            return precondition("sigma must lie in [-1, 0]");
        }
        Ok(Self { sigma, homogeneous })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn homogeneous(&self) -> bool {
        self.homogeneous
    }
}

/// `B^σ_{∞,∞}` norm with block sup norms taken on the 2× oversampled lattice.
pub fn besov_norm(u: &SpectralField, p: BesovParams) -> Result<f64> {
    besov_norm_with(u, p, 2)
}

/// As [`besov_norm`], with an explicit oversampling factor (1 or 2).
pub fn besov_norm_with(u: &SpectralField, p: BesovParams, oversample: usize) -> Result<f64> {
    let mean_nonzero = u.has_mean();
    if p.homogeneous && p.sigma < 0.0 && mean_nonzero {
        return precondition("homogeneous Besov norm with sigma < 0 needs a mean-free field");
    }
    let spec = RadialSpectrum::new(u);
    let mut best: f64 = 0.0;
    for j in 1..=max_block(u.grid()) {
        let (lo, hi) = block_bounds(j);
        if spec.band(lo, hi) == 0.0 {
            continue;
        }
        let w = libm::exp2(p.sigma * j as f64);
        best = best.max(w * linf_norm(&dyadic_block(u, j), oversample)?);
    }
    if !p.homogeneous && mean_nonzero {
        best = best.max(linf_norm(&u.masked(|m| m.k2 == 0), oversample)?);
    }
    Ok(best)
}

/// Energy `Σ|û|²` binned by integer `|ξ|²`. All sharp-cutoff energies of a
/// field can be read off it without touching the coefficients again.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSpectrum {
    bins: Vec<f64>,
}

impl RadialSpectrum {
    pub fn new(u: &SpectralField) -> Self {
        let grid = u.grid();
        let d = grid.dim();
        let l = grid.spectral_len();
        let kmax2 = d * (grid.n() / 2) * (grid.n() / 2);
        let mut bins = vec![0.0; kmax2 + 1];
        let coeffs = u.coeffs();
        for m in grid.modes() {
            let mut e = 0.0;
            for c in 0..d {
                e += coeffs[c * l + m.index].norm_sqr();
            }
            bins[m.k2 as usize] += m.weight * e;
        }
        Self { bins }
    }

    /// Energy at `|ξ|² = k2`.
    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    /// `Σ_{pred(|ξ|²)} w(|ξ|²)·E(|ξ|²)`.
    pub fn sum_where(&self, pred: impl Fn(u64) -> bool, w: impl Fn(u64) -> f64) -> f64 {
        let mut s = 0.0;
        for (k2, &e) in self.bins.iter().enumerate() {
            let k2 = k2 as u64;
            if e != 0.0 && pred(k2) {
                s += w(k2) * e;
            }
        }
        s
    }

    pub fn total(&self) -> f64 {
        self.sum_where(|_| true, |_| 1.0)
    }

    /// `‖u^k‖₂²`.
    pub fn highpass(&self, k: f64) -> f64 {
        self.sum_where(|k2| radius(k2) >= k, |_| 1.0)
    }

    /// `‖u_{h,k}‖₂²`.
    pub fn band(&self, h: f64, k: f64) -> f64 {
        self.sum_where(
            |k2| {
                let r = radius(k2);
                r >= h && r < k
            },
            |_| 1.0,
        )
    }

    /// `‖∇u^k‖₂²`.
    pub fn grad_highpass(&self, k: f64) -> f64 {
        self.sum_where(|k2| radius(k2) >= k, |k2| k2 as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_count_covers_grid() {
        let g = GridSpec::new(3, 8, 0.1).unwrap();
        // radii up to √48 < 8 = 2^3
        assert_eq!(max_block(&g), 3);
        let g = GridSpec::new(2, 8, 0.1).unwrap();
        // √32 ≈ 5.66 < 8
        assert_eq!(max_block(&g), 3);
        let g = GridSpec::new(3, 16, 0.1).unwrap();
        // √192 ≈ 13.9 < 16
        assert_eq!(max_block(&g), 4);
    }

    #[test]
    fn spectrum_bins_by_squared_radius() {
        let g = GridSpec::new(2, 16, 0.1).unwrap();
        let mut u = SpectralField::zeros(g);
        u.add_separable(0, 1.0, &[(crate::Trig::Cos, 3), (crate::Trig::Cos, 4)]);
        let s = RadialSpectrum::new(&u);
        let hit: Vec<usize> = s
            .bins()
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.0)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(hit, [25]);
    }
}
