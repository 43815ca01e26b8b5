//! Vector fields in spectral and physical representation.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Mode};

/// Real vector field sampled on an `n^dim` collocation lattice.
///
/// Values are component-major, each component row-major with the last axis
/// fastest. Point `(i0, .., i_{d-1})` sits at `x_a = 2π i_a / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        let expected = grid.points() * grid.dim();
        if values.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            values: vec![0.0; grid.points() * grid.dim()],
            grid,
        }
    }

    /// Samples `f(x) -> [u_0, .., u_{dim-1}]` at every lattice point.
    pub fn from_fn(grid: GridSpec, f: impl Fn(&[f64]) -> [f64; 3]) -> Self {
        let n = grid.n();
        let d = grid.dim();
        let pts = grid.points();
        let mut values = vec![0.0; pts * d];
        let h = crate::grid::BOX_LENGTH / n as f64;
        let mut x = [0.0; 3];
        for p in 0..pts {
            let mut r = p;
            for a in (0..d).rev() {
                x[a] = (r % n) as f64 * h;
                r /= n;
            }
            let v = f(&x[..d]);
            for c in 0..d {
                values[c * pts + p] = v[c];
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let p = self.grid.points();
        &self.values[c * p..(c + 1) * p]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let p = self.grid.points();
        &mut self.values[c * p..(c + 1) * p]
    }

    /// Pointwise Euclidean magnitude at lattice point `p`.
    pub fn magnitude_at(&self, p: usize) -> f64 {
        let pts = self.grid.points();
        let s: f64 = (0..self.grid.dim())
            .map(|c| {
                let v = self.values[c * pts + p];
                v * v
            })
            .sum();
        libm::sqrt(s)
    }

    /// `(2π)^d / N Σ_p u(p)·v(p)`: the lattice quadrature of the L² inner product.
    pub fn inner(&self, other: &RealField) -> f64 {
        assert_eq!(self.grid, other.grid);
        let w = libm::pow(crate::grid::BOX_LENGTH, self.grid.dim() as f64)
            / self.grid.points() as f64;
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        w * s
    }
}

/// Real vector field stored as Fourier coefficients in the half-spectrum
/// layout (component-major). The convention is unitary on `L²([0,2π)^d)`:
/// `u(x) = (2π)^{-d/2} Σ_ξ û(ξ) e^{iξ·x}`, so `‖u‖₂² = Σ_ξ |û(ξ)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<C>,
    solenoidal: bool,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            coeffs: vec![C::new(0.0, 0.0); grid.spectral_len() * grid.dim()],
            grid,
            solenoidal: true,
        }
    }

    /// Wraps raw coefficients. The Hermitian planes are symmetrized and the
    /// divergence-free flag is set from the actual data.
    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<C>) -> Result<Self> {
        let expected = grid.spectral_len() * grid.dim();
        if coeffs.len() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("spectral coefficients"));
        }
        let mut f = Self {
            grid,
            coeffs,
            solenoidal: false,
        };
        // leave symmetric input untouched so stored fields reload bit for bit
        if f.hermitian_defect() > 0.0 {
            f.symmetrize_planes();
        }
        f.solenoidal = f.divergence_residual() <= DIVERGENCE_TOL;
        Ok(f)
    }

    pub(crate) fn from_raw(grid: GridSpec, coeffs: Vec<C>, solenoidal: bool) -> Self {
        debug_assert_eq!(coeffs.len(), grid.spectral_len() * grid.dim());
        Self {
            grid,
            coeffs,
            solenoidal,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn component(&self, c: usize) -> &[C] {
        let l = self.grid.spectral_len();
        &self.coeffs[c * l..(c + 1) * l]
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [C] {
        &mut self.coeffs
    }

    /// True when the field is known to satisfy the divergence invariant.
    pub fn is_divergence_free(&self) -> bool {
        self.solenoidal
    }

    pub(crate) fn set_solenoidal(&mut self, flag: bool) {
        self.solenoidal = flag;
    }

    /// Coefficient vector at a stored mode.
    pub fn at(&self, index: usize) -> [C; 3] {
        let l = self.grid.spectral_len();
        let mut v = [C::new(0.0, 0.0); 3];
        for c in 0..self.grid.dim() {
            v[c] = self.coeffs[c * l + index];
        }
        v
    }

    /// `max_ξ |ξ·û(ξ)| / ‖û(ξ)‖` over modes with nonzero coefficients.
    pub fn divergence_residual(&self) -> f64 {
        let d = self.grid.dim();
        let mut worst: f64 = 0.0;
        for m in self.grid.modes() {
            let v = self.at(m.index);
            let norm2: f64 = v[..d].iter().map(|c| c.norm_sqr()).sum();
            if norm2 == 0.0 {
                continue;
            }
            let mut div = C::new(0.0, 0.0);
            for a in 0..d {
                div += v[a] * m.k[a] as f64;
            }
            worst = worst.max(div.norm() / libm::sqrt(norm2));
        }
        worst
    }

    /// Largest Hermitian-symmetry defect in the self-paired planes.
    pub fn hermitian_defect(&self) -> f64 {
        let l = self.grid.spectral_len();
        let mut worst: f64 = 0.0;
        for m in self.grid.modes().filter(|m| m.in_plane) {
            let p = self.grid.plane_partner(m.index);
            for c in 0..self.grid.dim() {
                let a = self.coeffs[c * l + m.index];
                let b = self.coeffs[c * l + p];
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }

    /// Enforces `û(-ξ) = conj(û(ξ))` exactly inside the self-paired planes.
    pub(crate) fn symmetrize_planes(&mut self) {
        let l = self.grid.spectral_len();
        let grid = self.grid;
        for m in grid.modes().filter(|m| m.in_plane) {
            let p = grid.plane_partner(m.index);
            if p < m.index {
                continue;
            }
            for c in 0..grid.dim() {
                let a = self.coeffs[c * l + m.index];
                let b = self.coeffs[c * l + p];
                let s = (a + b.conj()) * 0.5;
                self.coeffs[c * l + m.index] = s;
                self.coeffs[c * l + p] = s.conj();
            }
        }
    }

    /// Copy keeping only modes where `keep` holds; all others are zeroed.
    pub fn masked(&self, keep: impl Fn(&Mode) -> bool) -> SpectralField {
        let l = self.grid.spectral_len();
        let d = self.grid.dim();
        let mut out = vec![C::new(0.0, 0.0); self.coeffs.len()];
        for m in self.grid.modes() {
            if keep(&m) {
                for c in 0..d {
                    out[c * l + m.index] = self.coeffs[c * l + m.index];
                }
            }
        }
        Self::from_raw(self.grid, out, self.solenoidal)
    }

    pub fn scaled(&self, lambda: f64) -> SpectralField {
        let coeffs = self.coeffs.iter().map(|c| c * lambda).collect();
        Self::from_raw(self.grid, coeffs, self.solenoidal)
    }

    pub fn add(&self, other: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, other.grid);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_raw(self.grid, coeffs, self.solenoidal && other.solenoidal)
    }

    pub fn sub(&self, other: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, other.grid);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Self::from_raw(self.grid, coeffs, self.solenoidal && other.solenoidal)
    }

    /// L² inner product `(u, v)₂ = Re Σ_ξ û(ξ)·conj(v̂(ξ))` over the full spectrum.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.grid, other.grid);
        let l = self.grid.spectral_len();
        let mut s = 0.0;
        for m in self.grid.modes() {
            let mut acc = 0.0;
            for c in 0..self.grid.dim() {
                let a = self.coeffs[c * l + m.index];
                let b = other.coeffs[c * l + m.index];
                acc += a.re * b.re + a.im * b.im;
            }
            s += m.weight * acc;
        }
        s
    }

    /// Mean mode above round-off relative to the whole field.
    pub fn has_mean(&self) -> bool {
        let d = self.grid.dim();
        let mean: f64 = self.at(0)[..d].iter().map(|c| c.norm_sqr()).sum();
        let total = crate::ops::l2_norm(self);
        libm::sqrt(mean) > DIVERGENCE_TOL * total
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn all_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Adds `amp · Π_a trig_a(k_a x_a)` to component `comp`, where each factor
    /// is `sin` or `cos`. Useful for closed-form initial data.
    pub fn add_separable(&mut self, comp: usize, amp: f64, factors: &[(Trig, i32)]) {
        let d = self.grid.dim();
        assert_eq!(factors.len(), d);
        let norm = libm::pow(crate::grid::BOX_LENGTH, d as f64 / 2.0);
        // Expand each factor into exponentials: list of (k, coefficient).
        let mut terms: Vec<([i32; 3], C)> = vec![([0; 3], C::new(amp * norm, 0.0))];
        for (a, &(kind, k)) in factors.iter().enumerate() {
            let pieces: Vec<(i32, C)> = match (kind, k) {
                (Trig::Cos, 0) => vec![(0, C::new(1.0, 0.0))],
                (Trig::Sin, 0) => vec![],
                (Trig::Cos, k) => vec![(k, C::new(0.5, 0.0)), (-k, C::new(0.5, 0.0))],
                (Trig::Sin, k) => vec![(k, C::new(0.0, -0.5)), (-k, C::new(0.0, 0.5))],
            };
            let mut next = Vec::new();
            for (kv, c) in &terms {
                for &(kk, cc) in &pieces {
                    let mut kv2 = *kv;
                    kv2[a] = kk;
                    next.push((kv2, c * cc));
                }
            }
            terms = next;
        }
        let n = self.grid.n() as i32;
        let h = self.grid.half();
        let l = self.grid.spectral_len();
        for (kv, c) in terms {
            let last = kv[d - 1];
            if last < 0 {
                continue;
            }
            assert!(
                kv[..d].iter().all(|&k| 2 * k.abs() < n),
                "mode outside the resolved band"
            );
            let mut flat = 0usize;
            for a in 0..d - 1 {
                flat = flat * n as usize + kv[a].rem_euclid(n) as usize;
            }
            flat = flat * h + last as usize;
            self.coeffs[comp * l + flat] += c;
        }
        self.solenoidal = self.divergence_residual() <= DIVERGENCE_TOL;
    }
}

/// Per-mode tolerance on `|ξ·û| / ‖û‖` for the divergence-free flag.
pub const DIVERGENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trig {
    Sin,
    Cos,
}
