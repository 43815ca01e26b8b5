//! Leray projection and the L², Sobolev and L^∞ norms.

use num_complex::Complex64 as C;

use crate::error::{precondition, Result};
use crate::field::SpectralField;
use crate::transform::to_physical;

/// Applies `I - ξξᵀ/|ξ|²` mode by mode. The mean mode is left alone.
///
/// Modes touching the Nyquist index are zeroed: their partner `+n/2` is not
/// representable, so no real divergence-free value exists for them.
pub fn leray_project(f: &SpectralField) -> SpectralField {
    let grid = *f.grid();
    let d = grid.dim();
    let l = grid.spectral_len();
    let mut out = f.clone();
    let coeffs = out.coeffs_mut();
    for m in grid.modes() {
        if m.k2 == 0 {
            continue;
        }
        if m.nyquist {
            for c in 0..d {
                coeffs[c * l + m.index] = C::new(0.0, 0.0);
            }
            continue;
        }
        let mut dot = C::new(0.0, 0.0);
        for a in 0..d {
            dot += coeffs[a * l + m.index] * m.k[a] as f64;
        }
        let s = dot / m.k2 as f64;
        for a in 0..d {
            coeffs[a * l + m.index] -= s * m.k[a] as f64;
        }
    }
    out.set_solenoidal(true);
    out
}

/// `Σ_ξ w(ξ)·|û(ξ)|²` over the full spectrum.
pub(crate) fn weighted_sum(f: &SpectralField, w: impl Fn(u64) -> f64) -> f64 {
    let grid = f.grid();
    let d = grid.dim();
    let l = grid.spectral_len();
    let coeffs = f.coeffs();
    let mut s = 0.0;
    for m in grid.modes() {
        let mut e = 0.0;
        for c in 0..d {
            e += coeffs[c * l + m.index].norm_sqr();
        }
        if e != 0.0 {
            s += m.weight * w(m.k2) * e;
        }
    }
    s
}

pub fn l2_norm(f: &SpectralField) -> f64 {
    libm::sqrt(weighted_sum(f, |_| 1.0))
}

/// `‖∇u‖₂ = (Σ |ξ|²|û|²)^{1/2}`.
pub fn grad_l2_norm(f: &SpectralField) -> f64 {
    libm::sqrt(weighted_sum(f, |k2| k2 as f64))
}

/// `Ḣ^s` (homogeneous) or `H^s` norm.
pub fn sobolev_norm(f: &SpectralField, s: f64, homogeneous: bool) -> Result<f64> {
    if homogeneous {
        if s < 0.0 && f.has_mean() {
            return precondition("negative homogeneous norm of a field with nonzero mean");
        }
        Ok(libm::sqrt(weighted_sum(f, |k2| {
            if k2 == 0 {
                if s == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                libm::pow(k2 as f64, s)
            }
        })))
    } else {
        Ok(libm::sqrt(weighted_sum(f, |k2| libm::pow(1.0 + k2 as f64, s))))
    }
}

/// Maximum pointwise magnitude on the collocation lattice. With
/// `oversample = 2` the base lattice is included as well, so refining never
/// lowers the result.
pub fn linf_norm(f: &SpectralField, oversample: usize) -> Result<f64> {
    if f.is_zero() {
        if oversample != 1 && oversample != 2 {
            return precondition("oversample must be 1 or 2");
        }
        return Ok(0.0);
    }
    let mut best = lattice_max(f, oversample)?;
    if oversample == 2 {
        best = best.max(lattice_max(f, 1)?);
    }
    Ok(best)
}

fn lattice_max(f: &SpectralField, oversample: usize) -> Result<f64> {
    let v = to_physical(f, oversample)?;
    let pts = v.grid().points();
    let mut best: f64 = 0.0;
    for p in 0..pts {
        best = best.max(v.magnitude_at(p));
    }
    Ok(best)
}
