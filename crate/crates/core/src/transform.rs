//! Unitary transforms between [`SpectralField`] and [`RealField`].

use alloc::vec;
use num_complex::Complex64 as C;

use crate::error::{precondition, Error, Result};
use crate::fft::RealFft;
use crate::field::{RealField, SpectralField};
use crate::grid::{GridSpec, BOX_LENGTH};

/// Samples `f` on an `(oversample·n)^dim` lattice. `oversample` must be 1 or 2.
///
/// Oversampling zero-pads the spectrum; Nyquist coefficients are split evenly
/// between `±n/2` so the padded field is the real trigonometric interpolant of
/// the base samples.
pub fn to_physical(f: &SpectralField, oversample: usize) -> Result<RealField> {
    if oversample != 1 && oversample != 2 {
        return precondition("oversample must be 1 or 2");
    }
    let grid = *f.grid();
    let target = grid.with_resolution(grid.n() * oversample)?;
    let fft = RealFft::new(grid.dim(), target.n());
    let mut values = vec![0.0; target.points() * grid.dim()];
    let scale = libm::pow(BOX_LENGTH, -(grid.dim() as f64) / 2.0);
    let mut spec = vec![C::new(0.0, 0.0); target.spectral_len()];
    for c in 0..grid.dim() {
        if oversample == 1 {
            spec.copy_from_slice(f.component(c));
        } else {
            pad_component(&grid, f.component(c), &target, &mut spec);
        }
        let out = &mut values[c * target.points()..(c + 1) * target.points()];
        fft.c2r(&mut spec, out);
        for v in out.iter_mut() {
            *v *= scale;
        }
    }
    RealField::new(target, values)
}

/// Zero-pads one component from `grid` into the larger `target` layout.
fn pad_component(grid: &GridSpec, src: &[C], target: &GridSpec, dst: &mut [C]) {
    dst.iter_mut().for_each(|c| *c = C::new(0.0, 0.0));
    let n = grid.n();
    let m = target.n();
    let d = grid.dim();
    let (h, ht) = (grid.half(), target.half());
    // Destinations along a full axis: (index, weight).
    let targets = |i: usize| -> ([(usize, f64); 2], usize) {
        if i < n / 2 {
            ([(i, 1.0), (0, 0.0)], 1)
        } else if i == n / 2 {
            ([(n / 2, 0.5), (m - n / 2, 0.5)], 2)
        } else {
            ([(i + m - n, 1.0), (0, 0.0)], 1)
        }
    };
    for mode in grid.modes() {
        let v = src[mode.index];
        if v.re == 0.0 && v.im == 0.0 {
            continue;
        }
        let il = mode.index % h;
        let wl = if il == n / 2 { 0.5 } else { 1.0 };
        match d {
            2 => {
                let i0 = mode.index / h;
                let (t0, c0) = targets(i0);
                for &(j0, w0) in &t0[..c0] {
                    dst[j0 * ht + il] += v * (w0 * wl);
                }
            }
            _ => {
                let i1 = (mode.index / h) % n;
                let i0 = mode.index / (h * n);
                let (t0, c0) = targets(i0);
                let (t1, c1) = targets(i1);
                for &(j0, w0) in &t0[..c0] {
                    for &(j1, w1) in &t1[..c1] {
                        dst[(j0 * m + j1) * ht + il] += v * (w0 * w1 * wl);
                    }
                }
            }
        }
    }
}

/// Forward transform of collocation samples. Rejects non-finite input.
pub fn to_spectral(v: &RealField) -> Result<SpectralField> {
    if v.values().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("physical samples"));
    }
    let grid = *v.grid();
    let fft = RealFft::new(grid.dim(), grid.n());
    let l = grid.spectral_len();
    let mut coeffs = vec![C::new(0.0, 0.0); l * grid.dim()];
    let scale = libm::pow(BOX_LENGTH, grid.dim() as f64 / 2.0) / grid.points() as f64;
    for c in 0..grid.dim() {
        let out = &mut coeffs[c * l..(c + 1) * l];
        fft.r2c(v.component(c), out);
        for z in out.iter_mut() {
            *z *= scale;
        }
    }
    let mut f = SpectralField::from_raw(grid, coeffs, false);
    f.symmetrize_planes();
    let sol = f.divergence_residual() <= crate::field::DIVERGENCE_TOL;
    f.set_solenoidal(sol);
    Ok(f)
}

/// Per-component scalar transform helpers used by the solver, which works on
/// raw coefficient slices rather than whole fields.
pub(crate) struct ScalarTransform {
    fft: RealFft,
    to_phys: f64,
    to_spec: f64,
}

impl ScalarTransform {
    pub(crate) fn new(grid: &GridSpec) -> Self {
        let d = grid.dim() as f64;
        Self {
            fft: RealFft::new(grid.dim(), grid.n()),
            to_phys: libm::pow(BOX_LENGTH, -d / 2.0),
            to_spec: libm::pow(BOX_LENGTH, d / 2.0) / grid.points() as f64,
        }
    }

    /// `spec` is consumed as scratch.
    pub(crate) fn c2r(&self, spec: &mut [C], out: &mut [f64]) {
        self.fft.c2r(spec, out);
        for v in out.iter_mut() {
            *v *= self.to_phys;
        }
    }

    pub(crate) fn r2c(&self, input: &[f64], out: &mut [C]) {
        self.fft.r2c(input, out);
        for z in out.iter_mut() {
            *z *= self.to_spec;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_splits_nyquist() {
        let g = GridSpec::new(2, 8, 0.1).unwrap();
        let t = g.with_resolution(16).unwrap();
        let mut src = vec![C::new(0.0, 0.0); g.spectral_len()];
        // row 4 is the Nyquist row k1 = -4
        src[4 * g.half()] = C::new(1.0, 0.0);
        let mut dst = vec![C::new(0.0, 0.0); t.spectral_len()];
        pad_component(&g, &src, &t, &mut dst);
        assert_eq!(dst[4 * t.half()], C::new(0.5, 0.0));
        assert_eq!(dst[12 * t.half()], C::new(0.5, 0.0));
        let total: f64 = dst.iter().map(|z| z.re).sum();
        assert_eq!(total, 1.0);
    }
}
