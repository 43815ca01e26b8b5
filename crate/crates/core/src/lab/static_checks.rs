use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{radius_bound, CheckReport};
use crate::error::{precondition, Result};
use crate::field::{RealField, SpectralField};
use crate::littlewood_paley::{band, besov_norm, highpass, lowpass, BesovParams, RadialSpectrum};
use crate::ops::linf_norm;
use crate::transform::{to_physical, to_spectral};

/// `|(u_k, u^l)₂|`, evaluated in physical space, against `10⁻¹²‖u‖₂²`.
pub fn check_orthogonality(u: &SpectralField, k: f64, l: f64) -> Result<CheckReport> {
    if !(k > 0.0 && k <= l) {
        return precondition("orthogonality needs 0 < k <= l");
    }
    let a = to_physical(&lowpass(u, k), 1)?;
    let b = to_physical(&highpass(u, l), 1)?;
    let lhs = libm::fabs(a.inner(&b));
    let norm2 = RadialSpectrum::new(u).total();
    Ok(CheckReport::identity("orthogonality", lhs, 0.0, 1e-12 * norm2).with_k(k))
}

/// `k^α‖u^k‖₂² ≤ Σ_{|ξ|≥k} |ξ|^α|û|²`.
pub fn check_bernstein(u: &SpectralField, k: f64, alpha: f64) -> Result<CheckReport> {
    if !(k > 0.0 && alpha > 0.0) {
        return precondition("bernstein needs k > 0 and alpha > 0");
    }
    let spec = RadialSpectrum::new(u);
    let tail = spec.highpass(k);
    let lhs = libm::pow(k, alpha) * tail;
    let rhs = spec.sum_where(
        |k2| crate::grid::radius(k2) >= k,
        |k2| libm::pow(k2 as f64, alpha / 2.0),
    );
    Ok(CheckReport::inequality("bernstein", lhs, rhs, 1e-10)
        .with_k(k)
        .with_context(format!("alpha={alpha}")))
}

/// Out-of-support mass of `(u_k)_a (u_l)_b` for every component pair, on the
/// doubled lattice where these products are alias-free.
pub fn check_product_support(u: &SpectralField, k: f64, l: f64) -> Result<CheckReport> {
    let n = u.grid().n() as f64;
    if !(k > 0.0 && l > 0.0 && k <= n / 2.0 && l <= n / 2.0) {
        return precondition("product support needs 0 < k, l <= n/2 for alias-free padding");
    }
    let d = u.grid().dim();
    let a = to_physical(&lowpass(u, k), 2)?;
    let b = to_physical(&lowpass(u, l), 2)?;
    let fine = *a.grid();
    let pts = fine.points();
    let (mut outside, mut total) = (0.0, 0.0);
    for ca in 0..d {
        let mut values = vec![0.0; pts * d];
        for cb in 0..d {
            let (x, y) = (a.component(ca), b.component(cb));
            for p in 0..pts {
                values[cb * pts + p] = x[p] * y[p];
            }
        }
        let prod = to_spectral(&RealField::new(fine, values)?)?;
        let spec = RadialSpectrum::new(&prod);
        total += spec.total();
        outside += spec.sum_where(|k2| crate::grid::radius(k2) > k + l, |_| 1.0);
    }
    let lhs = if total == 0.0 { 0.0 } else { libm::sqrt(outside / total) };
    Ok(CheckReport::inequality("product_support", lhs, 1e-12, 0.0)
        .with_k(k)
        .with_context(format!("l={l}")))
}

/// `‖u_k‖_∞ / (k^{-σ}‖u_k‖_{B^σ})`; zero for an empty low band.
pub fn check_linf_bound(u: &SpectralField, k: f64, sigma: f64) -> Result<CheckReport> {
    if !(k >= 1.0) || !(-1.0..0.0).contains(&sigma) {
        return precondition("linf bound needs k >= 1 and sigma in [-1, 0)");
    }
    let low = lowpass(u, k);
    let num = linf_norm(&low, 2)?;
    let den = libm::pow(k, -sigma) * besov_norm(&low, BesovParams::new(sigma, false)?)?;
    let ratio = if den == 0.0 { 0.0 } else { num / den };
    Ok(CheckReport::ratio("linf_bound", num, den, ratio).with_k(k).with_sigma(sigma))
}

/// Worst `linf_bound` ratio per cutoff over an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct LinfEnsemble {
    pub ks: Vec<f64>,
    pub fitted: Vec<f64>,
    /// `max / min` of the fitted constants over the nonzero entries.
    pub spread: f64,
    pub report: CheckReport,
}

/// Fits `c(σ)` at each `k` and requires the fits to agree within a factor 2.
pub fn linf_bound_ensemble(fields: &[SpectralField], ks: &[f64], sigma: f64) -> Result<LinfEnsemble> {
    let mut fitted = Vec::with_capacity(ks.len());
    for &k in ks {
        let mut worst: f64 = 0.0;
        for u in fields {
            worst = worst.max(check_linf_bound(u, k, sigma)?.margin);
        }
        fitted.push(worst);
    }
    let nz: Vec<f64> = fitted.iter().copied().filter(|&c| c > 0.0).collect();
    let (lo, hi) = nz
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &c| (lo.min(c), hi.max(c)));
    let spread = if nz.is_empty() { 1.0 } else { hi / lo };
    let report = CheckReport::inequality("linf_bound_stability", spread, 2.0, 0.0)
        .with_sigma(sigma)
        .with_context(format!("fitted={fitted:?}"));
    Ok(LinfEnsemble {
        ks: ks.to_vec(),
        fitted,
        spread,
        report,
    })
}

/// `‖u_{k,l}‖_{B⁻¹} / ‖u^k‖_{B⁻¹}`; zero when the tail vanishes.
pub fn check_band_tail(u: &SpectralField, k: f64, l: f64) -> Result<CheckReport> {
    if !(k > 0.0 && k < l) {
        return precondition("band tail needs 0 < k < l");
    }
    if u.has_mean() {
        return precondition("band tail needs a mean-free field");
    }
    let p = BesovParams::new(-1.0, false)?;
    let num = besov_norm(&band(u, k, l)?, p)?;
    let den = besov_norm(&highpass(u, k), p)?;
    let ratio = if den == 0.0 { 0.0 } else { num / den };
    Ok(CheckReport::ratio("band_tail", num, den, ratio)
        .with_k(k)
        .with_context(format!("l={l}")))
}

/// `Σ_{j≥k}‖u^j‖₂² = Σ_{j≥k} j‖u_{j,j+1}‖₂² - (k-1)‖u^k‖₂²`, together with the
/// middle form `Σ_{j≥k}(j-k+1)‖u_{j,j+1}‖₂²`.
pub fn superposition_identity(u: &SpectralField, k: u64) -> Result<CheckReport> {
    if k == 0 {
        return precondition("superposition identity needs k >= 1");
    }
    let spec = RadialSpectrum::new(u);
    let top = radius_bound(u.grid());
    let (mut lhs, mut weighted, mut middle) = (0.0, 0.0, 0.0);
    for j in k..=top {
        let jf = j as f64;
        lhs += spec.highpass(jf);
        let shell = spec.band(jf, jf + 1.0);
        weighted += jf * shell;
        middle += (jf - k as f64 + 1.0) * shell;
    }
    let rhs = weighted - (k as f64 - 1.0) * spec.highpass(k as f64);
    let report = CheckReport::identity("superposition_identity", lhs, rhs, 1e-10)
        .with_k(k as f64)
        .with_context(format!("middle={middle:.17e}"));
    let mid = CheckReport::identity("", lhs, middle, 1e-10);
    Ok(if mid.passed() { report } else { report.fail() })
}

/// Brackets `‖u^k‖²_{Ḣ^{1/2}}` between `Σ j‖u_{j,j+1}‖₂²` and `Σ (j+1)‖u_{j,j+1}‖₂²`
/// and reports the upper-to-lower ratio `‖u^k‖²_{Ḣ^{1/2}} / Σ j‖u_{j,j+1}‖₂²`.
pub fn hhalf_equivalence(u: &SpectralField, k: u64) -> Result<CheckReport> {
    if k == 0 {
        return precondition("Hhalf equivalence needs k >= 1");
    }
    let spec = RadialSpectrum::new(u);
    let top = radius_bound(u.grid());
    let (mut lower, mut upper) = (0.0, 0.0);
    for j in k..=top {
        let jf = j as f64;
        let shell = spec.band(jf, jf + 1.0);
        lower += jf * shell;
        upper += (jf + 1.0) * shell;
    }
    let kf = k as f64;
    let mid = spec.sum_where(|k2| crate::grid::radius(k2) >= kf, |k2| crate::grid::radius(k2));
    let ratio = if lower == 0.0 { 1.0 } else { mid / lower };
    let tol = 1e-12;
    let ok = lower <= mid * (1.0 + tol) && mid <= upper * (1.0 + tol) && (1.0 - tol..=2.0 + tol).contains(&ratio);
    let report = CheckReport::ratio("hhalf_equivalence", lower, mid, ratio)
        .with_k(kf)
        .with_context(format!("upper={upper:.17e}"));
    Ok(if ok { report } else { report.fail() })
}
