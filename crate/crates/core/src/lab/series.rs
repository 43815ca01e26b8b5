use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::CheckReport;
use crate::error::{precondition, Error, Result};
use crate::field::SpectralField;
use crate::littlewood_paley::RadialSpectrum;

/// Largest `i` or `j` accepted by [`power_sum_bounds`]; `101^100` still fits
/// in an `f64` for reporting.
pub const POWER_SUM_LIMIT: u32 = 100;

/// `j^i ≤ i·Σ_{p=1}^j p^{i-1} ≤ (j+1)^i` in exact integer arithmetic.
/// Reported values are divided by `i`.
pub fn power_sum_bounds(i: u32, j: u32) -> Result<CheckReport> {
    if i == 0 || j == 0 {
        return precondition("power sums need i, j >= 1");
    }
    if i > POWER_SUM_LIMIT || j > POWER_SUM_LIMIT {
        return Err(Error::OutOfRange(format!(
            "i = {i}, j = {j} exceed the exact range {POWER_SUM_LIMIT}"
        )));
    }
    let mut sum = BigUint::zero();
    for p in 1..=j {
        sum += BigUint::from(p).pow(i - 1);
    }
    let scaled = &sum * i;
    let lower = BigUint::from(j).pow(i);
    let upper = BigUint::from(j + 1).pow(i);
    let ok = lower <= scaled && scaled <= upper;
    let f = |b: &BigUint| b.to_f64().unwrap_or(f64::INFINITY) / i as f64;
    let mut r = CheckReport::inequality("power_sum_bounds", f(&scaled), f(&upper), 0.0)
        .with_context(format!("i={i} j={j} lower={:.17e}", f(&lower)));
    r.status = if ok {
        super::CheckStatus::InequalityPass
    } else {
        super::CheckStatus::InequalityFail
    };
    Ok(r)
}

/// `j^s` as a float, saturating to infinity.
pub(crate) fn ipow(j: u64, s: u32) -> f64 {
    let mut acc: u128 = 1;
    for _ in 0..s {
        match acc.checked_mul(j as u128) {
            Some(v) => acc = v,
            None => return f64::INFINITY,
        }
    }
    acc as f64
}

/// Shell energies `E_j = ‖u_{j^s,(j+1)^s}‖₂²` (or gradient energies) for
/// `j = 0..` until the shells leave the grid.
pub(crate) fn ladder_shells(spec: &RadialSpectrum, rmax: f64, s: u32, grad: bool) -> Vec<f64> {
    let mut shells = Vec::new();
    let mut j = 0u64;
    loop {
        let lo = ipow(j, s);
        if lo > rmax {
            break;
        }
        let hi = ipow(j + 1, s);
        let e = spec.sum_where(
            |k2| {
                let r = crate::grid::radius(k2);
                r >= lo && r < hi
            },
            |k2| if grad { k2 as f64 } else { 1.0 },
        );
        shells.push(e);
        j += 1;
    }
    shells
}

/// `Σ_{j≥l}‖u^{j^s}‖₂² = Σ_{j≥l}(j-l+1)‖u_{j^s,(j+1)^s}‖₂²` and the same with `∇`.
pub fn poly_superposition_identity(u: &SpectralField, l: u64, s: u32) -> Result<CheckReport> {
    if l == 0 || s == 0 {
        return precondition("poly superposition needs l, s >= 1");
    }
    let spec = RadialSpectrum::new(u);
    let rmax = u.grid().max_radius();
    let mut reports = Vec::new();
    for grad in [false, true] {
        let shells = ladder_shells(&spec, rmax, s, grad);
        let top = shells.len() as u64;
        let mut lhs = 0.0;
        for j in l..top.max(l) {
            let cut = ipow(j, s);
            lhs += spec.sum_where(
                |k2| crate::grid::radius(k2) >= cut,
                |k2| if grad { k2 as f64 } else { 1.0 },
            );
        }
        let mut rhs = 0.0;
        for j in l..top.max(l) {
            rhs += (j - l + 1) as f64 * shells[j as usize];
        }
        reports.push(CheckReport::identity("poly_superposition_identity", lhs, rhs, 1e-10));
    }
    let grad = reports.pop().unwrap();
    let energy = reports.pop().unwrap().with_context(format!(
        "s={s} l={l} grad_lhs={:.17e} grad_rhs={:.17e}",
        grad.lhs, grad.rhs
    ));
    Ok(if grad.passed() {
        energy.with_k(l as f64)
    } else {
        energy.with_k(l as f64).fail()
    })
}

/// Fubini rearrangement of the weighted double sum
/// `Σ_{l≥l₁}Σ_{j≥l}(j-l+1)l^{i-1}E_j` into
/// `Σ_{j≥l₁}[(l₁^{i-1}+…+j^{i-1})(j+1) - (l₁^i+…+j^i)]E_j`, plus the two
/// power-sum brackets of that single sum.
pub fn weighted_rearrangement(u: &SpectralField, l1: u64, i: u32, s: u32) -> Result<CheckReport> {
    if l1 == 0 || i == 0 || s == 0 {
        return precondition("weighted rearrangement needs l1, i, s >= 1");
    }
    if i > 2 * s - 1 {
        return precondition("weighted rearrangement needs i <= 2s - 1");
    }
    let spec = RadialSpectrum::new(u);
    let shells = ladder_shells(&spec, u.grid().max_radius(), s, false);
    let top = shells.len() as u64;
    let powf = |b: u64, e: u32| -> f64 {
        BigUint::from(b).pow(e).to_f64().unwrap_or(f64::INFINITY)
    };
    let mut double = 0.0;
    for l in l1..top {
        let w = powf(l, i - 1);
        for j in l..top {
            double += (j - l + 1) as f64 * w * shells[j as usize];
        }
    }
    let (mut single, mut lower, mut upper) = (0.0, 0.0, 0.0);
    for j in l1..top {
        let e = shells[j as usize];
        let mut a = BigUint::zero();
        let mut b = BigUint::zero();
        for p in l1..=j {
            a += BigUint::from(p).pow(i - 1);
            b += BigUint::from(p).pow(i);
        }
        let coef = a * BigUint::from(j + 1) - b;
        single += coef.to_f64().unwrap_or(f64::INFINITY) * e;
        let (fi, fi1) = (i as f64, (i + 1) as f64);
        let (jf1, l1m) = ((j + 1) as f64, l1 - 1);
        lower += ((powf(j, i) - powf(l1, i)) * jf1 / fi
            - (powf(j + 1, i + 1) - powf(l1m, i + 1)) / fi1)
            * e;
        upper += ((powf(j + 1, i + 1) - powf(l1m, i + 1)) / fi
            - (powf(j, i + 1) - powf(l1, i + 1)) / fi1)
            * e;
    }
    let report = CheckReport::identity("weighted_rearrangement", double, single, 1e-10)
        .with_k(l1 as f64)
        .with_context(format!(
            "i={i} s={s} lower={lower:.17e} upper={upper:.17e}"
        ));
    let tol = 1e-10 * libm::fabs(single).max(1.0);
    let bracketed = lower <= single + tol && single <= upper + tol;
    Ok(if bracketed { report } else { report.fail() })
}
