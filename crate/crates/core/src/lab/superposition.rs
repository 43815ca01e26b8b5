use alloc::format;
use alloc::vec::Vec;

use super::series::{ipow, ladder_shells};
use super::{radius_bound, transfer_spectrum, CheckReport};
use crate::error::{precondition, Result};
use crate::grid::radius;
use crate::littlewood_paley::RadialSpectrum;
use crate::ops::sobolev_norm;
use crate::solver::TrajectoryRecord;

/// Ladder settings. Unset `s` means the minimal order meeting `a(s) < ν/40`
/// (capped at `s_max`); unset `l1` means the smallest admissible start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionConfig {
    pub s: Option<u32>,
    pub l1: Option<u64>,
    pub s_max: u32,
}

impl Default for SuperpositionConfig {
    fn default() -> Self {
        Self {
            s: None,
            l1: None,
            s_max: 64,
        }
    }
}

/// One rung `i` of the ladder: the weighted tail sums
/// `Σ_{j≥l₁} j^{i+1}‖u_{j^s,(j+1)^s}‖₂²` and `‖u‖_{H^{(i+1)/(2s)}}` over time.
#[derive(Debug, Clone, PartialEq)]
pub struct Rung {
    pub i: u32,
    pub exponent: f64,
    pub weighted: Vec<f64>,
    pub norms: Vec<f64>,
    pub sup_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionReport {
    pub nu: f64,
    /// `sup_t ‖u‖_{B⁻¹_{∞,∞}}`
    pub m: f64,
    pub c1: f64,
    pub c2: f64,
    /// Samples where the right side of the `C₂` bound vanished while the left
    /// side was positive; those cannot be covered by any finite constant.
    pub c2_uncovered: usize,
    /// `sqrt(2C₁m/ν)` as measured.
    pub m_tilde_raw: f64,
    /// Value used downstream; raised to 2 when the raw value is `≤ 1`.
    pub m_tilde: f64,
    /// `a(s)` for `s = 1..=max(s_max, 64)`.
    pub a_series: Vec<f64>,
    pub a_strictly_decreasing: bool,
    /// Minimal `s` with `a(s) < ν/40`.
    pub s_min: u64,
    /// Minimal `s` with `a(s) < ν/4`.
    pub s_min_quarter: u64,
    pub s: u32,
    pub a_s: f64,
    pub l1: u64,
    pub l1_bound: f64,
    pub times: Vec<f64>,
    pub rungs: Vec<Rung>,
    /// `sup_t ‖u‖_{H¹}` from the direct norm.
    pub h1_direct_sup: f64,
    pub h1_relative_gap: f64,
    pub reports: Vec<CheckReport>,
}

/// `a(s) = C₂m((2m̃)^{1/s} - 1)`.
pub fn a_of_s(c2: f64, m: f64, m_tilde: f64, s: u64) -> f64 {
    c2 * m * (libm::pow(2.0 * m_tilde, 1.0 / s as f64) - 1.0)
}

/// Smallest `s ≥ 1` with `a(s) < ν/divisor`, from the closed form
/// `s > ln(2m̃) / ln(1 + ν/(divisor·C₂m))`.
pub fn minimal_s(c2: f64, m: f64, m_tilde: f64, nu: f64, divisor: f64) -> u64 {
    let target = nu / divisor;
    if c2 * m <= 0.0 || 2.0 * m_tilde <= 1.0 {
        return 1;
    }
    let x = libm::log(2.0 * m_tilde) / libm::log1p(target / (c2 * m));
    let mut s = libm::floor(x) as u64 + 1;
    while a_of_s(c2, m, m_tilde, s) >= target {
        s += 1;
    }
    while s > 1 && a_of_s(c2, m, m_tilde, s - 1) < target {
        s -= 1;
    }
    s
}

pub fn superposition_diagnostics(
    traj: &TrajectoryRecord,
    cfg: &SuperpositionConfig,
) -> Result<SuperpositionReport> {
    let solver = &traj.config;
    let nu = solver.effective_nu();
    if !(nu > 0.0) {
        return precondition("superposition diagnostics need a viscous trajectory");
    }
    if cfg.s_max == 0 || cfg.s == Some(0) || cfg.l1 == Some(0) {
        return precondition("s, s_max and l1 must be >= 1");
    }
    let m = traj.diagnostics.iter().fold(0.0f64, |a, r| a.max(r.besov_m1));
    let top = radius_bound(&solver.grid);
    let spectra: Vec<RadialSpectrum> = traj.checkpoints.iter().map(RadialSpectrum::new).collect();
    let transfers: Vec<Vec<f64>> = traj
        .checkpoints
        .iter()
        .map(|u| transfer_spectrum(u, solver))
        .collect::<Result<_>>()?;
    // Σ_{|ξ|≥k} T for integer k, per sample.
    let tail_transfer = |t: &[f64], k: f64| -> f64 {
        t.iter()
            .enumerate()
            .filter(|(k2, _)| radius(*k2 as u64) >= k)
            .map(|(_, v)| v)
            .sum()
    };

    let mut c1: f64 = 0.0;
    if m > 0.0 {
        for (spec, t) in spectra.iter().zip(&transfers) {
            for k in 1..=top {
                let kf = k as f64;
                let den = m * kf * kf * spec.highpass(kf / 2.0);
                if den > 0.0 {
                    c1 = c1.max(tail_transfer(t, kf).max(0.0) / den);
                }
            }
        }
    }
    let m_tilde_raw = libm::sqrt(2.0 * c1 * m / nu);
    let m_tilde = if m_tilde_raw > 1.0 { m_tilde_raw } else { 2.0 };

    let mut c2: f64 = 0.0;
    let mut c2_uncovered = 0;
    if m > 0.0 {
        for (spec, t) in spectra.iter().zip(&transfers) {
            for k in 1..=top {
                let kf = k as f64;
                let lhs = tail_transfer(t, kf) - 0.5 * nu * spec.grad_highpass(kf);
                let band = spec.sum_where(
                    |k2| {
                        let r = radius(k2);
                        r >= kf / 2.0 && r < m_tilde * kf
                    },
                    |k2| k2 as f64,
                );
                let den = 0.5 * m * band;
                if den > 0.0 {
                    c2 = c2.max(lhs.max(0.0) / den);
                } else if lhs > 0.0 {
                    c2_uncovered += 1;
                }
            }
        }
    }

    let n_a = cfg.s_max.max(64) as u64;
    let a_series: Vec<f64> = (1..=n_a).map(|s| a_of_s(c2, m, m_tilde, s)).collect();
    let a_strictly_decreasing = a_series.windows(2).all(|w| w[1] < w[0]);
    let s_min = minimal_s(c2, m, m_tilde, nu, 40.0);
    let s_min_quarter = minimal_s(c2, m, m_tilde, nu, 4.0);
    let s = cfg
        .s
        .unwrap_or_else(|| s_min.min(cfg.s_max as u64) as u32);
    let a_s = a_of_s(c2, m, m_tilde, s as u64);
    let l1_bound = 1.0 / (libm::pow(m_tilde, 1.0 / s as f64) - 1.0);
    let l1 = cfg.l1.unwrap_or_else(|| (libm::ceil(l1_bound) as u64).max(1));

    let rmax = solver.grid.max_radius();
    let mut rungs = Vec::new();
    for i in 0..2 * s {
        let exponent = (i + 1) as f64 / (2 * s) as f64;
        let mut weighted = Vec::with_capacity(spectra.len());
        let mut norms = Vec::with_capacity(spectra.len());
        for spec in &spectra {
            let shells = ladder_shells(spec, rmax, s, false);
            let mut w = 0.0;
            for (j, &e) in shells.iter().enumerate().skip(l1 as usize) {
                if e != 0.0 {
                    w += ipow(j as u64, i + 1) * e;
                }
            }
            weighted.push(w);
            // Same norm, accumulated shell by shell (the mean is shell j = 0).
            let mut h = 0.0;
            let mut j = 0u64;
            loop {
                let lo = ipow(j, s);
                if lo > rmax {
                    break;
                }
                let hi = ipow(j + 1, s);
                h += spec.sum_where(
                    |k2| {
                        let r = radius(k2);
                        r >= lo && r < hi
                    },
                    |k2| libm::pow(1.0 + k2 as f64, exponent),
                );
                j += 1;
            }
            norms.push(libm::sqrt(h));
        }
        let sup_norm = norms.iter().fold(0.0f64, |a, &b| a.max(b));
        rungs.push(Rung {
            i,
            exponent,
            weighted,
            norms,
            sup_norm,
        });
    }
    let mut h1_direct_sup: f64 = 0.0;
    for u in &traj.checkpoints {
        h1_direct_sup = h1_direct_sup.max(sobolev_norm(u, 1.0, false)?);
    }
    let top_rung = rungs.last().map_or(0.0, |r| r.sup_norm);
    let h1_relative_gap = if h1_direct_sup == 0.0 {
        libm::fabs(top_rung)
    } else {
        libm::fabs(top_rung - h1_direct_sup) / h1_direct_sup
    };

    let mut reports = Vec::new();
    reports.push(CheckReport::ratio("superposition_m", m, nu, m / nu));
    reports.push(
        CheckReport::ratio("superposition_m_tilde", m_tilde, m_tilde_raw, m_tilde)
            .with_context(format!("c1={c1:.17e} c2={c2:.17e} c2_uncovered={c2_uncovered}")),
    );
    let mono = CheckReport::inequality("a_s_monotone", a_series[a_series.len() - 1], a_series[0], 0.0)
        .with_context(format!("s=1..{n_a}"));
    let trivially = m == 0.0 || c2 == 0.0;
    reports.push(if a_strictly_decreasing || trivially { mono } else { mono.fail() });
    reports.push(
        CheckReport::ratio("minimal_s", s_min as f64, cfg.s_max as f64, s_min as f64)
            .with_context(format!("nu/4 threshold at s={s_min_quarter}; ladder at s={s}")),
    );
    let threshold_note = if a_s < nu / 40.0 {
        "a(s) < nu/40"
    } else {
        "a(s) >= nu/40 at the evaluated s"
    };
    reports.push(
        CheckReport::ratio("a_s_threshold", a_s, nu / 40.0, a_s / (nu / 40.0))
            .with_context(threshold_note),
    );
    reports.push(
        CheckReport::inequality("l1_condition", l1_bound, l1 as f64, 0.0)
            .with_k(l1 as f64)
            .with_context(format!("s={s}")),
    );
    let mut prev: f64 = 0.0;
    for r in &rungs {
        let rep = CheckReport::inequality("ladder_rung", prev, r.sup_norm, 1e-12)
            .with_context(format!("i={} exponent={}", r.i, r.exponent));
        reports.push(if r.sup_norm.is_finite() { rep } else { rep.fail() });
        prev = r.sup_norm;
    }
    reports.push(CheckReport::identity("h1_ladder_vs_direct", top_rung, h1_direct_sup, 1e-8));

    Ok(SuperpositionReport {
        nu,
        m,
        c1,
        c2,
        c2_uncovered,
        m_tilde_raw,
        m_tilde,
        a_series,
        a_strictly_decreasing,
        s_min,
        s_min_quarter,
        s,
        a_s,
        l1,
        l1_bound,
        times: traj.times.clone(),
        rungs,
        h1_direct_sup,
        h1_relative_gap,
        reports,
    })
}
