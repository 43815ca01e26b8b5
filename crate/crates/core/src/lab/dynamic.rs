use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{advection_inner, ladder_count, radius_bound, transfer_spectrum, CheckReport};
use crate::error::{precondition, Result};
use crate::littlewood_paley::{besov_norm_with, highpass, lowpass, BesovParams, RadialSpectrum};
use crate::ops::linf_norm;
use crate::solver::TrajectoryRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSample {
    pub t: f64,
    /// Centered difference of `‖u^k‖₂²/2` plus `ν‖∇u^k‖₂²`.
    pub lhs_fd: f64,
    /// `-((u·∇)u_k, u^k)₂` at the sample.
    pub lhs_exact: f64,
    /// `ν‖∇u^k‖₂²`
    pub viscous: f64,
    /// `k‖u_k‖_∞‖u^{k/2}‖₂²`
    pub rhs_linf: f64,
    /// `k^{1-σ}‖u_k‖_{B^σ}‖u^{k/2}‖₂²`
    pub rhs_besov: f64,
    pub ratio_linf: f64,
    pub ratio_besov: f64,
    /// The two left-hand sides differ by more than 1% of the viscous term.
    pub under_resolved: bool,
    /// The nonlinear transfer is at round-off level or the bound vanishes.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorReport {
    pub k: f64,
    pub sigma: f64,
    pub samples: Vec<MonitorSample>,
    /// Fitted constant of the L^∞ form, `max lhs⁺/rhs`.
    pub c_hat: f64,
    /// Fitted constant of the Besov form.
    pub c_hat_besov: f64,
    /// `max |lhs_fd - lhs_exact|` over interior samples.
    pub max_discrepancy: f64,
    pub flagged: usize,
    pub reports: Vec<CheckReport>,
}

/// Evaluates the per-cutoff energy inequality at every interior sample.
pub fn differential_inequality_monitor(
    traj: &TrajectoryRecord,
    k: f64,
    sigma: f64,
) -> Result<MonitorReport> {
    if !(k > 0.0) {
        return precondition("monitor needs k > 0");
    }
    let params = BesovParams::new(sigma, false)?;
    let nu = traj.config.effective_nu();
    let os = traj.config.oversample;
    let tails: Vec<f64> = traj
        .checkpoints
        .iter()
        .map(|u| RadialSpectrum::new(u).highpass(k))
        .collect();
    let mut samples = Vec::new();
    let mut reports = Vec::new();
    let (mut c_hat, mut c_hat_b, mut worst): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut flagged = 0;
    for i in 1..traj.len().saturating_sub(1) {
        let u = &traj.checkpoints[i];
        let t = traj.times[i];
        let spec = RadialSpectrum::new(u);
        let viscous = nu * spec.grad_highpass(k);
        let dt = traj.times[i + 1] - traj.times[i - 1];
        let lhs_fd = (tails[i + 1] - tails[i - 1]) / (2.0 * dt) + viscous;
        let low = lowpass(u, k);
        let high = highpass(u, k);
        let lhs_exact = -advection_inner(u, &low, &high)?;
        let half_tail = spec.highpass(k / 2.0);
        let rhs_linf = k * linf_norm(&low, os)? * half_tail;
        let rhs_besov = libm::pow(k, 1.0 - sigma) * besov_norm_with(&low, params, os)? * half_tail;
        let ratio = |rhs: f64| if rhs > 0.0 { lhs_exact.max(0.0) / rhs } else { 0.0 };
        let (ratio_linf, ratio_besov) = (ratio(rhs_linf), ratio(rhs_besov));
        let diff = libm::fabs(lhs_fd - lhs_exact);
        let under_resolved = diff > 0.01 * viscous;
        let degenerate = rhs_linf == 0.0 || libm::fabs(lhs_exact) <= 1e-12 * (rhs_linf + viscous);
        flagged += (under_resolved || degenerate) as usize;
        c_hat = c_hat.max(ratio_linf);
        c_hat_b = c_hat_b.max(ratio_besov);
        worst = worst.max(diff);
        let flags = flag_text(under_resolved, degenerate);
        reports.push(
            CheckReport::ratio("differential_inequality", lhs_exact, rhs_linf, ratio_linf)
                .at_time(t)
                .with_k(k)
                .with_context(format!("lhs_fd={lhs_fd:.17e}{flags}")),
        );
        reports.push(
            CheckReport::ratio("differential_inequality_besov", lhs_exact, rhs_besov, ratio_besov)
                .at_time(t)
                .with_k(k)
                .with_sigma(sigma)
                .with_context(String::from(flags.trim_start())),
        );
        samples.push(MonitorSample {
            t,
            lhs_fd,
            lhs_exact,
            viscous,
            rhs_linf,
            rhs_besov,
            ratio_linf,
            ratio_besov,
            under_resolved,
            degenerate,
        });
    }
    Ok(MonitorReport {
        k,
        sigma,
        samples,
        c_hat,
        c_hat_besov: c_hat_b,
        max_discrepancy: worst,
        flagged,
        reports,
    })
}

fn flag_text(under_resolved: bool, degenerate: bool) -> String {
    let mut s = String::new();
    if under_resolved {
        s.push_str(" under_resolved");
    }
    if degenerate {
        s.push_str(" degenerate");
    }
    s
}

/// Measured `Σ_{k∈ℕ}‖u^k‖₂²` against its exponential bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GronwallEnvelope {
    pub sigma: f64,
    pub times: Vec<f64>,
    pub envelope: Vec<f64>,
    pub measured: Vec<f64>,
    /// `‖u‖_{B^σ}^{2/(1+σ)}` per sample.
    pub besov_power: Vec<f64>,
    /// `max [S' - (ν/2)‖∇u^{1/2}‖₂²]⁺ / (‖u‖_{B^σ}^{2/(1+σ)} S)`.
    pub c_hat: f64,
    /// `ĉ‖u₀‖₂²‖Δ̃₀u₀‖_∞^{2/(1+σ)}`
    pub e: f64,
    /// `‖u₀‖₂²/4 + e·T`
    pub e_tilde: f64,
    pub composition: String,
    pub reports: Vec<CheckReport>,
}

pub fn gronwall_envelope(traj: &TrajectoryRecord, sigma: f64) -> Result<GronwallEnvelope> {
    if !(sigma > -1.0 && sigma < 0.0) {
        return precondition("Gronwall envelope needs sigma in (-1, 0)");
    }
    let params = BesovParams::new(sigma, false)?;
    let p = 2.0 / (1.0 + sigma);
    let cfg = &traj.config;
    let nu = cfg.effective_nu();
    let mut measured = Vec::with_capacity(traj.len());
    let mut besov_power = Vec::with_capacity(traj.len());
    let mut c_hat: f64 = 0.0;
    for u in &traj.checkpoints {
        let spec = RadialSpectrum::new(u);
        let transfer = transfer_spectrum(u, cfg)?;
        let (mut s, mut ds) = (0.0, 0.0);
        for (k2, &e) in spec.bins().iter().enumerate() {
            let w = ladder_count(k2 as u64);
            s += w * e;
            ds += w * 2.0 * (transfer[k2] - nu * k2 as f64 * e);
        }
        let grad_half = spec.grad_highpass(0.5);
        let b = libm::pow(besov_norm_with(u, params, cfg.oversample)?, p);
        if b * s > 0.0 {
            c_hat = c_hat.max((ds - 0.5 * nu * grad_half).max(0.0) / (b * s));
        }
        measured.push(s);
        besov_power.push(b);
    }
    let (e, e_tilde, composition) = match traj.checkpoints.first() {
        Some(u0) => {
            let norm2 = RadialSpectrum::new(u0).total();
            let mean = linf_norm(&u0.masked(|m| m.k2 == 0), cfg.oversample)?;
            let e = c_hat * norm2 * libm::pow(mean, p);
            let horizon = traj.times.last().copied().unwrap_or(0.0);
            let e_tilde = 0.25 * norm2 + e * horizon;
            let text = format!(
                "e_tilde = |u0|^2/4 + e*T with |u0|^2={norm2:.17e}, T={horizon:.17e}; \
                 e = c_hat*|u0|^2*|mean(u0)|_inf^{p} with |mean|_inf={mean:.17e}"
            );
            (e, e_tilde, text)
        }
        None => (0.0, 0.0, String::new()),
    };
    let s0 = measured.first().copied().unwrap_or(0.0);
    let mut envelope = Vec::with_capacity(traj.len());
    let mut reports = Vec::with_capacity(traj.len());
    let mut integral = 0.0;
    for i in 0..traj.len() {
        if i > 0 {
            integral += 0.5 * (traj.times[i] - traj.times[i - 1]) * (besov_power[i] + besov_power[i - 1]);
        }
        let env = (e_tilde + s0) * libm::exp(c_hat * integral);
        envelope.push(env);
        reports.push(
            CheckReport::inequality("gronwall_envelope", measured[i], env, 0.0)
                .at_time(traj.times[i])
                .with_sigma(sigma),
        );
    }
    Ok(GronwallEnvelope {
        sigma,
        times: traj.times.clone(),
        envelope,
        measured,
        besov_power,
        c_hat,
        e,
        e_tilde,
        composition,
        reports,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem23Report {
    pub k: f64,
    pub times: Vec<f64>,
    /// `‖u^k(t)‖_{B⁻¹}`
    pub besov_tail: Vec<f64>,
    /// `Σ_{j≥k} j‖u^j‖₂²`
    pub weighted: Vec<f64>,
    /// `Σ_{j≥k} ‖∇u^j‖₂²`
    pub grad_weighted: Vec<f64>,
    /// `sup_t ‖u^k‖_{B⁻¹} / ν`
    pub quotient: f64,
    pub report: CheckReport,
}

pub fn theorem23_threshold(traj: &TrajectoryRecord, k: f64) -> Result<Theorem23Report> {
    if !(k > 0.0) {
        return precondition("threshold needs k > 0");
    }
    let params = BesovParams::new(-1.0, false)?;
    let cfg = &traj.config;
    let top = radius_bound(&cfg.grid);
    let first = libm::ceil(k).max(1.0) as u64;
    let mut besov_tail = Vec::new();
    let mut weighted = Vec::new();
    let mut grad_weighted = Vec::new();
    for u in &traj.checkpoints {
        besov_tail.push(besov_norm_with(&highpass(u, k), params, cfg.oversample)?);
        let spec = RadialSpectrum::new(u);
        let (mut w, mut g) = (0.0, 0.0);
        for j in first..=top {
            let jf = j as f64;
            w += jf * spec.highpass(jf);
            g += spec.grad_highpass(jf);
        }
        weighted.push(w);
        grad_weighted.push(g);
    }
    let sup = besov_tail.iter().fold(0.0f64, |a, &b| a.max(b));
    let quotient = sup / cfg.grid.nu();
    let report = CheckReport::ratio("theorem23_threshold", sup, cfg.grid.nu(), quotient).with_k(k);
    Ok(Theorem23Report {
        k,
        times: traj.times.clone(),
        besov_tail,
        weighted,
        grad_weighted,
        quotient,
        report,
    })
}
