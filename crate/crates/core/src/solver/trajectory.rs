use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::littlewood_paley::{besov_norm_with, BesovParams, RadialSpectrum};

use super::integrator::{check_input, Integrator, SolverConfig};

/// Scalar diagnostics at one sampled time.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    /// `½‖u‖₂²`
    pub energy: f64,
    /// `‖∇u‖₂²`
    pub enstrophy: f64,
    /// `ν∫₀ᵗ‖∇u‖₂²` (trapezoid rule per step).
    pub dissipation_integral: f64,
    /// `‖u‖_{B^{-1}_{∞,∞}}`, inhomogeneous.
    pub besov_m1: f64,
    /// `(k, ‖u^k‖₂²)` for each ladder cutoff.
    pub truncated_energies: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub config: SolverConfig,
    pub times: Vec<f64>,
    pub checkpoints: Vec<SpectralField>,
    pub diagnostics: Vec<DiagnosticsRow>,
    /// Set when integration stopped early; the record ends at the last
    /// finite sample.
    pub abort: Option<Error>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn diagnostics_row(
    u: &SpectralField,
    t: f64,
    dissipation: f64,
    cfg: &SolverConfig,
) -> Result<DiagnosticsRow> {
    let spec = RadialSpectrum::new(u);
    let besov = besov_norm_with(u, BesovParams::new(-1.0, false)?, cfg.oversample)?;
    Ok(DiagnosticsRow {
        t,
        energy: 0.5 * spec.total(),
        enstrophy: spec.sum_where(|_| true, |k2| k2 as f64),
        dissipation_integral: dissipation,
        besov_m1: besov,
        truncated_energies: cfg
            .k_ladder
            .iter()
            .map(|&k| (k, spec.highpass(k)))
            .collect(),
    })
}

/// Integrates from `u0` to `cfg.t_end`, sampling every `cfg.sample_every`
/// steps. Invalid input is an error; a blow-up mid-run is reported through
/// [`TrajectoryRecord::abort`] with the samples gathered so far.
pub fn run(u0: &SpectralField, cfg: &SolverConfig) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let int = Integrator::new(cfg);
    check_input(&int, u0, cfg)?;
    let nu = cfg.effective_nu();
    let mut rec = TrajectoryRecord {
        config: cfg.clone(),
        times: Vec::new(),
        checkpoints: Vec::new(),
        diagnostics: Vec::new(),
        abort: None,
    };
    let push = |rec: &mut TrajectoryRecord, u: &SpectralField, t: f64, diss: f64| -> Result<()> {
        rec.diagnostics.push(diagnostics_row(u, t, diss, cfg)?);
        rec.times.push(t);
        rec.checkpoints.push(u.clone());
        Ok(())
    };
    push(&mut rec, u0, 0.0, 0.0)?;
    let mut u = u0.clone();
    let mut ens = crate::ops::weighted_sum(&u, |k2| k2 as f64);
    let mut diss = 0.0;
    for s in 1..=cfg.steps() {
        let (next, _) = int.advance(&u);
        let t = s as f64 * cfg.dt;
        if !next.all_finite() {
            rec.abort = Some(Error::BlowUpSuspected {
                time: t,
                last_finite: Box::new(u),
            });
            break;
        }
        let ens_next = crate::ops::weighted_sum(&next, |k2| k2 as f64);
        diss += 0.5 * cfg.dt * nu * (ens + ens_next);
        ens = ens_next;
        u = next;
        if s % cfg.sample_every == 0 {
            push(&mut rec, &u, t, diss)?;
        }
    }
    Ok(rec)
}
