//! The `simulate`, `check`, `diagnose` and `superpose` pipeline stages.

use std::fs;
use std::path::{Path, PathBuf};

use nssp_core::lab::{self, CheckReport, SuperpositionConfig};
use nssp_core::{run, Error, SpectralField, TrajectoryRecord};
use rayon::prelude::*;

use crate::checkpoint;
use crate::config::RunConfig;
use crate::error::{CliError, Result, EXIT_BLOW_UP, EXIT_CHECKS_FAILED};
use crate::output::{self, fmt, CheckpointEntry, Manifest};

/// Overrides shared by the subcommands.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    pub seed_override: Option<u64>,
    pub oversample: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    ChecksFailed(usize),
    BlowUp,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::ChecksFailed(_) => EXIT_CHECKS_FAILED,
            Status::BlowUp => EXIT_BLOW_UP,
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

fn load_config(path: &Path, opts: &Options) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(s) = opts.seed_override {
        cfg.seed = s;
    }
    if let Some(o) = opts.oversample {
        cfg.oversample = o;
        let text = cfg.to_toml();
        cfg = RunConfig::parse(&text, path)?;
    }
    Ok(cfg)
}

/// Lists failed reports on stderr and turns them into a status.
fn verdict(reports: &[CheckReport]) -> Status {
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
    for r in &failed {
        eprintln!(
            "FAILED {} t={} k={} sigma={} lhs={} rhs={} {}",
            r.name,
            r.time.map(fmt).unwrap_or_default(),
            r.k.map(fmt).unwrap_or_default(),
            r.sigma.map(fmt).unwrap_or_default(),
            fmt(r.lhs),
            fmt(r.rhs),
            r.context
        );
    }
    if failed.is_empty() {
        Status::Ok
    } else {
        Status::ChecksFailed(failed.len())
    }
}

pub fn cmd_simulate(config_path: &Path, opts: &Options) -> Result<Status> {
    let cfg = load_config(config_path, opts)?;
    let out = opts.out.clone().unwrap_or_else(|| cfg.out_dir.clone());
    let solver = cfg.solver()?;
    let u0 = cfg.initial_field(cfg.seed)?;
    let rec = run(&u0, &solver)?;

    create_dir(&out.join("checkpoints"))?;
    let run_path = out.join(output::RUN_CONFIG_FILE);
    fs::write(&run_path, cfg.to_toml()).map_err(CliError::io(&run_path))?;
    output::write_diagnostics(&out.join(output::DIAGNOSTICS_FILE), &cfg.k_ladder, &rec.diagnostics)?;
    let mut entries = Vec::new();
    for (row, (u, &t)) in rec.checkpoints.iter().zip(&rec.times).enumerate() {
        if row % cfg.checkpoint_every == 0 {
            let file = PathBuf::from("checkpoints").join(format!("sample_{row:06}.nssp"));
            checkpoint::write(&out.join(&file), u, t)?;
            entries.push(CheckpointEntry { file, row, time: t });
        }
    }
    let aborted_at = match &rec.abort {
        Some(Error::BlowUpSuspected { time, last_finite }) => {
            let t_last = rec.times.last().copied().unwrap_or(0.0).max(time - solver.dt);
            checkpoint::write(&out.join("checkpoints").join("last_finite.nssp"), last_finite, t_last)?;
            Some(*time)
        }
        _ => None,
    };
    Manifest {
        schema: output::MANIFEST_SCHEMA,
        diagnostics_schema: output::DIAGNOSTICS_SCHEMA,
        checks_schema: output::CHECKS_SCHEMA,
        rows: rec.diagnostics.len(),
        aborted_at,
        checkpoints: entries,
    }
    .write(&out)?;

    if let Some(t) = aborted_at {
        eprintln!("blow-up suspected at t = {t}; record truncated to {} rows", rec.len());
        return Ok(Status::BlowUp);
    }
    let last = rec.diagnostics.last().expect("initial row always present");
    println!(
        "simulated {} steps, {} samples; final energy {}",
        solver.steps(),
        rec.len(),
        fmt(last.energy)
    );
    Ok(Status::Ok)
}

/// Cutoffs for the static battery: powers of two inside the resolved band.
fn static_ladder(n: usize) -> Vec<f64> {
    let mut ks = Vec::new();
    let mut k = 1.0;
    while k <= n as f64 / 4.0 {
        ks.push(k);
        k *= 2.0;
    }
    ks
}

/// Every static check on one field.
pub fn static_battery(u: &SpectralField, sigmas: &[f64]) -> Result<Vec<CheckReport>> {
    let ks = static_ladder(u.grid().n());
    let mut out = Vec::new();
    for (a, &k) in ks.iter().enumerate() {
        for &l in &ks[a..] {
            out.push(lab::check_orthogonality(u, k, l)?);
        }
        for alpha in [0.5, 1.0, 2.0] {
            out.push(lab::check_bernstein(u, k, alpha)?);
        }
        out.push(lab::check_product_support(u, k, k)?);
        for &s in sigmas.iter().filter(|s| **s < 0.0) {
            out.push(lab::check_linf_bound(u, k, s)?);
        }
        if !u.has_mean() {
            out.push(lab::check_band_tail(u, k, 2.0 * k)?);
        }
    }
    for k in 1..=3u64 {
        out.push(lab::superposition_identity(u, k)?);
        for s in 1..=3 {
            out.push(lab::poly_superposition_identity(u, k, s)?.with_context(format!("s={s}")));
        }
    }
    out.push(lab::hhalf_equivalence(u, 1)?);
    for s in 1..=2u32 {
        for i in 1..=2 * s - 1 {
            for l1 in 1..=2 {
                out.push(lab::weighted_rearrangement(u, l1, i, s)?);
            }
        }
    }
    Ok(out)
}

pub fn cmd_check(target: &Path, opts: &Options) -> Result<Status> {
    if !target.exists() {
        return Err(CliError::Missing(target.to_path_buf()));
    }
    let (fields, sigmas, default_out) = if checkpoint::is_checkpoint(target) {
        let (u, _) = checkpoint::read(target)?;
        let dir = target.parent().unwrap_or(Path::new(".")).join("check");
        (vec![u], vec![-1.0, -0.5], dir)
    } else {
        let cfg = load_config(target, opts)?;
        let fields = (0..cfg.check_ensemble as u64)
            .map(|i| cfg.initial_field(cfg.seed + i))
            .collect::<nssp_core::Result<Vec<_>>>()?;
        (fields, cfg.sigma_list.clone(), cfg.out_dir.join("check"))
    };
    let out = opts.out.clone().unwrap_or(default_out);
    let per_field: Vec<Vec<CheckReport>> = fields
        .par_iter()
        .map(|u| static_battery(u, &sigmas))
        .collect::<Result<_>>()?;
    let reports: Vec<CheckReport> = per_field
        .into_iter()
        .enumerate()
        .flat_map(|(i, rs)| {
            rs.into_iter().map(move |r| {
                let ctx = if r.context.is_empty() {
                    format!("member={i}")
                } else {
                    format!("member={i} {}", r.context)
                };
                r.with_context(ctx)
            })
        })
        .collect();
    let mut reports = reports;
    reports.extend(band_tail_maxima(&reports));
    create_dir(&out)?;
    output::write_checks(&out.join(output::CHECKS_FILE), &reports)?;
    let status = verdict(&reports);
    println!("{} checks on {} field(s)", reports.len(), fields.len());
    Ok(status)
}

/// Largest observed band-tail ratio per cutoff, over all members.
fn band_tail_maxima(reports: &[CheckReport]) -> Vec<CheckReport> {
    let mut worst: Vec<(f64, &CheckReport)> = Vec::new();
    for r in reports.iter().filter(|r| r.name == "band_tail") {
        let k = r.k.unwrap_or(0.0);
        match worst.iter_mut().find(|(wk, _)| *wk == k) {
            Some(w) if r.margin > w.1.margin => w.1 = r,
            Some(_) => {}
            None => worst.push((k, r)),
        }
    }
    worst
        .into_iter()
        .map(|(k, r)| {
            CheckReport::ratio("band_tail_max", r.lhs, r.rhs, r.margin)
                .with_k(k)
                .with_context(r.context.clone())
        })
        .collect()
}

/// Rebuilds a trajectory from a `simulate` output directory.
pub fn load_trajectory(dir: &Path, opts: &Options) -> Result<(RunConfig, TrajectoryRecord)> {
    if !dir.is_dir() {
        return Err(CliError::Missing(dir.to_path_buf()));
    }
    let manifest = Manifest::read(dir)?;
    let mut cfg = load_config(&dir.join(output::RUN_CONFIG_FILE), &Options::default())?;
    if let Some(o) = opts.oversample {
        cfg.oversample = o;
        cfg = RunConfig::parse(&cfg.to_toml(), &dir.join(output::RUN_CONFIG_FILE))?;
    }
    let rows = output::read_diagnostics(&dir.join(output::DIAGNOSTICS_FILE))?;
    if rows.len() != manifest.rows {
        return Err(CliError::Format {
            path: dir.join(output::DIAGNOSTICS_FILE),
            message: format!("expected {} rows, found {}", manifest.rows, rows.len()),
        });
    }
    let mut rec = TrajectoryRecord {
        config: cfg.solver()?,
        times: Vec::new(),
        checkpoints: Vec::new(),
        diagnostics: Vec::new(),
        abort: None,
    };
    for e in &manifest.checkpoints {
        let (u, t) = checkpoint::read(&dir.join(&e.file))?;
        let row = rows.get(e.row).ok_or_else(|| CliError::Format {
            path: dir.join(output::MANIFEST_FILE),
            message: format!("row {} out of range", e.row),
        })?;
        rec.times.push(t);
        rec.checkpoints.push(u);
        rec.diagnostics.push(row.clone());
    }
    if rec.is_empty() {
        return Err(CliError::Missing(dir.join("checkpoints")));
    }
    Ok((cfg, rec))
}

/// Default monitor cutoffs when the config has no ladder.
fn monitor_ladder(cfg: &RunConfig) -> Vec<f64> {
    if !cfg.k_ladder.is_empty() {
        return cfg.k_ladder.clone();
    }
    static_ladder(cfg.n).into_iter().filter(|k| *k >= 2.0).collect()
}

pub fn cmd_diagnose(dir: &Path, opts: &Options) -> Result<Status> {
    let (cfg, traj) = load_trajectory(dir, opts)?;
    let out = opts.out.clone().unwrap_or_else(|| dir.join("diagnose"));
    let ks = monitor_ladder(&cfg);
    let tasks: Vec<(f64, f64)> = ks
        .iter()
        .flat_map(|&k| cfg.sigma_list.iter().map(move |&s| (k, s)))
        .collect();
    let monitors = tasks
        .par_iter()
        .map(|&(k, s)| lab::differential_inequality_monitor(&traj, k, s))
        .collect::<nssp_core::Result<Vec<_>>>()?;
    let thresholds = ks
        .par_iter()
        .map(|&k| lab::theorem23_threshold(&traj, k))
        .collect::<nssp_core::Result<Vec<_>>>()?;
    let envelopes = cfg
        .sigma_list
        .iter()
        .filter(|s| **s > -1.0 && **s < 0.0)
        .map(|&s| lab::gronwall_envelope(&traj, s))
        .collect::<nssp_core::Result<Vec<_>>>()?;

    let mut reports = Vec::new();
    let mut monitor_rows = Vec::new();
    for m in &monitors {
        reports.extend(m.reports.iter().cloned());
        for s in &m.samples {
            monitor_rows.push(vec![
                fmt(m.k),
                fmt(m.sigma),
                fmt(s.t),
                fmt(s.lhs_fd),
                fmt(s.lhs_exact),
                fmt(s.viscous),
                fmt(s.rhs_linf),
                fmt(s.rhs_besov),
                fmt(s.ratio_linf),
                fmt(s.ratio_besov),
                s.under_resolved.to_string(),
                s.degenerate.to_string(),
            ]);
        }
    }
    let mut threshold_rows = Vec::new();
    for th in &thresholds {
        reports.push(th.report.clone());
        for i in 0..th.times.len() {
            threshold_rows.push(vec![
                fmt(th.k),
                fmt(th.times[i]),
                fmt(th.besov_tail[i]),
                fmt(th.weighted[i]),
                fmt(th.grad_weighted[i]),
            ]);
        }
    }
    let mut envelope_rows = Vec::new();
    for env in &envelopes {
        reports.extend(env.reports.iter().cloned());
        for i in 0..env.times.len() {
            envelope_rows.push(vec![
                fmt(env.sigma),
                fmt(env.times[i]),
                fmt(env.measured[i]),
                fmt(env.envelope[i]),
            ]);
        }
    }

    create_dir(&out)?;
    let h = |cols: &[&str]| cols.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    output::write_checks(&out.join(output::CHECKS_FILE), &reports)?;
    output::write_table(
        &out.join("monitor.csv"),
        &h(&[
            "k", "sigma", "t", "lhs_fd", "lhs_exact", "viscous", "rhs_linf", "rhs_besov",
            "ratio_linf", "ratio_besov", "under_resolved", "degenerate",
        ]),
        &monitor_rows,
    )?;
    output::write_table(
        &out.join("threshold.csv"),
        &h(&["k", "t", "besov_tail", "weighted", "grad_weighted"]),
        &threshold_rows,
    )?;
    output::write_table(
        &out.join("envelope.csv"),
        &h(&["sigma", "t", "measured", "envelope"]),
        &envelope_rows,
    )?;
    let mut summary = vec![
        ("samples".to_string(), traj.len().to_string()),
        ("regime".to_string(), "smooth approximations only".to_string()),
    ];
    for m in &monitors {
        let key = format!("monitor.k{}.sigma{}", m.k, m.sigma);
        summary.push((format!("{key}.c_hat"), fmt(m.c_hat)));
        summary.push((format!("{key}.c_hat_besov"), fmt(m.c_hat_besov)));
        summary.push((format!("{key}.max_discrepancy"), fmt(m.max_discrepancy)));
        summary.push((format!("{key}.flagged"), m.flagged.to_string()));
    }
    for th in &thresholds {
        summary.push((format!("threshold.k{}.quotient", th.k), fmt(th.quotient)));
    }
    for env in &envelopes {
        let key = format!("gronwall.sigma{}", env.sigma);
        summary.push((format!("{key}.c_hat"), fmt(env.c_hat)));
        summary.push((format!("{key}.e"), fmt(env.e)));
        summary.push((format!("{key}.e_tilde"), fmt(env.e_tilde)));
        summary.push((format!("{key}.composition"), format!("{:?}", env.composition)));
    }
    output::write_summary(&out.join("summary.txt"), &summary)?;
    let status = verdict(&reports);
    println!("{} reports over {} samples", reports.len(), traj.len());
    Ok(status)
}

pub fn cmd_superpose(dir: &Path, s: Option<u32>, l1: Option<u64>, opts: &Options) -> Result<Status> {
    let (cfg, traj) = load_trajectory(dir, opts)?;
    let out = opts.out.clone().unwrap_or_else(|| dir.join("superpose"));
    let scfg = SuperpositionConfig {
        s: s.or(cfg.s),
        l1: l1.or(cfg.l1),
        s_max: cfg.s_max,
    };
    if scfg.s == Some(0) || scfg.l1 == Some(0) {
        return Err(CliError::Usage("s and l1 must be >= 1".into()));
    }
    let rep = lab::superposition_diagnostics(&traj, &scfg)?;
    let i_max = cfg.i_max.unwrap_or(u32::MAX);

    let mut rung_rows = Vec::new();
    for r in rep.rungs.iter().filter(|r| r.i <= i_max) {
        for (t, (w, h)) in rep.times.iter().zip(r.weighted.iter().zip(&r.norms)) {
            rung_rows.push(vec![
                r.i.to_string(),
                fmt(r.exponent),
                fmt(*t),
                fmt(*w),
                fmt(*h),
            ]);
        }
    }
    let a_rows: Vec<Vec<String>> = rep
        .a_series
        .iter()
        .enumerate()
        .map(|(i, a)| vec![(i + 1).to_string(), fmt(*a)])
        .collect();

    create_dir(&out)?;
    let h = |cols: &[&str]| cols.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    output::write_checks(&out.join(output::CHECKS_FILE), &rep.reports)?;
    output::write_table(
        &out.join("rungs.csv"),
        &h(&["i", "exponent", "t", "weighted", "norm"]),
        &rung_rows,
    )?;
    output::write_table(&out.join("a_series.csv"), &h(&["s", "a"]), &a_rows)?;
    let summary = vec![
        ("regime".to_string(), "smooth approximations only".to_string()),
        ("nu".to_string(), fmt(rep.nu)),
        ("m".to_string(), fmt(rep.m)),
        ("c1".to_string(), fmt(rep.c1)),
        ("c2".to_string(), fmt(rep.c2)),
        ("c2_uncovered".to_string(), rep.c2_uncovered.to_string()),
        ("m_tilde_raw".to_string(), fmt(rep.m_tilde_raw)),
        ("m_tilde".to_string(), fmt(rep.m_tilde)),
        ("a_strictly_decreasing".to_string(), rep.a_strictly_decreasing.to_string()),
        ("s_min".to_string(), rep.s_min.to_string()),
        ("s_min_quarter".to_string(), rep.s_min_quarter.to_string()),
        ("s".to_string(), rep.s.to_string()),
        ("a_s".to_string(), fmt(rep.a_s)),
        ("l1".to_string(), rep.l1.to_string()),
        ("l1_bound".to_string(), fmt(rep.l1_bound)),
        ("h1_direct_sup".to_string(), fmt(rep.h1_direct_sup)),
        ("h1_relative_gap".to_string(), fmt(rep.h1_relative_gap)),
    ];
    output::write_summary(&out.join("summary.txt"), &summary)?;
    let status = verdict(&rep.reports);
    println!("s = {}, l1 = {}, a(s) = {}", rep.s, rep.l1, fmt(rep.a_s));
    Ok(status)
}
