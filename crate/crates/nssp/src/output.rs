//! CSV tables and the trajectory manifest.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which reads back
//! to the same `f64`.

use std::fs;
use std::path::{Path, PathBuf};

use nssp_core::lab::CheckReport;
use nssp_core::DiagnosticsRow;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DIAGNOSTICS_SCHEMA: u32 = 1;
pub const CHECKS_SCHEMA: u32 = 1;
pub const MANIFEST_SCHEMA: u32 = 1;

pub const CHECKS_HEADER: [&str; 8] = ["name", "time", "k", "sigma", "lhs", "rhs", "margin", "status"];

pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Writes rows of already formatted cells.
pub fn write_table(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.write_record(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn ladder_column(k: f64) -> String {
    format!("e_k_{k}")
}

pub fn write_diagnostics(path: &Path, ladder: &[f64], rows: &[DiagnosticsRow]) -> Result<()> {
    let mut header: Vec<String> = ["t", "energy", "enstrophy", "dissipation_integral", "besov_m1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(ladder.iter().map(|&k| ladder_column(k)));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![
                fmt(r.t),
                fmt(r.energy),
                fmt(r.enstrophy),
                fmt(r.dissipation_integral),
                fmt(r.besov_m1),
            ];
            v.extend(r.truncated_energies.iter().map(|(_, e)| fmt(*e)));
            v
        })
        .collect();
    write_table(path, &header, &body)
}

pub fn read_diagnostics(path: &Path) -> Result<Vec<DiagnosticsRow>> {
    let bad = |message: String| CliError::Format {
        path: path.to_path_buf(),
        message,
    };
    if !path.exists() {
        return Err(CliError::Missing(path.to_path_buf()));
    }
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    let fixed = ["t", "energy", "enstrophy", "dissipation_integral", "besov_m1"];
    if header.len() < fixed.len() || header.iter().zip(fixed).any(|(a, b)| a != b) {
        return Err(bad("unexpected diagnostics header".into()));
    }
    let ladder: Vec<f64> = header
        .iter()
        .skip(fixed.len())
        .map(|h| {
            h.strip_prefix("e_k_")
                .and_then(|k| k.parse().ok())
                .ok_or_else(|| bad(format!("bad ladder column `{h}`")))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        let v: Vec<f64> = rec
            .iter()
            .map(|c| c.parse().map_err(|_| bad(format!("bad number `{c}`"))))
            .collect::<Result<_>>()?;
        rows.push(DiagnosticsRow {
            t: v[0],
            energy: v[1],
            enstrophy: v[2],
            dissipation_integral: v[3],
            besov_m1: v[4],
            truncated_energies: ladder.iter().copied().zip(v[5..].iter().copied()).collect(),
        });
    }
    Ok(rows)
}

pub fn check_row(r: &CheckReport) -> Vec<String> {
    vec![
        r.name.clone(),
        fmt_opt(r.time),
        fmt_opt(r.k),
        fmt_opt(r.sigma),
        fmt(r.lhs),
        fmt(r.rhs),
        fmt(r.margin),
        r.status.as_str().to_string(),
    ]
}

pub fn write_checks(path: &Path, reports: &[CheckReport]) -> Result<()> {
    let header: Vec<String> = CHECKS_HEADER.iter().map(|s| s.to_string()).collect();
    let rows: Vec<_> = reports.iter().map(check_row).collect();
    write_table(path, &header, &rows)
}

/// One stored checkpoint and the diagnostics row it belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointEntry {
    pub file: PathBuf,
    pub row: usize,
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema: u32,
    pub diagnostics_schema: u32,
    pub checks_schema: u32,
    pub rows: usize,
    /// Time of the first non-finite state, if the run aborted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aborted_at: Option<f64>,
    pub checkpoints: Vec<CheckpointEntry>,
}

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const RUN_CONFIG_FILE: &str = "run.toml";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const CHECKS_FILE: &str = "checks.csv";

impl Manifest {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(MANIFEST_FILE);
        let text = toml::to_string(self).expect("manifest always serializes");
        fs::write(&path, text).map_err(CliError::io(&path))
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(CliError::io(&path))?;
        let m: Manifest = toml::from_str(&text).map_err(|e| CliError::Format {
            path: path.clone(),
            message: e.to_string(),
        })?;
        if m.schema != MANIFEST_SCHEMA || m.diagnostics_schema != DIAGNOSTICS_SCHEMA {
            return Err(CliError::Format {
                path,
                message: format!("unsupported schema {}/{}", m.schema, m.diagnostics_schema),
            });
        }
        Ok(m)
    }
}

/// `key = value` summary lines.
pub fn write_summary(path: &Path, entries: &[(String, String)]) -> Result<()> {
    let mut text = String::new();
    for (k, v) in entries {
        text.push_str(k);
        text.push_str(" = ");
        text.push_str(v);
        text.push('\n');
    }
    fs::write(path, text).map_err(CliError::io(path))
}
