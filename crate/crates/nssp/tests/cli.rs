use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nssp_core::{leray_project, GridSpec, SpectralField};

fn nssp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nssp"))
        .args(args)
        .env_remove("NSSP_THREADS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn taylor_green_energy_decays_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tg");
    let o = nssp(&["simulate", "--config", s(&bundled("taylor_green_2d.toml")), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(out.join("diagnostics.csv")).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["t", "energy", "enstrophy", "dissipation_integral", "besov_m1", "e_k_1", "e_k_2"]
    );
    let rows: Vec<Vec<f64>> = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    let (e0, last) = (rows[0][1], rows.last().unwrap());
    assert_eq!(last[0], 1.0);
    let want = (-4.0 * 0.01 * 1.0f64).exp() * e0;
    assert!((last[1] - want).abs() <= 1e-6 * want, "{} vs {want}", last[1]);
    // E(0) = ½‖u₀‖² = ½ · (2π)²/2
    assert!((e0 - std::f64::consts::PI.powi(2)).abs() < 1e-12);
    assert!(out.join("manifest.toml").exists());
    assert!(out.join("checkpoints/sample_000010.nssp").exists());
}

#[test]
fn zero_checkpoint_passes_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.nssp");
    let g = GridSpec::new(3, 16, 0.05).unwrap();
    nssp::checkpoint::write(&path, &leray_project(&SpectralField::zeros(g)), 0.0).unwrap();
    let o = nssp(&["check", s(&path)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("check/checks.csv")).unwrap();
    assert!(text.starts_with("name,time,k,sigma,lhs,rhs,margin,status\n"));
    assert!(text.lines().count() > 20);
    assert!(!text.contains("_fail"));
}

#[test]
fn missing_inputs_have_their_own_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&nssp(&["diagnose", s(dir.path())])), 3);
    assert_eq!(code(&nssp(&["superpose", s(&dir.path().join("nowhere"))])), 3);
    assert_eq!(code(&nssp(&["simulate", "--config", s(&dir.path().join("no.toml"))])), 3);
    assert_eq!(code(&nssp(&["check", s(&dir.path().join("no.nssp"))])), 3);
}

#[test]
fn usage_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "schema = 1\ndim = 3\nn = 16\nnu = 0.05\ndt = 0.01\nt_end = 0.1\ninitial = \"abc\"\ndtt = 1\n",
    )
    .unwrap();
    let o = nssp(&["simulate", "--config", s(&cfg)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("dtt") && err.contains("line 8"), "{err}");
    assert_eq!(code(&nssp(&["simulate"])), 2);
    assert_eq!(code(&nssp(&["frobnicate"])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_nssp"))
        .args(["check", s(&cfg)])
        .env("NSSP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn blow_up_is_its_own_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("wild.toml");
    // inviscid, aliased, huge steps: diverges within a few steps
    fs::write(
        &cfg,
        "schema = 1\ndim = 3\nn = 8\nnu = 0.05\ndt = 0.5\nt_end = 500.0\n\
         inviscid = true\ndealias = \"none\"\ninitial = \"random_divfree\"\nslope = 0.0\n",
    )
    .unwrap();
    let out = dir.path().join("wild");
    let o = nssp(&["simulate", "--config", s(&cfg), "--out", s(&out)]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("checkpoints/last_finite.nssp").exists());
    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(manifest.contains("aborted_at"));
}

#[test]
fn small_pipeline_runs_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(
        &cfg,
        "schema = 1\ndim = 3\nn = 16\nnu = 0.05\ndt = 0.01\nt_end = 0.1\n\
         initial = \"random_divfree\"\nseed = 3\nk_cut = 4.0\n\
         k_ladder = [2.0, 4.0]\nsigma_list = [-1.0, -0.5]\ncheck_ensemble = 2\n",
    )
    .unwrap();
    let out = dir.path().join("run");
    assert_eq!(code(&nssp(&["simulate", "--config", s(&cfg), "--out", s(&out)])), 0);
    let o = nssp(&["check", "--config", s(&cfg), "--out", s(&dir.path().join("chk"))]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let checks = fs::read_to_string(dir.path().join("chk/checks.csv")).unwrap();
    assert!(checks.lines().any(|l| l.starts_with("band_tail_max,")));
    let o = nssp(&["diagnose", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["checks.csv", "monitor.csv", "envelope.csv", "threshold.csv", "summary.txt"] {
        assert!(out.join("diagnose").join(f).exists(), "{f}");
    }
    // l1 below 1/(m̃^{1/s} - 1) is reported as a failed condition
    let o = nssp(&["superpose", s(&out), "--s", "2", "--l1", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("l1_condition"));
    let o = nssp(&["superpose", s(&out), "--s", "2", "--l1", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(out.join("superpose/summary.txt")).unwrap();
    assert!(summary.contains("s = 2\n") && summary.contains("l1 = 3\n"), "{summary}");

    // a different seed changes the outputs
    let other = dir.path().join("other");
    nssp(&["simulate", "--config", s(&cfg), "--out", s(&other), "--seed-override", "4"]);
    assert_ne!(
        fs::read(out.join("diagnostics.csv")).unwrap(),
        fs::read(other.join("diagnostics.csv")).unwrap()
    );
}
