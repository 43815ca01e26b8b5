use std::path::{Path, PathBuf};

use nssp::config::{Initial, RunConfig};
use nssp::error::EXIT_USAGE;

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

const MINIMAL: &str = "schema = 1\ndim = 3\nn = 16\nnu = 0.05\ndt = 0.01\nt_end = 0.1\ninitial = \"abc\"\n";

#[test]
fn bundled_configs_parse() {
    let tg = RunConfig::load(&bundled("taylor_green_2d.toml")).unwrap();
    assert_eq!(tg.initial, Initial::TaylorGreen2d);
    assert_eq!(tg.solver().unwrap().steps(), 1000);
    let r = RunConfig::load(&bundled("random_3d.toml")).unwrap();
    assert_eq!(r.k_ladder, vec![2.0, 4.0, 8.0]);
    assert_eq!(r.k_cut, Some(5.0));
}

#[test]
fn defaults_and_round_trip() {
    let c = RunConfig::parse(MINIMAL, Path::new("m.toml")).unwrap();
    assert_eq!((c.sample_every, c.oversample, c.s_max, c.checkpoint_every), (1, 2, 64, 1));
    assert_eq!(c.sigma_list, vec![-1.0]);
    let again = RunConfig::parse(&c.to_toml(), Path::new("m.toml")).unwrap();
    assert_eq!(c, again);
}

fn message(text: &str) -> String {
    let e = RunConfig::parse(text, Path::new("bad.toml")).unwrap_err();
    assert_eq!(e.exit_code(), EXIT_USAGE);
    e.to_string()
}

#[test]
fn unknown_key_is_named_with_line() {
    let m = message(&format!("{MINIMAL}viscosity = 0.1\n"));
    assert!(m.contains("viscosity"), "{m}");
    assert!(m.contains("line 8"), "{m}");
}

#[test]
fn invalid_values_are_named() {
    assert!(message(&MINIMAL.replace("schema = 1", "schema = 2")).contains("schema"));
    assert!(message(&format!("{MINIMAL}sigma_list = [-2.0]\n")).contains("sigma_list"));
    assert!(message(&format!("{MINIMAL}k_ladder = [4.0, 2.0]\n")).contains("k_ladder"));
    assert!(message(&MINIMAL.replace("\"abc\"", "\"taylor_green_2d\"")).contains("initial"));
    assert!(message(&MINIMAL.replace("\"abc\"", "\"vortex\"")).contains("vortex"));
    assert!(message(&MINIMAL.replace("t_end = 0.1", "t_end = 0.015")).contains("multiple of dt"));
    assert!(message(&MINIMAL.replace("n = 16", "n = 12")).contains("power of two"));
    assert!(message(&MINIMAL.replace("dim = 3\n", "")).contains("dim"));
}
