use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fracpme::io::{read_diagnostics, read_snapshot, RunConfig};

fn fracpme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracpme")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.cfg");
    fs::write(&file, "# comment\nn = 1\ns = 0.3\nN = 64\nL = 5\n").unwrap();
    let cfg = RunConfig::load(Some(&file), &[("N".into(), "32".into())]).unwrap();
    assert_eq!(cfg.points_per_axis, 32);
    assert_eq!(cfg.s, 0.3);
    assert_eq!(cfg.half_width, 5.0);
}

#[test]
fn invalid_configuration_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracpme(&["evolve", "--n", "1", "--s", "0.6", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("s < 1/2"));

    let out = fracpme(&["evolve", "--set", "no_such_key=1", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));

    let out = fracpme(&["obstacle", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_datum_runs_to_completion() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracpme(&[
        "evolve", "--N", "32", "--end-time", "0.1", "--set", "datum=zero", "--out", path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = read_diagnostics(&dir.path().join("diagnostics.csv")).unwrap();
    assert!(!recs.is_empty());
    assert!(recs.iter().all(|r| r.mass == 0.0 && r.linf == 0.0 && r.dissipation == 0.0));
}

#[test]
fn evolve_writes_increasing_diagnostics_and_a_final_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracpme(&["evolve", "--N", "64", "--end-time", "0.5", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let recs = read_diagnostics(&dir.path().join("diagnostics.csv")).unwrap();
    assert!(recs.windows(2).all(|w| w[1].time > w[0].time));
    assert!(recs.windows(2).all(|w| w[1].linf <= w[0].linf * (1.0 + 1e-8)));
    let last = read_snapshot(&dir.path().join("final.txt")).unwrap();
    assert_eq!(last.time, recs.last().unwrap().time);
    assert!(dir.path().join("config.txt").exists());
}

#[test]
fn rescaled_rejects_a_box_that_is_too_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracpme(&[
        "rescaled", "--L", "1", "--N", "32", "--set", "datum=box(0,1.5,4)", "--out", path(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn obstacle_with_a_zero_level_is_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracpme(&["obstacle", "--C", "0", "--N", "64", "--out", path(dir.path())]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rho = read_snapshot(&dir.path().join("density.txt")).unwrap();
    assert!(rho.field.values().iter().all(|&x| x == 0.0));
}
