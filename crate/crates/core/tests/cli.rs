use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn blab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blab")).args(args).current_dir(dir).env_remove("BLAB_THREADS").output().unwrap()
}

fn parse_c(line: &str) -> (f64, f64) {
    let (re, im) = line.split_once('=').unwrap().1.split_once(',').unwrap();
    (re.parse().unwrap(), im.parse().unwrap())
}

#[test]
fn list_prints_every_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let out = blab(&["list"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().any(|l| l.starts_with("kernel_equivalence")));
    assert!(text.lines().any(|l| l.starts_with("hankel")));
}

#[test]
fn atom_norms_passes_with_unit_mass_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = blab(&["run", "atom_norms", "--out", "a.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("claim_id,param_1,param_2,measured,predicted,ratio,err_estimate,verdict"));
    let masses: Vec<f64> = lines.filter(|l| l.starts_with("atom_mass,")).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect();
    assert!(masses.len() >= 12);
    assert!(masses.iter().all(|m| (m - 2.0).abs() <= 1e-6));
    assert!(csv.ends_with('\n') && !csv.contains('\r'));

    // A limit no measurement can meet turns the verdict, and the exit code, to fail.
    let out = blab(&["run", "atom_norms", "--set", "threshold.pf_over_omega=1", "--out", "b.csv"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("verdict: fail"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(blab(&["run", "no_such_experiment"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("bad.cfg"), "rel_tol=1\n").unwrap();
    assert_eq!(blab(&["run", "theta", "--config", "bad.cfg"], dir.path()).status.code(), Some(2));
    assert_eq!(blab(&["run", "theta", "--set", "rel_tol=1"], dir.path()).status.code(), Some(2));
    assert_eq!(blab(&["run", "theta", "--config", "missing.cfg"], dir.path()).status.code(), Some(2));
    assert_eq!(blab(&["frobnicate"], dir.path()).status.code(), Some(2));
    let threads = Command::new(env!("CARGO_BIN_EXE_blab")).args(["list"]).env("BLAB_THREADS", "zero").output().unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn calibration_is_deterministic_and_additive() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("calibration.txt");
    assert_eq!(blab(&["calibrate", "--alphas", "0"], dir.path()).status.code(), Some(0));
    let first = fs::read_to_string(&file).unwrap();
    let c0 = first.lines().find(|l| l.starts_with("c_alpha.0=")).unwrap();
    let (re, im) = parse_c(c0);
    assert!((re.hypot(im) * std::f64::consts::PI - 1.0).abs() < 1e-3);

    assert_eq!(blab(&["calibrate", "--alphas", "0"], dir.path()).status.code(), Some(0));
    assert_eq!(fs::read_to_string(&file).unwrap(), first);

    assert_eq!(blab(&["calibrate", "--alphas", "1"], dir.path()).status.code(), Some(0));
    let both = fs::read_to_string(&file).unwrap();
    assert!(both.lines().any(|l| l == c0));
    assert!(both.lines().any(|l| l.starts_with("c_alpha.1=")));

    // The file is a valid config for later runs.
    let out = blab(&["run", "mean_zero", "--config", "calibration.txt", "--out", "m.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn seeded_runs_are_byte_identical_and_tsv_is_available() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["p1.csv", "p2.csv"] {
        let out = blab(&["run", "pointwise_bloch", "--seed", "11", "--out", name], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("p1.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("p2.csv")).unwrap());

    let out = blab(&["run", "pointwise_bloch", "--seed", "11", "--format", "tsv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let tsv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(tsv.replace('\t', ","), String::from_utf8(a).unwrap());
}
