//! End-to-end checks of the binary: exit codes, output layout, determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ghostint() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ghostint"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const BASE: &str = "
source.sigma_per_m = 1e6
source.omega_m = 1e-2
geometry.z0_m = 1e-4
geometry.epsilon_m = 5e-6
geometry.lambda_m = 702e-9
geometry.l1_m = 0.5
geometry.l2_m = 0.5
run.samples = 1024
";

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn ghost_defaults_produce_pattern_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(ghostint().args(["ghost", "--out"]).arg(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("pattern.csv")).unwrap();
    assert!(csv.starts_with("z2_m,density_analytic\n"));
    // Unit-peak column within [0, 1].
    for line in csv.lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&v));
    }
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("primary_width_m"));
    // At least 5 resolved fringes from the bundled default.
    let peaks: usize = report
        .lines()
        .find(|l| l.starts_with("resolved_peaks"))
        .and_then(|l| l.split('=').nth(1))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(peaks >= 5, "{peaks} peaks");
}

#[test]
fn config_errors_exit_2_and_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.conf", &format!("{BASE}\nrun.wat = 1\n"));
    let out = run(ghostint()
        .args(["ghost", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path()));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run.wat"));

    let cfg = write_config(
        dir.path(),
        "neg.conf",
        &BASE.replace("geometry.epsilon_m = 5e-6", "geometry.epsilon_m = -1"),
    );
    let out = run(ghostint().args(["validate", "--config"]).arg(&cfg));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon"));
}

#[test]
fn numerical_guards_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // Oracle at the full-scale geometry needs an impossible grid.
    let cfg = write_config(
        dir.path(),
        "oracle.conf",
        &format!("{BASE}\nrun.mode = oracle\n"),
    );
    let out = run(ghostint()
        .args(["ghost", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path()));
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid"));
}

#[test]
fn overlapping_slits_warn_but_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "overlap.conf",
        &BASE.replace("geometry.epsilon_m = 5e-6", "geometry.epsilon_m = 2e-4"),
    );
    let out = run(ghostint()
        .args(["ghost", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path()));
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("overlap"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let cfg_body = format!("{BASE}\nrun.sweep_count = 200\nrun.seed = 9\n");
    let cfg = write_config(d1.path(), "sweep.conf", &cfg_body);
    for d in [&d1, &d2] {
        let out = run(ghostint()
            .args(["duality", "--config"])
            .arg(&cfg)
            .args(["--out"])
            .arg(d.path()));
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(d1.path().join("duality.txt")).unwrap();
    let b = fs::read(d2.path().join("duality.txt")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);

    // Ghost CSV likewise.
    let g1 = tempfile::tempdir().unwrap();
    let g2 = tempfile::tempdir().unwrap();
    let cfg = write_config(g1.path(), "ghost.conf", BASE);
    for d in [&g1, &g2] {
        let out = run(ghostint()
            .args(["ghost", "--config"])
            .arg(&cfg)
            .args(["--out"])
            .arg(d.path()));
        assert!(out.status.success());
    }
    assert_eq!(
        fs::read(g1.path().join("pattern.csv")).unwrap(),
        fs::read(g2.path().join("pattern.csv")).unwrap()
    );
}

#[test]
fn duality_records_have_the_contract_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "det.conf",
        &format!("{BASE}\ndetector.g12 = 0\ndetector.g13 = 0\ndetector.g23 = 0\n"),
    );
    let out = run(ghostint()
        .args(["duality", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path()));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("duality.txt")).unwrap();
    let first = text.lines().next().unwrap();
    for field in ["D=", "V2=", "bound_lhs=", "margin=", "source="] {
        assert!(first.contains(field), "missing {field} in `{first}`");
    }
    // Orthogonal detector: D = 1, measured V2 tiny.
    assert!(first.contains("D=1.0000000000000000e0"));
    let v2: f64 = first
        .split_whitespace()
        .find(|t| t.starts_with("V2="))
        .unwrap()[3..]
        .parse()
        .unwrap();
    assert!(v2 <= 0.05, "V2 = {v2}");
}

#[test]
fn two_slit_mode_checks_linear_bound() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "two.conf",
        &format!("{BASE}\nrun.two_slit = true\nrun.two_slit_overlap = 0.5\n"),
    );
    let out = run(ghostint()
        .args(["duality", "--config"])
        .arg(&cfg)
        .args(["--out"])
        .arg(dir.path()));
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("duality.txt")).unwrap();
    assert!(text.contains("source=measured-two-slit"));
    assert!(text.contains("D=5.0000000000000000e-1"));
}

#[test]
fn validate_reports_derived_quantities() {
    let out = run(ghostint().args(["validate"]));
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for key in ["d_m", "gamma_d_m", "predicted_width_ab_m", "good_correlation", "ok"] {
        assert!(text.contains(key), "missing {key}");
    }
}
