use std::path::{Path, PathBuf};
use std::sync::Arc;

use assert_cmd::Command;
use serde_json::{json, Value};

use fracterm_cli::ExperimentConfig;
use fracterm_core::{SpectralBasis, SpectralField, TerminalSetup};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &Path, cfg: &Value) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    p
}

fn single_mode(j: usize) -> Value {
    json!({
        "schema_version": 1,
        "problem": {
            "alpha": 1.5,
            "t_final": 2.0,
            "basis": { "kind": "interval", "modes": 6 },
            "f": { "preset": "single_mode", "j": j }
        },
        "grid": { "n": 32 }
    })
}

fn fracterm() -> Command {
    let mut c = Command::cargo_bin("fracterm").unwrap();
    c.env("FRACTERM_LOG", "quiet");
    c
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn shipped_configs_round_trip() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let a = ExperimentConfig::load(&path).unwrap();
        let b = ExperimentConfig::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b, "{}", path.display());
        n += 1;
    }
    assert!(n >= 4);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = single_mode(1);
    cfg["grid"]["n"] = json!(2);
    let p = write_config(dir.path(), &cfg);
    let out = fracterm().arg("--config").arg(&p).arg("solve").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n"));

    let mut cfg = single_mode(1);
    cfg["grid"]["stride"] = json!(3);
    let p = write_config(dir.path(), &cfg);
    fracterm().arg("--config").arg(&p).arg("solve").assert().code(2);
}

#[test]
fn linear_single_mode_matches_the_propagator() {
    let dir = tempfile::tempdir().unwrap();
    let j = 3;
    let p = write_config(dir.path(), &single_mode(j));
    let out = dir.path().join("out");
    fracterm().arg("--config").arg(&p).arg("--out").arg(&out).arg("solve").assert().success();

    let basis = Arc::new(SpectralBasis::dirichlet_1d(std::f64::consts::PI, 6).unwrap());
    let setup = TerminalSetup::new(1.5, 2.0, basis.clone()).unwrap();
    let f = SpectralField::single_mode(basis, j).unwrap();
    let (header, rows) = read_csv(&out.join("trajectory.csv"));
    assert_eq!(header, ["n", "t", "norm_0"]);
    assert_eq!(rows.len(), 33);
    for row in &rows {
        let t: f64 = row[1].parse().unwrap();
        let norm: f64 = row[2].parse().unwrap();
        let exact = setup.apply_b(t, &f).unwrap().norm_hs(0.0);
        assert!((norm - exact).abs() <= 1e-12 * exact.max(1.0), "t = {t}: {norm} vs {exact}");
    }
    let (_, report) = read_csv(&out.join("report.csv"));
    assert!(report.iter().all(|r| r[4] == "true"), "{report:?}");
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("ginzburg_landau.json");
    let run = |name: &str| {
        let out = dir.path().join(name);
        fracterm().arg("--config").arg(&cfg).arg("--out").arg(&out).arg("--seed").arg("7").arg("solve").assert().success();
        out
    };
    let (a, b) = (run("a"), run("b"));
    let mut names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 4);
    for n in names {
        assert_eq!(std::fs::read(a.join(&n)).unwrap(), std::fs::read(b.join(&n)).unwrap(), "{n:?}");
    }
}

#[test]
fn inadmissible_terminal_time_reports_the_mode() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = single_mode(1);
    cfg["problem"]["eps_den"] = json!(0.5);
    let p = write_config(dir.path(), &cfg);
    let out = dir.path().join("out");
    let res = fracterm().arg("--config").arg(&p).arg("--out").arg(&out).arg("solve").output().unwrap();
    assert_eq!(res.status.code(), Some(12));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("TerminalTimeInadmissible") && err.contains("mode 1"), "{err}");
    let (_, report) = read_csv(&out.join("report.csv"));
    assert_eq!(report.last().unwrap()[0], "error.TerminalTimeInadmissible");
}

// T from tools/oracles/crossing_oracle.py: scanning T down from 2, the
// first zero of E_{1.5,1}(-λ_j T^1.5) over j ≤ 6 is hit by mode 3.
#[test]
fn first_denominator_zero_below_t0_is_caught() {
    let mut r = csv::Reader::from_path(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/crossing_reference.csv")).unwrap();
    let rows: Vec<(String, String)> = r
        .records()
        .map(|rec| {
            let rec = rec.unwrap();
            (rec[0].to_string(), rec[1].to_string())
        })
        .collect();
    let get = |k: &str| rows.iter().find(|(n, _)| n == k).unwrap().1.clone();
    let t_cross: f64 = get("t_cross").parse().unwrap();
    let mode = get("mode");

    let dir = tempfile::tempdir().unwrap();
    let mut cfg = single_mode(1);
    cfg["problem"]["t_final"] = json!(t_cross);
    let p = write_config(dir.path(), &cfg);
    let res = fracterm().arg("--config").arg(&p).arg("--out").arg(dir.path().join("out")).arg("solve").output().unwrap();
    assert_eq!(res.status.code(), Some(12));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains(&format!("for mode {mode};")), "{err}");

    // a little earlier in the scan every denominator is still clear of zero
    cfg["problem"]["t_final"] = json!(t_cross * (1.0 + 1e-3));
    let p = write_config(dir.path(), &cfg);
    fracterm().arg("--config").arg(&p).arg("--out").arg(dir.path().join("out")).arg("solve").assert().success();
}

#[test]
fn roundtrip_writes_its_error_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    fracterm()
        .arg("--config")
        .arg(configs_dir().join("roundtrip.json"))
        .arg("--out")
        .arg(&out)
        .arg("roundtrip")
        .assert()
        .success();
    let (_, report) = read_csv(&out.join("report.csv"));
    let row = report.iter().find(|r| r[0] == "roundtrip_error").expect("roundtrip_error row");
    assert!(row[1].parse::<f64>().unwrap() <= 1e-3);
    assert!(out.join("initial_state.csv").exists() && out.join("forward.csv").exists());
}

#[test]
fn validate_flags_theta_outside_range() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = single_mode(1);
    cfg["problem"]["regularity"] = json!({ "theta": 0.3 });
    cfg["nonlinearity"] = json!({ "kind": "lipschitz_scaled", "l1": 0.01 });
    let p = write_config(dir.path(), &cfg);
    let out = fracterm().arg("--config").arg(&p).arg("validate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l.starts_with("FAIL lipschitz.theta-range")), "{text}");
}

#[test]
fn ginzburg_landau_routes_to_its_case() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg: Value =
        serde_json::from_str(&std::fs::read_to_string(configs_dir().join("ginzburg_landau.json")).unwrap()).unwrap();
    cfg["nonlinearity"] = json!({ "kind": "ginzburg_landau", "s": 2.0, "b": 1.0, "c_rho": 0.001, "dim": 4.0 });
    let p = write_config(dir.path(), &cfg);
    let out = fracterm().arg("--config").arg(&p).arg("validate").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("application.GinzburgLandau.case_b"), "{text}");
    assert!(!text.contains("case_a"), "{text}");
    let nu = text.lines().find(|l| l.contains("case_b.nu-range")).expect("ν bound checked");
    assert!(nu.starts_with("FAIL") && nu.contains("[0.75, 1)"), "{nu}");

    let out = fracterm().arg("--config").arg(configs_dir().join("ginzburg_landau.json")).arg("validate").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS application.GinzburgLandau.case_a.conditions"));
}

#[test]
fn burgers_preset_passes_every_predicate() {
    let out = fracterm().arg("--config").arg(configs_dir().join("burgers.json")).arg("validate").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS application.Burgers.conditions"), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn ml_eval_prints_a_certified_value() {
    let out = fracterm().args(["ml", "eval", "--alpha", "1.5", "--z", "-2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let v: f64 = row[3].parse().unwrap();
    assert!((v - 0.029_430_685_602_826_47).abs() < 1e-13, "{v}");
}
