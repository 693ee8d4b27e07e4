use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gravidec"))
}

fn config(state: &str, bath: &str, extra: &str) -> String {
    format!(
        r#"{{
  "schema": "gravidec/1",
  "m0": 1.5,
  "state": {state},
  "bath": {bath},
  "path": {{"v": [0.3, -0.2, 0.5], "xi": [1.0, 0.4, -0.7], "mean_velocity": [0.2, 0.1, 0.3], "t_f": 5.0}}{extra}
}}"#
    )
}

const VACUUM: &str = r#"{"variant": "vacuum", "cutoff": 1.0}"#;
const BATH: &str = r#"{"lambda": 0.5, "gamma": 0.2, "beta": 0.1}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str], cfg: &Path) -> Output {
    bin().args(args).arg("--config").arg(cfg).output().unwrap()
}

fn json_out(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn vacuum_kernel_at_equal_times() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "v.json", &config(VACUUM, BATH, ""));
    let v = json_out(&run(&["kernel", "--t", "0", "--t-prime", "0"], &cfg));
    let want = 1.5f64.powi(2) / (90.0 * PI);
    assert!((v["scalar"].as_f64().unwrap() / want - 1.0).abs() < 1e-14);
    assert_eq!(v["tensor"]["a"], 3.0);
    assert_eq!(v["tensor"]["b"], -2.0);
}

#[test]
fn squeezed_r_zero_kernel_equals_vacuum() {
    let dir = TempDir::new().unwrap();
    let vac = write(&dir, "v.json", &config(VACUUM, BATH, ""));
    let sq = write(
        &dir,
        "s.json",
        &config(r#"{"variant": "squeezed", "cutoff": 1.0, "r": 0.0, "phi": 0.7}"#, BATH, ""),
    );
    for fmt in ["json", "csv"] {
        let args = ["kernel", "--t", "1.3", "--t-prime", "-0.4", "--expand", "--format", fmt];
        let a = run(&args, &vac);
        let b = run(&args, &sq);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn expanded_kernel_has_81_components() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "v.json", &config(VACUUM, BATH, ""));
    let v = json_out(&run(&["kernel", "--t", "0.5", "--expand"], &cfg));
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 81);
    let scalar = v["scalar"].as_f64().unwrap();
    // N^{1111} = scalar · (2a + b) = 4 · scalar
    assert_eq!(comps[0].as_array().unwrap()[4].as_f64().unwrap(), 4.0 * scalar);
    let csv = run(&["kernel", "--t", "0.5", "--expand", "--format", "csv"], &cfg);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 82);
}

#[test]
fn malformed_json_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "bad.json", "{\"schema\": \"gravidec/1\", \"m0\": ");
    let out = dir.path().join("out.json");
    for cmd in ["kernel", "gamma", "tdec", "sweep"] {
        let o = bin().args([cmd, "--out"]).arg(&out).arg("--config").arg(&cfg).output().unwrap();
        assert_eq!(o.status.code(), Some(2), "{cmd}");
        assert!(!out.exists());
        assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    }
}

#[test]
fn unknown_and_missing_fields_are_named() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "u.json", &config(VACUUM, r#"{"lambda": 0.5, "gamma": 0.2, "beta": 0.1, "temp": 3}"#, ""));
    let o = run(&["gamma"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown field `temp`"));

    let cfg = write(&dir, "m.json", &config(r#"{"variant": "coherent", "cutoff": 1.0}"#, BATH, ""));
    let o = run(&["gamma"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));

    let cfg = write(&dir, "b.json", &config(VACUUM, r#"{"lambda": 0.5, "gamma": 0.2}"#, ""));
    let o = run(&["gamma"], &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("beta"));
}

#[test]
fn gamma_both_methods_agree() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "g.json", &config(VACUUM, BATH, r#", "method": "both""#));
    let v = json_out(&run(&["gamma"], &cfg));
    for term in ["grav", "mixed", "velocity"] {
        assert!(v["discrepancy"][term].as_f64().unwrap() <= 1e-5, "{term}: {}", v["discrepancy"]);
    }
    assert_eq!(v["closed"]["method"], "closed_form");
    assert_eq!(v["quadrature"]["method"], "quadrature");
}

#[test]
fn lambda_zero_has_no_bath_terms() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "l.json", &config(VACUUM, r#"{"lambda": 0.0, "gamma": 0.2, "beta": 0.1}"#, ""));
    let v = json_out(&run(&["gamma"], &cfg));
    assert_eq!(v["closed"]["gamma_mixed"], 0.0);
    assert_eq!(v["closed"]["gamma_velocity"], 0.0);
    assert!(v["closed"]["gamma_grav"].as_f64().unwrap() > 0.0);
}

#[test]
fn squeezed_without_finite_tau_is_a_record() {
    let dir = TempDir::new().unwrap();
    let state = r#"{"variant": "squeezed", "cutoff": 1.0, "r": 1.0, "phi": 0.0, "state_cutoff": 2.0}"#;
    let cfg = write(&dir, "s.json", &config(state, BATH, r#", "tau_dec": true"#));
    let v = json_out(&run(&["gamma"], &cfg));
    assert!(v["tau_dec"]["value"].is_null());
    assert!(v["tau_dec"]["note"].as_str().unwrap().contains("no finite τ_dec"));
}

#[test]
fn tdec_reports_both_times() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "t.json", &config(VACUUM, r#"{"lambda": 1.0, "gamma": 1e6, "beta": 1e-3}"#, ""));
    let v = json_out(&run(&["tdec"], &cfg));
    assert!(v["relative_difference"].as_f64().unwrap() < 0.01);
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn two_point_sweep_csv() {
    let dir = TempDir::new().unwrap();
    let sweep = r#", "tau_dec": true, "sweep": {"param": "kappa", "min": 1e-4, "max": 1e-2, "count": 2, "scale": "log"}"#;
    let cfg = write(&dir, "s.json", &config(VACUUM, r#"{"lambda": 1.0, "kappa": 1e-3, "beta": 1.0}"#, sweep));
    let out = dir.path().join("sweep.csv");
    let o = bin().args(["sweep", "--out"]).arg(&out).arg("--config").arg(&cfg).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.ends_with('\n'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,gamma_velocity,gamma_grav,gamma_mixed,gamma_total,tau_dec");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("1.00000000000e-4,"));
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|x| x.parse::<f64>().is_ok()), "{l}");
    }
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["x"]["name"], "kappa");
    assert_eq!(meta["x"]["scale"], "log");
}

#[test]
fn sweep_parameter_must_match_state() {
    let dir = TempDir::new().unwrap();
    let sweep = r#", "sweep": {"param": "alpha", "min": 0.1, "max": 1.0, "count": 3}"#;
    let cfg = write(&dir, "s.json", &config(VACUUM, BATH, sweep));
    assert_eq!(run(&["sweep"], &cfg).status.code(), Some(2));
    let sweep = r#", "sweep": {"param": "t_f", "min": 1.0, "max": 0.5, "count": 3}"#;
    let cfg = write(&dir, "r.json", &config(VACUUM, BATH, sweep));
    assert_eq!(run(&["sweep"], &cfg).status.code(), Some(2));
}

#[test]
fn closed_forms_reject_full_integral_bath() {
    let dir = TempDir::new().unwrap();
    let bath = r#"{"lambda": 0.5, "gamma": 0.2, "beta": 0.1, "mode": "full_integral", "cutoff_int": 4.0}"#;
    let cfg = write(&dir, "f.json", &config(VACUUM, bath, ""));
    assert_eq!(run(&["gamma"], &cfg).status.code(), Some(2));
    let cfg = write(&dir, "q.json", &config(VACUUM, bath, r#", "method": "quadrature""#));
    let v = json_out(&run(&["gamma"], &cfg));
    assert!(v["quadrature"]["gamma_velocity"].as_f64().unwrap() > 0.0);
}

#[test]
fn si_config_reports_seconds() {
    let dir = TempDir::new().unwrap();
    let tp = gravidec_core::units::constants::planck_time();
    let text = format!(
        r#"{{
  "schema": "gravidec/1",
  "units": "si",
  "m0": {m0},
  "state": {{"variant": "vacuum", "cutoff": {cutoff}}},
  "bath": {{"lambda": 1.0, "gamma": 1e6, "beta": {beta}}},
  "path": {{"v": [{c}, 0, 0], "xi": [{lp}, 0, 0], "t_f": {tp}}},
  "tau_dec": true
}}"#,
        m0 = gravidec_core::units::constants::planck_mass(),
        cutoff = 1.0 / tp,
        beta = 1e-3 * tp,
        c = gravidec_core::units::constants::C,
        lp = gravidec_core::units::constants::planck_length(),
    );
    let cfg = write(&dir, "si.json", &text);
    let si = json_out(&run(&["gamma"], &cfg));
    let planck = write(
        &dir,
        "p.json",
        r#"{"schema": "gravidec/1", "m0": 1, "state": {"variant": "vacuum", "cutoff": 1},
            "bath": {"lambda": 1, "gamma": 1e6, "beta": 1e-3},
            "path": {"v": [1, 0, 0], "xi": [1, 0, 0], "t_f": 1}, "tau_dec": true}"#,
    );
    let pl = json_out(&run(&["gamma"], &planck));
    let g = |v: &Value| v["closed"]["gamma_total"].as_f64().unwrap();
    assert!((g(&si) / g(&pl) - 1.0).abs() < 1e-9);
    let t = |v: &Value| v["tau_dec"]["value"].as_f64().unwrap();
    assert!((t(&si) / (t(&pl) * tp) - 1.0).abs() < 1e-9);
}

#[test]
fn verify_quick_report() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    let o = bin().args(["verify", "--level", "quick", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 12);
    assert!(checks.iter().all(|c| c["passed"] == true));
    let info = v["informational"].as_array().unwrap();
    let cf = info.iter().find(|f| f["name"] == "decoherence.constant_factor").unwrap();
    assert!(!cf["values"].as_array().unwrap().is_empty());
    for suite in ["angular.", "special.f_vs", "special.f_th", "special.f_phase", "decoherence.closed_vs", "monte_carlo.", "decoherence.limit"] {
        assert!(checks.iter().any(|c| c["name"].as_str().unwrap().starts_with(suite)), "{suite}");
    }
}

#[test]
fn bad_thread_count_is_config_error() {
    let o = bin().args(["verify"]).env("GRAVIDEC_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn threads_do_not_change_sweeps() {
    let dir = TempDir::new().unwrap();
    let sweep = r#", "method": "quadrature", "sweep": {"param": "t_f", "min": 0.5, "max": 8.0, "count": 9}"#;
    let cfg = write(&dir, "s.json", &config(r#"{"variant": "thermal", "cutoff": 1.0, "beta_g": 2.0}"#, BATH, sweep));
    let a = bin().args(["sweep", "--config"]).arg(&cfg).env("GRAVIDEC_THREADS", "1").output().unwrap();
    let b = bin().args(["sweep", "--config"]).arg(&cfg).env("GRAVIDEC_THREADS", "4").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
