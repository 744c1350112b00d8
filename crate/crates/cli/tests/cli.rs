use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pps-relax"));
    cmd.env_remove("PPS_RELAX_OUT_DIR");
    cmd
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

const SIGMA_11: &str = r#"[
  [[-2.5e-6, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [-2.5e-6, 0.0], [0.0, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [0.0, 0.0], [-2.5e-6, 0.0], [0.0, 0.0]],
  [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [7.5e-6, 0.0]]
]"#;

#[test]
fn simulate_writes_requested_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig2_alpha_basis11.toml");
    let out = run(&["simulate", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let pops = fs::read_to_string(dir.path().join("populations.csv")).unwrap();
    assert!(pops.starts_with("t_ms,p0,p1,p2,p3,valid\n"));
    assert_eq!(pops.lines().count(), 1 + 1001);
    let alpha = fs::read_to_string(dir.path().join("alpha_curve.csv")).unwrap();
    assert!(alpha.starts_with("t_ms,alpha,alpha_over_epsilon\n"));
}

#[test]
fn simulate_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = configs().join("fig4_cat_concurrence.toml");
    for d in [&a, &b] {
        assert_eq!(code(&run(&["simulate", cfg.to_str().unwrap(), "--out", d.path().to_str().unwrap()])), 0);
    }
    for name in ["concurrence.csv", "alpha_curve.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig3_alpha_basis00.toml");
    let out = bin()
        .args(["simulate", cfg.to_str().unwrap()])
        .env("PPS_RELAX_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("alpha_curve.csv").exists());
}

#[test]
fn json_trajectory_feeds_back_into_normalize() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cfg = configs().join("fig2_alpha_basis11.toml");
    assert_eq!(code(&run(&["simulate", cfg.to_str().unwrap(), "--format", "json", "--out", d])), 0);
    let series = dir.path().join("trajectory.json");
    let again = dir.path().join("again");
    let out = run(&["normalize", series.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // Without the preparation the α route is 1/N + σ/α, identical here.
    let direct = dir.path().join("direct");
    run(&["simulate", cfg.to_str().unwrap(), "--out", direct.to_str().unwrap()]);
    let a = fs::read_to_string(again.join("alpha_curve.csv")).unwrap();
    let b = fs::read_to_string(direct.join("alpha_curve.csv")).unwrap();
    assert_eq!(a, b);

    let out = run(&["validate", series.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1 + 1001);
}

#[test]
fn normalize_with_flags() {
    let dir = tempfile::tempdir().unwrap();
    let series = write(dir.path(), "s.json", &format!(r#"{{"samples": [{{"t_ms": 0.0, "sigma": {SIGMA_11}}}]}}"#));
    let out_dir = dir.path().join("o");
    let out = run(&[
        "normalize",
        &series,
        "--epsilon",
        "1e-5",
        "--spin",
        "3/2",
        "--normalization",
        "fixed_initial",
        "--outputs",
        "populations,concurrence",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let pops = fs::read_to_string(out_dir.join("populations.csv")).unwrap();
    let row: Vec<f64> = pops.lines().nth(1).unwrap().split(',').take(5).map(|x| x.parse().unwrap()).collect();
    assert!((row[4] - 1.0).abs() < 1e-12);
    let conc = fs::read_to_string(out_dir.join("concurrence.csv")).unwrap();
    assert_eq!(conc.lines().nth(1).unwrap(), "0.0,0.0");
}

#[test]
fn normalize_needs_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let series = write(dir.path(), "s.json", &format!(r#"{{"samples": [{{"t_ms": 0.0, "sigma": {SIGMA_11}}}]}}"#));
    let out = run(&["normalize", &series, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--epsilon"));
}

#[test]
fn wigner_from_config_at_one_time() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig5_cat_wigner.toml");
    let out = run(&["wigner", cfg.to_str().unwrap(), "--at", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let w = fs::read_to_string(dir.path().join("wigner.csv")).unwrap();
    assert!(w.starts_with("t_ms,q,p,w\n"));
    assert_eq!(w.lines().count(), 1 + 64);
    let m = fs::read_to_string(dir.path().join("momentum_marginal.csv")).unwrap();
    assert_eq!(m.lines().count(), 1 + 8);
}

#[test]
fn wigner_from_series() {
    let dir = tempfile::tempdir().unwrap();
    let series = write(
        dir.path(),
        "s.json",
        &format!(r#"{{"epsilon": 1e-5, "spin": "3/2", "samples": [{{"t_ms": 2.5, "sigma": {SIGMA_11}}}]}}"#),
    );
    let out = run(&["wigner", &series, "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("trajectory.json").exists());
}

#[test]
fn validate_rejects_nonphysical_record() {
    let dir = tempfile::tempdir().unwrap();
    let bad = SIGMA_11.replace("7.5e-6", "0.1");
    let series = write(dir.path(), "bad.json", &format!(r#"{{"epsilon": 1e-5, "samples": [{{"t_ms": 0.0, "sigma": {bad}}}]}}"#));
    let out = run(&["validate", &series]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("record 0"));
}

#[test]
fn validate_rejects_decreasing_times() {
    let dir = tempfile::tempdir().unwrap();
    let series = write(
        dir.path(),
        "t.json",
        &format!(r#"{{"epsilon": 1e-5, "samples": [{{"t_ms": 1.0, "sigma": {SIGMA_11}}}, {{"t_ms": 0.5, "sigma": {SIGMA_11}}}]}}"#),
    );
    assert_eq!(code(&run(&["validate", &series])), 1);
}

#[test]
fn parse_and_io_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = write(dir.path(), "g.json", "{ not json");
    assert_eq!(code(&run(&["validate", &garbage])), 2);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["validate", missing.to_str().unwrap()])), 2);
    let bad_record = write(dir.path(), "r.json", r#"{"epsilon": 1e-5, "samples": [{"t_ms": 0.0, "sigma": [[1.0]]}]}"#);
    let out = run(&["validate", &bad_record]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("record 0"));
    let toml = write(dir.path(), "c.toml", "initial_state = [");
    assert_eq!(code(&run(&["simulate", &toml])), 2);
    assert_eq!(code(&run(&["simulate"])), 2);
    assert_eq!(code(&run(&["simulate", "x.toml", "--format", "xml"])), 2);
}

#[test]
fn invalid_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "initial_state = \"cat\"\nnormalization = \"alpha\"\nt_start = 0.0\nt_end = 10.0\nt_step = 0.0\noutputs = []\n",
    );
    let out = run(&["simulate", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("t_step"));
}
