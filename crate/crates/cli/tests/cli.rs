use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cavitate"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cavitate-test-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> (i32, String, String) {
    let Output { status, stdout, stderr } = bin().args(args).output().unwrap();
    (status.code().unwrap(), String::from_utf8(stdout).unwrap(), String::from_utf8(stderr).unwrap())
}

#[test]
fn check_reports_attainable_pair() {
    let (code, out, _) = run(&["check", "--config", config("pair.toml").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("sigma                 4.9999999999999989e-1"), "{out}");
    assert!(out.contains("holds"));
    assert!(out.contains("verdict               ATTAINABLE"));
}

#[test]
fn check_rejects_tight_pair_with_exit_3() {
    let (code, out, _) = run(&["check", "--config", config("tight_pair.toml").to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(out.contains("NOT ATTAINABLE"), "{out}");
}

#[test]
fn missing_and_malformed_configs_exit_2() {
    let (code, _, err) = run(&["check", "--config", "/nonexistent/cfg.toml"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error ["), "{err}");

    let dir = scratch("bad");
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "r0 = 1.0\n[[cavities]]\nax = \"x\"\n").unwrap();
    let (code, _, err) = run(&["check", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("error [config]"), "{err}");

    let (code, _, _) = run(&["run"]);
    assert_eq!(code, 2);
}

#[test]
fn dry_run_prints_geometry_and_writes_evolution() {
    let dir = scratch("dry");
    let cfg = config("centered.toml");
    let (code, out, _) = run(&["run", "--config", cfg.to_str().unwrap(), "--dry-run", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("lambda 2.0000000000000000e0"), "{out}");
    assert!(out.contains("radii [0.13148290817867014]"), "{out}");
    let csv = std::fs::read_to_string(dir.join("evolution.csv")).unwrap();
    assert!(csv.starts_with("t,cavity,zx,zy,radius,padded_radius\n"));
    assert!(!dir.join("checkpoints.csv").exists());
}

#[test]
fn coarse_run_fails_checks_with_exit_4() {
    let cfg = config("centered.toml");
    let (code, out, _) = run(&["run", "--config", cfg.to_str().unwrap(), "--steps", "16", "--grid", "20"]);
    assert_eq!(code, 4);
    assert!(out.lines().any(|l| l.starts_with("FAIL det_residual")), "{out}");
}

#[test]
fn runs_are_deterministic_across_thread_counts() {
    let cfg = config("centered.toml");
    let mut dirs = Vec::new();
    for k in 0..2 {
        let dir = scratch(&format!("det{k}"));
        let threads = ["1", "3"][k];
        let args = [
            "--threads",
            threads,
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--steps",
            "32",
            "--grid",
            "20",
            "--out",
            dir.to_str().unwrap(),
        ];
        let (code, _, _) = run(&args);
        assert!(code == 0 || code == 4);
        dirs.push(dir);
    }
    for name in ["evolution.csv", "checkpoints.csv", "energy.csv", "image.csv", "checks.csv"] {
        let a = std::fs::read(dirs[0].join(name)).unwrap();
        let b = std::fs::read(dirs[1].join(name)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{name} differs");
    }
}

#[test]
fn estimates_pass_and_write_csv() {
    let dir = scratch("est");
    let (code, out, _) = run(&["estimates", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains("FAIL"));
    let csv = std::fs::read_to_string(dir.join("estimates.csv")).unwrap();
    assert!(csv.starts_with("check,member,d,r0,n,budget,alpha,lhs,bound,constant\n"));
    assert!(csv.lines().count() > 10);
}

#[test]
fn dump_field_writes_samples() {
    let dir = scratch("field");
    let cfg = config("centered.toml");
    let args = [
        "dump-field",
        "--config",
        cfg.to_str().unwrap(),
        "--t",
        "1.5",
        "--n-r",
        "4",
        "--n-theta",
        "8",
        "--out",
        dir.to_str().unwrap(),
    ];
    let (code, out, _) = run(&args);
    assert_eq!(code, 0);
    assert!(out.contains("samples 8 "), "{out}");
    let csv = std::fs::read_to_string(dir.join("field.csv")).unwrap();
    assert!(csv.starts_with("x,y,vx,vy,div,jacobian_norm\n"));
    // polar points inside the cavity are skipped
    assert_eq!(csv.lines().count(), 1 + 8);
}
