use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tie_mzi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tie-mzi")).args(args).output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn probabilities_at_working_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = tie_mzi(&["--mode", "probabilities", "--output", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path(), "probabilities.csv");
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(lines.next().is_none());
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()];
    for ch in ["p_plus_up", "p_plus_down", "p_minus_up", "p_minus_down"] {
        assert!((col(ch) - 0.25).abs() < 1e-15);
    }
    assert_eq!(col("wrong_phase"), 0.5);
    assert!(!csv.contains('\r'));
}

#[test]
fn figures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = tie_mzi(&["--mode", "figures", "--output", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["fig1b.csv", "fig1c.csv", "fig2_n1.csv", "fig2_n3.csv", "fig2_ninf.csv", "fig2_areas.csv"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let fig1c = read(a.path(), "fig1c.csv");
    assert_eq!(fig1c.lines().count(), 101);
    // row for |δφ_A| = 0.1
    let row: Vec<f64> = fig1c.lines().nth(20).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 0.1);
    assert!((row[1] - 0.25 * (1.0 - 0.2f64.cos())).abs() < 1e-15);
    assert!((row[3] - 0.025).abs() < 1e-15);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# sweep over p\nmode = sweep\nsweep = p\ngrid_points = 5\np = 0.3\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = tie_mzi(&[
        "--config",
        cfg.to_str().unwrap(),
        "--grid-points",
        "3",
        "--output",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&out_dir, "sweep.csv");
    assert!(csv.starts_with("p,"));
    let ps: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ps, ["0", "0.5", "1"]);
}

#[test]
fn montecarlo_repeats_with_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let run = |dir: &Path, seed: &str| {
        let out = tie_mzi(&[
            "--mode",
            "montecarlo",
            "--n-trials",
            "20000",
            "--seed",
            seed,
            "--delta-phi-a",
            "0.1",
            "--output",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        read(dir, "montecarlo.csv")
    };
    let first = run(a.path(), "42");
    assert_eq!(first, run(b.path(), "42"));
    assert_ne!(first, run(c.path(), "43"));
    let row = first.lines().nth(1).unwrap();
    assert!(row.starts_with("42,20000,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();
    let missing = tie_mzi(&["--output", out_dir]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("mode missing"));

    assert_eq!(tie_mzi(&["--mode", "nope"]).status.code(), Some(1));
    assert_eq!(tie_mzi(&["--mode", "sweep", "--p", "1.5"]).status.code(), Some(1));
    assert_eq!(tie_mzi(&["--mode", "sweep", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(tie_mzi(&["--config", "/nonexistent/tie.cfg"]).status.code(), Some(1));
    assert_eq!(tie_mzi(&["--help"]).status.code(), Some(0));

    let file = dir.path().join("blocker");
    fs::write(&file, "").unwrap();
    let blocked = tie_mzi(&["--mode", "probabilities", "--output", file.join("sub").to_str().unwrap()]);
    assert_eq!(blocked.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&blocked.stderr).lines().count(), 1);
}
