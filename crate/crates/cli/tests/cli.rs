use std::path::Path;
use std::process::{Command, Output};

use ata_core::experiment::{run_experiment, ExperimentConfig};
use ata_core::WindowSchedule;

fn ata(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ata"))
        .args(args)
        .output()
        .expect("spawn ata")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let j = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

#[test]
fn average_scalar_stream() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    std::fs::write(&input, "1\n2\n3\n").unwrap();
    let out = dir.path().join("out.csv");
    let res = ata(&[
        "average",
        input.to_str().unwrap(),
        "--k",
        "2",
        "--averager",
        "awa",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let (header, rows) = read_csv(&out);
    assert_eq!(header, ["t", "k_t", "gamma0", "gamma1", "x0", "n_eff"]);
    let est = column(&header, &rows, "x0");
    for (a, b) in est.iter().zip([1.0, 1.5, 2.5]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn average_constant_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    std::fs::write(&input, "0.5,-2\n".repeat(40)).unwrap();
    for averager in ["exp", "awa", "awa3", "true", "raw"] {
        let out = dir.path().join(format!("{averager}.csv"));
        let res = ata(&[
            "average",
            input.to_str().unwrap(),
            "--c",
            "0.5",
            "--averager",
            averager,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            res.status.success(),
            "{averager}: {}",
            String::from_utf8_lossy(&res.stderr)
        );
        let (header, rows) = read_csv(&out);
        assert_eq!(rows.len(), 40);
        assert!(column(&header, &rows, "x0").iter().all(|&v| v == 0.5));
        assert!(column(&header, &rows, "x1").iter().all(|&v| v == -2.0));
    }
}

#[test]
fn average_empty_input_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    std::fs::write(&input, "").unwrap();
    let res = ata(&[
        "average",
        input.to_str().unwrap(),
        "--c",
        "0.25",
        "--averager",
        "exp",
    ]);
    assert!(res.status.success());
    assert_eq!(
        String::from_utf8(res.stdout).unwrap(),
        "t,k_t,gamma,n_eff\n"
    );
}

#[test]
fn average_parse_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    std::fs::write(&input, "1 2\n3 4\n5 oops\n").unwrap();
    let res = ata(&["average", input.to_str().unwrap(), "--k", "3"]);
    assert!(!res.status.success());
    let stderr = String::from_utf8(res.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1);
    assert!(stderr.contains("line 3"), "{stderr}");
}

#[test]
fn validation_failures_exit_nonzero() {
    for args in [
        vec!["average", "-", "--k", "3", "--c", "0.5"],
        vec!["trace", "--c", "1.5"],
        vec!["trace", "--k", "0"],
        vec!["trace", "--k", "4", "--averager", "median"],
        vec!["trace", "--k", "4", "--steps", "10001"],
        vec![
            "experiment",
            "--k",
            "10",
            "--averagers",
            "raw",
            "--runs",
            "1",
            "--steps",
            "5",
        ],
    ] {
        let res = ata(&args);
        assert!(!res.status.success(), "{args:?}");
        assert!(!res.stderr.is_empty());
    }
}

#[test]
fn trace_audit_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    let res = ata(&[
        "trace",
        "--c",
        "0.5",
        "--averager",
        "exp",
        "--steps",
        "300",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    let (header, rows) = read_csv(&out);
    let t = column(&header, &rows, "t");
    let w = column(&header, &rows, "weight");
    let sum = column(&header, &rows, "sum_alpha");
    let sum_sq = column(&header, &rows, "sum_alpha_sq");
    let inv_k = column(&header, &rows, "inv_k_t");
    let active = column(&header, &rows, "contract_active");
    assert_eq!(rows.len(), 300 * 301 / 2);
    assert!(sum.iter().all(|s| (s - 1.0).abs() <= 1e-12));
    let step2: Vec<f64> = t
        .iter()
        .zip(&w)
        .filter(|(t, _)| **t == 2.0)
        .map(|(_, w)| *w)
        .collect();
    assert_eq!(step2, vec![0.0, 1.0]);
    for i in 0..rows.len() {
        if active[i] == 1.0 {
            assert!((sum_sq[i] - inv_k[i]).abs() <= 1e-9);
        }
    }
}

#[test]
fn experiment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let out = dir.path().join(sub);
        let res = ata(&[
            "experiment",
            "--c",
            "0.5",
            "--runs",
            "4",
            "--steps",
            "80",
            "--seed",
            "7",
            "--per-run",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(
            res.status.success(),
            "{}",
            String::from_utf8_lossy(&res.stderr)
        );
        (
            std::fs::read(out.join("proportional_c0.5.csv")).unwrap(),
            std::fs::read(out.join("proportional_c0.5_runs.csv")).unwrap(),
        )
    };
    let a = run("a");
    let b = run("b");
    assert_eq!(a, b);
    let (header, rows) = read_csv(&dir.path().join("a/proportional_c0.5.csv"));
    assert_eq!(header, ["step", "raw", "exp", "awa", "awa3", "true"]);
    assert_eq!(rows.len(), 80);
    let (_, run_rows) = read_csv(&dir.path().join("a/proportional_c0.5_runs.csv"));
    assert_eq!(run_rows.len(), 4 * 80);
}

#[test]
fn default_experiment_reproduction() {
    let dir = tempfile::tempdir().unwrap();
    let res = ata(&["experiment", "--out", dir.path().to_str().unwrap()]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    for name in [
        "constant_k10.csv",
        "constant_k100.csv",
        "proportional_c0.25.csv",
        "proportional_c0.5.csv",
    ] {
        let (_, rows) = read_csv(&dir.path().join(name));
        assert_eq!(rows.len(), 1000, "{name}");
    }

    // Parsed values match the in-memory trajectories bit for bit.
    let (header, rows) = read_csv(&dir.path().join("proportional_c0.25.csv"));
    let set = run_experiment(&ExperimentConfig::new(WindowSchedule::Proportional(0.25))).unwrap();
    for (name, curve) in set.names.iter().zip(&set.mean) {
        assert_eq!(&column(&header, &rows, name), curve, "{name}");
    }

    let last = |name: &str| *column(&header, &rows, name).last().unwrap();
    let truth = last("true");
    for name in ["exp", "awa", "awa3"] {
        assert!((last(name) / truth - 1.0).abs() <= 0.10, "{name}");
    }
}
