use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qcldpc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcldpc"))
        .args(args)
        .current_dir(dir)
        .env_remove("QCLDPC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const E1: &str = "3 5 17\n0 0 0 0 0\n0 1 2 3 4\n0 11 5 9 16\n";

#[test]
fn construct_writes_matrix_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let o = qcldpc(
        &["construct", "--L", "5", "--d", "1", "-o", "e1.txt"],
        dir.path(),
    );
    assert!(o.status.success());
    assert_eq!(
        std::fs::read_to_string(dir.path().join("e1.txt")).unwrap(),
        E1
    );
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("e1.txt.json")).unwrap())
            .unwrap();
    assert_eq!(side["p_min"], 17);
    assert_eq!(side["case"], "d1");
    assert_eq!(side["bound"]["arithmetic_row"], 15);
}

#[test]
fn construct_case_iii_and_too_small_p() {
    let dir = TempDir::new().unwrap();
    let o = qcldpc(
        &["--format", "json", "construct", "--L", "7", "--d", "2"],
        dir.path(),
    );
    let side: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(side["case"], "d2-case-iii");
    assert_eq!(side["p_min"], 36);

    let o = qcldpc(&["construct", "--L", "5", "--p", "16"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PTooSmall"));
}

#[test]
fn girth_reports_both_methods() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("e1.txt"), E1).unwrap();
    std::fs::write(
        dir.path().join("zero.txt"),
        "3 4 9\n0 0 0 0\n0 0 0 0\n0 0 0 0\n",
    )
    .unwrap();
    let o = qcldpc(&["girth", "e1.txt"], dir.path());
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("girth 8"));
    assert!(out.contains("exponent-level  8") && out.contains("lifted-level    8"));

    let o = qcldpc(&["girth", "zero.txt"], dir.path());
    assert_eq!(stdout(&o).lines().next(), Some("girth 4"));

    let o = qcldpc(
        &["--format", "json", "girth", "e1.txt", "--p", "13"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exponent"], v["lifted"]);
}

#[test]
fn bound_reports_and_table() {
    let dir = TempDir::new().unwrap();
    let out = stdout(&qcldpc(&["bound", "--L", "9"], dir.path()));
    assert!(out
        .lines()
        .any(|l| l.starts_with("lemma2") && l.ends_with(" 45")));
    let out = stdout(&qcldpc(&["bound", "--L", "2"], dir.path()));
    assert!(out
        .lines()
        .any(|l| l.starts_with("classical") && l.ends_with(" 3")));

    let out = stdout(&qcldpc(&["bound", "--table1", "4..12"], dir.path()));
    let rows: Vec<Vec<u64>> = out
        .lines()
        .map(|l| {
            l.split('|')
                .skip(1)
                .filter_map(|c| c.trim().parse().ok())
                .collect()
        })
        .collect();
    assert_eq!(rows[1], [10, 15, 21, 28, 36, 45, 55, 66, 78]);
    assert_eq!(rows[2], [11, 17, 23, 31, 39, 49, 59, 71, 83]);

    let csv = stdout(&qcldpc(
        &["--format", "csv", "bound", "--table1", "4..5"],
        dir.path(),
    ));
    assert_eq!(
        csv,
        "l,lemma,construction,prior_construction\n4,10,11,12\n5,15,17,19\n"
    );

    std::fs::write(dir.path().join("a.txt"), "0 1 2 3 4 5 6 7 8").unwrap();
    let o = qcldpc(
        &["--format", "json", "bound", "--L", "9", "--a-row", "a.txt"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["best"], 45);
}

#[test]
fn export_writes_alist() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("e1.txt"), E1).unwrap();
    let o = qcldpc(
        &["--format", "json", "export", "e1.txt", "-o", "h.alist"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        (v["n"].as_u64(), v["m"].as_u64(), v["rank"].as_u64()),
        (Some(85), Some(51), Some(49))
    );
    let alist = std::fs::read_to_string(dir.path().join("h.alist")).unwrap();
    assert!(alist.starts_with("85 51\n3 5\n"));
}

#[test]
fn search_verdicts() {
    let dir = TempDir::new().unwrap();
    let o = qcldpc(&["search", "--L", "4", "--p", "7"], dir.path());
    assert_eq!(stdout(&o).trim(), "none exists");
    let o = qcldpc(
        &["--format", "json", "search", "--L", "4", "--p", "11"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["exists"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
    let o = qcldpc(&["search", "--L", "6", "--p", "30"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("SearchSpaceTooLarge"));
}

#[test]
fn simulate_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = [
        "--format",
        "csv",
        "simulate",
        "--L",
        "5",
        "--baseline-seed",
        "3",
        "--snr",
        "2,3",
        "--max-frame-errors",
        "20",
        "--seed",
        "11",
    ];
    let a = qcldpc(&args, dir.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let mut seq = vec!["--workers", "1"];
    seq.extend(args);
    let b = qcldpc(&seq, dir.path());
    assert_eq!(a.stdout, b.stdout);
    let csv = stdout(&a);
    assert!(
        csv.starts_with("code_id,snr_db,frames,bit_errors,frame_errors,ber,fer,mean_iters,seed\n")
    );
    assert_eq!(csv.lines().count(), 5);
    assert!(String::from_utf8_lossy(&a.stderr).contains("\"master_seed\":11"));

    let o = Command::new(env!("CARGO_BIN_EXE_qcldpc"))
        .args([
            "--format",
            "json",
            "simulate",
            "--L",
            "4",
            "--snr",
            "3",
            "--max-frame-errors",
            "5",
        ])
        .env("QCLDPC_SEED", "42")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["config"]["master_seed"], 42);
}

#[test]
fn usage_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(qcldpc(&["construct"], dir.path()).status.code(), Some(1));
    assert_eq!(
        qcldpc(&["bound", "--table1", "9..4"], dir.path())
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qcldpc(&["girth", "missing.txt"], dir.path()).status.code(),
        Some(1)
    );
    std::fs::write(dir.path().join("bad.txt"), "3 2 5\n0 0\n").unwrap();
    assert_eq!(
        qcldpc(&["girth", "bad.txt"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(qcldpc(&["--help"], dir.path()).status.code(), Some(0));
}
