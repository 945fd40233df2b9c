//! End-to-end CLI tests against the compiled binary.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subdc"))
}

#[test]
fn unknown_subcommand_is_usage_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_zero_datasets_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "bench",
            "--family",
            "exp1-modified",
            "--n-datasets",
            "0",
            "--seed",
            "1",
            "--out",
        ])
        .arg(dir.path().join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn synth_writes_pair_file_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("ds.txt");
    let out = bin()
        .args([
            "synth",
            "exp2-modified",
            "--seed",
            "5",
            "--support",
            "6",
            "--n-samples",
            "250",
            "--out",
        ])
        .arg(&pair)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&pair).unwrap();
    assert_eq!(text.lines().count(), 250);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ds.txt.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["family"], "exp2-modified");
    assert_eq!(meta["truth"], "x->y");
    assert_eq!(meta["n"], 250);
}

#[test]
fn infer_prints_machine_readable_summary() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("ds.txt");
    assert!(bin()
        .args([
            "synth",
            "exp1-modified",
            "--seed",
            "6",
            "--support",
            "12",
            "--n-samples",
            "800",
            "--out",
        ])
        .arg(&pair)
        .status()
        .unwrap()
        .success());
    let out = bin()
        .args(["infer"])
        .arg(&pair)
        .args(["--seed", "42", "--m", "40"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    let v: serde_json::Value = serde_json::from_str(stdout.trim()).unwrap();
    for key in ["decision", "s_f", "s_b", "p_star", "p_f", "p_b", "relative_gap"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    assert!(["x->y", "y->x", "tie"].contains(&v["decision"].as_str().unwrap()));
}

#[test]
fn infer_missing_seed_is_usage_error() {
    let out = bin().args(["infer", "whatever.txt"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mcurve_row_count_matches_m_values() {
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("ds.txt");
    assert!(bin()
        .args([
            "synth",
            "exp2-modified",
            "--seed",
            "7",
            "--support",
            "6",
            "--n-samples",
            "400",
            "--out",
        ])
        .arg(&pair)
        .status()
        .unwrap()
        .success());
    let csv_path = dir.path().join("curve.csv");
    let out = bin()
        .args(["mcurve"])
        .arg(&pair)
        .args(["--seed", "3", "--q", "0.5", "--m-values", "5,10,20", "--reps", "3", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3);
    assert!(csv.starts_with("m,forward_mean,forward_std,backward_mean,backward_std"));
}

#[test]
fn pairs_scan_emits_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    // two synthetic pair files act as the scan corpus
    for (name, seed) in [("pairA.txt", 21u64), ("pairB.txt", 22u64)] {
        assert!(bin()
            .args([
                "synth",
                "exp1-modified",
                "--seed",
                &seed.to_string(),
                "--support",
                "8",
                "--n-samples",
                "400",
                "--out",
            ])
            .arg(dir.path().join(name))
            .status()
            .unwrap()
            .success());
        // drop the sidecars so only pair files remain
        std::fs::remove_file(dir.path().join(format!("{name}.meta.json"))).unwrap();
    }
    let csv_path = dir.path().join("scan.csv");
    let out = bin()
        .args(["pairs"])
        .arg(dir.path())
        .args(["--k", "0,1", "--seed", "9", "--m", "20", "--out"])
        .arg(&csv_path)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    // header + 2 pairs x 2 resolutions
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.lines().nth(1).unwrap().starts_with("pairA,0,8,8,true,"));
}

#[test]
fn runtime_failure_exits_one() {
    let out = bin()
        .args(["infer", "/nonexistent/file.txt", "--seed", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}
