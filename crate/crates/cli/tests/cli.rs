use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sepprob"))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("sepprob-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn estimate_writes_trace_and_summary() {
    let trace = tmp("trace.csv");
    let summary = tmp("summary.json");
    let out = bin()
        .args([
            "estimate",
            "--measure",
            "hs",
            "--points",
            "200000",
            "--block",
            "100000",
            "--trace",
        ])
        .arg(&trace)
        .arg("--output")
        .arg(&summary)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let est = json["sep_estimate"].as_f64().unwrap();
    assert!(est > 0.0 && est < 1.0);
    assert_eq!(json["points"].as_u64().unwrap(), 200_000);

    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "block,points,sep_estimate,abs_sep_estimate,discards,ess"
    );
    assert_eq!(lines.count(), 2);

    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(written["sep_estimate"], json["sep_estimate"]);

    std::fs::remove_file(trace).ok();
    std::fs::remove_file(summary).ok();
}

#[test]
fn unknown_measure_exits_2() {
    let out = bin()
        .args(["estimate", "--measure", "frobnitz", "--points", "2000000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn too_few_points_exits_2() {
    let out = bin()
        .args(["estimate", "--measure", "bures", "--points", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_policy_exits_2() {
    let out = bin()
        .args([
            "estimate",
            "--measure",
            "hs",
            "--points",
            "2000000",
            "--policy",
            "clamp:oops",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let out = bin()
        .args([
            "estimate",
            "--measure",
            "hs",
            "--points",
            "100000",
            "--block",
            "100000",
            "--trace",
            "/no-such-directory/trace.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_single_quantity_passes() {
    let out = bin()
        .args(["verify", "--quantity", "d2-alt-denominator"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("d2-alt-denominator"));
    assert!(text.contains("pass"));
}

#[test]
fn verify_reports_infinite_denominator() {
    let out = bin()
        .args(["verify", "--quantity", "d4-sqrtx-denominator"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("infinite"));
}

#[test]
fn verify_hs_abs_row() {
    let out = bin()
        .args(["verify", "--quantity", "hs-abs", "--csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("hs-abs"));
    assert!(text.contains("3.6582630"));
}

#[test]
fn verify_unknown_quantity_exits_2() {
    let out = bin()
        .args(["verify", "--quantity", "no-such-thing"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn abs_sep_divergent_kind() {
    let out = bin()
        .args(["abs-sep", "--measure", "geometric"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "infinite");
}

#[test]
fn bloch_bins_prints_bin_table() {
    let out = bin()
        .args([
            "bloch-bins",
            "--measure",
            "hs",
            "--points",
            "100000",
            "--block",
            "100000",
            "--bins",
            "5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "bin,radius_lo,radius_hi,count,sep_estimate"
    );
    assert_eq!(lines.count(), 5);
}

#[test]
fn worker_env_override_keeps_results_identical() {
    let run = |workers: &str| {
        let out = bin()
            .args([
                "estimate",
                "--measure",
                "hs",
                "--points",
                "100000",
                "--block",
                "100000",
            ])
            .env("SEPPROB_WORKERS", workers)
            .output()
            .unwrap();
        assert!(out.status.success());
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        json["sep_estimate"].as_f64().unwrap()
    };
    assert_eq!(run("1").to_bits(), run("2").to_bits());
}
