use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn heatlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn mix_writes_curve_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatlab(&[
        "mix",
        "--N",
        "5",
        "--n-max",
        "200",
        "--output",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("mix.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,tv_gap,eps_n,delta_n");
    assert_eq!(lines.len(), 201);
    assert!(report(&out)["passed"].as_bool().unwrap());
}

#[test]
fn mix_reports_threshold() {
    let out = heatlab(&["mix", "--N", "5", "--n-max", "10", "--eps", "0.001"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        report(&out)["results"]["steps_to_equilibrium_general"],
        2229
    );
}

#[test]
fn heat_comparison_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = heatlab(&[
        "heat", "--g", "cos", "--eta", "64", "--nu", "256", "--t", "1", "--output", path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cmp: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("comparison.json")).unwrap())
            .unwrap();
    assert!(cmp["sup_error"].as_f64().unwrap() < 5e-3);
    assert_eq!(cmp["stable"], true);
    assert_eq!(cmp["eta"], 64);
    let snaps = fs::read_to_string(dir.path().join("heat.csv")).unwrap();
    assert_eq!(snaps.lines().next().unwrap(), "t,j,x_j,re,im");
    assert_eq!(snaps.lines().count(), 1 + 2 * 128);
}

#[test]
fn martingale_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = heatlab(&[
        "martingale",
        "--eta",
        "2",
        "--nu",
        "1",
        "--initial",
        "1,0",
        "--output",
        path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dump: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("martingale.json")).unwrap())
            .unwrap();
    let row0: Vec<&str> = dump["rows"][0]["cells"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["value_num"].as_str().unwrap())
        .collect();
    assert_eq!(row0, ["1", "0", "0", "0", "1", "1"]);
    let assoc = fs::read_to_string(dir.path().join("association.csv")).unwrap();
    assert_eq!(assoc.lines().next().unwrap(), "level,k,kind,state");
}

#[test]
fn martingale_accepts_fractions() {
    let out = heatlab(&[
        "martingale",
        "--eta",
        "3",
        "--nu",
        "2",
        "--initial",
        "1/2,1/3,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn remaining_subcommands_pass() {
    for args in [
        &["couple", "--N", "3", "--trials", "20000", "--seed", "5"][..],
        &["calculus", "--eta", "16", "--trials", "20"],
        &["fourier", "--eta", "64", "--g", "cos+halfcos2"],
        &["equilibrium"],
        &["equivalence", "--g", "random", "--seed", "2"],
        &["presets"],
    ] {
        let out = heatlab(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn presets_are_listed() {
    let out = heatlab(&["presets"]);
    let names = report(&out)["results"]["presets"].clone();
    assert_eq!(
        names,
        serde_json::json!(["cos", "cos+halfcos2", "expcos", "delta", "uniform"])
    );
}

#[test]
fn exit_codes() {
    assert_eq!(heatlab(&["mix", "--N", "1"]).status.code(), Some(2));
    assert_eq!(
        heatlab(&["mix", "--N", "5", "--colour", "red"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        heatlab(&["heat", "--eta", "64", "--nu", "100"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        heatlab(&["equivalence", "--eta", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        heatlab(&[
            "martingale",
            "--eta",
            "3",
            "--nu",
            "1",
            "--initial",
            "1,-1,0"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(heatlab(&["couple", "--N", "41"]).status.code(), Some(3));
    assert_eq!(
        heatlab(&["martingale", "--eta", "2", "--nu", "20"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(heatlab(&["equilibrium", "--t", "1"]).status.code(), Some(1));
}

#[test]
fn budget_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_heatlab"))
        .args(["martingale", "--eta", "2", "--nu", "3"])
        .env("HEATLAB_BUDGET_CELLS", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let args = [
        "couple", "--N", "5", "--trials", "5000", "--seed", "11", "--output", path,
    ];
    let first = heatlab(&args);
    let files = read_dir_sorted(dir.path());
    let second = heatlab(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(files, read_dir_sorted(dir.path()));
    assert_eq!(files.len(), 2);
}

#[test]
fn format_selects_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    heatlab(&[
        "fourier", "--eta", "16", "--format", "csv", "--output", path,
    ]);
    let names: Vec<String> = read_dir_sorted(dir.path())
        .into_iter()
        .map(|(n, _)| n)
        .collect();
    assert_eq!(names, ["fourier.csv"]);
}
