//! End-to-end smoke tests for the binary: the gen -> run -> verify round
//! trip and the documented exit codes.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hyperham"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn gen_run_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("instance.txt");
    let report = dir.path().join("report.json");
    let cycle = dir.path().join("cycle.txt");

    let status = bin()
        .args(["gen", "--family", "split_colour", "--n", "18", "--k", "3", "--seed", "1"])
        .arg("--out")
        .arg(&instance)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let status = bin()
        .args(["run", "--seed", "5"])
        .arg("--instance")
        .arg(&instance)
        .arg("--out")
        .arg(&report)
        .arg("--cycle-out")
        .arg(&cycle)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let status = bin()
        .arg("verify")
        .arg("--instance")
        .arg(&instance)
        .arg("--cycle")
        .arg(&cycle)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // stats over the single report
    let output = bin().arg("stats").arg(&report).output().unwrap();
    assert_eq!(output.status.code(), Some(0));
    let csv = String::from_utf8(output.stdout).unwrap();
    assert!(csv.lines().count() >= 2, "{csv}");
    assert!(csv.starts_with("file,seed,n,k,r"), "{csv}");
}

#[test]
fn verify_rejects_corrupted_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("instance.txt");
    let status = bin()
        .args(["gen", "--family", "complete", "--n", "9", "--k", "3", "--seed", "2"])
        .arg("--out")
        .arg(&instance)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    // a repeated vertex breaks the cycle
    let bad_cycle = dir.path().join("cycle.txt");
    write(&bad_cycle, "0 1 2 3 4 5 6 7 7\n");
    let status = bin()
        .arg("verify")
        .arg("--instance")
        .arg(&instance)
        .arg("--cycle")
        .arg(&bad_cycle)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));

    // unparseable files count as verification failures too
    let garbage = dir.path().join("garbage.txt");
    write(&garbage, "not a cycle\n");
    let status = bin()
        .arg("verify")
        .arg("--instance")
        .arg(&instance)
        .arg("--cycle")
        .arg(&garbage)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn verify_matching_files() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("instance.txt");
    bin()
        .args(["gen", "--family", "complete", "--n", "6", "--k", "3", "--seed", "3"])
        .arg("--out")
        .arg(&instance)
        .status()
        .unwrap();

    let matching = dir.path().join("matching.txt");
    write(&matching, "0 1 2\n3 4 5\n");
    let status = bin()
        .arg("verify")
        .arg("--instance")
        .arg(&instance)
        .arg("--matching")
        .arg(&matching)
        .arg("--perfect")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let overlapping = dir.path().join("overlap.txt");
    write(&overlapping, "0 1 2\n2 3 4\n");
    let status = bin()
        .arg("verify")
        .arg("--instance")
        .arg(&instance)
        .arg("--matching")
        .arg(&overlapping)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn unknown_flags_exit_with_usage_error() {
    let status = bin().args(["run", "--no-such-flag"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
    let status = bin().arg("nonsense").status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn run_dumps_intermediate_objects() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("instance.txt");
    bin()
        .args(["gen", "--family", "split_colour", "--n", "14", "--seed", "4"])
        .arg("--out")
        .arg(&instance)
        .status()
        .unwrap();

    let pfm = dir.path().join("pfm.csv");
    let gadgets = dir.path().join("gadgets.json");
    let bad = dir.path().join("bad.json");
    let paths = dir.path().join("paths.txt");
    let status = bin()
        .args(["run", "--seed", "6"])
        .arg("--instance")
        .arg(&instance)
        .arg("--out")
        .arg(dir.path().join("report.json"))
        .arg("--dump-pfm")
        .arg(&pfm)
        .arg("--dump-gadgets")
        .arg(&gadgets)
        .arg("--dump-bad-sets")
        .arg(&bad)
        .arg("--dump-paths")
        .arg(&paths)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let pfm_text = std::fs::read_to_string(&pfm).unwrap();
    assert!(pfm_text.lines().count() > 100, "one row per edge");
    let gadget_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&gadgets).unwrap()).unwrap();
    assert!(gadget_json.as_array().is_some());
    let bad_json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bad).unwrap()).unwrap();
    assert!(bad_json.get("bad").is_some());
    assert!(bad_json.get("clean").is_some());
    let paths_text = std::fs::read_to_string(&paths).unwrap();
    assert!(!paths_text.trim().is_empty());
    for line in paths_text.lines() {
        assert!(line.split_whitespace().all(|tok| tok.parse::<usize>().is_ok()));
    }
}
