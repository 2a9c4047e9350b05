use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curved-koszul"))
}

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(format!("{name}.json"))
}

#[test]
fn facthom_report_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s4.json");
    let status = bin()
        .args(["facthom", "--model"])
        .arg(model("s4"))
        .args(["--n", "2", "--D", "1", "--max-length", "4", "--output"])
        .arg(&out)
        .env("CURVED_KOSZUL_THREADS", "2")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["report"]["total"], 1);
    // Only the report itself remains in the directory.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn ill_posed_grading_exits_with_a_witness() {
    let out = bin().args(["facthom", "--model"]).arg(model("s5")).args(["--n", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["violation"]["kind"], "differential_square_nonzero");
}

#[test]
fn malformed_model_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dimension\": 4, \"basis\": [").unwrap();
    let out = bin().args(["facthom", "--model"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed model"));
}

#[test]
fn operad_strata_csv() {
    let out = bin().args(["verify-operad", "--operad", "pois_n", "--n", "3", "--max-arity", "3", "--format", "csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let dims: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(dims, ["1", "2", "6"]);
}
