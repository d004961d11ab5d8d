use std::process::Command;

fn thinset(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_thinset")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn count_csv_to_stdout() {
    let (code, out, _) = thinset(&["count", "--poly", "Y^2 - X1*X2", "--B", "2:4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "B,observed,bound,ratio,runtime_ms");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,"));
    assert!(lines[1].ends_with(",0"));
}

#[test]
fn json_file_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let (code, _, _) = thinset(&[
            "twisted", "--poly", "Y^2 - X1^3*X2", "--e", "2", "--B", "2,3", "--format", "json",
            "--out", path.to_str().unwrap(), "--threads", "2",
        ]);
        assert_eq!(code, 0);
        runs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    let x = &runs[0];
    let v: serde_json::Value = serde_json::from_slice(x).unwrap();
    assert_eq!(v["config"]["mode"], "twisted");
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(thinset(&["count", "--B", "4"]).0, 3);
    assert_eq!(thinset(&["count", "--poly", "Y^2 - X1*X2", "--B", "8,4"]).0, 3);
    assert_eq!(thinset(&["frobnicate"]).0, 3);
    assert_eq!(thinset(&["--help"]).0, 0);
    // hypothesis: top part splits
    let (code, _, err) = thinset(&["count", "--poly", "Y^2 - X1^2", "--B", "4"]);
    assert_eq!(code, 1);
    assert!(err.contains("hypothesis"));
    // budget on every row
    let (code, out, _) = thinset(&["count", "--poly", "Y^2 - X1*X2", "--B", "50,60", "--budget-nodes", "10"]);
    assert_eq!(code, 2);
    assert_eq!(out.lines().nth(1), Some("50,,,,0"));
}

#[test]
fn monomials_and_modp() {
    let (code, out, _) = thinset(&["monomials", "--weights", "2,1,1", "--B", "4,8"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("4,9,"));
    let (code, out, _) = thinset(&["modp", "--poly", "Y^2 - X1*X2", "--B", "5"]);
    assert_eq!(code, 0);
    assert!(out.lines().nth(1).unwrap().starts_with("5,25,"));
}
