use std::path::PathBuf;
use std::process::Command;

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

/// Runs the binary; returns exit code and stdout.
fn haem(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_haem")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap() + &String::from_utf8(out.stderr).unwrap())
}

fn path(file: &str) -> String {
    corpus(file).to_string_lossy().into_owned()
}

#[test]
fn corpus_files_check() {
    for f in ["cuts.haem", "induction.haem", "em1.haem"] {
        let (code, out) = haem(&["check", &path(f)]);
        assert_eq!(code, 0, "{f}: {out}");
        assert!(!out.contains("error"));
    }
}

#[test]
fn eigenvariable_violation_reports_span() {
    let (code, out) = haem(&["check", &path("invalid/eigenvariable.haem")]);
    assert_eq!(code, 1);
    assert!(out.contains("bad_eigen: error at 3:3"), "{out}");
    assert!(out.contains("eigenvariable"), "{out}");
}

#[test]
fn malformed_file_is_a_parse_failure() {
    let (code, out) = haem(&["check", &path("invalid/malformed.haem")]);
    assert_eq!(code, 2);
    assert!(out.contains("1:1"), "{out}");
    let (code, _) = haem(&["check", "/nonexistent/file.haem"]);
    assert_eq!(code, 2);
}

#[test]
fn extract_prints_witnesses() {
    let (code, out) = haem(&["extract", &path("cuts.haem"), "exists_zero"]);
    assert_eq!((code, out.trim()), (0, "exists_zero: witness 0"));
    let (code, out) = haem(&["extract", &path("em1.haem"), "em1_counterexample"]);
    assert_eq!((code, out.trim()), (0, "em1_counterexample: witness 2"));
    let (code, out) = haem(&["extract", &path("cuts.haem"), "atomic_goal"]);
    assert_eq!((code, out.trim()), (0, "atomic_goal: atomic"));
}

#[test]
fn zero_fuel_blocks() {
    let (code, out) = haem(&["extract", &path("em1.haem"), "em1_counterexample", "--fuel", "0"]);
    assert_eq!(code, 3);
    assert_eq!(out.trim(), "em1_counterexample: blocked fuel-exhausted");
}

#[test]
fn unknown_proof_name() {
    let (code, out) = haem(&["extract", &path("cuts.haem"), "missing"]);
    assert_eq!(code, 2);
    assert!(out.contains("missing"));
}

#[test]
fn trace_of_induction_at_two() {
    let (code, out) = haem(&["trace", &path("induction.haem"), "ind_two"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains(" IndRed ")).count(), 2, "{out}");
    assert!(out.lines().any(|l| l == "normal"));
}

#[test]
fn trace_of_normal_proof_is_empty() {
    let (code, out) = haem(&["trace", &path("cuts.haem"), "exists_zero"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "# exists_zero");
    assert_eq!(lines[1], "normal");
    assert!(lines[2..].iter().all(|l| l.starts_with("branch ")));
}

#[test]
fn em_perm_precedes_the_cut_it_enables() {
    let (_, out) = haem(&["trace", &path("em1.haem"), "em_perm_then_witness"]);
    let pos = |k: &str| out.lines().position(|l| l.contains(k)).unwrap_or_else(|| panic!("{k} missing in {out}"));
    assert!(pos("EmPerm(ForallE)") < pos("Witness"));
    assert!(pos("Witness") < pos("PropForall"));
}

#[test]
fn output_is_deterministic() {
    let args = ["trace", &path("em1.haem")];
    let args: Vec<&str> = args.iter().map(|s| s.as_ref()).collect();
    assert_eq!(haem(&args), haem(&args));
}

#[test]
fn json_mirrors_text() {
    let (code, out) = haem(&["extract", &path("em1.haem"), "ind_feeds_em", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["result"], "witness");
    assert_eq!(v["value"], 2);
    assert_eq!(v["instance"], "(= (sg 2) 1)");

    let (_, out) = haem(&["trace", &path("induction.haem"), "ind_two", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["steps"][0]["kind"], "IndRed");
    assert_eq!(v["status"], "normal");
}

#[test]
fn trace_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("trace.txt");
    let (code, stdout) = haem(&[
        "normalize",
        &path("induction.haem"),
        "forall_ind_three",
        "--trace-out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.starts_with("forall_ind_three: normal after"));
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written.lines().next(), Some("# forall_ind_three"));
    assert_eq!(written.lines().filter(|l| l.contains(" IndRed ")).count(), 3);
}
