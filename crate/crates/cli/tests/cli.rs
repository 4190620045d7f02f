use std::io::Write;
use std::process::{Command, Output, Stdio};

fn hsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsd")).args(args).output().unwrap()
}

fn hsd_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hsd"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn feasible_prints_block_count() {
    let o = hsd(&["feasible", "8", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "feasible, expected 150 blocks");
    assert_eq!(hsd(&["feasible", "9", "1"]).status.code(), Some(1));
}

#[test]
fn catalog_entry_round_trips_through_stdio() {
    let text = stdout(&hsd(&["catalog", "get", "Ex2.1"]));
    let o = hsd_stdin(&["verify", "-"], &text);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS: 22 points, 105 blocks"));

    let design = stdout(&hsd_stdin(&["develop", "-"], &text));
    let tripled = hsd_stdin(&["multiply", "-", "3"], &design);
    assert_eq!(tripled.status.code(), Some(0));
    assert!(stdout(&hsd_stdin(&["verify", "-"], &stdout(&tripled))).contains("945 blocks"));
}

#[test]
fn broken_design_fails_verification() {
    let mut design = stdout(&hsd(&["catalog", "get", "Ex2.2", "--develop"]));
    let last = design.trim_end().rfind('\n').unwrap();
    design.truncate(last + 1);
    let o = hsd_stdin(&["verify", "-"], &design);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn prove_exit_codes() {
    let o = hsd(&["prove", "3^12 4^1", "--materialize"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("R-FILL-A"));
    assert_eq!(hsd(&["prove", "3^9 1^1"]).status.code(), Some(1));
    assert_eq!(hsd(&["prove", "3^29 16^1"]).status.code(), Some(2));
}

#[test]
fn search_none_is_exit_one() {
    for t in ["1^5", "3^3 1^1"] {
        let o = hsd(&["search", "direct", "--type", t, "--budget", "10"]);
        assert_eq!(o.status.code(), Some(1), "{t}");
        assert_eq!(stdout(&o).trim(), "NONE");
    }
}

#[test]
fn fill_a_from_files() {
    let dir = std::env::temp_dir().join(format!("hsd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let outer = dir.join("outer.txt");
    let inner = dir.join("inner.txt");
    std::fs::write(&outer, stdout(&hsd(&["catalog", "get", "C1/9^4 1^1"]))).unwrap();
    std::fs::write(&inner, stdout(&hsd(&["catalog", "get", "derived/3^4"]))).unwrap();
    let o = hsd(&[
        "fill", "a", outer.to_str().unwrap(), "--inner", inner.to_str().unwrap(), "--s", "3", "--v", "3", "--w", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = hsd_stdin(&["verify", "-"], &stdout(&o));
    assert!(stdout(&v).starts_with("PASS: 40 points, 369 blocks"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn quasigroup_table_has_a_row_per_point() {
    let text = stdout(&hsd(&["catalog", "get", "Ex2.1"]));
    let o = hsd_stdin(&["convert", "quasigroup", "-"], &text);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2 + 22);
}

#[test]
fn usage_and_io_errors_are_exit_three() {
    assert_eq!(hsd(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(hsd(&["verify", "/nonexistent/design.txt"]).status.code(), Some(3));
    assert_eq!(hsd_stdin(&["verify", "-"], "not a design\n").status.code(), Some(3));
}

#[test]
fn table_csv() {
    let dir = std::env::temp_dir().join(format!("hsd-table-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("t.csv");
    let o = hsd(&["table", "--nmax", "8", "--umax", "4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with("8,2,EXISTS,R-CAT,")));
    assert!(text.lines().any(|l| l.starts_with("6,1,INFEASIBLE,R-FEAS,")));
    std::fs::remove_dir_all(dir).ok();
}
