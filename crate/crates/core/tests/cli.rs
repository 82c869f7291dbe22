use std::path::Path;
use std::process::{Command, Output};

fn rmove(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmove"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field(row: &str, name: &str) -> String {
    let header: Vec<&str> = rmove::experiment::CSV_HEADER.split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    row.split(',').nth(idx).unwrap().to_string()
}

fn gen_gap(dir: &Path, r: usize) -> String {
    let path = dir.join(format!("gap{r}.inst"));
    let p = path.to_str().unwrap().to_string();
    let out = rmove(&["gen", "gap", "--r", &r.to_string(), "--eps", "1", "--tail", "6", "-o", &p]);
    assert!(out.status.success());
    p
}

#[test]
fn gap_exact_and_lp() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_gap(dir.path(), 3);
    let out = rmove(&["solve", &p, "--alg", "exact", "--no-timing"]);
    assert!(out.status.success());
    let row = stdout(&out);
    assert_eq!(field(row.trim(), "cut"), "1");
    assert_eq!(field(row.trim(), "time_ms"), "");
    assert_eq!(field(row.trim(), "seed"), "");

    let out = rmove(&["solve", &p, "--alg", "lp", "--header"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], rmove::experiment::CSV_HEADER);
    let lp: f64 = field(lines[1], "cut").parse().unwrap();
    assert!((lp - 0.25).abs() < 1e-6);
    assert!(!field(lines[1], "time_ms").is_empty());
}

#[test]
fn two_part_rejects_three_partitions() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.inst");
    let p = p.to_str().unwrap();
    let gen = rmove(&[
        "gen", "sbm", "--n", "12", "--k", "3", "--pin", "0.5", "--pout", "0.1", "--seed", "1",
        "--r", "2", "-o", p,
    ]);
    assert!(gen.status.success());
    let out = rmove(&["solve", p, "--alg", "two-part"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn exact_capacity_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_gap(dir.path(), 3);
    let out = rmove(&["solve", &p, "--alg", "exact", "--work-bound", "10"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn usage_errors() {
    let out = rmove(&["gen", "gap", "--eps", "1", "--tail", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rmove(&["sweep", "--family", "gap", "--r", "1", "--algs", ""]);
    assert_eq!(out.status.code(), Some(2));
    let out = rmove(&["sweep", "--family", "gap", "--r", "1", "--algs", "simplex"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rmove(&["gen", "sbm", "--n", "10", "--k", "3", "--pin", "0.5", "--pout", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_fails() {
    let out = rmove(&["solve", "/nonexistent/x.inst", "--alg", "exact"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sweep_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let out = rmove(&[
            "sweep", "--family", "sbm", "--n", "12", "--k", "3", "--graphs", "2", "--r", "1..2",
            "--algs", "lp-round,bicriteria,greedy-best", "--seeds", "0,1,2", "--no-timing", "-o",
            p,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    // 2 graphs x 2 budgets x (3 + 3 + 1) rows, plus the header
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 7);
    for row in text.lines().skip(1) {
        let moves: usize = field(row, "moves").parse().unwrap();
        let bound: usize = field(row, "bound").parse().unwrap();
        assert!(moves <= bound, "{row}");
    }
}

#[test]
fn lp_dump_forms() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_gap(dir.path(), 2);
    for form in ["rmove", "ckr", "rmove2"] {
        let out = rmove(&["lp-dump", &p, "--form", form]);
        assert!(out.status.success());
        assert!(stdout(&out).starts_with("min"));
    }
    let out = rmove(&["lp-dump", &p, "--form", "lagrangian", "--alpha", "0.5"]);
    assert!(out.status.success());
}

#[test]
fn gen_output_round_trips() {
    let out = rmove(&["gen", "gap", "--r", "2", "--eps", "0.5", "--tail", "1"]);
    let text = stdout(&out);
    let inst = rmove::io::parse_instance(&text).unwrap();
    assert_eq!(inst, rmove::instances::gen_integrality_gap(2, 0.5, 1).unwrap());
}
