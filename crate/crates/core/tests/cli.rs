use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use cross_intersect::construct::thm12_pair;
use cross_intersect::format::{pair_from_json, to_json};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cross-intersect"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

fn write_file(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn verify_accepts_a_maximal_pair() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_file(dir.path(), "b2.json", &to_json(&thm12_pair(4, 2).unwrap()));
    let o = run(&["verify", &file, "--json"]);
    assert_eq!(code(&o), 0, "{}", text(&o.stderr));
    let v: Value = serde_json::from_str(&text(&o.stdout)).unwrap();
    assert_eq!(v["product"], 16);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let classification = checks.iter().find(|c| c["name"] == "classification").unwrap();
    assert_eq!(classification["detail"], "k=2");
}

#[test]
fn verify_flags_a_mutated_pair() {
    let dir = tempfile::tempdir().unwrap();
    // {1,2} moved into A breaks |A ∩ {1,2}| = 1
    let body = concat!(
        r#"{"n":4,"c":1,"d":2,"A":{"n":4,"sets":[[1,2],[1,4],[2,3],[2,4]]},"#,
        r#""B":{"n":4,"sets":[[],[1,2],[3,4],[1,2,3,4]]}}"#
    );
    let file = write_file(dir.path(), "bad.json", body);
    let o = run(&["verify", &file]);
    assert_eq!(code(&o), 1);
    assert!(text(&o.stdout).contains("FAIL     cross_intersection"));
}

#[test]
fn verify_rejects_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let full = to_json(&thm12_pair(4, 1).unwrap());
    let file = write_file(dir.path(), "cut.json", &full[..full.len() / 2]);
    assert_eq!(code(&run(&["verify", &file])), 2);
    let o = run_stdin(&["verify", "-"], r#"{"n":3,"c":1,"d":2,"A":{"n":3,"sets":[[4]]},"B":{"n":3,"sets":[[]]}}"#);
    assert_eq!(code(&o), 2);
    assert!(text(&o.stderr).contains("outside the ground set"));
    assert_eq!(code(&run(&["verify", "/nonexistent/pair.json"])), 2);
}

#[test]
fn verify_reads_stdin_and_overrides_fraction() {
    let pair = to_json(&thm12_pair(2, 1).unwrap());
    assert_eq!(code(&run_stdin(&["verify", "-"], &pair)), 0);
    // the same sets are not cross-intersecting at 1/1
    let o = run_stdin(&["verify", "-", "--c", "1", "--d", "1"], &pair);
    assert_eq!(code(&o), 1);
}

#[test]
fn decompose_finds_the_couples() {
    let o = run_stdin(
        &["decompose", "-", "--json"],
        r#"{"n":4,"sets":[[],[1,2],[3,4],[1,2,3,4]]}"#,
    );
    assert_eq!(code(&o), 0, "{}", text(&o.stderr));
    let v: Value = serde_json::from_str(&text(&o.stdout)).unwrap();
    assert_eq!(v["atoms"], serde_json::json!([[1, 2], [3, 4]]));
    assert_eq!(v["half_sizes"], serde_json::json!([1, 1]));
    assert_eq!(v["n0"], 0);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["product_audit"], 16);
}

#[test]
fn decompose_rejects_non_linear_and_empty_families() {
    let o = run_stdin(&["decompose", "-"], r#"{"n":4,"sets":[[],[1,2],[3,4]]}"#);
    assert_eq!(code(&o), 1);
    assert!(text(&o.stderr).contains("LINEARITY"));
    let o = run_stdin(&["decompose", "-"], r#"{"n":4,"sets":[]}"#);
    assert_eq!(code(&o), 2);
}

#[test]
fn search_sweep_reports_every_fraction() {
    let o = run(&["search", "--n", "3", "--sweep", "--json"]);
    assert_eq!(code(&o), 0, "{}", text(&o.stderr));
    let v: Value = serde_json::from_str(&text(&o.stdout)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let fracs: Vec<(u64, u64)> = rows
        .iter()
        .map(|r| (r["c"].as_u64().unwrap(), r["d"].as_u64().unwrap()))
        .collect();
    assert_eq!(fracs, [(0, 1), (1, 3), (1, 2), (2, 3), (1, 1)]);
    assert!(rows.iter().all(|r| r["status"] == "ok" && r["max_product"] == 8));
}

#[test]
fn search_check_thm12_text() {
    let o = run(&["search", "--n", "5", "--c", "1", "--d", "2", "--check-thm12"]);
    assert_eq!(code(&o), 0);
    let out = text(&o.stdout);
    assert!(out.starts_with("n = 5, c/d = 1/2: max |A||B| = 32 (= 2^5)"));
    for k in 0..=2 {
        assert!(out.contains(&format!("k={k}")));
    }
}

#[test]
fn construct_output_round_trips_through_verify() {
    let mut cases: Vec<Vec<String>> = Vec::new();
    for n in 1..=10usize {
        for k in 0..=n / 2 {
            cases.push(vec!["thm12".into(), "--n".into(), n.to_string(), "--k".into(), k.to_string()]);
        }
        for k in [0, n / 2, n] {
            for (c, d) in [("0", "1"), ("1", "1")] {
                cases.push(
                    ["trivial", "--n", &n.to_string(), "--k", &k.to_string(), "--c", c, "--d", d]
                        .map(String::from)
                        .to_vec(),
                );
            }
        }
        for k in 2..=5usize {
            if 2 * k <= n {
                for kappa in [2 * k - 1, 2 * k] {
                    cases.push(
                        ["thm13a", "--n", &n.to_string(), "--k", &k.to_string(), "--kappa", &kappa.to_string()]
                            .map(String::from)
                            .to_vec(),
                    );
                }
            }
            let l = if k % 2 == 0 { k / 2 } else { (k + 1) / 2 };
            if 2 * l <= n {
                for tau in 0..=k.min(n - k) {
                    cases.push(
                        ["thm13b", "--n", &n.to_string(), "--k", &k.to_string(), "--tau", &tau.to_string()]
                            .map(String::from)
                            .to_vec(),
                    );
                }
            }
        }
    }
    assert!(cases.len() > 100);
    for args in &cases {
        let mut full = vec!["construct"];
        full.extend(args.iter().map(String::as_str));
        let built = run(&full);
        assert_eq!(code(&built), 0, "{args:?}: {}", text(&built.stderr));
        let json = text(&built.stdout);
        assert!(pair_from_json(&json).unwrap().is_cross_intersecting());
        let checked = run_stdin(&["verify", "-"], &json);
        assert_eq!(code(&checked), 0, "{args:?}: {}", text(&checked.stdout));
    }
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["construct", "thm12", "--n", "0"])), 2);
    assert_eq!(code(&run(&["search", "--n", "4", "--c", "2", "--d", "4"])), 2);
    assert_eq!(code(&run(&["--version"])), 0);
}
