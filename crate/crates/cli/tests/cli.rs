use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn aggsem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aggsem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str], file: &str) -> Output {
    let path = example(file);
    let mut all = args.to_vec();
    all.push(path.to_str().unwrap());
    aggsem(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

const ALL: &str = "gl,triv,gz,ult,lpst,bnd,mr,flp,ultimate";
const AGGREGATE_CAPABLE: &str = "triv,gz,ult,lpst,bnd,mr,flp,ultimate";

/// (file, semantics, expected stable models) for every shipped example.
const DOCUMENTED: &[(&str, &str, &[&[&str]])] = &[
    ("sum_three_rules.lp", "triv,gz,ult,lpst,bnd,ultimate", &[&[]]),
    ("sum_three_rules_plain.lp", ALL, &[&[]]),
    ("tautology.lp", "ultimate", &[&["p"]]),
    ("tautology.lp", "triv,gz,ult,lpst,bnd", &[]),
    ("nonconvex.lp", "mr,flp", &[&["p", "q", "s"]]),
    ("nonconvex.lp", "triv,gz,ult,lpst,bnd,ultimate", &[]),
    ("nonconvex_plain.lp", ALL, &[]),
    ("even_loop.lp", ALL, &[&["p"], &["q"]]),
    ("self_loop.lp", ALL, &[&[]]),
    ("fact.lp", ALL, &[&["p"]]),
    ("bound_gap.lp", AGGREGATE_CAPABLE, &[&[]]),
    ("straddle.lp", AGGREGATE_CAPABLE, &[&["h"]]),
];

#[test]
fn documented_models_per_semantics() {
    for (file, sems, expected) in DOCUMENTED {
        let expected: Vec<Vec<&str>> = expected.iter().map(|m| m.to_vec()).collect();
        for sem in sems.split(',') {
            let o = run(&["models", "--json", "--semantics", sem], file);
            assert!(o.status.success(), "{file} {sem}: {}", stderr(&o));
            let doc = json_of(&o);
            assert_eq!(doc["models"], json!(expected), "{file} under {sem}");
        }
    }
}

#[test]
fn models_text_for_the_three_rule_program() {
    let o = run(&["models", "--semantics", "ult"], "sum_three_rules.lp");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "{}\n");
}

#[test]
fn default_semantics_is_ult() {
    let o = run(&["models", "--json"], "tautology.lp");
    let doc = json_of(&o);
    assert_eq!(doc["semantics"], json!(["ult"]));
    assert_eq!(doc["models"], json!([]));
}

#[test]
fn multiple_semantics_report_per_semantics() {
    let o = run(&["models", "--json", "--semantics", "ultimate,ult"], "tautology.lp");
    let doc = json_of(&o);
    assert_eq!(doc["command"], "models");
    assert_eq!(doc["semantics"], json!(["ultimate", "ult"]));
    assert_eq!(doc["report"]["stable_models"]["ultimate"], json!([["p"]]));
    assert_eq!(doc["report"]["stable_models"]["ult"], json!([]));
}

#[test]
fn check_exit_codes() {
    let ok = run(&["check", "--semantics", "mr", "--model", "p,q,s"], "nonconvex.lp");
    assert_eq!(ok.status.code(), Some(0));
    let no = run(&["check", "--semantics", "ult", "--model", "p,q,s"], "nonconvex.lp");
    assert_eq!(no.status.code(), Some(1));
    let empty = run(&["check", "--semantics", "ult", "--model", ""], "sum_three_rules.lp");
    assert_eq!(empty.status.code(), Some(0));
}

#[test]
fn check_json() {
    let o = run(&["check", "--json", "--semantics", "mr,ult", "--model", "p,q,s"], "nonconvex.lp");
    let doc = json_of(&o);
    assert_eq!(doc["report"]["model"], json!(["p", "q", "s"]));
    assert_eq!(doc["report"]["stable"], json!({"mr": true, "ult": false}));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_shows_table_and_precision() {
    let o = run(&["compare", "--semantics", "ultimate,ult"], "tautology.lp");
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("ultimate   {p}"), "{text}");
    assert!(text.contains("ult        none"), "{text}");
    assert!(text.contains("precision: ultimate >=p ult"), "{text}");
}

#[test]
fn compare_json_precision_orders() {
    for (file, a, b, order) in [
        ("bound_gap.lp", "triv", "bnd", "<=p"),
        ("straddle.lp", "bnd", "ult", "<=p"),
        ("nonconvex.lp", "mr", "flp", ">=p"),
        ("fact.lp", "ult", "lpst", "=p"),
    ] {
        let sems = format!("{a},{b}");
        let doc = json_of(&run(&["compare", "--json", "--semantics", &sems], file));
        assert_eq!(doc["report"]["precision"], json!([{"a": a, "b": b, "order": order}]), "{file}");
    }
}

#[test]
fn fixpoints() {
    let doc = json_of(&run(&["kk", "--json", "--semantics", "gl"], "even_loop.lp"));
    assert_eq!(doc["kk"], json!({"lower": [], "upper": ["p", "q"]}));
    let doc = json_of(&run(&["wf", "--json", "--semantics", "gl"], "self_loop.lp"));
    assert_eq!(doc["wf"], json!({"lower": [], "upper": []}));
    let doc = json_of(&run(&["wf", "--json", "--semantics", "bnd"], "straddle.lp"));
    assert_eq!(doc["wf"], json!({"lower": ["h"], "upper": ["h"]}));
    let text = stdout(&run(&["wf", "--semantics", "ult"], "fact.lp"));
    assert_eq!(text, "lower: {p}\nupper: {p}\niterations: 1\n");
}

#[test]
fn capability_errors_exit_3() {
    for sem in ["mr", "flp", "gz", "lpst", "ultimate"] {
        let o = run(&["wf", "--semantics", sem], "nonconvex.lp");
        assert_eq!(o.status.code(), Some(3), "wf under {sem}");
        assert!(!stderr(&o).is_empty());
    }
    let o = run(&["models", "--semantics", "gl"], "nonconvex.lp");
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["models", "--max-atoms", "2"], "nonconvex.lp");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(&["models", "--semantics", "nope"], "fact.lp").status.code(), Some(2));
    assert_eq!(aggsem(&["models"]).status.code(), Some(2));
    assert_eq!(aggsem(&["bogus"]).status.code(), Some(2));
    assert_eq!(aggsem(&["models", "/nonexistent/file.lp"]).status.code(), Some(2));
    assert_eq!(aggsem(&["verify"]).status.code(), Some(2));

    let mut child = Command::new(env!("CARGO_BIN_EXE_aggsem"))
        .args(["parse", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"p :- .\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("-:1:6:"), "{}", stderr(&o));
}

#[test]
fn parse_round_trips() {
    for (file, _, _) in DOCUMENTED {
        let printed = stdout(&run(&["parse"], file));
        let mut child = Command::new(env!("CARGO_BIN_EXE_aggsem"))
            .args(["parse", "-"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(printed.as_bytes()).unwrap();
        let again = child.wait_with_output().unwrap();
        assert!(again.status.success(), "{file}");
        assert_eq!(stdout(&again), printed, "{file}");
    }
}

#[test]
fn analyze_reports() {
    let doc = json_of(&run(&["analyze", "--json", "--semantics", "mr,ult"], "nonconvex.lp"));
    let report = &doc["report"];
    assert_eq!(report["convexity"][0]["convex"], json!(false));
    assert_eq!(report["convexity"][1]["convex"], json!(true));
    assert_eq!(report["well_behaved"]["mr"]["holds"], json!(false));
    assert_eq!(report["well_behaved"]["ult"]["holds"], json!(true));
    let cex = report["well_behaved"]["mr"]["counterexample"].as_str().unwrap();
    assert!(cex.starts_with("({}, {p, q, s}) <=p ({}, {q})"), "{cex}");
    assert_eq!(report["precision"], json!([{"a": "mr", "b": "ult", "order": ">=p"}]));
}

#[test]
fn verify_examples_clean() {
    for (file, _, _) in DOCUMENTED {
        let sems = if file.contains("plain") || !std::fs::read_to_string(example(file)).unwrap().contains('{') {
            ALL
        } else {
            "triv,ult,lpst,bnd,mr,flp,ultimate"
        };
        let o = run(&["verify", "--json", "--semantics", sems], file);
        assert!(o.status.success(), "{file}: {}", stdout(&o));
        assert_eq!(json_of(&o)["report"]["mismatches"], json!([]), "{file}");
    }
}

#[test]
fn verify_generated_is_seeded() {
    let args = ["verify", "--semantics", "ult,bnd", "--seed", "9", "--count", "20"];
    let a = aggsem(&args);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&aggsem(&args)));
}

#[test]
fn reruns_are_byte_identical() {
    for (file, _, _) in DOCUMENTED {
        for cmd in ["models", "compare", "analyze"] {
            let args = [cmd, "--json", "--semantics", "triv,ult,mr"];
            let a = run(&args, file);
            let b = run(&args, file);
            assert_eq!(a.stdout, b.stdout, "{cmd} {file}");
            assert_eq!(a.status.code(), b.status.code());
        }
    }
}
