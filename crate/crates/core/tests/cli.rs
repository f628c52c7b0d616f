mod common;

use common::*;
use rpes::tooling::cli;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(
        std::iter::once("rpes").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(name: &str) -> String {
    fixture_path(name).to_str().unwrap().to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("rpes-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_reports_and_sets_status() {
    assert_eq!(
        run(&["validate", &path("e3")]),
        (0, "valid\n".into(), String::new())
    );
    let bad = scratch(
        "bad.rpes",
        "rpes bad\nevents a b\ncause a b\nconflict a b\n",
    );
    let (code, out, _) = run(&["validate", &bad]);
    assert_eq!(code, 1);
    assert!(!out.is_empty() && out != "valid\n");
    let broken = scratch("broken.rpes", "rpes broken\nevents a\ncause a\n");
    let (code, _, err) = run(&["validate", &broken]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn classify_e4() {
    let (code, out, _) = run(&["classify", &path("e4")]);
    assert_eq!(code, 0);
    assert!(
        out.starts_with("cause-respecting: true\ncausal: true\n"),
        "{out}"
    );
}

#[test]
fn configs_forward_only() {
    let (_, all, _) = run(&["configs", &path("e1")]);
    assert_eq!(all, "{}\n{a}\n{a,b}\n{b}\n");
    let (_, fwd, _) = run(&["configs", &path("e1"), "--forward-only"]);
    assert_eq!(fwd, "{}\n{a}\n{a,b}\n");
}

#[test]
fn steps_at_empty_configuration_of_e0() {
    let (code, out, _) = run(&["steps", &path("e0"), "--at", "{}"]);
    assert_eq!(code, 0);
    let steps: Vec<&str> = out.lines().map(|l| l.split(' ').next().unwrap()).collect();
    let mut sorted = steps.clone();
    sorted.sort();
    assert_eq!(sorted, ["a,c|", "a|", "b|", "c|"]);
    assert_eq!(run(&["steps", &path("e0"), "--at", "{a,b}"]).0, 2);
    assert_eq!(run(&["steps", &path("e0"), "--at", "{z}"]).0, 2);
}

#[test]
fn transition_systems_and_dot() {
    let (code, out, _) = run(&["tc", &path("e2")]);
    assert_eq!(code, 0);
    assert!(out.contains("{a,b}"));
    let dot = std::env::temp_dir().join(format!("rpes-te-{}.dot", std::process::id()));
    let (code, _, _) = run(&["te", &path("e2"), "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph \"te_e2\" {"));
    assert_eq!(text.matches(" -> ").count(), 6);
}

#[test]
fn residual_and_trace() {
    let (code, out, _) = run(&["residual", &path("e0"), "b;d"]);
    assert_eq!(
        (code, out.as_str()),
        (0, "rpes e0\nevents e\nreversible\ninit\n")
    );
    let (code, out, _) = run(&["trace", &path("e0"), "b;d;|b;c;e;|c"]);
    assert_eq!(code, 0);
    assert_eq!(out, "{}\n{b}\n{b,d}\n{d}\n{c,d}\n{c,d,e}\n{d,e}\n");
    let (code, out, _) = run(&["trace", &path("e0"), "b;d;e"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("not a trace"));
    assert_eq!(run(&["residual", &path("e0"), "b;d;e"]).0, 1);
    assert_eq!(run(&["trace", &path("e0"), "q"]).0, 2);
}

#[test]
fn bisim_and_iso() {
    let (code, out, _) = run(&["bisim", &path("e2")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("bisimilar: true\n"));
    let (code, out, _) = run(&["bisim", &path("e1"), &path("e2")]);
    assert_eq!(code, 1);
    assert!(out.contains("distinguishing: {a:1,b:1}"), "{out}");
    assert_eq!(run(&["iso", &path("e2")]).0, 1);
    assert_eq!(
        run(&["iso", &path("e2"), &path("e2"), "--system", "te"]).0,
        0
    );
    assert_eq!(
        run(&["bisim", &path("e2"), &path("e2"), "--system", "xx"]).0,
        2
    );
}

#[test]
fn audit_statuses() {
    let (code, out, _) = run(&["audit", &path("e2"), "--max-len", "3"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["audit", &path("e0"), "--max-len", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("OBSERVED"));
}

#[test]
fn gen_is_reproducible_and_parseable() {
    let args = [
        "gen",
        "--events",
        "5",
        "--mode",
        "cause-respecting",
        "--seed",
        "7",
    ];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(run(&args).1, first);
    let doc = rpes::tooling::parse_rpes(&first).unwrap();
    assert_eq!(doc.name, "gen_7");
    assert!(rpes::kernel::is_cause_respecting(&doc.rpes));
    assert_eq!(run(&["gen", "--events", "3", "--causality", "1.5"]).0, 2);
    assert_eq!(run(&["gen", "--events", "70"]).0, 2);
}

#[test]
fn usage_errors() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    assert_eq!(run(&["configs"]).0, 2);
    assert_eq!(run(&["configs", "/nonexistent/file.rpes"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("audit"));
}
