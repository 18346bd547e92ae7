//! Algebra-file parsing and the command-line contract: exit codes, error
//! messages, determinism.

use std::path::PathBuf;

use fdim_cli::corpus::random_presentation;
use fdim_cli::specfile::spec_of_presentation;
use fdim_cli::{parse_spec, render_spec, run, EXIT_ERROR, EXIT_OK, EXIT_REFUTED};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

/// Writes `text` to a fresh file under the target temp dir.
fn alg_file(name: &str, text: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(format!("{name}.alg"));
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn fdim(args: &[&str]) -> fdim_cli::Outcome {
    let argv: Vec<&str> = std::iter::once("fdim").chain(args.iter().copied()).collect();
    run(&argv)
}

#[test]
fn parse_errors_carry_position() {
    let e = parse_spec("[field]\nQ\n\n[vertices]\n1 2\n\n[arrows]\na: 1 => 2\n").unwrap_err();
    assert_eq!((e.line, e.column), (8, 3));
    assert!(e.message.contains("->"), "{e}");

    let e = parse_spec("[field]\nQ\n[vertices]\n1\n[bogus]\n").unwrap_err();
    assert_eq!(e.line, 5);
}

#[test]
fn undeclared_arrow_is_named() {
    let e = parse_spec("[field]\nQ\n[vertices]\n1 2\n[arrows]\na: 1 -> 2\n[relations]\na c\n").unwrap_err();
    assert_eq!(e.line, 8);
    assert!(e.message.contains("`c`"), "{e}");
}

#[test]
fn duplicate_names_are_rejected() {
    let text = "[field]\nQ\n[vertices]\n1 2\n[arrows]\na: 1 -> 2\n\
                [module M]\ndims: 1 1\na: [1]\n[module M]\ndims: 1 0\na: [0]\n";
    let e = parse_spec(text).unwrap_err();
    assert!(e.message.contains("duplicate"), "{e}");
}

#[test]
fn fixtures_round_trip() {
    for name in ["r32.alg", "a2.alg"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let spec = parse_spec(&text).unwrap();
        let rendered = render_spec(&spec);
        assert_eq!(parse_spec(&rendered).unwrap(), spec, "{name}");
        assert_eq!(render_spec(&parse_spec(&rendered).unwrap()), rendered, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn generated_algebra_files_round_trip(seed in any::<u64>()) {
        let spec = spec_of_presentation(&random_presentation(seed, None));
        let rendered = render_spec(&spec);
        prop_assert_eq!(parse_spec(&rendered).unwrap(), spec);
    }
}

#[test]
fn one_vertex_no_arrows() {
    let path = alg_file("point", "[field]\nF5\n\n[vertices]\nx\n");
    let out = fdim(&["--alg", &path, "--json", "info"]);
    assert_eq!(out.exit, EXIT_OK, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["result"]["dim"], 1, "{}", out.stdout);
    let text = fdim(&["--alg", &path, "info"]).stdout;
    assert!(text.starts_with("algebra over F5: 1 vertex, dim 1, local"), "{text}");
}

#[test]
fn exit_codes() {
    let r32 = fixture("r32.alg");
    let a2 = fixture("a2.alg");
    assert_eq!(fdim(&["--alg", &r32, "pd", "S1"]).exit, EXIT_OK);
    // S1 has pd 1 over A but restricts to a module of infinite pd over e1Ae1,
    // so S1 is not in P_e^∞ and the transfer hypothesis is refuted.
    assert_eq!(fdim(&["--alg", &r32, "pd-transfer", "1", "S1"]).exit, EXIT_REFUTED);
    assert_eq!(fdim(&["--alg", &r32, "pd-transfer", "2", "AeA"]).exit, EXIT_OK);

    for args in [
        vec!["--alg", a2.as_str(), "--cutoff", "100", "pd", "M"],
        vec!["--alg", a2.as_str(), "--field", "F4", "pd", "M"],
        vec!["--alg", a2.as_str(), "pd", "NoSuchModule"],
        vec!["--alg", a2.as_str(), "tor", "M", "M", "2"],
        vec!["--alg", "/nonexistent/x.alg", "info"],
        vec!["pd", "M"],
        vec!["--alg", a2.as_str(), "frobnicate"],
    ] {
        let out = fdim(&args);
        assert_eq!(out.exit, EXIT_ERROR, "{args:?}: {}", out.stdout);
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn error_messages() {
    let a2 = fixture("a2.alg");
    let cutoff = fdim(&["--alg", &a2, "--cutoff", "100", "pd", "M"]).stderr;
    assert!(cutoff.contains("100") && cutoff.contains("64"), "{cutoff}");
    let side = fdim(&["--alg", &a2, "tor", "M", "M", "2"]).stderr;
    assert!(side.contains("right module"), "{side}");
    let bad = alg_file("bad_arrow", "[field]\nQ\n[vertices]\n1 2\n[arrows]\na: 1 -> 2\n[relations]\na c\n");
    let parse = fdim(&["--alg", &bad, "info"]).stderr;
    assert!(parse.contains("line 8") && parse.contains("`c`"), "{parse}");
}

#[test]
fn tor_on_a_path_algebra() {
    let a2 = fixture("a2.alg");
    let out = fdim(&["--alg", &a2, "--json", "tor", "N", "M", "2"]);
    assert_eq!(out.exit, EXIT_OK, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["result"]["tor"], serde_json::json!([1, 0, 0]), "{}", out.stdout);
}

#[test]
fn user_names_shadow_builtins() {
    // a module named S1 that is really P1
    let text = "[field]\nQ\n[vertices]\n1 2\n[arrows]\na: 1 -> 2\n[module S1]\ndims: 1 1\na: [1]\n";
    let path = alg_file("shadow", text);
    let out = fdim(&["--alg", &path, "pd", "S1"]);
    assert_eq!(out.exit, EXIT_OK, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), "pd S1 = 0");
    let builtin = fdim(&["--alg", &fixture("a2.alg"), "pd", "S1"]);
    assert_eq!(builtin.stdout.trim(), "pd S1 = 1");
}

#[test]
fn json_is_deterministic() {
    let r32 = fixture("r32.alg");
    for args in [
        vec!["--alg", r32.as_str(), "--json", "bounds", "2"],
        vec!["--json", "corpus", "--seed", "7", "--count", "5"],
    ] {
        let first = fdim(&args);
        assert_eq!(first.exit, EXIT_OK, "{}", first.stderr);
        assert_eq!(fdim(&args).stdout, first.stdout, "{args:?}");
    }
}

#[test]
fn corpus_cases_depend_only_on_their_seed() {
    // case i of seed s is case 0 of seed s + i
    let long = fdim_cli::corpus::run_corpus(100, 4, None, 6).unwrap();
    let short = fdim_cli::corpus::run_corpus(103, 1, None, 6).unwrap();
    assert_eq!(long.cases[3].tallies, short.cases[0].tallies);
    assert_eq!(long.cases[3].spec, short.cases[0].spec);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_fdim");
    let r32 = fixture("r32.alg");
    let status = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap();
    let ok = status(&["--alg", &r32, "pd", "S1"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(!ok.stdout.is_empty());
    assert_eq!(status(&["--alg", &r32, "pd-transfer", "1", "S1"]).status.code(), Some(EXIT_REFUTED));
    let bad = status(&["--alg", &r32, "--cutoff", "100", "pd", "S1"]);
    assert_eq!(bad.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&bad.stderr).starts_with("error:"));

    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pd.json");
    let written = status(&["--alg", &r32, "--json", "--out", &out.display().to_string(), "pd", "S1"]);
    assert_eq!(written.status.code(), Some(EXIT_OK));
    assert!(written.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["command"], serde_json::json!(["pd", "S1"]));
}
