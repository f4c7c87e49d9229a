use std::io::Write;
use std::process::{Command, Output, Stdio};

use clap::Parser;
use tateforge_cli::input::{parse_input, FieldSpec, Problem};
use tateforge_cli::render::{render_report, Format};
use tateforge_cli::report::{Report, SCHEMA};
use tateforge_cli::{execute_source, Cli};

const CI_PAIR: &str = r#"{"field":"Q","vars":["x","y"],"I1":["x^2"],"I2":["y^2"]}"#;

fn tateforge(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tateforge"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn run(args: &[&str], src: &str) -> tateforge_cli::Outcome {
    let mut argv = vec!["tateforge"];
    argv.extend_from_slice(args);
    execute_source(&Cli::try_parse_from(argv).unwrap(), src)
}

#[test]
fn parses_a_pair_document_with_defaults() {
    let doc = parse_input(CI_PAIR).unwrap();
    assert_eq!(doc.field, FieldSpec::Named("Q".into()));
    assert!(doc.ideal.is_empty());
    assert_eq!((doc.window.hdeg_max, doc.window.ideg_max, doc.window.series_max), (6, 12, 8));
    let p = Problem::from_source(CI_PAIR).unwrap();
    assert_eq!(p.i1.as_ref().unwrap().len(), 1);
}

#[test]
fn non_prime_characteristic_is_located() {
    let src = "{\"field\": {\"Fp\": 4}, \"vars\": [\"x\"]}";
    let e = Problem::from_source(src).unwrap_err();
    assert_eq!((e.line, e.column), (1, 11));
    assert_eq!(e.token, "4");
    assert!(e.message.contains("not prime"), "{e}");
}

#[test]
fn inhomogeneous_pair_generator_is_located() {
    let src = "{\"field\": \"Q\",\n \"vars\": [\"x\", \"y\"],\n \"I1\": [\"x^2\", \"x^2 + y\"],\n \"I2\": [\"y^2\"]}";
    let e = Problem::from_source(src).unwrap_err();
    // Third line, at the opening quote of the second entry.
    assert_eq!((e.line, e.column), (3, 16));
    assert!(e.message.starts_with("I1[1]") && e.message.contains("inhomogeneous"), "{e}");
}

#[test]
fn polynomial_syntax_error_points_inside_the_string() {
    let src = "{\"field\": \"Q\", \"vars\": [\"x\"], \"ideal\": [\"x^^2\"]}";
    let e = Problem::from_source(src).unwrap_err();
    let quote = src.find("\"x^^2").unwrap() + 1;
    assert_eq!(e.line, 1);
    assert!(e.column > quote, "{e}");
    assert_eq!(e.token, "^");
}

#[test]
fn malformed_json_and_unknown_keys_are_input_errors() {
    let e = Problem::from_source("{\"field\": \"Q\",\n \"vars\": [\"x\"],, }").unwrap_err();
    assert_eq!(e.line, 2);
    let e = Problem::from_source("{\"field\": \"Q\", \"vars\": [\"x\"], \"idea\": []}").unwrap_err();
    assert!(e.message.contains("idea"), "{e}");
    assert!(Problem::from_source("{\"field\": \"R\", \"vars\": [\"x\"]}").is_err());
}

#[test]
fn exit_codes() {
    let ok = tateforge(&["verify-all", "-"], CI_PAIR);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let bad = tateforge(&["betti", "-"], r#"{"field":{"Fp":4},"vars":["x"]}"#);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 1"));

    let missing = tateforge(&["tor", "-"], r#"{"field":"Q","vars":["x"]}"#);
    assert_eq!(missing.status.code(), Some(2));

    let no_file = tateforge(&["betti", "/nonexistent/input.json"], "");
    assert_eq!(no_file.status.code(), Some(2));
}

#[test]
fn hypothesis_failure_is_report_content() {
    let src = r#"{"field":"Q","vars":["x"],"I1":["x"],"I2":["x"]}"#;
    let out = run(&["verify-all", "-", "--format", "json"], src);
    assert_eq!(out.code, 0);
    let rep: Report = serde_json::from_str(out.output.as_deref().unwrap()).unwrap();
    assert_eq!(rep.results.len(), 1);
    let tor = run(&["tor-independence", "-", "--format", "text"], src);
    assert!(tor.output.unwrap().contains("verdict: certified-no"));
}

#[test]
fn failed_theorem_sets_exit_code_one() {
    let mut rep: Report =
        serde_json::from_str(&run(&["verify-pullback", "-", "--format", "json"], CI_PAIR).output.unwrap()).unwrap();
    assert!(!rep.failed());
    if let tateforge_cli::report::CommandResult::Theorem(t) = &mut rep.results[0] {
        t.outcome = tateforge::invariants::Outcome::Failed;
    }
    assert!(rep.failed());
}

#[test]
fn deviations_of_the_complete_intersection() {
    let out = run(&["deviations", "-", "--format", "json"], CI_PAIR);
    let v: serde_json::Value = serde_json::from_str(out.output.as_deref().unwrap()).unwrap();
    let s = v["results"].as_array().unwrap().iter().find(|r| r["ring"]["name"] == "S").unwrap();
    let entries = &s["table"]["entries"];
    assert_eq!(entries.as_array().unwrap().len(), 2);
    assert_eq!(entries[0], serde_json::json!({"hdeg": 1, "ideg": 1, "value": 2}));
    assert_eq!(entries[1], serde_json::json!({"hdeg": 2, "ideg": 2, "value": 2}));
}

#[test]
fn json_round_trip() {
    for cmd in
        ["deviations", "poincare", "betti", "tor", "tor-independence", "koszul", "golod", "classify", "verify-all"]
    {
        let out = run(&[cmd, "-", "--format", "json", "--window", "3,6", "--series-max", "4"], CI_PAIR);
        let text = out.output.unwrap();
        let rep: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(rep.schema, SCHEMA);
        assert_eq!(render_report(&rep, Format::Json), text, "{cmd}");
    }
}

#[test]
fn window_flags_override_the_document() {
    let out = run(&["betti", "-", "--format", "json", "--window", "2,3", "--series-max", "5"], CI_PAIR);
    let rep: Report = serde_json::from_str(&out.output.unwrap()).unwrap();
    let w = rep.input.unwrap().window;
    assert_eq!((w.hdeg_max, w.ideg_max, w.series_max), (2, 3, 5));
    assert!(Cli::try_parse_from(["tateforge", "betti", "-", "--window", "3"]).is_err());
    assert!(Cli::try_parse_from(["tateforge", "betti", "-", "--window", "0,4"]).is_err());
}

#[test]
fn empty_report_renders_only_the_header() {
    let rep = Report::new("betti", None);
    let text = render_report(&rep, Format::Text);
    assert_eq!(text.lines().count(), 3);
    let csv = render_report(&rep, Format::Csv);
    assert!(csv.lines().all(|l| l.starts_with('#')));
    let json: serde_json::Value = serde_json::from_str(&render_report(&rep, Format::Json)).unwrap();
    assert_eq!(json["results"], serde_json::json!([]));
}

#[test]
fn csv_deviation_table_has_bidegree_headers() {
    let out = run(&["deviations", "-", "--format", "csv", "--window", "3,4"], CI_PAIR);
    let csv = out.output.unwrap();
    let section: Vec<&str> =
        csv.split("\n\n").find(|s| s.starts_with("# deviations of S =")).unwrap().lines().collect();
    assert_eq!(section[1], "i\\j,0,1,2,3,4");
    assert_eq!(section[2], "1,0,2,0,0,0");
    assert_eq!(section[3], "2,0,0,2,0,0");
    assert_eq!(section[4], "3,0,0,0,0,0");
    assert_eq!(section.len(), 5);
}

#[test]
fn text_tables_are_aligned() {
    let out = run(&["betti", "-", "--window", "2,10"], r#"{"field":"Q","vars":["x"],"ideal":["x^2"]}"#);
    let text = out.output.unwrap();
    let table: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("i\\j")).take(4).collect();
    assert_eq!(table[0], "i\\j  0  1  2  3  4  5  6  7  8  9  10");
    assert_eq!(table[2], "1    0  1  0  0  0  0  0  0  0  0   0");
}

#[test]
fn output_file_and_stdout_match() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let to_file = tateforge(&["koszul", "-", "--format", "json", "--out", path.to_str().unwrap()], CI_PAIR);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let to_stdout = tateforge(&["koszul", "-", "--format", "json"], CI_PAIR);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tateforge(&["verify-all", "-", "--format", "json", "--threads", "1"], CI_PAIR);
    let b = tateforge(&["verify-all", "-", "--format", "json", "--threads", "3"], CI_PAIR);
    let c = tateforge(&["verify-all", "-", "--format", "json"], CI_PAIR);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn prime_field_warns_when_the_window_reaches_p() {
    let out = run(&["betti", "-"], r#"{"field":{"Fp":5},"vars":["x"],"ideal":["x^2"]}"#);
    assert_eq!(out.code, 0);
    assert!(out.diagnostics.iter().any(|d| d.starts_with("warning")));
    let out = run(&["betti", "-", "--window", "4,8"], r#"{"field":{"Fp":5},"vars":["x"],"ideal":["x^2"]}"#);
    assert!(out.diagnostics.is_empty());
}

#[test]
fn classify_mode_filter() {
    let all = run(&["classify", "-", "--format", "json"], CI_PAIR);
    let one = run(&["classify", "-", "--format", "json", "--mode", "qci"], CI_PAIR);
    let count = |o: &tateforge_cli::Outcome| {
        serde_json::from_str::<Report>(o.output.as_deref().unwrap()).unwrap().results.len()
    };
    assert_eq!(count(&all), 3 * 4);
    assert_eq!(count(&one), 3);
}

#[test]
fn schema_documents_are_versioned() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{root}/report.schema.json")).unwrap()).unwrap();
    let input: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(format!("{root}/input.schema.json")).unwrap()).unwrap();
    assert_eq!(report["properties"]["schema"]["const"], SCHEMA);
    assert!(report["$id"].as_str().unwrap().ends_with(":1"));
    assert!(input["$id"].as_str().unwrap().ends_with(":1"));
    // Every top-level report key is described by the schema.
    let rep: serde_json::Value =
        serde_json::from_str(&run(&["betti", "-", "--format", "json"], CI_PAIR).output.unwrap()).unwrap();
    for key in rep.as_object().unwrap().keys() {
        assert!(report["properties"].get(key).is_some(), "{key}");
    }
}
