//! Every CLI subcommand, run with `--format json`, must print a single JSON
//! object that validates against the schema shipped in
//! `docs/report-schema.json`, and the JSON verdict must agree with the text
//! verdict (same exit code).

use std::path::PathBuf;

use serde_json::Value;

const SCHEMA: &str = include_str!("../../../docs/report-schema.json");

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out: Vec<u8> = Vec::new();
    let mut argv = vec!["dexr"];
    argv.extend_from_slice(args);
    let code = dexrs::cli::run(argv, &mut out);
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("dexr-json-report-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(name);
    std::fs::write(&path, content).expect("write temp file");
    path
}

struct Fixture {
    validator: jsonschema::Validator,
}

impl Fixture {
    fn new() -> Self {
        let schema: Value = serde_json::from_str(SCHEMA).expect("schema document parses");
        let validator = jsonschema::validator_for(&schema).expect("schema document compiles");
        Fixture { validator }
    }

    /// Runs the same invocation in text and JSON mode, checks that the exit
    /// codes agree, validates the JSON output against the shipped schema, and
    /// returns the parsed report.
    fn case(&self, args: &[&str], expect_code: i32, expect_status: &str) -> Value {
        let (text_code, _) = run_cli(args);
        let mut json_args = vec!["--format", "json"];
        json_args.extend_from_slice(args);
        let (json_code, json_out) = run_cli(&json_args);
        assert_eq!(text_code, expect_code, "text exit code for {args:?}");
        assert_eq!(json_code, expect_code, "json exit code for {args:?}");
        let report: Value = serde_json::from_str(&json_out)
            .unwrap_or_else(|e| panic!("output of {args:?} is not JSON: {e}\n{json_out}"));
        if let Err(error) = self.validator.validate(&report) {
            panic!("schema violation for {args:?}: {error}\n{json_out}");
        }
        assert_eq!(
            report.get("status").and_then(Value::as_str),
            Some(expect_status),
            "status field for {args:?}"
        );
        report
    }
}

const RULES: &str = "schema { R/1 S/1 T/1 }\nR(a).\nR(X) -> S(X) | T(X).\n";
const CHAIN: &str = concat!(
    "schema { E/2 F/2 G/2 }\n",
    "E(X,Y) -> F(X,Y).\n",
    "F(X,Y), E(Y,Z) -> G(X,Z).\n",
);

#[test]
fn every_report_shape_validates_against_the_shipped_schema() {
    let fx = Fixture::new();
    let rules = write_temp("rules.dxr", RULES);
    let rules = rules.to_str().unwrap();
    let chain = write_temp("chain.dxr", CHAIN);
    let chain = chain.to_str().unwrap();
    let grow = write_temp("grow.dxr", "schema { R/2 }\nR(X,Y) -> exists Z. R(Y,Z).\n");
    let grow = grow.to_str().unwrap();
    let linear = write_temp("linear.dxr", "schema { R/2 S/1 T/1 }\nR(X,Y) -> S(X) | T(X).\n");
    let linear = linear.to_str().unwrap();
    let guarded = write_temp("guarded.dxr", "schema { R/1 P/1 S/1 }\nR(X), P(X) -> S(X).\n");
    let guarded = guarded.to_str().unwrap();
    let model = write_temp("model.dst", "schema { R/1 S/1 T/1 }\nR(a).\nS(a).\n");
    let model = model.to_str().unwrap();
    let base = write_temp("base.dst", "schema { R/1 S/1 T/1 }\nR(a).\n");
    let base = base.to_str().unwrap();
    let pair = write_temp("pair.dst", "schema { R/1 S/1 T/1 }\nR(b).\nS(b).\n");
    let pair = pair.to_str().unwrap();
    let edge = write_temp("edge.dst", "schema { R/2 }\nR(a,b).\n");
    let edge = edge.to_str().unwrap();

    // Errors (missing file) report `status: error` on exit code 3.
    let report = fx.case(&["check", "no-such-file.dxr"], 3, "error");
    assert!(report["error"].as_str().unwrap().contains("no-such-file"));

    // check
    let report = fx.case(&["check", rules], 0, "ok");
    assert_eq!(report["rules"], 1);

    // model: satisfied and violated
    fx.case(&["model", rules, "--structure", model], 0, "model");
    fx.case(&["model", rules, "--structure", base], 1, "not-model");

    // critical carries the generated structure
    let report = fx.case(&["critical", rules, "--k", "2"], 0, "model");
    assert!(report["structure"].as_str().unwrap().contains("R(c1)."));

    // chase: complete (with tree) and truncated
    let report = fx.case(
        &["chase", rules, "--structure", base, "--tree"],
        0,
        "complete",
    );
    assert!(report["tree"].as_str().unwrap().starts_with("0 - -"));
    fx.case(
        &["chase", grow, "--structure", edge, "--max-depth", "2"],
        2,
        "truncated",
    );

    // product: plain and repaired
    let report = fx.case(&["product", base, pair], 0, "ok");
    assert_eq!(report["repaired"], Value::Bool(false));
    let report = fx.case(&["product", model, pair, "--repair", rules], 0, "ok");
    assert_eq!(report["repaired"], Value::Bool(true));

    // diagram
    let report = fx.case(
        &["diagram", rules, "--structure", base, "--k-sub", "a", "--m", "0", "--l", "1"],
        0,
        "ok",
    );
    assert_eq!(report["candidates"].as_array().unwrap().len(), 6);

    // compat: compatible and not compatible
    fx.case(
        &["compat", rules, "--structure", base, "--n", "1", "--m", "0", "--l", "1"],
        0,
        "compatible",
    );
    fx.case(
        &["compat", rules, "--structure", base, "--n", "1", "--m", "0", "--l", "2"],
        1,
        "not-compatible",
    );

    // entail: entailed, not entailed, unknown
    let report = fx.case(
        &["entail", rules, "--rule", "R(X) -> S(X) | T(X)."],
        0,
        "entailed",
    );
    assert!(report["depth"].as_u64().unwrap() >= 1);
    let report = fx.case(&["entail", rules, "--rule", "R(X) -> S(X)."], 1, "not-entailed");
    assert!(report["countermodel"].as_str().unwrap().contains("R(a)."));
    fx.case(
        &[
            "entail",
            chain,
            "--rule",
            "E(X,Y), E(Y,Z) -> G(X,Z).",
            "--max-depth",
            "1",
            "--countermodel-bound",
            "1",
        ],
        2,
        "unknown",
    );

    // rewrite: rewritten, fail, unknown
    fx.case(&["rewrite", linear, "--p", "1"], 0, "rewritten");
    fx.case(&["rewrite", guarded], 1, "fail");
    fx.case(&["rewrite", linear, "--p", "1", "--candidate-cap", "1"], 2, "unknown");
}

#[test]
fn rewrite_report_has_exactly_the_documented_fields() {
    let linear = write_temp(
        "linear-fields.dxr",
        "schema { R/2 S/1 T/1 }\nR(X,Y) -> S(X) | T(X).\n",
    );
    let (code, out) = run_cli(&["--format", "json", "rewrite", linear.to_str().unwrap(), "--p", "1"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["candidates", "entailed", "status", "unknown"]);
}
