mod common;

use std::process::Command;

use common::*;
use proptest::prelude::*;
use qgw_cli::eval::{Ctx, Value};
use qgw_cli::expr::parse;
use qgw_cli::format::value_text;
use qgw_core::{ScalarQ, Uqg};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(e in expr_tree()) {
        let text = e.to_string();
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{}: {}", text, err)))?;
        prop_assert_eq!(&back, &e, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalize_is_idempotent_through_text(s in a2_element()) {
        let u = Uqg::<ScalarQ>::new(&qgw_core::verify::criteria::parse_datum("A2").unwrap());
        let ctx = Ctx::new(&u);
        let once = ctx.eval(&parse(&s).unwrap()).unwrap();
        let printed = value_text(&once);
        let twice = ctx.eval(&parse(&printed).map_err(|e| TestCaseError::fail(format!("{}: {}", printed, e)))?).unwrap();
        let once = match once { Value::Scalar(c) => Value::U(u.scalar(c)), v => v };
        let twice = match twice { Value::Scalar(c) => Value::U(u.scalar(c)), v => v };
        prop_assert_eq!(twice, once, "{}", printed);
    }
}

#[test]
fn normalize_examples() {
    let (code, out, _) = qgw(&["normalize", "--type", "A", "--rank", "1", "E1*F1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "((-q)/(q^2 - 1))*K[-2] + F1*E1 + ((q)/(q^2 - 1))*K[2]");
    let (_, out, _) = qgw(&["normalize", "--type", "A", "--rank", "1", "K[1]^2"]);
    assert_eq!(out.trim(), "K[2]");
    let (_, out, _) = qgw(&["normalize", "--type", "A", "--rank", "1", "K[1]^-1*K[1]"]);
    assert_eq!(out.trim(), "(1)");
}

#[test]
fn tensors_and_coordinates_round_trip() {
    let (code, out, _) = qgw(&["coproduct", "--type", "A", "--rank", "2", "E1*F2"]);
    assert_eq!(code, 0);
    let (code, again, err) = qgw(&["normalize", "--type", "A", "--rank", "2", out.trim()]);
    assert_eq!(code, 0, "{}", err);
    assert_eq!(out, again);
    let (_, out, _) = qgw(&["normalize", "--type", "C", "--rank", "2", "u1_2*(q*u2_1 - u1_2)"]);
    let (_, again, _) = qgw(&["normalize", "--type", "C", "--rank", "2", out.trim()]);
    assert_eq!(out, again);
}

#[test]
fn json_outputs_validate() {
    let a2 = ["--type", "A", "--rank", "2"];
    let with = |extra: &[&'static str]| -> Vec<&'static str> { extra.iter().copied().chain(a2).collect() };
    assert_valid("element", &qgw_json(&with(&["normalize", "E1*F1 + q*K[1,-1]"])));
    assert_valid("scalar", &qgw_json(&with(&["normalize", "(q^2 - 1)/q"])));
    assert_valid("tensor", &qgw_json(&with(&["coproduct", "E1*E2"])));
    assert_valid("coordinate", &qgw_json(&with(&["normalize", "u1_1*u2_3 - q*u1_2"])));
    assert_valid("pbw", &qgw_json(&with(&["normalize", "--pbw", "E2*E1*F1"])));
    assert_valid("rootvec", &qgw_json(&with(&["rootvec"])));
    assert_valid("ls", &qgw_json(&with(&["rootvec", "--ls", "1,3"])));
    assert_valid("lfun", &qgw_json(&with(&["lfun"])));
    assert_valid("rmatrix", &qgw_json(&with(&["rmatrix"])));
    assert_valid("tensor", &qgw_json(&with(&["zeta", "--word", "u1_1*u1_2", "--pbw", "E1"])));
    assert_valid("report", &qgw_json(&with(&["verify", "--check", "braid", "--check", "hopf_axioms"])));
    for (t, n) in [("A", "3"), ("B", "2"), ("C", "3"), ("D", "3"), ("D", "4")] {
        assert_valid("roots", &qgw_json(&["roots", "--type", t, "--rank", n]));
    }
    let (code, out, _) = qgw(&["roots", "--type", "D", "--rank", "3", "--json"]);
    assert_eq!(code, 0);
    assert_valid("roots", &serde_json::from_str(&out).unwrap());
}

#[test]
fn schemas_are_published() {
    for name in qgw_cli::schema::NAMES {
        let (code, out, _) = qgw(&["schema", name]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert!(jsonschema::JSONSchema::options().with_draft(jsonschema::Draft::Draft202012).compile(&v).is_ok(), "{}", name);
    }
    assert_eq!(qgw(&["schema", "nothing"]).0, 2);
}

#[test]
fn report_json_round_trips() {
    let v = qgw_json(&["verify", "--type", "B", "--rank", "2", "--check", "braid", "--check", "nogo"]);
    let reports: Vec<qgw_core::verify::CheckReport> = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(reports.len(), 2);
    assert_eq!(serde_json::to_value(&reports).unwrap(), v);
}

#[test]
fn failing_reports_need_a_witness() {
    let bad = serde_json::json!([{ "check_name": "braid", "datum": "A2", "status": "fail", "witness": "", "timing_ms": 0 }]);
    let schema = qgw_cli::schema::schema("report").unwrap();
    let c = jsonschema::JSONSchema::options().with_draft(jsonschema::Draft::Draft202012).compile(&schema).unwrap();
    assert!(!c.is_valid(&bad));
    let tensor = qgw_json(&["coproduct", "--type", "A", "--rank", "1", "E1"]);
    let element = qgw_cli::schema::schema("element").unwrap();
    let c = jsonschema::JSONSchema::options().with_draft(jsonschema::Draft::Draft202012).compile(&element).unwrap();
    assert!(!c.is_valid(&tensor));
}

#[test]
fn latex_output() {
    let (code, out, _) = qgw(&["normalize", "--type", "A", "--rank", "1", "--format", "latex", "E1*F1"]);
    assert_eq!(code, 0);
    assert!(out.contains("F_{1} E_{1}"), "{}", out);
    let (_, out, _) = qgw(&["roots", "--type", "B", "--rank", "2", "--latex"]);
    assert!(out.starts_with("\\begin{tabular}"));
}

#[test]
fn exit_codes() {
    assert_eq!(qgw(&["normalize", "--type", "A", "--rank", "2", "E1*F1"]).0, 0);
    // usage: unknown command, bad syntax, bad index, missing datum, bad datum
    assert_eq!(qgw(&["frobnicate"]).0, 2);
    let (code, _, err) = qgw(&["normalize", "--type", "A", "--rank", "2", "E*"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 2"), "{}", err);
    assert_eq!(qgw(&["normalize", "--type", "A", "--rank", "2", "E3"]).0, 2);
    assert_eq!(qgw(&["normalize", "E1"]).0, 2);
    assert_eq!(qgw(&["roots", "--type", "D", "--rank", "2"]).0, 2);
    assert_eq!(qgw(&["roots", "--type", "G", "--rank", "2"]).0, 2);
    assert_eq!(qgw(&["coproduct", "--type", "A", "--rank", "1", "u1_1"]).0, 2);
    assert_eq!(qgw(&["normalize", "--type", "A", "--rank", "1", "E1/(q - q)"]).0, 2);
    assert_eq!(qgw(&["verify", "--type", "A", "--rank", "1", "--check", "nonsense"]).0, 2);
    assert_eq!(qgw(&["verify", "--type", "A", "--rank", "1"]).0, 2);
    assert_eq!(qgw(&["rootvec", "--type", "A", "--rank", "2", "--ls", "3,1"]).0, 2);
    assert_eq!(qgw(&["--help"]).0, 0);
}

#[test]
fn verify_exit_code_follows_the_reports() {
    // C3 is the one datum with a known failing identity.
    let (code, out, _) = qgw(&["verify", "--type", "C", "--rank", "3", "--check", "rootvect"]);
    assert_eq!(code, 1, "{}", out);
    assert!(out.contains("FAIL C3 rootvect"), "{}", out);
    let (code, _, _) = qgw(&["verify", "--type", "C", "--rank", "3", "--check", "braid"]);
    assert_eq!(code, 0);
}

#[test]
fn config_file_supplies_the_datum() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("qgw.toml");
    std::fs::write(&cfg, "type = \"B\"\nrank = 2\n").unwrap();
    let (code, out, _) = qgw(&["roots", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("B2"), "{}", out);
    // flags win over the file
    let (_, out, _) = qgw(&["roots", "--config", cfg.to_str().unwrap(), "--type", "C", "--rank", "3"]);
    assert!(out.starts_with("C3"), "{}", out);
    std::fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(qgw(&["roots", "--config", cfg.to_str().unwrap()]).0, 2);
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qgw"));
    c.env_remove(qgw_cli::CACHE_ENV);
    c
}

#[test]
fn cache_is_written_reused_and_rebuilt_on_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let run = |c: &mut Command| {
        let o = c.output().unwrap();
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        String::from_utf8(o.stdout).unwrap()
    };
    let args = ["lfun", "--type", "B", "--rank", "2", "--entry", "1,2"];
    let first = run(bin().args(args).env(qgw_cli::CACHE_ENV, dir.path()));
    let file = dir.path().join("B2.json");
    assert!(file.exists());
    let cached: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(cached["version"], 1);
    assert_eq!(cached["fingerprint"]["type"], "B");
    assert!(cached["l_matrices"].is_object());
    assert!(cached["root_vectors"].is_array());

    // a warm run agrees with the cold one
    assert_eq!(run(bin().args(args).env(qgw_cli::CACHE_ENV, dir.path())), first);

    // a file with a foreign fingerprint is ignored and rewritten
    let mut tampered = cached.clone();
    tampered["fingerprint"]["conventions"] = "0000".into();
    tampered["l_matrices"]["plus"] = serde_json::json!([]);
    std::fs::write(&file, tampered.to_string()).unwrap();
    assert_eq!(run(bin().args(args).env(qgw_cli::CACHE_ENV, dir.path())), first);
    let rewritten: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(rewritten["fingerprint"], cached["fingerprint"]);

    // an unreadable file is ignored too
    std::fs::write(&file, "not json").unwrap();
    assert_eq!(run(bin().args(args).env(qgw_cli::CACHE_ENV, dir.path())), first);

    // --cache beats QGW_CACHE
    let other = tempfile::tempdir().unwrap();
    run(bin().args(["rootvec", "--type", "A", "--rank", "2", "--cache"]).arg(other.path()).env(qgw_cli::CACHE_ENV, dir.path()));
    assert!(other.path().join("A2.json").exists());
    assert!(!dir.path().join("A2.json").exists());
}

#[test]
fn binary_exit_codes() {
    let o = bin().args(["bogus"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["verify", "--type", "A", "--rank", "1", "--check", "pbw_dims"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}
