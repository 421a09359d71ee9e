#![allow(dead_code)]

use proptest::prelude::*;
use qgw_cli::expr::Expr;
use serde_json::Value;

/// Runs the front end in-process: (exit code, stdout, stderr).
pub fn qgw(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qgw").chain(args.iter().copied());
    let code = qgw_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn qgw_json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let (code, out, err) = qgw(&a);
    assert_eq!(code, 0, "qgw {:?}: {}", args, err);
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("qgw {:?} printed invalid JSON ({}): {}", args, e, out))
}

/// Validates `v` against the published schema `name`, listing every error.
pub fn assert_valid(name: &str, v: &Value) {
    let schema = qgw_cli::schema::schema(name).unwrap_or_else(|| panic!("no schema {}", name));
    let compiled = jsonschema::JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&schema)
        .unwrap_or_else(|e| panic!("schema {} does not compile: {}", name, e));
    let msgs: Vec<String> = match compiled.validate(v) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{} output does not validate:\n{}\n{}", name, msgs.join("\n"), v);
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u64..20).prop_map(Expr::int),
        Just(Expr::Q),
        (1usize..4).prop_map(Expr::E),
        (1usize..4).prop_map(Expr::F),
        prop::collection::vec(-3i64..4, 1..4).prop_map(Expr::K),
        (1usize..4, 1usize..4).prop_map(|(i, j)| Expr::U(i, j)),
    ]
}

/// Canonical trees: what the parser produces, so print∘parse is the identity.
pub fn expr_tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 40, 4, |inner| {
        prop_oneof![
            prop::collection::vec((any::<bool>(), inner.clone()), 2..4).prop_map(Expr::Sum),
            inner.clone().prop_map(|t| Expr::Sum(vec![(true, t)])),
            (inner.clone(), prop::collection::vec((any::<bool>(), inner.clone()), 1..3)).prop_map(|(first, rest)| {
                let mut v = vec![(false, first)];
                v.extend(rest);
                Expr::Product(v)
            }),
            (inner.clone(), -3i64..4, prop_oneof![Just(1i64), Just(2), Just(3)]).prop_map(|(b, n, d)| {
                let r = num_rational::Ratio::new(n, d);
                if b == Expr::Q || r.is_integer() {
                    Expr::Pow(Box::new(b), r)
                } else {
                    Expr::Pow(Box::new(Expr::Q), r)
                }
            }),
            prop::collection::vec(inner, 2..4).prop_map(Expr::Tensor),
        ]
    })
}

fn gen_a2() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("E1"), Just("E2"), Just("F1"), Just("F2"), Just("K[1,0]"), Just("K[0,-1]"), Just("q"), Just("(q - q^-1)"), Just("2")]
}

/// Small well-typed A2 elements written as strings.
pub fn a2_element() -> impl Strategy<Value = String> {
    let mono = prop::collection::vec(gen_a2(), 1..4).prop_map(|fs| fs.join("*"));
    prop::collection::vec((any::<bool>(), mono), 1..4).prop_map(|ts| {
        let mut s = String::new();
        for (k, (neg, t)) in ts.iter().enumerate() {
            match (k, neg) {
                (0, false) => s.push_str(t),
                (0, true) => s.push_str(&format!("-{}", t)),
                (_, false) => s.push_str(&format!(" + {}", t)),
                (_, true) => s.push_str(&format!(" - {}", t)),
            }
        }
        s
    })
}
