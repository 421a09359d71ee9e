//! Text, JSON and LaTeX renderings of results.
//!
//! Text output of elements is valid input syntax. In JSON every scalar is
//! its text form, monomials are `{"K": weight, "F": word, "E": word}` with
//! 1-based letters, an element is a list of `[monomial, scalar]` and a
//! tensor a list of `[monomial, ..., monomial, scalar]`.

use qgw_core::coorddouble::{CoordElement, CoordWord};
use qgw_core::lfun::RMatrixVV;
use qgw_core::uqg::pbw::{PbwElement, PbwMonomial};
use qgw_core::verify::CheckReport;
use qgw_core::{Mono, RootTable, ScalarQ, Tensor, UElem};
use serde_json::{json, Value as Json};

use crate::eval::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

pub type S = ScalarQ;

// ---------------------------------------------------------------------------
// text

fn coef_prefix(c: &S) -> String {
    if *c == <S as qgw_core::One>::one() {
        String::new()
    } else {
        format!("({})*", c)
    }
}

pub fn tensor_text(t: &Tensor<S>) -> String {
    if t.terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = t
        .terms
        .iter()
        .map(|(k, c)| {
            let legs: Vec<String> = k.iter().map(|m| m.to_string()).collect();
            format!("{}({})", coef_prefix(c), legs.join(" | "))
        })
        .collect();
    parts.join(" + ")
}

pub fn value_text(v: &Value<S>) -> String {
    match v {
        Value::Scalar(c) => c.to_string(),
        Value::U(x) => x.to_string(),
        Value::Coord(x) => x.to_string(),
        Value::Tensor(t) => tensor_text(t),
    }
}

// ---------------------------------------------------------------------------
// JSON

fn letters(w: &[u8]) -> Vec<u32> {
    w.iter().map(|&l| l as u32 + 1).collect()
}

pub fn mono_json(m: &Mono) -> Json {
    json!({ "K": m.k.0.to_vec(), "F": letters(&m.f), "E": letters(&m.e) })
}

pub fn scalar_json(c: &S) -> Json {
    Json::String(c.to_string())
}

pub fn element_json(x: &UElem<S>) -> Json {
    Json::Array(x.terms.iter().map(|(m, c)| json!([mono_json(m), scalar_json(c)])).collect())
}

pub fn tensor_json(t: &Tensor<S>) -> Json {
    Json::Array(
        t.terms
            .iter()
            .map(|(k, c)| {
                let mut row: Vec<Json> = k.iter().map(mono_json).collect();
                row.push(scalar_json(c));
                Json::Array(row)
            })
            .collect(),
    )
}

fn word_json(w: &CoordWord) -> Json {
    Json::Array(w.iter().map(|&(i, j)| json!([i as u32 + 1, j as u32 + 1])).collect())
}

pub fn coord_json(x: &CoordElement<S>) -> Json {
    Json::Array(x.terms.iter().map(|(w, c)| json!([word_json(w), scalar_json(c)])).collect())
}

pub fn pbw_mono_json(m: &PbwMonomial) -> Json {
    json!({ "K": m.kappa.0.to_vec(), "F": m.fexp, "E": m.eexp })
}

pub fn pbw_json(p: &PbwElement<S>) -> Json {
    Json::Array(p.terms.iter().map(|(m, c)| json!([pbw_mono_json(m), scalar_json(c)])).collect())
}

pub fn value_json(v: &Value<S>) -> Json {
    match v {
        Value::Scalar(c) => scalar_json(c),
        Value::U(x) => element_json(x),
        Value::Coord(x) => coord_json(x),
        Value::Tensor(t) => tensor_json(t),
    }
}

pub fn roots_json(t: &RootTable) -> Json {
    let roots: Vec<Json> = t
        .roots
        .iter()
        .enumerate()
        .map(|(k, r)| json!({ "i": r.i, "j": r.j, "root": r.root.0.to_vec(), "order": t.order_index[k] + 1 }))
        .collect();
    json!({
        "type": t.lie_type.to_string(),
        "rank": t.rank,
        "reduced_word": t.reduced_word.iter().map(|&i| i + 1).collect::<Vec<_>>(),
        "roots": roots,
    })
}

pub fn rmatrix_json(r: &RMatrixVV<S>) -> Json {
    let n = r.matrix.rows();
    let mut entries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let c = &r.matrix[(a, b)];
            if !qgw_core::Zero::is_zero(c) {
                entries.push(json!([a + 1, b + 1, scalar_json(c)]));
            }
        }
    }
    json!({ "dim": r.dim, "order": r.order.name(), "entries": entries })
}

pub fn reports_json(reports: &[CheckReport]) -> Json {
    serde_json::to_value(reports).expect("reports serialize")
}

// ---------------------------------------------------------------------------
// LaTeX

fn weight_latex(w: &[i64]) -> String {
    let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn word_latex(tag: char, w: &[u8], out: &mut Vec<String>) {
    let mut k = 0;
    while k < w.len() {
        let mut run = 1;
        while k + run < w.len() && w[k + run] == w[k] {
            run += 1;
        }
        if run == 1 {
            out.push(format!("{}_{{{}}}", tag, w[k] + 1));
        } else {
            out.push(format!("{}_{{{}}}^{{{}}}", tag, w[k] + 1, run));
        }
        k += run;
    }
}

pub fn mono_latex(m: &Mono) -> String {
    let mut parts = Vec::new();
    if !m.k.is_zero() {
        parts.push(format!("K_{{{}}}", weight_latex(&m.k.0)));
    }
    word_latex('F', &m.f, &mut parts);
    word_latex('E', &m.e, &mut parts);
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn coef_latex(c: &S, body: &str) -> String {
    let one = <S as qgw_core::One>::one();
    if *c == one {
        return body.to_string();
    }
    let s = c.to_latex();
    if body == "1" {
        return s;
    }
    if *c == -one {
        return format!("-{}", body);
    }
    let simple = c.den().is_one() && c.num().terms().count() == 1;
    if simple {
        format!("{} {}", s, body)
    } else {
        format!("\\left({}\\right) {}", s, body)
    }
}

fn join_latex(parts: Vec<String>) -> String {
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(p);
        }
    }
    out
}

pub fn element_latex(x: &UElem<S>) -> String {
    join_latex(x.terms.iter().map(|(m, c)| coef_latex(c, &mono_latex(m))).collect())
}

pub fn tensor_latex(t: &Tensor<S>) -> String {
    join_latex(
        t.terms
            .iter()
            .map(|(k, c)| {
                let legs: Vec<String> = k.iter().map(mono_latex).collect();
                let body = if legs.len() == 1 { legs[0].clone() } else { format!("\\left({}\\right)", legs.join(" \\otimes ")) };
                coef_latex(c, &body)
            })
            .collect(),
    )
}

pub fn coord_latex(x: &CoordElement<S>) -> String {
    join_latex(
        x.terms
            .iter()
            .map(|(w, c)| {
                let body = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|&(i, j)| format!("u^{{{}}}_{{{}}}", i + 1, j + 1)).collect::<Vec<_>>().join(" ")
                };
                coef_latex(c, &body)
            })
            .collect(),
    )
}

pub fn pbw_latex(p: &PbwElement<S>) -> String {
    join_latex(
        p.terms
            .iter()
            .map(|(m, c)| {
                let mut parts = Vec::new();
                if !m.kappa.is_zero() {
                    parts.push(format!("K_{{{}}}", weight_latex(&m.kappa.0)));
                }
                for (tag, exps) in [("F", &m.fexp), ("E", &m.eexp)] {
                    for (k, &x) in exps.iter().enumerate() {
                        match x {
                            0 => {}
                            1 => parts.push(format!("{}_{{\\beta_{{{}}}}}", tag, k + 1)),
                            _ => parts.push(format!("{}_{{\\beta_{{{}}}}}^{{{}}}", tag, k + 1, x)),
                        }
                    }
                }
                let body = if parts.is_empty() { "1".to_string() } else { parts.join(" ") };
                coef_latex(c, &body)
            })
            .collect(),
    )
}

pub fn value_latex(v: &Value<S>) -> String {
    match v {
        Value::Scalar(c) => c.to_latex(),
        Value::U(x) => element_latex(x),
        Value::Coord(x) => coord_latex(x),
        Value::Tensor(t) => tensor_latex(t),
    }
}

pub fn root_latex(r: &qgw_core::RootVec) -> String {
    let mut parts = Vec::new();
    for (i, &c) in r.0.iter().enumerate() {
        match c {
            0 => {}
            1 => parts.push(format!("\\alpha_{{{}}}", i + 1)),
            _ => parts.push(format!("{}\\alpha_{{{}}}", c, i + 1)),
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

pub fn roots_latex(t: &RootTable) -> String {
    let mut out = String::from("\\begin{tabular}{cll}\n$k$ & $(i,j)$ & $\\beta_{ij}$ \\\\\n\\hline\n");
    for (k, r) in t.ordered().enumerate() {
        out.push_str(&format!("{} & $({},{})$ & ${}$ \\\\\n", k + 1, r.i, r.j, root_latex(&r.root)));
    }
    out.push_str("\\end{tabular}");
    out
}
