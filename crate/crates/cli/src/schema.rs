//! Published JSON schemas (draft 2020-12) for every `--format json` output.

use serde_json::{json, Value};

pub const NAMES: &[&str] = &["scalar", "element", "tensor", "coordinate", "pbw", "roots", "rmatrix", "report", "lfun", "rootvec", "ls", "criteria"];

fn defs() -> Value {
    json!({
        "scalar": { "type": "string", "minLength": 1 },
        "weight": { "type": "array", "items": { "type": "integer" } },
        "word": { "type": "array", "items": { "type": "integer", "minimum": 1 } },
        "monomial": {
            "type": "object",
            "properties": {
                "K": { "$ref": "#/$defs/weight" },
                "F": { "$ref": "#/$defs/word" },
                "E": { "$ref": "#/$defs/word" }
            },
            "required": ["K", "F", "E"],
            "additionalProperties": false
        },
        "element": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{ "$ref": "#/$defs/monomial" }, { "$ref": "#/$defs/scalar" }],
                "minItems": 2,
                "maxItems": 2
            }
        },
        "tensor": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "items": {
                    "oneOf": [{ "$ref": "#/$defs/monomial" }, { "$ref": "#/$defs/scalar" }]
                }
            }
        },
        "coordinate": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [
                    {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": { "type": "integer", "minimum": 1 },
                            "minItems": 2,
                            "maxItems": 2
                        }
                    },
                    { "$ref": "#/$defs/scalar" }
                ],
                "minItems": 2,
                "maxItems": 2
            }
        },
        "pbw": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [
                    {
                        "type": "object",
                        "properties": {
                            "K": { "$ref": "#/$defs/weight" },
                            "F": { "type": "array", "items": { "type": "integer", "minimum": 0 } },
                            "E": { "type": "array", "items": { "type": "integer", "minimum": 0 } }
                        },
                        "required": ["K", "F", "E"],
                        "additionalProperties": false
                    },
                    { "$ref": "#/$defs/scalar" }
                ],
                "minItems": 2,
                "maxItems": 2
            }
        },
        "report": {
            "type": "object",
            "properties": {
                "check_name": { "type": "string", "minLength": 1 },
                "datum": { "type": "string" },
                "status": { "enum": ["pass", "fail"] },
                "witness": { "type": "string" },
                "timing_ms": { "type": "integer", "minimum": 0 },
                "instance": { "type": "string" },
                "details": { "type": "array", "items": { "type": "string" } }
            },
            "required": ["check_name", "datum", "status", "witness", "timing_ms"],
            "additionalProperties": false,
            "if": { "properties": { "status": { "const": "fail" } } },
            "then": { "properties": { "witness": { "minLength": 1 } } }
        }
    })
}

fn body(name: &str) -> Option<Value> {
    Some(match name {
        "scalar" | "element" | "tensor" | "coordinate" | "pbw" => json!({ "$ref": format!("#/$defs/{}", name) }),
        "report" => json!({ "type": "array", "items": { "$ref": "#/$defs/report" } }),
        "roots" => json!({
            "type": "object",
            "properties": {
                "type": { "enum": ["A", "B", "C", "D"] },
                "rank": { "type": "integer", "minimum": 1 },
                "reduced_word": { "$ref": "#/$defs/word" },
                "roots": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "i": { "type": "integer", "minimum": 1 },
                            "j": { "type": "integer", "minimum": 1 },
                            "root": { "type": "array", "items": { "type": "integer", "minimum": 0 } },
                            "order": { "type": "integer", "minimum": 1 }
                        },
                        "required": ["i", "j", "root", "order"],
                        "additionalProperties": false
                    }
                }
            },
            "required": ["type", "rank", "reduced_word", "roots"],
            "additionalProperties": false
        }),
        "rmatrix" => json!({
            "type": "object",
            "properties": {
                "dim": { "type": "integer", "minimum": 1 },
                "order": { "enum": ["ascending", "descending"] },
                "entries": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "prefixItems": [
                            { "type": "integer", "minimum": 1 },
                            { "type": "integer", "minimum": 1 },
                            { "$ref": "#/$defs/scalar" }
                        ],
                        "minItems": 3,
                        "maxItems": 3
                    }
                }
            },
            "required": ["dim", "order", "entries"],
            "additionalProperties": false
        }),
        "lfun" => json!({
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "i": { "type": "integer", "minimum": 1 },
                    "j": { "type": "integer", "minimum": 1 },
                    "plus": { "$ref": "#/$defs/pbw" },
                    "minus": { "$ref": "#/$defs/pbw" }
                },
                "required": ["i", "j"],
                "additionalProperties": false
            }
        }),
        "ls" => json!({
            "type": "object",
            "properties": {
                "i": { "type": "integer", "minimum": 1 },
                "j": { "type": "integer", "minimum": 1 },
                "pairing": { "type": "integer" },
                "E": { "$ref": "#/$defs/pbw" },
                "F": { "$ref": "#/$defs/pbw" }
            },
            "required": ["i", "j", "pairing", "E", "F"],
            "additionalProperties": false
        }),
        "rootvec" => json!({
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "index": { "type": "integer", "minimum": 1 },
                    "i": { "type": "integer", "minimum": 1 },
                    "j": { "type": "integer", "minimum": 1 },
                    "root": { "type": "array", "items": { "type": "integer", "minimum": 0 } },
                    "E": { "$ref": "#/$defs/element" },
                    "F": { "$ref": "#/$defs/element" }
                },
                "required": ["index", "i", "j", "root", "E", "F"],
                "additionalProperties": false
            }
        }),
        "criteria" => json!({
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": { "type": "integer", "minimum": 1 },
                    "title": { "type": "string" },
                    "reports": { "type": "array", "items": { "$ref": "#/$defs/report" } },
                    "elapsed_ms": { "type": "integer", "minimum": 0 },
                    "budget_ms": { "type": "integer", "minimum": 0 }
                },
                "required": ["id", "title", "reports", "elapsed_ms", "budget_ms"],
                "additionalProperties": false
            }
        }),
        _ => return None,
    })
}

/// The schema for one output kind, self-contained.
pub fn schema(name: &str) -> Option<Value> {
    let mut s = body(name)?;
    let obj = s.as_object_mut().expect("schema bodies are objects");
    obj.insert("$schema".into(), json!("https://json-schema.org/draft/2020-12/schema"));
    obj.insert("$defs".into(), defs());
    Some(s)
}
