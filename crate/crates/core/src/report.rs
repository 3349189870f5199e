//! Deterministic JSON and CSV output.
//!
//! Objects are written with sorted keys and every float goes through
//! [`fmt_g`], which mimics C's `%.12g`.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::curvature::CurvatureTensor;

pub const SCHEMA_VERSION: &str = "1";

/// `%.12g`: 12 significant digits, trailing zeros stripped, exponent form
/// outside [1e-4, 1e12). Negative zero prints as `0`.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    const P: i32 = 12;
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `v` as pretty JSON with sorted keys and `%.12g` floats.
/// Non-finite floats have already become `null` inside `serde_json`.
pub fn to_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(v: &Value, level: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_g(n.as_f64().expect("f64 number")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (idx, item) in items.iter().enumerate() {
                indent(level + 1, out);
                write_value(item, level + 1, out);
                if idx + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(level, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (idx, key) in keys.iter().enumerate() {
                indent(level + 1, out);
                out.push_str(&Value::String((*key).clone()).to_string());
                out.push_str(": ");
                write_value(&map[*key], level + 1, out);
                if idx + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(level, out);
            out.push('}');
        }
    }
}

pub fn complex(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), float(z.re));
    m.insert("im".into(), float(z.im));
    Value::Object(m)
}

/// A float that stays a float in the output (2.0 prints as `2`, not `2.0`).
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Report envelope shared by every command.
pub fn envelope(command: &str, inputs: Value, results: Value, seed: Option<u64>) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), Value::String(SCHEMA_VERSION.into()));
    m.insert("command".into(), Value::String(command.into()));
    m.insert("inputs".into(), inputs);
    m.insert("results".into(), results);
    m.insert("tool_version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
    if let Some(seed) = seed {
        m.insert("seed".into(), Value::from(seed));
    }
    Value::Object(m)
}

/// Nonzero components of `r` (and of `hat` at the same slots) as 1-based rows.
/// Components with modulus ≤ `chop` are left out of both tables.
pub fn tensor_rows(r: &CurvatureTensor, hat: &CurvatureTensor, chop: f64) -> Vec<([usize; 4], Complex64, Complex64)> {
    let n = r.n();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let a = r.get(i, j, k, l);
                    let b = hat.get(i, j, k, l);
                    if a.norm() > chop || b.norm() > chop {
                        rows.push(([i + 1, j + 1, k + 1, l + 1], a, b));
                    }
                }
            }
        }
    }
    rows
}

/// CSV with a header row; fields are written verbatim (no quoting needed).
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_c() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (0.1 + 0.2, "0.3"),
            (1e-5, "1e-05"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (999999999999.5, "1e+12"),
            (6.02214076e23, "6.02214076e+23"),
            (-1e-300, "-1e-300"),
            (f64::NAN, "nan"),
        ];
        for (x, s) in cases {
            assert_eq!(fmt_g(x), s, "{x:e}");
        }
    }

    #[test]
    fn json_is_sorted_and_formatted() {
        let v = serde_json::json!({"b": 1.0, "a": [0.5, {"z": true, "y": null}], "c": "x\"y", "d": 3});
        let s = to_json(&v);
        assert_eq!(
            s,
            "{\n  \"a\": [\n    0.5,\n    {\n      \"y\": null,\n      \"z\": true\n    }\n  ],\n  \"b\": 1,\n  \"c\": \"x\\\"y\",\n  \"d\": 3\n}\n"
        );
        assert_eq!(to_json(&float(f64::NAN)), "null\n");
    }
}
