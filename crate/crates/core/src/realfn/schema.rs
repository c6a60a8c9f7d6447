//! JSON schema for expressions and sequences.
//!
//! Atoms: `{"atom":"const","value":"p/q"}`, `{"atom":"tau"}`,
//! `{"atom":"tau_pow","alpha":"p/q"}`, `{"atom":"eta","seq":{...}}`,
//! `{"atom":"pl","points":[["x","y"],...],"final_slope":"p/q"}`.
//! Nodes: `{"op":"add"|"join"|"meet"|"abs","args":[...]}` and
//! `{"op":"scale","lambda":"p/q","args":[f]}`.
//! Rationals are `"p"` or `"p/q"` strings, always reduced. Serialization is
//! canonical (sorted keys, no whitespace), so `serialize . parse` is the
//! identity on canonical text.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{Map, Value, json};
use std::str::FromStr;

use super::expr::{ExprError, FnExpr};
use super::rat::{Rat, fmt_rat, parse_rat};
use super::seq::{Seq, SeqError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

fn schema_err(msg: impl Into<String>) -> ParseError {
    ParseError::Schema(msg.into())
}

pub fn rat_to_value(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

pub fn rat_from_value(v: &Value) -> Result<Rat, ParseError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| schema_err(e.to_string())),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_integer(i.into()))
            } else if let Some(f) = n.as_f64() {
                parse_rat(&format!("{f}")).map_err(|e| schema_err(e.to_string()))
            } else {
                Err(schema_err(format!("not a rational: {n}")))
            }
        }
        other => Err(schema_err(format!("expected rational, got {other}"))),
    }
}

fn nat_to_value(n: &BigInt) -> Value {
    match n.to_u64().filter(|v| *v <= (1u64 << 53)) {
        Some(v) => json!(v),
        None => Value::String(n.to_string()),
    }
}

fn nat_from_value(v: &Value) -> Result<BigInt, ParseError> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(BigInt::from)
            .ok_or_else(|| schema_err(format!("expected natural, got {n}"))),
        Value::String(s) => {
            BigInt::from_str(s).map_err(|_| schema_err(format!("expected natural, got {s:?}")))
        }
        other => Err(schema_err(format!("expected natural, got {other}"))),
    }
}

pub fn seq_to_value(seq: &Seq) -> Value {
    use super::seq::SchemaParts::*;
    match seq.schema_parts() {
        Explicit(terms) => json!({
            "kind": "explicit",
            "terms": terms.iter().map(nat_to_value).collect::<Vec<_>>(),
        }),
        Affine(start, step) => json!({
            "kind": "affine",
            "start": nat_to_value(start),
            "step": nat_to_value(step),
        }),
        Geometric(start, ratio) => json!({
            "kind": "geometric",
            "start": nat_to_value(start),
            "ratio": nat_to_value(ratio),
        }),
        Derived(label) => {
            // derived rules have no finite description; emit a prefix that
            // parses back as an explicit sequence
            let prefix = seq.prefix(12).unwrap_or_default();
            json!({
                "kind": "explicit",
                "label": label,
                "terms": prefix.iter().map(nat_to_value).collect::<Vec<_>>(),
            })
        }
    }
}

pub fn seq_from_value(v: &Value) -> Result<Seq, ParseError> {
    let obj = v.as_object().ok_or_else(|| schema_err("seq must be an object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema_err("seq needs a \"kind\""))?;
    let get_nat = |key: &str| -> Result<u64, ParseError> {
        let raw = obj.get(key).ok_or_else(|| schema_err(format!("seq needs {key:?}")))?;
        nat_from_value(raw)?
            .to_u64()
            .ok_or_else(|| schema_err(format!("{key} too large")))
    };
    match kind {
        "explicit" => {
            let terms = obj
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| schema_err("explicit seq needs \"terms\""))?;
            let parsed = terms.iter().map(nat_from_value).collect::<Result<Vec<_>, _>>()?;
            Ok(Seq::explicit(parsed)?)
        }
        "affine" => Ok(Seq::affine(get_nat("start")?, get_nat("step")?)?),
        "geometric" => Ok(Seq::geometric(get_nat("start")?, get_nat("ratio")?)?),
        other => Err(schema_err(format!("unknown seq kind {other:?}"))),
    }
}

pub fn expr_to_value(f: &FnExpr) -> Value {
    match f {
        FnExpr::Const(c) => json!({"atom": "const", "value": rat_to_value(c)}),
        FnExpr::Tau => json!({"atom": "tau"}),
        FnExpr::TauPow(a) => json!({"atom": "tau_pow", "alpha": rat_to_value(a)}),
        FnExpr::Eta(e) => json!({"atom": "eta", "seq": seq_to_value(e.seq())}),
        FnExpr::Pl(p) => {
            let points: Vec<Value> = p
                .points()
                .map(|(x, y)| json!([fmt_rat(x), fmt_rat(y)]))
                .collect();
            json!({
                "atom": "pl",
                "points": points,
                "final_slope": rat_to_value(p.final_slope()),
            })
        }
        FnExpr::Add(f, g) => json!({"op": "add", "args": [expr_to_value(f), expr_to_value(g)]}),
        FnExpr::Scale(l, f) => {
            json!({"op": "scale", "lambda": rat_to_value(l), "args": [expr_to_value(f)]})
        }
        FnExpr::Join(f, g) => json!({"op": "join", "args": [expr_to_value(f), expr_to_value(g)]}),
        FnExpr::Meet(f, g) => json!({"op": "meet", "args": [expr_to_value(f), expr_to_value(g)]}),
        FnExpr::Abs(f) => json!({"op": "abs", "args": [expr_to_value(f)]}),
    }
}

pub fn expr_from_value(v: &Value) -> Result<FnExpr, ParseError> {
    let obj = v
        .as_object()
        .ok_or_else(|| schema_err("expression must be an object"))?;
    if let Some(atom) = obj.get("atom").and_then(Value::as_str) {
        return atom_from(atom, obj);
    }
    if let Some(op) = obj.get("op").and_then(Value::as_str) {
        return node_from(op, obj);
    }
    Err(schema_err("expression needs \"atom\" or \"op\""))
}

fn atom_from(atom: &str, obj: &Map<String, Value>) -> Result<FnExpr, ParseError> {
    match atom {
        "const" => {
            let v = obj.get("value").ok_or_else(|| schema_err("const needs \"value\""))?;
            Ok(FnExpr::constant(rat_from_value(v)?))
        }
        "tau" => Ok(FnExpr::tau()),
        "tau_pow" => {
            let a = obj.get("alpha").ok_or_else(|| schema_err("tau_pow needs \"alpha\""))?;
            Ok(FnExpr::tau_pow(rat_from_value(a)?)?)
        }
        "eta" => {
            let s = obj.get("seq").ok_or_else(|| schema_err("eta needs \"seq\""))?;
            Ok(FnExpr::eta(seq_from_value(s)?))
        }
        "pl" => {
            let pts = obj
                .get("points")
                .and_then(Value::as_array)
                .ok_or_else(|| schema_err("pl needs \"points\""))?;
            let mut points = Vec::with_capacity(pts.len());
            for p in pts {
                let pair = p
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| schema_err("pl points are [x, y] pairs"))?;
                points.push((rat_from_value(&pair[0])?, rat_from_value(&pair[1])?));
            }
            let fs = obj
                .get("final_slope")
                .ok_or_else(|| schema_err("pl needs \"final_slope\""))?;
            Ok(FnExpr::pl(points, rat_from_value(fs)?)?)
        }
        other => Err(schema_err(format!("unknown atom {other:?}"))),
    }
}

fn node_from(op: &str, obj: &Map<String, Value>) -> Result<FnExpr, ParseError> {
    let args = obj
        .get("args")
        .and_then(Value::as_array)
        .ok_or_else(|| schema_err("node needs \"args\""))?;
    let arity = |n: usize| -> Result<(), ParseError> {
        if args.len() == n {
            Ok(())
        } else {
            Err(schema_err(format!("{op} takes {n} argument(s), got {}", args.len())))
        }
    };
    match op {
        "add" => {
            arity(2)?;
            Ok(FnExpr::add(expr_from_value(&args[0])?, expr_from_value(&args[1])?))
        }
        "join" => {
            arity(2)?;
            Ok(FnExpr::join(expr_from_value(&args[0])?, expr_from_value(&args[1])?))
        }
        "meet" => {
            arity(2)?;
            Ok(FnExpr::meet(expr_from_value(&args[0])?, expr_from_value(&args[1])?))
        }
        "abs" => {
            arity(1)?;
            Ok(FnExpr::abs_of(expr_from_value(&args[0])?))
        }
        "scale" => {
            arity(1)?;
            let l = obj
                .get("lambda")
                .ok_or_else(|| schema_err("scale needs \"lambda\""))?;
            Ok(FnExpr::scale(rat_from_value(l)?, expr_from_value(&args[0])?))
        }
        other => Err(schema_err(format!("unknown op {other:?}"))),
    }
}

/// Parse an expression from JSON text.
pub fn parse(text: &str) -> Result<FnExpr, ParseError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    expr_from_value(&v)
}

/// Canonical JSON text for an expression.
pub fn serialize(f: &FnExpr) -> String {
    expr_to_value(f).to_string()
}

pub fn parse_seq(text: &str) -> Result<Seq, ParseError> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    seq_from_value(&v)
}

pub fn serialize_seq(s: &Seq) -> String {
    seq_to_value(s).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realfn::rat::{rat, rat_int};

    #[test]
    fn atoms_round_trip() {
        let texts = [
            r#"{"atom":"const","value":"-5/3"}"#,
            r#"{"atom":"tau"}"#,
            r#"{"alpha":"1/2","atom":"tau_pow"}"#,
            r#"{"atom":"eta","seq":{"kind":"affine","start":2,"step":2}}"#,
            r#"{"atom":"pl","final_slope":"1/2","points":[["0","1"],["4","5"]]}"#,
        ];
        for t in texts {
            let f = parse(t).unwrap();
            assert_eq!(serialize(&f), t, "canonical round trip for {t}");
        }
    }

    #[test]
    fn nodes_round_trip() {
        let f = FnExpr::add(
            FnExpr::scale(rat(-3, 2), FnExpr::tau()),
            FnExpr::join(
                FnExpr::constant(rat_int(1)),
                FnExpr::abs_of(FnExpr::meet(FnExpr::tau(), FnExpr::constant(rat(7, 3)))),
            ),
        );
        let text = serialize(&f);
        let back = parse(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(serialize(&back), text);
    }

    #[test]
    fn seq_kinds_round_trip() {
        for t in [
            r#"{"kind":"explicit","terms":[2,4,9]}"#,
            r#"{"kind":"affine","start":1,"step":3}"#,
            r#"{"kind":"geometric","ratio":2,"start":1}"#,
        ] {
            let s = parse_seq(t).unwrap();
            assert_eq!(serialize_seq(&s), t);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse("{").is_err());
        assert!(parse(r#"{"atom":"nope"}"#).is_err());
        assert!(parse(r#"{"atom":"tau_pow","alpha":"3/2"}"#).is_err());
        assert!(parse(r#"{"op":"add","args":[{"atom":"tau"}]}"#).is_err());
        assert!(parse_seq(r#"{"kind":"explicit","terms":[4,2]}"#).is_err());
        assert!(parse_seq(r#"{"kind":"affine","start":0,"step":1}"#).is_err());
    }

    #[test]
    fn numbers_accepted_for_rationals() {
        let f = parse(r#"{"atom":"const","value":3}"#).unwrap();
        assert_eq!(f, FnExpr::constant_int(3));
    }
}
