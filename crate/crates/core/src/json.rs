//! JSON encodings of scalars, states, certificates, matrices and results.
//!
//! Exact scalars are strings `"p/q"` (a leading U+2212 minus is accepted) or
//! `{"order": n, "coeffs": ["p/q", ...]}` in the power basis of zeta_n.
//! Float scalars are `[re, im]` or plain numbers.

use std::collections::HashSet;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::classify::{Classification, RankWitness, ThreeQubitClass, Verdict};
use crate::elo::{ElementaryOp, EloSequence, SitedOp};
use crate::error::{Error, Result};
use crate::exactnum::{ExactScalar, FloatScalar, Rational, Scalar};
use crate::gje::ReductionResult;
use crate::linalg::Matrix;
use crate::state::MultiState;

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

fn rational_to_string(q: &Rational) -> String {
    if q.denom() == &1.into() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p"` or `"p/q"`, accepting U+2212 as a minus sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim().replace('\u{2212}', "-");
    if t.is_empty() {
        return Err(err("empty rational"));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = p
            .trim()
            .parse()
            .map_err(|_| err(format!("bad numerator in {s:?}")))?;
        let q: num_bigint::BigInt = q
            .trim()
            .parse()
            .map_err(|_| err(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::new(p, q))
    } else {
        Rational::from_str(&t).map_err(|_| err(format!("bad rational {s:?}")))
    }
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| err(format!("exact values must be integers or strings, got {n}"))),
        other => Err(err(format!("expected a rational, got {other}"))),
    }
}

impl JsonScalar for ExactScalar {
    fn to_json(&self) -> Value {
        match self.as_rational() {
            Some(q) => Value::String(rational_to_string(q)),
            None => json!({
                "order": self.order(),
                "coeffs": self.coeffs().iter().map(rational_to_string).collect::<Vec<_>>(),
            }),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(map) => {
                if map.keys().any(|k| k != "order" && k != "coeffs") {
                    return Err(err("scalar objects take only \"order\" and \"coeffs\""));
                }
                let order = map
                    .get("order")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| err("scalar object needs an integer \"order\""))?;
                let order = u32::try_from(order).map_err(|_| Error::InvalidOrder(order))?;
                if order == 0 {
                    return Err(Error::InvalidOrder(0));
                }
                let coeffs = map
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| err("scalar object needs a \"coeffs\" array"))?
                    .iter()
                    .map(rational_from_json)
                    .collect::<Result<Vec<_>>>()?;
                ExactScalar::from_poly(order, &coeffs)
            }
            other => rational_from_json(other).map(ExactScalar::rational),
        }
    }
}

impl JsonScalar for FloatScalar {
    fn to_json(&self) -> Value {
        json!([self.0.re, self.0.im])
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                let re = parts[0].as_f64().ok_or_else(|| err("bad real part"))?;
                let im = parts[1].as_f64().ok_or_else(|| err("bad imaginary part"))?;
                Ok(FloatScalar(Complex64::new(re, im)))
            }
            Value::Number(n) => Ok(FloatScalar(Complex64::new(
                n.as_f64().ok_or_else(|| err("bad number"))?,
                0.0,
            ))),
            other => ExactScalar::from_json(other).map(|e| FloatScalar(e.approx())),
        }
    }
}

/// Parses a scalar given on a command line: JSON if it looks like JSON,
/// otherwise a bare rational.
pub fn parse_scalar_str(s: &str) -> Result<ExactScalar> {
    let t = s.trim();
    if t.starts_with(['{', '[', '"']) {
        let v: Value = serde_json::from_str(t).map_err(|e| err(e.to_string()))?;
        ExactScalar::from_json(&v)
    } else {
        parse_rational(t).map(ExactScalar::rational)
    }
}

fn usize_from(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| err(format!("{what} must be a nonnegative integer, got {v}")))
}

fn usize_list(v: &Value, what: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| err(format!("{what} must be an array")))?
        .iter()
        .map(|x| usize_from(x, what))
        .collect()
}

fn field<'a>(map: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    map.get(key)
        .ok_or_else(|| err(format!("missing field {key:?}")))
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| err(format!("{what} must be an object")))
}

pub fn state_to_json<S: JsonScalar>(state: &MultiState<S>) -> Value {
    let terms: Vec<Value> = state
        .terms()
        .into_iter()
        .map(|(idx, amp)| json!({"idx": idx, "amp": amp.to_json()}))
        .collect();
    json!({"dims": state.dims(), "terms": terms})
}

pub fn state_from_json<S: JsonScalar>(v: &Value) -> Result<MultiState<S>> {
    let map = object(v, "state")?;
    let dims = usize_list(field(map, "dims")?, "dims")?;
    let terms = field(map, "terms")?
        .as_array()
        .ok_or_else(|| err("terms must be an array"))?;
    if terms.is_empty() {
        return Err(Error::ZeroState);
    }
    let mut seen = HashSet::new();
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let t = object(t, "term")?;
        let idx = usize_list(field(t, "idx")?, "idx")?;
        if !seen.insert(idx.clone()) {
            return Err(err(format!("duplicate term {idx:?}")));
        }
        parsed.push((idx, S::from_json(field(t, "amp")?)?));
    }
    MultiState::from_terms(dims, parsed)
}

pub fn op_to_json<S: JsonScalar>(op: &SitedOp<S>) -> Value {
    let (name, args) = match &op.op {
        ElementaryOp::Swap { i, j } => ("F", json!([i, j])),
        ElementaryOp::Scale { k, lambda } => ("S", json!([k, lambda.to_json()])),
        ElementaryOp::AddMul { i, lambda, j } => ("L", json!([i, lambda.to_json(), j])),
    };
    json!({"site": op.site, "op": name, "args": args})
}

pub fn op_from_json<S: JsonScalar>(v: &Value) -> Result<SitedOp<S>> {
    let map = object(v, "operation")?;
    let site = usize_from(field(map, "site")?, "site")?;
    if site == 0 {
        return Err(err("sites are numbered from 1"));
    }
    let name = field(map, "op")?
        .as_str()
        .ok_or_else(|| err("op must be a string"))?;
    let args = field(map, "args")?
        .as_array()
        .ok_or_else(|| err("args must be an array"))?;
    let want = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(err(format!(
                "{name} takes {n} arguments, got {}",
                args.len()
            )))
        }
    };
    let op = match name {
        "F" => {
            want(2)?;
            ElementaryOp::swap(
                usize_from(&args[0], "level")?,
                usize_from(&args[1], "level")?,
            )?
        }
        "S" => {
            want(2)?;
            ElementaryOp::scale(usize_from(&args[0], "level")?, S::from_json(&args[1])?)?
        }
        "L" => {
            want(3)?;
            ElementaryOp::add_mul(
                usize_from(&args[0], "level")?,
                S::from_json(&args[1])?,
                usize_from(&args[2], "level")?,
            )?
        }
        other => return Err(err(format!("unknown operation {other:?}"))),
    };
    Ok(SitedOp { site, op })
}

pub fn certificate_to_json<S: JsonScalar>(seq: &EloSequence<S>) -> Value {
    Value::Array(seq.iter().map(op_to_json).collect())
}

pub fn certificate_from_json<S: JsonScalar>(v: &Value) -> Result<EloSequence<S>> {
    let ops = v
        .as_array()
        .ok_or_else(|| err("certificate must be an array"))?;
    Ok(EloSequence::from_ops(
        ops.iter().map(op_from_json).collect::<Result<_>>()?,
    ))
}

pub fn matrix_to_json<S: JsonScalar>(m: &Matrix<S>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| m.get(i, j).to_json()).collect()))
            .collect(),
    )
}

/// Accepts an array of rows or `{"rows": [...]}`.
pub fn matrix_from_json<S: JsonScalar>(v: &Value) -> Result<Matrix<S>> {
    let rows = match v {
        Value::Object(map) => field(map, "rows")?,
        other => other,
    };
    let rows = rows
        .as_array()
        .ok_or_else(|| err("matrix must be an array of rows"))?;
    if rows.is_empty() {
        return Err(err("matrix has no rows"));
    }
    let parsed = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| err("matrix rows must be arrays"))?
                .iter()
                .map(S::from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed)
}

pub fn reduction_to_json<S: JsonScalar>(r: &ReductionResult<S>) -> Value {
    json!({
        "reduced": state_to_json(&r.reduced),
        "certificate": certificate_to_json(&r.certificate),
        "profile": r.profile,
        "converged": r.converged,
        "passes": r.passes,
    })
}

pub fn verdict_to_json<S: JsonScalar>(v: &Verdict<S>) -> Value {
    match v {
        Verdict::Equivalent { certificate } => {
            json!({"verdict": "equivalent", "certificate": certificate_to_json(certificate)})
        }
        Verdict::Inequivalent { witness } => json!({
            "verdict": "inequivalent",
            "rigorous": witness.is_rigorous(),
            "witness": witness,
        }),
        Verdict::Unknown { reason } => json!({"verdict": "unknown", "reason": reason}),
    }
}

pub fn verdict_from_json<S: JsonScalar>(v: &Value) -> Result<Verdict<S>> {
    let map = object(v, "verdict")?;
    match field(map, "verdict")?.as_str() {
        Some("equivalent") => Ok(Verdict::Equivalent {
            certificate: certificate_from_json(field(map, "certificate")?)?,
        }),
        Some("inequivalent") => Ok(Verdict::Inequivalent {
            witness: RankWitness::deserialize(field(map, "witness")?)
                .map_err(|e| err(e.to_string()))?,
        }),
        Some("unknown") => Ok(Verdict::Unknown {
            reason: field(map, "reason")?
                .as_str()
                .ok_or_else(|| err("reason must be a string"))?
                .to_string(),
        }),
        _ => Err(err("verdict must be equivalent, inequivalent or unknown")),
    }
}

pub fn classification_to_json<S: JsonScalar>(c: &Classification<S>) -> Value {
    json!({
        "class": c.class.label(),
        "certificate": c.certificate.as_ref().map(certificate_to_json),
    })
}

/// Parses `{"class": ..., "certificate": ...}` back into a label and an
/// optional certificate.
pub fn classification_from_json<S: JsonScalar>(
    v: &Value,
) -> Result<(ThreeQubitClass, Option<EloSequence<S>>)> {
    let map = object(v, "classification")?;
    let class = field(map, "class")?
        .as_str()
        .ok_or_else(|| err("class must be a string"))?
        .parse()?;
    let cert = match map.get("certificate") {
        None | Some(Value::Null) => None,
        Some(c) => Some(certificate_from_json(c)?),
    };
    Ok((class, cert))
}

/// Parses a JSON document from text.
pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| err(e.to_string()))
}
