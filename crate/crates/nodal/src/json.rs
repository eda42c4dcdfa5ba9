//! JSON encodings of the core types.
//!
//! Integers that can grow without bound (Gram entries, determinants,
//! elementary divisors, group orders) are decimal strings. Rationals are
//! always `"p/q"`. Small counts stay plain JSON numbers.

use std::str::FromStr;

use nodal_core::classifier::{existence_status, CaseLabel, ClassificationVerdict, KodairaFibre};
use nodal_core::exact::rational_string;
use nodal_core::f2::{F2Subspace, ObstructionReport};
use nodal_core::invariants::{ContractionData, SurfaceInvariants};
use nodal_core::lattice::{GramMatrix, Signature, SmithForm};
use nodal_core::singularity::ResolutionString;
use nodal_core::trace::{Trace, TraceStep};
use nodal_core::{BigInt, BigRational, Error};
use serde_json::{json, Map, Value};

pub fn gram_to_json(g: &GramMatrix) -> Value {
    Value::Array(g.rows().map(|row| Value::Array(row.iter().map(|e| Value::String(e.to_string())).collect())).collect())
}

/// Accepts arrays of arrays whose entries are decimal strings or JSON
/// integers.
pub fn gram_from_json(v: &Value) -> Result<GramMatrix, Error> {
    let bad = |why: &str| Error::MalformedGram(why.to_string());
    let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("each row must be an array"))?;
        let mut parsed = Vec::with_capacity(row.len());
        for e in row {
            let n = match e {
                Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| bad(&format!("not an integer: {s:?}")))?,
                Value::Number(n) if n.is_i64() => BigInt::from(n.as_i64().unwrap()),
                Value::Number(n) if n.is_u64() => BigInt::from(n.as_u64().unwrap()),
                other => return Err(bad(&format!("not an integer: {other}"))),
            };
            parsed.push(n);
        }
        out.push(parsed);
    }
    GramMatrix::from_rows(out)
}

pub fn gram_from_str(s: &str) -> Result<GramMatrix, Error> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::MalformedGram(format!("invalid JSON: {e}")))?;
    gram_from_json(&v)
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(rational_string(r))
}

pub fn integer(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn signature(s: &Signature) -> Value {
    json!({ "positive": s.positive, "negative": s.negative, "zero": s.zero })
}

pub fn smith(s: &SmithForm) -> Value {
    Value::Array(s.elementary_divisors.iter().map(integer).collect())
}

pub fn resolution(s: &ResolutionString) -> Value {
    json!({
        "self_intersections": s.self_intersections,
        "discrepancies": s.discrepancies.iter().map(rational).collect::<Vec<_>>(),
        "dsq": rational(&s.dsq),
        "group_order": s.group_order.as_ref().map(integer),
        "rational_double_point": s.is_rational_double_point(),
    })
}

pub fn invariants(x: &SurfaceInvariants) -> Value {
    json!({
        "q": x.q,
        "pg": x.pg,
        "h11": x.h11,
        "ksq": x.ksq(),
        "euler": x.euler(),
        "b1": x.b1(),
        "b2": x.b2(),
    })
}

pub fn contraction(c: &ContractionData) -> Value {
    json!({
        "minimal": invariants(&c.x),
        "mu": c.mu,
        "euler_s": c.euler_s(),
        "ksq_s": c.ksq_s(),
        "orbifold_euler": rational(&c.orbifold_euler()),
    })
}

pub fn subspace(s: &F2Subspace) -> Value {
    Value::Array(s.basis().iter().map(|v| Value::String(v.to_string())).collect())
}

pub fn obstruction(r: &ObstructionReport) -> Value {
    json!({
        "mu": r.mu,
        "ambient_rank": r.ambient_rank,
        "min_kernel_dim": r.min_kernel_dim,
        "feasible": r.feasible,
        "witness": r.witness.as_ref().map(subspace),
        "note": r.note,
    })
}

fn pairs(kv: &[(String, String)]) -> Value {
    Value::Object(kv.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
}

pub fn trace_step(s: &TraceStep) -> Value {
    json!({
        "step": s.step,
        "operation": s.operation,
        "inputs": pairs(&s.inputs),
        "outputs": pairs(&s.outputs),
        "citation": s.citation.as_str(),
    })
}

pub fn trace(t: &Trace) -> Value {
    Value::Array(t.steps().iter().map(trace_step).collect())
}

pub fn case(c: &CaseLabel) -> Value {
    let mut m = Map::new();
    m.insert("tag".into(), Value::String(c.tag.as_str().into()));
    m.insert("ksq".into(), c.ksq.map_or(Value::Null, Value::from));
    m.insert("label".into(), Value::String(c.to_string()));
    m.insert("attributes".into(), pairs(&c.attributes));
    if let Ok(status) = existence_status(c) {
        m.insert("existence".into(), Value::String(status.as_str().into()));
    }
    Value::Object(m)
}

pub fn verdict(v: &ClassificationVerdict) -> Value {
    json!({
        "cases": v.cases.iter().map(case).collect::<Vec<_>>(),
        "excluded": v.is_excluded(),
    })
}

pub fn fibre(f: &KodairaFibre) -> Value {
    json!({ "type": f.kind.to_string(), "euler": f.euler, "nodal_capacity": f.nodal_capacity })
}
