//! JSON encodings for every value the command line reads or writes.
//!
//! Field elements are encoded as four decimal strings
//! `[num_a, den_a, num_b, den_b]` for (a + b√d) with a, b in lowest terms;
//! the ambient `d` lives at the document level. Parsing followed by printing
//! is byte-stable, and printing followed by parsing is structurally exact —
//! no floating point is involved at any stage.

use crate::classify::{Verdict, Witness};
use crate::cylinder::{CylinderData, CylinderDecomposition, DecompPattern};
use crate::enumerate::{SolutionH2, SolutionSet};
use crate::jinvariant::JInvariant;
use crate::qfield::{QElem, Rat};
use crate::surface::{Polygon, Surface, Vec2Q};
use crate::tensor::{TensorC4, WedgeQQ};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("{0}")]
    Shape(String),
}

fn shape(msg: impl Into<String>) -> JsonError {
    JsonError::Shape(msg.into())
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

fn bigint_to_string(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn bigint_from_value(v: &Value) -> Result<BigInt, JsonError> {
    let s = v.as_str().ok_or_else(|| shape("expected a decimal string"))?;
    BigInt::from_str(s).map_err(|_| shape(format!("not a decimal integer: {s:?}")))
}

pub fn rat_to_value(r: &Rat) -> Value {
    Value::Array(vec![bigint_to_string(r.numer()), bigint_to_string(r.denom())])
}

pub fn rat_from_value(v: &Value) -> Result<Rat, JsonError> {
    let arr = v.as_array().ok_or_else(|| shape("expected [num, den]"))?;
    if arr.len() != 2 {
        return Err(shape("rational must have exactly two entries"));
    }
    let n = bigint_from_value(&arr[0])?;
    let d = bigint_from_value(&arr[1])?;
    if d == BigInt::from(0) {
        return Err(shape("zero denominator"));
    }
    Ok(Rat::new(n, d))
}

pub fn qelem_to_value(x: &QElem) -> Value {
    Value::Array(vec![
        bigint_to_string(x.rational_part().numer()),
        bigint_to_string(x.rational_part().denom()),
        bigint_to_string(x.irrational_part().numer()),
        bigint_to_string(x.irrational_part().denom()),
    ])
}

pub fn qelem_from_value(v: &Value, d: u64) -> Result<QElem, JsonError> {
    let arr = v
        .as_array()
        .ok_or_else(|| shape("expected [num_a, den_a, num_b, den_b]"))?;
    if arr.len() != 4 {
        return Err(shape("field element must have exactly four entries"));
    }
    let na = bigint_from_value(&arr[0])?;
    let da = bigint_from_value(&arr[1])?;
    let nb = bigint_from_value(&arr[2])?;
    let db = bigint_from_value(&arr[3])?;
    if da == BigInt::from(0) || db == BigInt::from(0) {
        return Err(shape("zero denominator"));
    }
    Ok(QElem::new(Rat::new(na, da), Rat::new(nb, db), d))
}

fn vec2_to_value(v: &Vec2Q) -> Value {
    Value::Array(vec![qelem_to_value(&v.x), qelem_to_value(&v.y)])
}

fn vec2_from_value(v: &Value, d: u64) -> Result<Vec2Q, JsonError> {
    let arr = v.as_array().ok_or_else(|| shape("expected [x, y]"))?;
    if arr.len() != 2 {
        return Err(shape("vertex must have exactly two coordinates"));
    }
    Ok(Vec2Q::new(
        qelem_from_value(&arr[0], d)?,
        qelem_from_value(&arr[1], d)?,
    ))
}

pub fn surface_to_value(s: &Surface) -> Value {
    let polygons: Vec<Value> = s
        .polygons
        .iter()
        .map(|p| Value::Array(p.vertices.iter().map(vec2_to_value).collect()))
        .collect();
    let gluings: Vec<Value> = s
        .gluings
        .iter()
        .map(|&((pi, ei), (pj, ej))| json!([pi, ei, pj, ej]))
        .collect();
    json!({
        "d": if s.d == 0 { Value::Null } else { json!(s.d) },
        "polygons": polygons,
        "gluings": gluings,
    })
}

pub fn surface_from_value(v: &Value) -> Result<Surface, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape("expected a surface object"))?;
    let d = match obj.get("d") {
        None | Some(Value::Null) => 0,
        Some(x) => x.as_u64().ok_or_else(|| shape("d must be a positive integer or null"))?,
    };
    let polys = obj
        .get("polygons")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("missing polygons array"))?;
    let mut polygons = Vec::new();
    for p in polys {
        let verts = p.as_array().ok_or_else(|| shape("polygon must be an array"))?;
        let mut vs = Vec::new();
        for vv in verts {
            vs.push(vec2_from_value(vv, d)?);
        }
        polygons.push(Polygon::new(vs));
    }
    let glu = obj
        .get("gluings")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("missing gluings array"))?;
    let mut gluings = Vec::new();
    for g in glu {
        let arr = g.as_array().ok_or_else(|| shape("gluing must be an array"))?;
        if arr.len() != 4 {
            return Err(shape("gluing must be [pi, ei, pj, ej]"));
        }
        let mut idx = [0usize; 4];
        for (k, x) in arr.iter().enumerate() {
            idx[k] = x.as_u64().ok_or_else(|| shape("gluing index must be an integer"))?
                as usize;
        }
        gluings.push(((idx[0], idx[1]), (idx[2], idx[3])));
    }
    Ok(Surface::new(d, polygons, gluings))
}

pub fn surface_to_string(s: &Surface) -> String {
    serde_json::to_string_pretty(&surface_to_value(s)).expect("serializable")
}

pub fn surface_from_str(text: &str) -> Result<Surface, JsonError> {
    surface_from_value(&parse(text)?)
}

pub fn wedge_to_value(w: &WedgeQQ) -> Value {
    rat_to_value(&w.c)
}

pub fn tensor_to_value(t: &TensorC4) -> Value {
    Value::Array(vec![
        rat_to_value(&t.c1),
        rat_to_value(&t.c2),
        rat_to_value(&t.c3),
        rat_to_value(&t.c4),
    ])
}

pub fn jinvariant_to_value(j: &JInvariant) -> Value {
    json!({
        "jxx": wedge_to_value(&j.jxx),
        "jyy": wedge_to_value(&j.jyy),
        "jxy": tensor_to_value(&j.jxy),
    })
}

fn pattern_name(p: DecompPattern) -> &'static str {
    match p {
        DecompPattern::Single => "single",
        DecompPattern::TwoCylinder => "two-cylinder",
        DecompPattern::ThreeCylinder => "three-cylinder",
        DecompPattern::Other => "other",
    }
}

fn cylinder_to_value(c: &CylinderData) -> Value {
    json!({
        "width": qelem_to_value(&c.width),
        "height": qelem_to_value(&c.height),
        "twist": qelem_to_value(&c.twist),
    })
}

pub fn decomposition_to_value(d_ambient: u64, dec: &CylinderDecomposition) -> Value {
    let g = &dec.normalizer;
    json!({
        "d": if d_ambient == 0 { Value::Null } else { json!(d_ambient) },
        "direction": vec2_to_value(&dec.direction),
        "normalizer": [
            qelem_to_value(&g.a), qelem_to_value(&g.b),
            qelem_to_value(&g.c), qelem_to_value(&g.d),
        ],
        "twist_direction": vec2_to_value(&dec.twist_direction),
        "pattern": pattern_name(dec.pattern),
        "cylinders": dec.cylinders.iter().map(cylinder_to_value).collect::<Vec<_>>(),
    })
}

pub fn verdict_to_value(v: &Verdict) -> Value {
    match v {
        Verdict::Proved => json!({ "status": "proved", "witness": Value::Null }),
        Verdict::InconclusiveAtBound => {
            json!({ "status": "inconclusive", "witness": Value::Null })
        }
        Verdict::RefutedWithWitness(w) => {
            let witness = match w {
                Witness::Direction(dir) => json!({
                    "type": "direction",
                    "direction": vec2_to_value(dir),
                }),
                Witness::EquationResidual { equation, direction, residual } => json!({
                    "type": "equation-residual",
                    "equation": equation,
                    "direction": vec2_to_value(direction),
                    "residual": qelem_to_value(residual),
                }),
            };
            json!({ "status": "refuted", "witness": witness })
        }
    }
}

pub fn verdict_from_value(v: &Value, d: u64) -> Result<Verdict, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape("expected a verdict object"))?;
    let status = obj
        .get("status")
        .and_then(Value::as_str)
        .ok_or_else(|| shape("missing status"))?;
    match status {
        "proved" => Ok(Verdict::Proved),
        "inconclusive" => Ok(Verdict::InconclusiveAtBound),
        "refuted" => {
            let w = obj
                .get("witness")
                .and_then(Value::as_object)
                .ok_or_else(|| shape("refuted verdict needs a witness"))?;
            let kind = w
                .get("type")
                .and_then(Value::as_str)
                .ok_or_else(|| shape("witness needs a type"))?;
            let direction = vec2_from_value(
                w.get("direction").ok_or_else(|| shape("witness needs a direction"))?,
                d,
            )?;
            let witness = match kind {
                "direction" => Witness::Direction(direction),
                "equation-residual" => {
                    let equation = w
                        .get("equation")
                        .and_then(Value::as_str)
                        .ok_or_else(|| shape("missing equation"))?;
                    let residual = qelem_from_value(
                        w.get("residual").ok_or_else(|| shape("missing residual"))?,
                        d,
                    )?;
                    Witness::EquationResidual {
                        equation: intern_equation(equation)?,
                        direction,
                        residual,
                    }
                }
                other => return Err(shape(format!("unknown witness type {other:?}"))),
            };
            Ok(Verdict::RefutedWithWitness(witness))
        }
        other => Err(shape(format!("unknown verdict status {other:?}"))),
    }
}

/// Witness equations use static names; map the serialized text back to the
/// canonical one.
fn intern_equation(text: &str) -> Result<&'static str, JsonError> {
    const KNOWN: [&str; 3] = [
        "w1*conj(h1) = -w2*conj(h2)",
        "twist conjugation symmetry",
        "w1*conj(s1) = -w2*conj(s2)",
    ];
    KNOWN
        .iter()
        .find(|k| **k == text)
        .copied()
        .ok_or_else(|| shape(format!("unknown equation tag {text:?}")))
}

fn solution_to_value(s: &SolutionH2) -> Value {
    json!({
        "w1": qelem_to_value(&s.w1),
        "w2": qelem_to_value(&s.w2),
        "h1": qelem_to_value(&s.h1),
        "h2": qelem_to_value(&s.h2),
        "t1": qelem_to_value(&s.t1),
        "t2": qelem_to_value(&s.t2),
    })
}

fn solution_from_value(v: &Value, d: u64) -> Result<SolutionH2, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape("expected a solution object"))?;
    let get = |k: &str| -> Result<QElem, JsonError> {
        qelem_from_value(
            obj.get(k).ok_or_else(|| shape(format!("missing field {k}")))?,
            d,
        )
    };
    Ok(SolutionH2 {
        w1: get("w1")?,
        w2: get("w2")?,
        h1: get("h1")?,
        h2: get("h2")?,
        t1: get("t1")?,
        t2: get("t2")?,
    })
}

pub fn solution_set_to_value(s: &SolutionSet) -> Value {
    json!({
        "d": s.d,
        "c1": rat_to_value(&s.c1),
        "c2": rat_to_value(&s.c2),
        "box": s.box_bound,
        "count": s.count(),
        "solutions": s.solutions.iter().map(solution_to_value).collect::<Vec<_>>(),
    })
}

pub fn solution_set_from_value(v: &Value) -> Result<SolutionSet, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape("expected a solution set object"))?;
    let d = obj
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| shape("missing d"))?;
    let c1 = rat_from_value(obj.get("c1").ok_or_else(|| shape("missing c1"))?)?;
    let c2 = rat_from_value(obj.get("c2").ok_or_else(|| shape("missing c2"))?)?;
    let box_bound = obj
        .get("box")
        .and_then(Value::as_i64)
        .ok_or_else(|| shape("missing box"))?;
    let sols = obj
        .get("solutions")
        .and_then(Value::as_array)
        .ok_or_else(|| shape("missing solutions"))?;
    let mut solutions = Vec::new();
    for s in sols {
        solutions.push(solution_from_value(s, d)?);
    }
    Ok(SolutionSet { d, c1, c2, box_bound, solutions })
}

/// Deterministic compact printing with sorted keys; the canonical on-disk
/// form used by round-trip checks.
pub fn to_canonical_string(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut out = Map::new();
                let mut keys: Vec<&String> = m.keys().collect();
                keys.sort();
                for k in keys {
                    out.insert(k.clone(), sort(&m[k]));
                }
                Value::Object(out)
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            other => other.clone(),
        }
    }
    serde_json::to_string(&sort(v)).expect("serializable")
}

/// Parse an element triple "p,q,r" meaning (p + q√d)/r.
pub fn qelem_from_triple_str(s: &str, d: u64) -> Result<QElem, JsonError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(shape(format!("expected p,q,r triple, got {s:?}")));
    }
    let nums: Result<Vec<i64>, _> = parts.iter().map(|p| p.trim().parse::<i64>()).collect();
    let nums = nums.map_err(|_| shape(format!("triple entries must be integers: {s:?}")))?;
    if nums[2] == 0 {
        return Err(shape("triple denominator must be nonzero"));
    }
    Ok(QElem::from_triple(nums[0], nums[1], nums[2], d))
}

/// Parse a direction "px,py,qx,qy" meaning (px + py√d, qx + qy√d).
pub fn direction_from_str(s: &str, d: u64) -> Result<Vec2Q, JsonError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(shape(format!("expected px,py,qx,qy, got {s:?}")));
    }
    let nums: Result<Vec<i64>, _> = parts.iter().map(|p| p.trim().parse::<i64>()).collect();
    let nums = nums.map_err(|_| shape(format!("direction entries must be integers: {s:?}")))?;
    Ok(Vec2Q::new(
        QElem::from_triple(nums[0], nums[1], 1, d),
        QElem::from_triple(nums[2], nums[3], 1, d),
    ))
}
