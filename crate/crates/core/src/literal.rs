//! JSON literal formats for elements, module vectors, operators, and
//! verdicts.
//!
//! Element literals:
//! `{"kind":"continuous|step|matrix","resolution":n,"n":n,
//!   "expr":"...","values":[...],"matrix":[[..],..]}`
//! with exactly one of `expr`/`values`/`matrix` present. Scalars may be
//! written as numbers or `[re, im]` pairs; matrices as rows of pairs.
//!
//! Vector literals: `{"indexing":{"type":"natural","n":48},
//! "entries":[element literals]}` (type `integers` uses `half`).
//!
//! Operator literals mirror the constructor tree:
//! `{"node":"unilateral_shift"}`, `{"node":"scalar_mult","element":{..}}`,
//! `{"node":"sum","left":{..},"right":{..}}`, and so on.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::algebra::{AlgebraElement, AlgebraKind};
use crate::error::{CoreError, Result};
use crate::expr::parse_expression;
use crate::operators::OperatorExpr;
use crate::oracle::OracleReport;
use crate::spectra::{Certificate, Membership, SpectrumPart, SpectrumVerdict};
use crate::standard_module::{Indexing, ModuleVector};

type C64 = Complex64;

fn config_err(msg: impl Into<String>) -> CoreError {
    CoreError::ConfigError(msg.into())
}

fn parse_complex(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::new(
            n.as_f64().ok_or_else(|| config_err("bad number"))?,
            0.0,
        )),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| config_err("complex pair entries must be numbers"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| config_err("complex pair entries must be numbers"))?;
            Ok(C64::new(re, im))
        }
        _ => Err(config_err("expected number or [re, im] pair")),
    }
}

fn complex_to_value(c: C64) -> Value {
    json!([c.re, c.im])
}

/// Algebra kind from a literal: `"kind"` plus `"resolution"` or `"n"`.
pub fn kind_from_value(v: &Value) -> Result<AlgebraKind> {
    let obj = v
        .as_object()
        .ok_or_else(|| config_err("kind literal must be an object"))?;
    let name = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| config_err("missing \"kind\""))?;
    match name {
        "continuous" => {
            let res = obj
                .get("resolution")
                .and_then(Value::as_u64)
                .ok_or_else(|| config_err("continuous kind needs \"resolution\""))?;
            AlgebraKind::continuous(res as usize)
        }
        "step" => {
            let res = obj
                .get("resolution")
                .and_then(Value::as_u64)
                .ok_or_else(|| config_err("step kind needs \"resolution\""))?;
            AlgebraKind::step(res as usize)
        }
        "matrix" => {
            let n = obj
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| config_err("matrix kind needs \"n\""))?;
            AlgebraKind::matrix(n as usize)
        }
        other => Err(config_err(format!("unknown kind \"{other}\""))),
    }
}

/// Element from a literal object; the kind fields live inline.
pub fn element_from_value(v: &Value) -> Result<AlgebraElement> {
    let kind = kind_from_value(v)?;
    let obj = v.as_object().unwrap();
    let sources = ["expr", "values", "matrix"]
        .iter()
        .filter(|k| obj.contains_key(**k))
        .count();
    if sources != 1 {
        return Err(config_err(
            "element literal needs exactly one of \"expr\", \"values\", \"matrix\"",
        ));
    }
    if let Some(expr) = obj.get("expr") {
        let text = expr
            .as_str()
            .ok_or_else(|| config_err("\"expr\" must be a string"))?;
        return parse_expression(text, kind);
    }
    if let Some(values) = obj.get("values") {
        let arr = values
            .as_array()
            .ok_or_else(|| config_err("\"values\" must be an array"))?;
        let parsed = arr.iter().map(parse_complex).collect::<Result<Vec<_>>>()?;
        return AlgebraElement::from_grid_values(kind, parsed);
    }
    let rows = obj
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| config_err("\"matrix\" must be an array of rows"))?;
    let n = kind
        .matrix_dim()
        .ok_or_else(|| config_err("\"matrix\" requires the matrix kind"))?;
    if rows.len() != n {
        return Err(config_err(format!("expected {n} matrix rows")));
    }
    let mut m = DMatrix::zeros(n, n);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| config_err("matrix rows must be arrays"))?;
        if row.len() != n {
            return Err(config_err(format!("expected {n} entries per row")));
        }
        for (c, entry) in row.iter().enumerate() {
            m[(r, c)] = parse_complex(entry)?;
        }
    }
    AlgebraElement::from_matrix(kind, m)
}

pub fn element_to_value(e: &AlgebraElement) -> Value {
    let mut obj = Map::new();
    match e.kind() {
        AlgebraKind::ContinuousFunctions(g) => {
            obj.insert("kind".into(), json!("continuous"));
            obj.insert("resolution".into(), json!(g.resolution));
            obj.insert(
                "values".into(),
                Value::Array(
                    e.grid_values()
                        .unwrap()
                        .iter()
                        .map(|c| complex_to_value(*c))
                        .collect(),
                ),
            );
        }
        AlgebraKind::EssentiallyBounded(g) => {
            obj.insert("kind".into(), json!("step"));
            obj.insert("resolution".into(), json!(g.resolution));
            obj.insert(
                "values".into(),
                Value::Array(
                    e.grid_values()
                        .unwrap()
                        .iter()
                        .map(|c| complex_to_value(*c))
                        .collect(),
                ),
            );
        }
        AlgebraKind::MatrixAlgebra(n) => {
            obj.insert("kind".into(), json!("matrix"));
            obj.insert("n".into(), json!(n));
            let m = e.matrix().unwrap();
            let rows: Vec<Value> = (0..n)
                .map(|r| Value::Array((0..n).map(|c| complex_to_value(m[(r, c)])).collect()))
                .collect();
            obj.insert("matrix".into(), Value::Array(rows));
        }
    }
    Value::Object(obj)
}

pub fn indexing_from_value(v: &Value) -> Result<Indexing> {
    let obj = v
        .as_object()
        .ok_or_else(|| config_err("indexing literal must be an object"))?;
    match obj.get("type").and_then(Value::as_str) {
        Some("natural") => {
            let n = obj
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| config_err("natural indexing needs \"n\""))?;
            Ok(Indexing::natural(n as usize))
        }
        Some("integers") => {
            let half = obj
                .get("half")
                .or_else(|| obj.get("n"))
                .and_then(Value::as_u64)
                .ok_or_else(|| config_err("integers indexing needs \"half\""))?;
            Ok(Indexing::integers(half as usize))
        }
        _ => Err(config_err("indexing \"type\" must be natural or integers")),
    }
}

pub fn vector_from_value(v: &Value) -> Result<ModuleVector> {
    let obj = v
        .as_object()
        .ok_or_else(|| config_err("vector literal must be an object"))?;
    let indexing = indexing_from_value(
        obj.get("indexing")
            .ok_or_else(|| config_err("missing \"indexing\""))?,
    )?;
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| config_err("missing \"entries\""))?
        .iter()
        .map(element_from_value)
        .collect::<Result<Vec<_>>>()?;
    let kind = entries
        .first()
        .map(|e| e.kind())
        .ok_or_else(|| config_err("vector literal needs at least one entry"))?;
    ModuleVector::from_entries(kind, indexing, entries)
}

pub fn vector_to_value(x: &ModuleVector) -> Value {
    let indexing = match x.indexing() {
        Indexing::Natural { len } => json!({"type": "natural", "n": len}),
        Indexing::Integers { half } => json!({"type": "integers", "half": half}),
    };
    json!({
        "indexing": indexing,
        "entries": x.entries().iter().map(element_to_value).collect::<Vec<_>>(),
    })
}

/// Operator from a literal tree.
pub fn operator_from_value(v: &Value) -> Result<OperatorExpr> {
    let obj = v
        .as_object()
        .ok_or_else(|| config_err("operator literal must be an object"))?;
    let node = obj
        .get("node")
        .and_then(Value::as_str)
        .ok_or_else(|| config_err("missing \"node\""))?;
    let element = |key: &str| -> Result<AlgebraElement> {
        element_from_value(
            obj.get(key)
                .ok_or_else(|| config_err(format!("node {node} needs \"{key}\"")))?,
        )
    };
    let elements = |key: &str| -> Result<Vec<AlgebraElement>> {
        obj.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| config_err(format!("node {node} needs \"{key}\"")))?
            .iter()
            .map(element_from_value)
            .collect()
    };
    let sub = |key: &str| -> Result<OperatorExpr> {
        operator_from_value(
            obj.get(key)
                .ok_or_else(|| config_err(format!("node {node} needs \"{key}\"")))?,
        )
    };
    match node {
        "scalar_mult" => Ok(OperatorExpr::ScalarMult(element("element")?)),
        "unilateral_shift" | "shift" => Ok(OperatorExpr::UnilateralShift),
        "bilateral_shift" => Ok(OperatorExpr::BilateralShift),
        "weighted_shift" => OperatorExpr::weighted_shift(elements("weights")?),
        "diagonal_unitary" => OperatorExpr::diagonal_unitary(elements("entries")?),
        "diagonal_selfadjoint" => OperatorExpr::diagonal_self_adjoint(elements("entries")?),
        "dyadic_expand" => Ok(OperatorExpr::DyadicExpand),
        "odd_expand" => Ok(OperatorExpr::OddExpand),
        "dyadic_compress" => Ok(OperatorExpr::DyadicCompress),
        "odd_compress" => Ok(OperatorExpr::OddCompress),
        "block_by_indicator" => {
            OperatorExpr::block_by_indicator(element("indicator")?, sub("left")?, sub("right")?)
        }
        "adjoint" => Ok(OperatorExpr::Adjoint(Box::new(sub("inner")?))),
        "sum" => Ok(OperatorExpr::sum(sub("left")?, sub("right")?)),
        "compose" => Ok(OperatorExpr::compose(sub("left")?, sub("right")?)),
        "negate" => Ok(OperatorExpr::negate(sub("inner")?)),
        other => Err(config_err(format!("unknown operator node \"{other}\""))),
    }
}

pub fn operator_to_value(op: &OperatorExpr) -> Value {
    match op {
        OperatorExpr::ScalarMult(a) => {
            json!({"node": "scalar_mult", "element": element_to_value(a)})
        }
        OperatorExpr::UnilateralShift => json!({"node": "unilateral_shift"}),
        OperatorExpr::BilateralShift => json!({"node": "bilateral_shift"}),
        OperatorExpr::WeightedShift(w) => json!({
            "node": "weighted_shift",
            "weights": w.iter().map(element_to_value).collect::<Vec<_>>(),
        }),
        OperatorExpr::DiagonalUnitary(w) => json!({
            "node": "diagonal_unitary",
            "entries": w.iter().map(element_to_value).collect::<Vec<_>>(),
        }),
        OperatorExpr::DiagonalSelfAdjoint(w) => json!({
            "node": "diagonal_selfadjoint",
            "entries": w.iter().map(element_to_value).collect::<Vec<_>>(),
        }),
        OperatorExpr::DyadicExpand => json!({"node": "dyadic_expand"}),
        OperatorExpr::OddExpand => json!({"node": "odd_expand"}),
        OperatorExpr::DyadicCompress => json!({"node": "dyadic_compress"}),
        OperatorExpr::OddCompress => json!({"node": "odd_compress"}),
        OperatorExpr::BlockByIndicator {
            indicator,
            left,
            right,
        } => json!({
            "node": "block_by_indicator",
            "indicator": element_to_value(indicator),
            "left": operator_to_value(left),
            "right": operator_to_value(right),
        }),
        OperatorExpr::Adjoint(inner) => {
            json!({"node": "adjoint", "inner": operator_to_value(inner)})
        }
        OperatorExpr::Sum(a, b) => {
            json!({"node": "sum", "left": operator_to_value(a), "right": operator_to_value(b)})
        }
        OperatorExpr::Compose(a, b) => {
            json!({"node": "compose", "left": operator_to_value(a), "right": operator_to_value(b)})
        }
        OperatorExpr::Negate(a) => json!({"node": "negate", "inner": operator_to_value(a)}),
    }
}

pub fn membership_to_str(m: Membership) -> &'static str {
    match m {
        Membership::In => "in",
        Membership::Out => "out",
        Membership::BoundaryIndeterminate => "boundary-indeterminate",
    }
}

fn part_to_str(p: SpectrumPart) -> &'static str {
    match p {
        SpectrumPart::Full => "full",
        SpectrumPart::Point => "point",
        SpectrumPart::ResidualLike => "residual-like",
        SpectrumPart::ApproxPoint => "approx-point",
    }
}

pub fn oracle_report_to_value(r: &OracleReport) -> Value {
    serde_json::to_value(r).expect("report serializes")
}

pub fn certificate_to_value(c: &Certificate) -> Value {
    match c {
        Certificate::KernelWitness { vector, residual } => json!({
            "type": "kernel-witness",
            "vector": vector_to_value(vector),
            "residual": residual,
        }),
        Certificate::CokernelWitness {
            vector,
            max_pairing,
        } => json!({
            "type": "cokernel-witness",
            "vector": vector_to_value(vector),
            "max_pairing": max_pairing,
        }),
        Certificate::ResolventSolution {
            vector,
            target_index,
            residual,
            truncation_remainder,
            growth,
        } => json!({
            "type": "resolvent-solution",
            "vector": vector_to_value(vector),
            "target_index": target_index,
            "residual": residual,
            "truncation_remainder": truncation_remainder,
            "growth": serde_json::to_value(growth).expect("diagnostic serializes"),
        }),
        Certificate::InvertibilityBound { bound } => json!({
            "type": "invertibility-bound",
            "bound": bound,
        }),
        Certificate::Growth(g) => json!({
            "type": "growth-diagnostic",
            "growth": serde_json::to_value(g).expect("diagnostic serializes"),
        }),
        Certificate::Oracle(r) => json!({
            "type": "oracle-report",
            "report": oracle_report_to_value(r),
        }),
        Certificate::None { reason } => json!({
            "type": "none",
            "reason": reason,
        }),
    }
}

pub fn verdict_to_value(v: &SpectrumVerdict, oracle: Option<&OracleReport>) -> Value {
    let mut obj = Map::new();
    obj.insert("membership".into(), json!(membership_to_str(v.membership)));
    obj.insert("spectrum_part".into(), json!(part_to_str(v.spectrum_part)));
    obj.insert("rule".into(), json!(v.rule));
    obj.insert("certificate".into(), certificate_to_value(&v.certificate));
    if !v.notes.is_empty() {
        obj.insert("notes".into(), json!(v.notes));
    }
    if let Some(r) = oracle {
        obj.insert("oracle".into(), oracle_report_to_value(r));
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_literals_round_trip() {
        let lit = json!({
            "kind": "step", "resolution": 8,
            "values": [1, [0.5, -0.25], 0, 1, 1, 1, 2, [0, 1]],
        });
        let e = element_from_value(&lit).unwrap();
        let back = element_to_value(&e);
        let e2 = element_from_value(&back).unwrap();
        assert_eq!(e, e2);
    }

    #[test]
    fn expr_literal_and_exclusivity() {
        let lit = json!({"kind": "continuous", "resolution": 16, "expr": "t + 0.5"});
        let e = element_from_value(&lit).unwrap();
        assert!((e.norm() - 1.5).abs() <= 1e-12);

        let bad = json!({"kind": "continuous", "resolution": 16, "expr": "t", "values": [1]});
        assert!(element_from_value(&bad).is_err());
    }

    #[test]
    fn matrix_literal() {
        let lit = json!({
            "kind": "matrix", "n": 2,
            "matrix": [[2, 1], [1, 0]],
        });
        let e = element_from_value(&lit).unwrap();
        assert!((e.norm() - (1.0 + 2.0f64.sqrt())).abs() <= 1e-10);
    }

    #[test]
    fn operator_literals_round_trip() {
        let lit = json!({
            "node": "sum",
            "left": {"node": "unilateral_shift"},
            "right": {"node": "negate", "inner": {
                "node": "scalar_mult",
                "element": {"kind": "step", "resolution": 4, "values": [1, 1, 1, 1]},
            }},
        });
        let op = operator_from_value(&lit).unwrap();
        let back = operator_to_value(&op);
        let op2 = operator_from_value(&back).unwrap();
        assert_eq!(op, op2);
    }

    #[test]
    fn vector_round_trip() {
        let kind = AlgebraKind::step(4).unwrap();
        let x = ModuleVector::basis_vector(2, kind, Indexing::natural(4)).unwrap();
        let v = vector_to_value(&x);
        let x2 = vector_from_value(&v).unwrap();
        assert_eq!(x, x2);
    }
}
