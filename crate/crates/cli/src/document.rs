//! Query documents: JSON in, verdict JSON out.
//!
//! A query document carries an element literal, an operator literal, a
//! question, and optional configuration:
//!
//! ```json
//! {
//!   "element": {"kind": "continuous", "resolution": 256, "expr": "1"},
//!   "operator": {"node": "unilateral_shift"},
//!   "question": "full",
//!   "config": {"cross_check": true, "depth": 48, "ladder": [16, 32, 64]}
//! }
//! ```
//!
//! Tolerances resolve in precedence order: document config, then the
//! `--config` file, then the environment variables `GENSPECTRA_EQ_TOL`,
//! `GENSPECTRA_BOUNDARY_BAND`, `GENSPECTRA_ORACLE_SV_TOL`, then the
//! defaults.

use genspectra::algebra::AlgebraElement;
use genspectra::config::EngineConfig;
use genspectra::error::CoreError;
use genspectra::literal;
use genspectra::operators::OperatorExpr;
use genspectra::oracle;
use genspectra::spectra::{
    self, BoundedBelowEvidence, Certificate, DualityPair, ExpanderKind, Membership, ScreenOutcome,
    SpectrumVerdict,
};
use serde_json::{json, Value};

#[derive(Debug)]
pub struct QueryDocument {
    pub element: AlgebraElement,
    pub operator: OperatorExpr,
    pub question: String,
    pub index: Option<i64>,
    pub cross_check: bool,
    pub config: EngineConfig,
}

fn env_f64(name: &str) -> Option<f64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

/// Apply tolerance overrides from the environment, then from an
/// optional config-file JSON object (which wins), then from the
/// document's own config object (which wins over both).
pub fn resolve_config(
    doc_config: Option<&Value>,
    file_config: Option<&Value>,
) -> Result<EngineConfig, CoreError> {
    let mut cfg = EngineConfig::default();
    if let Some(v) = env_f64("GENSPECTRA_EQ_TOL") {
        cfg.tol.eq_tol = v;
    }
    if let Some(v) = env_f64("GENSPECTRA_BOUNDARY_BAND") {
        cfg.tol.boundary_band = v;
    }
    if let Some(v) = env_f64("GENSPECTRA_ORACLE_SV_TOL") {
        cfg.tol.oracle_sv_tol = v;
    }
    for source in [file_config, doc_config].into_iter().flatten() {
        let obj = source
            .as_object()
            .ok_or_else(|| CoreError::ConfigError("config must be an object".into()))?;
        if let Some(v) = obj.get("eq_tol").and_then(Value::as_f64) {
            cfg.tol.eq_tol = v;
        }
        if let Some(v) = obj.get("boundary_band").and_then(Value::as_f64) {
            cfg.tol.boundary_band = v;
        }
        if let Some(v) = obj.get("oracle_sv_tol").and_then(Value::as_f64) {
            cfg.tol.oracle_sv_tol = v;
        }
        if let Some(v) = obj.get("depth").and_then(Value::as_u64) {
            cfg.depth = v as usize;
        }
        if let Some(v) = obj.get("bilateral_half").and_then(Value::as_u64) {
            cfg.bilateral_half = v as usize;
        }
        if let Some(v) = obj.get("seed").and_then(Value::as_u64) {
            cfg.seed = v;
        }
        if let Some(arr) = obj.get("ladder").and_then(Value::as_array) {
            let ladder: Option<Vec<usize>> =
                arr.iter().map(|x| x.as_u64().map(|u| u as usize)).collect();
            cfg.sv_ladder = ladder
                .ok_or_else(|| CoreError::ConfigError("ladder entries must be integers".into()))?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl QueryDocument {
    pub fn from_value(v: &Value, file_config: Option<&Value>) -> Result<Self, CoreError> {
        let obj = v
            .as_object()
            .ok_or_else(|| CoreError::ConfigError("query document must be an object".into()))?;
        let element = literal::element_from_value(
            obj.get("element")
                .ok_or_else(|| CoreError::ConfigError("missing \"element\"".into()))?,
        )?;
        let operator = literal::operator_from_value(
            obj.get("operator")
                .ok_or_else(|| CoreError::ConfigError("missing \"operator\"".into()))?,
        )?;
        let question = obj
            .get("question")
            .and_then(Value::as_str)
            .unwrap_or("full")
            .to_string();
        let index = obj.get("index").and_then(Value::as_i64);
        let cross_check = obj
            .get("config")
            .and_then(|c| c.get("cross_check"))
            .and_then(Value::as_bool)
            .unwrap_or(false);
        let config = resolve_config(obj.get("config"), file_config)?;
        Ok(QueryDocument {
            element,
            operator,
            question,
            index,
            cross_check,
            config,
        })
    }
}

#[derive(Debug)]
pub struct CheckOutput {
    pub report: Value,
    pub exit_code: i32,
}

fn exit_for(m: Membership) -> i32 {
    match m {
        Membership::Out => 0,
        Membership::In => 1,
        Membership::BoundaryIndeterminate => 2,
    }
}

fn expander_kind_of(op: &OperatorExpr) -> Option<ExpanderKind> {
    match op {
        OperatorExpr::DyadicExpand => Some(ExpanderKind::DyadicExpand),
        OperatorExpr::OddExpand => Some(ExpanderKind::OddExpand),
        OperatorExpr::DyadicCompress => Some(ExpanderKind::DyadicCompress),
        OperatorExpr::OddCompress => Some(ExpanderKind::OddCompress),
        OperatorExpr::BlockByIndicator { left, right, .. } => match (&**left, &**right) {
            (OperatorExpr::OddExpand, OperatorExpr::DyadicExpand) => {
                Some(ExpanderKind::BlockExpand)
            }
            (OperatorExpr::OddCompress, OperatorExpr::DyadicCompress) => {
                Some(ExpanderKind::BlockCompress)
            }
            _ => None,
        },
        _ => None,
    }
}

fn is_block_shift(op: &OperatorExpr) -> bool {
    matches!(
        op,
        OperatorExpr::BlockByIndicator { left, right, .. }
            if matches!(&**left, OperatorExpr::ScalarMult(_))
                && matches!(&**right, OperatorExpr::UnilateralShift)
    )
}

/// Route a document to the predicate that answers it.
pub fn run_check(doc: &QueryDocument) -> Result<CheckOutput, CoreError> {
    let cfg = &doc.config;
    let alpha = &doc.element;
    let verdict: SpectrumVerdict = match (&doc.operator, doc.question.as_str()) {
        (OperatorExpr::UnilateralShift, "full") => {
            if alpha.kind().is_matrix() {
                spectra::mn_shift_spectrum(alpha, cfg)?
            } else {
                spectra::unilateral_shift_spectrum(alpha, cfg)?
            }
        }
        (OperatorExpr::UnilateralShift, "point") => {
            spectra::unilateral_shift_point_spectrum(alpha, cfg)?
        }
        (OperatorExpr::UnilateralShift, "commutative") => {
            spectra::shift_spectrum_commutative(alpha, cfg)?
        }
        (OperatorExpr::BilateralShift, "full") => spectra::bilateral_shift_spectrum(alpha, cfg)?,
        (OperatorExpr::BilateralShift, "point") => {
            spectra::bilateral_shift_point_spectrum(alpha, cfg)?
        }
        (OperatorExpr::DiagonalUnitary(entries), "full") => {
            spectra::diagonal_unitary_spectrum(alpha, entries, cfg)?
        }
        (op @ OperatorExpr::DiagonalSelfAdjoint(_), "envelope") => {
            spectra::selfadjoint_spectrum_envelope(op, alpha, cfg)?
        }
        (op @ OperatorExpr::DiagonalSelfAdjoint(_), "skew-bound") => {
            spectra::skew_resolvent_bound(op, alpha, cfg.depth, cfg)?
        }
        (op @ OperatorExpr::DiagonalSelfAdjoint(_), "full") => {
            spectra::bounded_below_implies_invertible(op, alpha, &cfg.sv_ladder, cfg)?
        }
        (op, "approx") => spectra::approx_point_membership(op, alpha, &cfg.sv_ladder, cfg)?,
        (op, "residual-duality") => {
            let holds = spectra::residual_point_duality(
                op,
                alpha,
                cfg.depth.max(32),
                &cfg.sv_ladder,
                BoundedBelowEvidence::OracleCertify,
                cfg,
            )?;
            let report = json!({"question": "residual-duality", "holds": holds});
            return Ok(CheckOutput {
                report,
                exit_code: if holds { 0 } else { 3 },
            });
        }
        (_, "unitary-screen") => {
            let outcome = spectra::unitary_norm_screen(alpha, cfg)?;
            let (report, exit_code) = match outcome {
                ScreenOutcome::Out { reason } => (
                    json!({"question": "unitary-screen", "membership": "out", "reason": reason}),
                    0,
                ),
                ScreenOutcome::Inconclusive => (
                    json!({"question": "unitary-screen", "membership": "inconclusive"}),
                    2,
                ),
            };
            return Ok(CheckOutput { report, exit_code });
        }
        (op, question @ ("full" | "point")) => {
            if let Some(ek) = expander_kind_of(op) {
                if question == "full" {
                    spectra::expander_spectra(ek, alpha, cfg)?
                } else {
                    spectra::expander_point_spectra(ek, alpha, cfg)?
                }
            } else if is_block_shift(op) && question == "full" {
                spectra::block_shift_spectrum(alpha, cfg)?
            } else if let OperatorExpr::WeightedShift(weights) = op {
                if question == "point" {
                    let j = doc.index.unwrap_or(1);
                    spectra::weighted_shift_kernel_witness(alpha, weights, j, cfg)?
                } else {
                    return Err(CoreError::ConfigError(
                        "weighted shifts answer the \"point\" question (kernel witnesses)".into(),
                    ));
                }
            } else {
                return Err(CoreError::ConfigError(format!(
                    "no closed-form rule for this operator and question \"{question}\"; use \
                     \"approx\" for oracle-only evidence"
                )));
            }
        }
        (_, other) => {
            return Err(CoreError::ConfigError(format!(
                "unknown question \"{other}\""
            )));
        }
    };

    let oracle_report = if doc.cross_check {
        Some(oracle::bounded_below_ladder(
            &doc.operator,
            alpha,
            &cfg.sv_ladder,
            &cfg.tol,
        )?)
    } else {
        None
    };
    let report = literal::verdict_to_value(&verdict, oracle_report.as_ref());
    Ok(CheckOutput {
        report,
        exit_code: exit_for(verdict.membership),
    })
}

/// Extract the witness certificate for witness-producing rules.
pub fn run_witness(doc: &QueryDocument) -> Result<CheckOutput, CoreError> {
    let cfg = &doc.config;
    let alpha = &doc.element;
    let certificate: Certificate = match (&doc.operator, doc.question.as_str()) {
        (OperatorExpr::UnilateralShift, "cokernel") => {
            spectra::shift_cokernel_witness(alpha, cfg.depth, cfg)?
        }
        (OperatorExpr::UnilateralShift, "resolvent") => {
            spectra::shift_resolvent_solution(alpha, doc.index.unwrap_or(1), cfg.depth.max(64), cfg)?
        }
        (op, _) => {
            let verdict = if let Some(ek) = expander_kind_of(op) {
                match doc.question.as_str() {
                    "full" => spectra::expander_spectra(ek, alpha, cfg)?,
                    _ => spectra::expander_point_spectra(ek, alpha, cfg)?,
                }
            } else if let OperatorExpr::WeightedShift(weights) = op {
                spectra::weighted_shift_kernel_witness(alpha, weights, doc.index.unwrap_or(1), cfg)?
            } else if is_block_shift(op) {
                spectra::block_shift_spectrum(alpha, cfg)?
            } else {
                return Err(CoreError::ConfigError(
                    "no witness-producing rule for this operator".into(),
                ));
            };
            if verdict.membership != Membership::In {
                return Err(CoreError::NotApplicable(format!(
                    "verdict is {:?}; no witness",
                    verdict.membership
                )));
            }
            verdict.certificate
        }
    };
    match &certificate {
        Certificate::KernelWitness { .. }
        | Certificate::CokernelWitness { .. }
        | Certificate::ResolventSolution { .. } => Ok(CheckOutput {
            report: genspectra::literal::certificate_to_value(&certificate),
            exit_code: 1,
        }),
        _ => Err(CoreError::NotApplicable(
            "the applicable rule is not witness-producing for this input".into(),
        )),
    }
}

/// Per-depth singular values of the sections of (aI - op), as CSV.
pub fn run_oracle_dump(doc: &QueryDocument, depths: &[usize]) -> Result<String, CoreError> {
    let mut out = String::from("depth,fiber,sigma_min\n");
    let shifted = doc.operator.minus_scalar(&doc.element);
    for &d in depths {
        let indexing = match doc.operator.required_indexing() {
            Some("integers") => genspectra::standard_module::Indexing::integers(d),
            _ => genspectra::standard_module::Indexing::natural(d),
        };
        let ft = oracle::flatten_refined(&shifted, doc.element.kind(), indexing)?;
        match &ft {
            oracle::FlattenedTruncation::Fibered { fibers, .. } => {
                for (f, m) in fibers.iter().enumerate() {
                    out.push_str(&format!(
                        "{d},{f},{:.12e}\n",
                        genspectra::linalg::sigma_min(m)
                    ));
                }
            }
            oracle::FlattenedTruncation::MatrixBlock { matrix, .. } => {
                out.push_str(&format!(
                    "{d},0,{:.12e}\n",
                    genspectra::linalg::sigma_min(matrix)
                ));
            }
        }
    }
    Ok(out)
}

/// Map a core error to the documented exit codes (>= 10).
pub fn error_exit_code(err: &CoreError) -> i32 {
    match err {
        CoreError::ParseError { .. } | CoreError::ConfigError(_) => 10,
        _ => 11,
    }
}

pub fn duality_pair_from_str(name: &str) -> Option<DualityPair> {
    match name {
        "shift" => Some(DualityPair::ShiftWithAdjoint),
        "dyadic" => Some(DualityPair::DyadicPair),
        "odd" => Some(DualityPair::OddPair),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(v: Value) -> QueryDocument {
        QueryDocument::from_value(&v, None).unwrap()
    }

    #[test]
    fn shift_check_unit_is_in() {
        let out = run_check(&doc(json!({
            "element": {"kind": "continuous", "resolution": 64, "expr": "1"},
            "operator": {"node": "unilateral_shift"},
            "question": "full",
        })))
        .unwrap();
        assert_eq!(out.exit_code, 1);
        assert_eq!(out.report["membership"], "in");
    }

    #[test]
    fn shift_check_two_is_out() {
        let out = run_check(&doc(json!({
            "element": {"kind": "continuous", "resolution": 64, "expr": "2"},
            "operator": {"node": "unilateral_shift"},
            "question": "full",
        })))
        .unwrap();
        assert_eq!(out.exit_code, 0);
    }

    #[test]
    fn malformed_expression_is_a_parse_error() {
        let v = json!({
            "element": {"kind": "continuous", "resolution": 64, "expr": "t +"},
            "operator": {"node": "unilateral_shift"},
            "question": "full",
        });
        let err = QueryDocument::from_value(&v, None).unwrap_err();
        assert_eq!(error_exit_code(&err), 10);
        assert!(matches!(err, CoreError::ParseError { position: 3, .. }));
    }

    #[test]
    fn witness_for_compressor() {
        let out = run_witness(&doc(json!({
            "element": {"kind": "step", "resolution": 8, "expr": "0.5"},
            "operator": {"node": "dyadic_compress"},
            "question": "point",
        })))
        .unwrap();
        assert_eq!(out.report["type"], "kernel-witness");

        let err = run_witness(&doc(json!({
            "element": {"kind": "step", "resolution": 8, "expr": "3"},
            "operator": {"node": "dyadic_compress"},
            "question": "point",
        })))
        .unwrap_err();
        assert!(matches!(err, CoreError::NotApplicable(_)));
    }

    #[test]
    fn cokernel_witness_table() {
        let out = run_witness(&doc(json!({
            "element": {"kind": "step", "resolution": 8, "expr": "0.5"},
            "operator": {"node": "unilateral_shift"},
            "question": "cokernel",
        })))
        .unwrap();
        assert_eq!(out.report["type"], "cokernel-witness");
        assert!(out.report["max_pairing"].as_f64().unwrap() <= 1e-8);
    }

    #[test]
    fn oracle_dump_csv_shape() {
        let d = doc(json!({
            "element": {"kind": "step", "resolution": 4, "expr": "2"},
            "operator": {"node": "unilateral_shift"},
            "question": "full",
        }));
        let csv = run_oracle_dump(&d, &[8, 16]).unwrap();
        let lines: Vec<&str> = csv.trim().lines().collect();
        assert_eq!(lines[0], "depth,fiber,sigma_min");
        assert_eq!(lines.len(), 1 + 2 * 4);
    }

    #[test]
    fn config_precedence_document_over_default() {
        let v = json!({
            "element": {"kind": "step", "resolution": 4, "expr": "1"},
            "operator": {"node": "unilateral_shift"},
            "question": "full",
            "config": {"boundary_band": 0.25, "depth": 24},
        });
        let d = QueryDocument::from_value(&v, None).unwrap();
        assert_eq!(d.config.tol.boundary_band, 0.25);
        assert_eq!(d.config.depth, 24);
    }
}
