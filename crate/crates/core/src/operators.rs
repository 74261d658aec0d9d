//! The operator bank: symbolic expressions for every operator under
//! study, evaluated lazily at any truncation depth.
//!
//! Coordinate actions (Natural indexing unless noted):
//!
//! * `ScalarMult(a)`: x_k -> a x_k (either indexing)
//! * `UnilateralShift`: y_{k+1} = x_k, y_1 = 0; adjoint y_k = x_{k+1}
//! * `BilateralShift` (Integers): y_k = x_{k-1}
//! * `WeightedShift(w)`: y_{j+1} = w_j x_j, weights cycled
//! * `DiagonalUnitary` / `DiagonalSelfAdjoint`: x_k -> a_k x_k, cycled
//! * `DyadicExpand`: y_{2k} = x_k, zero elsewhere
//! * `OddExpand`: y_{2k-1} = x_k
//! * `DyadicCompress`: y_k = x_{2k}
//! * `OddCompress`: y_k = x_{2k-1}
//! * `BlockByIndicator(p, L, R)`: p L(p x) + (1-p) R((1-p) x)
//!
//! Coordinates whose images land beyond the truncation are dropped;
//! structural identities therefore hold on interior coordinates only.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraKind};
use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::linalg::C64;
use crate::oracle;
use crate::standard_module::{Indexing, ModuleVector};

#[derive(Debug, Clone, PartialEq)]
pub enum OperatorExpr {
    ScalarMult(AlgebraElement),
    UnilateralShift,
    BilateralShift,
    WeightedShift(Vec<AlgebraElement>),
    DiagonalUnitary(Vec<AlgebraElement>),
    DiagonalSelfAdjoint(Vec<AlgebraElement>),
    DyadicExpand,
    OddExpand,
    DyadicCompress,
    OddCompress,
    BlockByIndicator {
        indicator: AlgebraElement,
        left: Box<OperatorExpr>,
        right: Box<OperatorExpr>,
    },
    Adjoint(Box<OperatorExpr>),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
    Negate(Box<OperatorExpr>),
}

impl OperatorExpr {
    /// Diagonal of unitaries; validates each entry.
    pub fn diagonal_unitary(entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CoreError::ConfigError("empty diagonal".into()));
        }
        for e in &entries {
            let unit = AlgebraElement::unit(e.kind());
            let defect = e.star().mul(e)?.distance_to(&unit)?;
            if defect > 1e-8 {
                return Err(CoreError::PreconditionFailed(format!(
                    "diagonal entry is not unitary (||a*a - 1|| = {defect:.3e})"
                )));
            }
        }
        Ok(OperatorExpr::DiagonalUnitary(entries))
    }

    /// Diagonal of self-adjoint elements; validates each entry.
    pub fn diagonal_self_adjoint(entries: Vec<AlgebraElement>) -> Result<Self> {
        if entries.is_empty() {
            return Err(CoreError::ConfigError("empty diagonal".into()));
        }
        for e in &entries {
            if !e.is_self_adjoint_within(1e-9) {
                return Err(CoreError::PreconditionFailed(
                    "diagonal entry is not self-adjoint".into(),
                ));
            }
        }
        Ok(OperatorExpr::DiagonalSelfAdjoint(entries))
    }

    /// Weighted shift; weights must be finite in norm and nonempty.
    pub fn weighted_shift(weights: Vec<AlgebraElement>) -> Result<Self> {
        if weights.is_empty() {
            return Err(CoreError::ConfigError("empty weight list".into()));
        }
        for w in &weights {
            if !w.norm().is_finite() {
                return Err(CoreError::NonFiniteEntry { position: 0 });
            }
        }
        Ok(OperatorExpr::WeightedShift(weights))
    }

    /// Two-block operator over the decomposition induced by a step-kind
    /// projection.
    pub fn block_by_indicator(
        indicator: AlgebraElement,
        left: OperatorExpr,
        right: OperatorExpr,
    ) -> Result<Self> {
        if !matches!(indicator.kind(), AlgebraKind::EssentiallyBounded(_)) {
            return Err(CoreError::KindUnsupported(
                "block indicator must be a step-kind projection".into(),
            ));
        }
        if !indicator.is_projection(1e-9) {
            return Err(CoreError::PreconditionFailed(
                "block indicator is not a projection".into(),
            ));
        }
        Ok(OperatorExpr::BlockByIndicator {
            indicator,
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    pub fn sum(a: OperatorExpr, b: OperatorExpr) -> Self {
        OperatorExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn compose(a: OperatorExpr, b: OperatorExpr) -> Self {
        OperatorExpr::Compose(Box::new(a), Box::new(b))
    }

    pub fn negate(a: OperatorExpr) -> Self {
        OperatorExpr::Negate(Box::new(a))
    }

    /// F - aI.
    pub fn minus_scalar(&self, alpha: &AlgebraElement) -> Self {
        OperatorExpr::sum(
            self.clone(),
            OperatorExpr::negate(OperatorExpr::ScalarMult(alpha.clone())),
        )
    }

    /// Indexing family the operator acts on, or None when either works.
    pub fn required_indexing(&self) -> Option<&'static str> {
        match self {
            OperatorExpr::BilateralShift => Some("integers"),
            OperatorExpr::UnilateralShift
            | OperatorExpr::WeightedShift(_)
            | OperatorExpr::DiagonalUnitary(_)
            | OperatorExpr::DiagonalSelfAdjoint(_)
            | OperatorExpr::DyadicExpand
            | OperatorExpr::OddExpand
            | OperatorExpr::DyadicCompress
            | OperatorExpr::OddCompress
            | OperatorExpr::BlockByIndicator { .. } => Some("natural"),
            OperatorExpr::ScalarMult(_) => None,
            OperatorExpr::Adjoint(inner) | OperatorExpr::Negate(inner) => {
                inner.required_indexing()
            }
            OperatorExpr::Sum(a, b) | OperatorExpr::Compose(a, b) => {
                a.required_indexing().or_else(|| b.required_indexing())
            }
        }
    }

    fn indexing_compatible(&self, indexing: Indexing) -> bool {
        match self.required_indexing() {
            None => true,
            Some("integers") => matches!(indexing, Indexing::Integers { .. }),
            Some(_) => matches!(indexing, Indexing::Natural { .. }),
        }
    }

    /// Kind of the embedded coefficients, if any.
    pub fn embedded_kind(&self) -> Option<AlgebraKind> {
        match self {
            OperatorExpr::ScalarMult(a) => Some(a.kind()),
            OperatorExpr::WeightedShift(ws)
            | OperatorExpr::DiagonalUnitary(ws)
            | OperatorExpr::DiagonalSelfAdjoint(ws) => ws.first().map(|w| w.kind()),
            OperatorExpr::BlockByIndicator { indicator, .. } => Some(indicator.kind()),
            OperatorExpr::Adjoint(inner) | OperatorExpr::Negate(inner) => inner.embedded_kind(),
            OperatorExpr::Sum(a, b) | OperatorExpr::Compose(a, b) => {
                a.embedded_kind().or_else(|| b.embedded_kind())
            }
            _ => None,
        }
    }
}

/// Structural adjoint: rewrites to the adjoint expression, normalizing
/// double adjoints away. Primitives without a first-class adjoint node
/// (the shifts and the weighted shift) stay wrapped in `Adjoint`.
pub fn adjoint(op: &OperatorExpr) -> OperatorExpr {
    match op {
        OperatorExpr::ScalarMult(a) => OperatorExpr::ScalarMult(a.star()),
        OperatorExpr::DiagonalUnitary(ws) => {
            OperatorExpr::DiagonalUnitary(ws.iter().map(|w| w.star()).collect())
        }
        OperatorExpr::DiagonalSelfAdjoint(ws) => OperatorExpr::DiagonalSelfAdjoint(ws.clone()),
        OperatorExpr::DyadicExpand => OperatorExpr::DyadicCompress,
        OperatorExpr::DyadicCompress => OperatorExpr::DyadicExpand,
        OperatorExpr::OddExpand => OperatorExpr::OddCompress,
        OperatorExpr::OddCompress => OperatorExpr::OddExpand,
        OperatorExpr::BlockByIndicator {
            indicator,
            left,
            right,
        } => OperatorExpr::BlockByIndicator {
            indicator: indicator.clone(),
            left: Box::new(adjoint(left)),
            right: Box::new(adjoint(right)),
        },
        OperatorExpr::Adjoint(inner) => (**inner).clone(),
        OperatorExpr::Sum(a, b) => OperatorExpr::sum(adjoint(a), adjoint(b)),
        OperatorExpr::Compose(a, b) => OperatorExpr::compose(adjoint(b), adjoint(a)),
        OperatorExpr::Negate(a) => OperatorExpr::negate(adjoint(a)),
        OperatorExpr::UnilateralShift
        | OperatorExpr::BilateralShift
        | OperatorExpr::WeightedShift(_) => OperatorExpr::Adjoint(Box::new(op.clone())),
    }
}

fn cyclic<'a>(list: &'a [AlgebraElement], k: i64) -> &'a AlgebraElement {
    let len = list.len() as i64;
    let idx = ((k - 1) % len + len) % len;
    &list[idx as usize]
}

/// Apply the operator to a truncated module vector.
pub fn apply(op: &OperatorExpr, x: &ModuleVector) -> Result<ModuleVector> {
    if !op.indexing_compatible(x.indexing()) {
        return Err(CoreError::IndexingMismatch {
            left: format!("operator requires {:?}", op.required_indexing()),
            right: x.indexing().describe(),
        });
    }
    if let Some(kind) = op.embedded_kind() {
        if kind != x.kind() {
            return Err(CoreError::KindMismatch {
                left: kind.describe(),
                right: x.kind().describe(),
            });
        }
    }
    let indexing = x.indexing();
    let kind = x.kind();
    let mut y = ModuleVector::zero(kind, indexing);
    match op {
        OperatorExpr::ScalarMult(a) => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                let xk = x.entry(k).unwrap();
                y.set_entry(k, a.mul(xk)?)?;
            }
        }
        OperatorExpr::UnilateralShift => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                if let Some(xk) = x.entry(k - 1) {
                    y.set_entry(k, xk.clone())?;
                }
            }
        }
        OperatorExpr::BilateralShift => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                if let Some(xk) = x.entry(k - 1) {
                    y.set_entry(k, xk.clone())?;
                }
            }
        }
        OperatorExpr::WeightedShift(w) => {
            for slot in 0..indexing.count() {
                let j = indexing.index_at(slot);
                if let (Some(_), Some(xj)) = (indexing.position(j + 1), x.entry(j)) {
                    y.set_entry(j + 1, cyclic(w, j).mul(xj)?)?;
                }
            }
        }
        OperatorExpr::DiagonalUnitary(ws) | OperatorExpr::DiagonalSelfAdjoint(ws) => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                y.set_entry(k, cyclic(ws, k).mul(x.entry(k).unwrap())?)?;
            }
        }
        OperatorExpr::DyadicExpand => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                if indexing.position(2 * k).is_some() {
                    y.set_entry(2 * k, x.entry(k).unwrap().clone())?;
                }
            }
        }
        OperatorExpr::OddExpand => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                if indexing.position(2 * k - 1).is_some() {
                    y.set_entry(2 * k - 1, x.entry(k).unwrap().clone())?;
                }
            }
        }
        OperatorExpr::DyadicCompress => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                if let Some(x2k) = x.entry(2 * k) {
                    y.set_entry(k, x2k.clone())?;
                }
            }
        }
        OperatorExpr::OddCompress => {
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                if let Some(x2k1) = x.entry(2 * k - 1) {
                    y.set_entry(k, x2k1.clone())?;
                }
            }
        }
        OperatorExpr::BlockByIndicator {
            indicator,
            left,
            right,
        } => {
            let one = AlgebraElement::unit(kind);
            let comp = one.sub(indicator)?;
            let x_left = x.mul_left_by(indicator)?;
            let x_right = x.mul_left_by(&comp)?;
            let ly = apply(left, &x_left)?.mul_left_by(indicator)?;
            let ry = apply(right, &x_right)?.mul_left_by(&comp)?;
            y = ly.add(&ry)?;
        }
        OperatorExpr::Adjoint(inner) => {
            y = apply_adjoint(inner, x)?;
        }
        OperatorExpr::Sum(a, b) => {
            y = apply(a, x)?.add(&apply(b, x)?)?;
        }
        OperatorExpr::Compose(a, b) => {
            y = apply(a, &apply(b, x)?)?;
        }
        OperatorExpr::Negate(a) => {
            y = apply(a, x)?.scale(C64::new(-1.0, 0.0));
        }
    }
    Ok(y)
}

/// Action of inner* on x, for the primitives that keep an explicit
/// Adjoint wrapper; composites are rewritten first.
fn apply_adjoint(inner: &OperatorExpr, x: &ModuleVector) -> Result<ModuleVector> {
    let indexing = x.indexing();
    let kind = x.kind();
    match inner {
        OperatorExpr::UnilateralShift | OperatorExpr::BilateralShift => {
            let mut y = ModuleVector::zero(kind, indexing);
            for slot in 0..indexing.count() {
                let k = indexing.index_at(slot);
                if let Some(xk) = x.entry(k + 1) {
                    y.set_entry(k, xk.clone())?;
                }
            }
            Ok(y)
        }
        OperatorExpr::WeightedShift(w) => {
            let mut y = ModuleVector::zero(kind, indexing);
            for slot in 0..indexing.count() {
                let j = indexing.index_at(slot);
                if let Some(xj1) = x.entry(j + 1) {
                    y.set_entry(j, cyclic(w, j).star().mul(xj1)?)?;
                }
            }
            Ok(y)
        }
        other => apply(&adjoint(other), x),
    }
}

impl ModuleVector {
    /// Left multiplication a . x, coordinatewise a x_i. For the
    /// commutative kinds this coincides with the right action.
    pub fn mul_left_by(&self, a: &AlgebraElement) -> Result<Self> {
        let entries = self
            .entries()
            .iter()
            .map(|e| a.mul(e))
            .collect::<Result<Vec<_>>>()?;
        ModuleVector::from_entries(self.kind(), self.indexing(), entries)
    }
}

/// Compares flattened truncations of op and adjoint(op) on the interior
/// block.
pub fn is_self_adjoint(
    op: &OperatorExpr,
    kind: AlgebraKind,
    indexing: Indexing,
    tol: f64,
) -> Result<bool> {
    let a = oracle::flatten(op, kind, indexing)?;
    let b = oracle::flatten(&adjoint(op), kind, indexing)?;
    Ok(oracle::interior_deviation(&a, &b)? <= tol)
}

/// FF* = F*F on the interior block.
pub fn is_normal(
    op: &OperatorExpr,
    kind: AlgebraKind,
    indexing: Indexing,
    tol: f64,
) -> Result<bool> {
    let adj = adjoint(op);
    let lhs = OperatorExpr::compose(op.clone(), adj.clone());
    let rhs = OperatorExpr::compose(adj, op.clone());
    let a = oracle::flatten(&lhs, kind, indexing)?;
    let b = oracle::flatten(&rhs, kind, indexing)?;
    Ok(oracle::interior_deviation(&a, &b)? <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundsMethod {
    ClosedFormDiagonal,
    SampledSearch,
}

/// Two-sided enclosures for m(F) and M(F).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfAdjointBounds {
    pub m_lower: f64,
    pub m_upper: f64,
    pub big_m_lower: f64,
    pub big_m_upper: f64,
    pub method: BoundsMethod,
}

/// Bounds on m(F) = inf ||<Fx,x>|| and M(F) = sup ||<Fx,x>|| over unit
/// vectors.
///
/// Uniformly positive diagonal operators admit the closed form
/// m = min_k inf g_k, M = max_k sup g_k; anything else falls back to a
/// sampled search whose outer bounds are 0 and the flattened operator
/// norm.
pub fn self_adjoint_bounds(
    op: &OperatorExpr,
    kind: AlgebraKind,
    depth: usize,
    samples: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<SelfAdjointBounds> {
    let indexing = Indexing::natural(depth);
    if !is_self_adjoint(op, kind, indexing, 1e-8)? {
        return Err(CoreError::NotSelfAdjoint);
    }

    if let OperatorExpr::DiagonalSelfAdjoint(gs) = op {
        let uniformly_positive = gs.iter().all(|g| {
            let (lo, _) = g.abs_range();
            // self-adjoint entries are real; positivity means the real
            // part stays above eq_tol, which for real g equals |g| > 0
            // together with a positive sample.
            lo > cfg.eq_tol && g.grid_values().map_or(true, |v| v.iter().all(|c| c.re > 0.0))
        });
        if uniformly_positive {
            let mut m = f64::INFINITY;
            let mut big_m = 0.0f64;
            for g in gs {
                let (lo, hi) = g.abs_range();
                m = m.min(lo);
                big_m = big_m.max(hi);
            }
            return Ok(SelfAdjointBounds {
                m_lower: m,
                m_upper: m,
                big_m_lower: big_m,
                big_m_upper: big_m,
                method: BoundsMethod::ClosedFormDiagonal,
            });
        }
    }

    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best_max = 0.0f64;
    let mut best_min = f64::INFINITY;
    for _ in 0..samples.max(1) {
        let mut x = ModuleVector::zero(kind, indexing);
        for k in 1..=depth as i64 {
            let value = match kind {
                AlgebraKind::MatrixAlgebra(n) => {
                    let m = nalgebra::DMatrix::from_fn(n, n, |_, _| {
                        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                    });
                    AlgebraElement::from_matrix(kind, m)?
                }
                _ => {
                    let vals = (0..kind.fiber_count())
                        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                        .collect();
                    AlgebraElement::from_grid_values(kind, vals)?
                }
            };
            x.set_entry(k, value)?;
        }
        let norm = x.vector_norm();
        if norm <= 1e-12 {
            continue;
        }
        let x = x.scale(C64::new(1.0 / norm, 0.0));
        let fx = apply(op, &x)?;
        let pairing = fx.inner_product(&x)?.norm();
        best_max = best_max.max(pairing);
        best_min = best_min.min(pairing);
    }
    let ft = oracle::flatten(op, kind, indexing)?;
    let norm_estimate = oracle::max_singular(&ft);
    Ok(SelfAdjointBounds {
        m_lower: 0.0,
        m_upper: best_min.min(norm_estimate),
        big_m_lower: best_max,
        big_m_upper: norm_estimate.max(best_max),
        method: BoundsMethod::SampledSearch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    fn kind() -> AlgebraKind {
        AlgebraKind::step(16).unwrap()
    }

    fn idx() -> Indexing {
        Indexing::natural(32)
    }

    #[test]
    fn shift_moves_basis_vectors() {
        for k in 1..=10 {
            let ek = ModuleVector::basis_vector(k, kind(), idx()).unwrap();
            let sek = apply(&OperatorExpr::UnilateralShift, &ek).unwrap();
            let ek1 = ModuleVector::basis_vector(k + 1, kind(), idx()).unwrap();
            assert!(sek.sub(&ek1).unwrap().vector_norm() <= 1e-15);
        }
    }

    #[test]
    fn dyadic_compress_kills_odd_coordinates() {
        let e3 = ModuleVector::basis_vector(3, kind(), idx()).unwrap();
        let z = apply(&OperatorExpr::DyadicCompress, &e3).unwrap();
        assert!(z.vector_norm() <= 1e-15);
        let e6 = ModuleVector::basis_vector(6, kind(), idx()).unwrap();
        let z6 = apply(&OperatorExpr::DyadicCompress, &e6).unwrap();
        let e3b = ModuleVector::basis_vector(3, kind(), idx()).unwrap();
        assert!(z6.sub(&e3b).unwrap().vector_norm() <= 1e-15);
    }

    #[test]
    fn block_shift_acts_as_identity_on_left_support() {
        // S~ = [[1,0],[0,S]] w.r.t. chi_(0,1/2): a vector supported in
        // the left half is fixed.
        let chi = AlgebraElement::indicator(kind(), 0.0, 0.5).unwrap();
        let op = OperatorExpr::block_by_indicator(
            chi.clone(),
            OperatorExpr::ScalarMult(AlgebraElement::unit(kind())),
            OperatorExpr::UnilateralShift,
        )
        .unwrap();
        let f = chi.clone();
        let x = ModuleVector::basis_times(1, &f, idx()).unwrap();
        let y = apply(&op, &x).unwrap();
        assert!(y.sub(&x).unwrap().vector_norm() <= 1e-15);
    }

    #[test]
    fn adjoint_rewrites() {
        let i_unit = AlgebraElement::scalar(kind(), C64::new(0.0, 1.0));
        let adj = adjoint(&OperatorExpr::ScalarMult(i_unit));
        match adj {
            OperatorExpr::ScalarMult(a) => {
                let neg_i = AlgebraElement::scalar(kind(), C64::new(0.0, -1.0));
                assert!(a.distance_to(&neg_i).unwrap() <= 1e-15);
            }
            other => panic!("unexpected rewrite {other:?}"),
        }
        assert_eq!(adjoint(&OperatorExpr::DyadicExpand), OperatorExpr::DyadicCompress);
        assert_eq!(
            adjoint(&adjoint(&OperatorExpr::UnilateralShift)),
            OperatorExpr::UnilateralShift
        );
    }

    #[test]
    fn odd_compress_after_odd_expand_is_identity_on_interior() {
        let x = ModuleVector::basis_vector(5, kind(), idx()).unwrap();
        let expanded = apply(&OperatorExpr::OddExpand, &x).unwrap();
        let back = apply(&OperatorExpr::OddCompress, &expanded).unwrap();
        assert!(back.sub(&x).unwrap().vector_norm() <= 1e-15);
    }

    #[test]
    fn self_adjointness_classification() {
        let g = parse_expression("1 + t", AlgebraKind::continuous(32).unwrap()).unwrap();
        let diag = OperatorExpr::diagonal_self_adjoint(vec![g]).unwrap();
        assert!(is_self_adjoint(&diag, AlgebraKind::continuous(32).unwrap(), idx(), 1e-9).unwrap());

        let chi = AlgebraElement::indicator(kind(), 0.0, 0.5).unwrap();
        let proj_mult = OperatorExpr::ScalarMult(chi);
        assert!(is_self_adjoint(&proj_mult, kind(), idx(), 1e-9).unwrap());
        assert!(is_normal(&proj_mult, kind(), idx(), 1e-9).unwrap());

        assert!(!is_self_adjoint(&OperatorExpr::UnilateralShift, kind(), idx(), 1e-9).unwrap());
        // S S* and S* S differ at the first coordinate
        assert!(!is_normal(&OperatorExpr::UnilateralShift, kind(), idx(), 1e-9).unwrap());
    }

    #[test]
    fn bounds_closed_form_for_uniformly_positive_diagonal() {
        let ckind = AlgebraKind::continuous(64).unwrap();
        let g = parse_expression("1 + t", ckind).unwrap();
        let op = OperatorExpr::diagonal_self_adjoint(vec![g]).unwrap();
        let bounds =
            self_adjoint_bounds(&op, ckind, 16, 32, 7, &ToleranceConfig::default()).unwrap();
        assert_eq!(bounds.method, BoundsMethod::ClosedFormDiagonal);
        assert!((bounds.m_lower - 1.0).abs() <= 1e-12);
        assert!((bounds.big_m_upper - 2.0).abs() <= 1e-12);

        let two = AlgebraElement::scalar(ckind, C64::new(2.0, 0.0));
        let op2 = OperatorExpr::diagonal_self_adjoint(vec![two]).unwrap();
        let b2 = self_adjoint_bounds(&op2, ckind, 16, 8, 7, &ToleranceConfig::default()).unwrap();
        assert!((b2.m_lower - 2.0).abs() <= 1e-12 && (b2.big_m_upper - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn bounds_reject_non_self_adjoint() {
        assert!(matches!(
            self_adjoint_bounds(
                &OperatorExpr::UnilateralShift,
                kind(),
                16,
                8,
                7,
                &ToleranceConfig::default()
            ),
            Err(CoreError::NotSelfAdjoint)
        ));
    }

    #[test]
    fn sampled_bounds_bracket_closed_form() {
        let ckind = AlgebraKind::continuous(16).unwrap();
        let g = parse_expression("1 + t", ckind).unwrap();
        let op = OperatorExpr::diagonal_self_adjoint(vec![g]).unwrap();
        // force the sampled path by wrapping in a Sum with zero
        let zero = OperatorExpr::ScalarMult(AlgebraElement::zero(ckind));
        let wrapped = OperatorExpr::sum(op, zero);
        let b = self_adjoint_bounds(&wrapped, ckind, 16, 48, 11, &ToleranceConfig::default())
            .unwrap();
        assert_eq!(b.method, BoundsMethod::SampledSearch);
        assert!(b.m_lower <= 1.0 + 1e-9 && 1.0 <= b.m_upper + 1e-9);
        assert!(b.big_m_lower <= 2.0 + 1e-9 && 2.0 <= b.big_m_upper + 1e-9);
    }
}
