//! Predicates for the unilateral shift family: the closed-form range
//! rule inf|a| <= 1, the empty point spectrum, explicit cokernel
//! witnesses x = (g, a*g, a*^2 g, ...), resolvent solutions by forward
//! recurrence, the commutative resolvent characterization, the matrix
//! specialization, weighted shifts, and the two-block variant.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraKind};
use crate::config::EngineConfig;
use crate::error::{CoreError, Result};
use crate::operators::{apply, OperatorExpr};
use crate::standard_module::{
    sequence_membership_diagnostic, GrowthVerdict, Indexing, InversePowers, ModuleVector,
};

use super::{Certificate, Membership, SpectrumPart, SpectrumVerdict};

type C64 = Complex64;

fn require_function_kind(alpha: &AlgebraElement, routed: &str) -> Result<()> {
    if !alpha.kind().is_function() {
        return Err(CoreError::KindUnsupported(format!(
            "function-algebra rule; matrix algebras route to {routed}"
        )));
    }
    Ok(())
}

/// Growth diagnostic of the inverse-power sequence (a^-1, a^-2, ...).
fn inverse_power_diagnostic(
    alpha: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<crate::standard_module::GrowthDiagnostic> {
    let inv = alpha.try_invert(&cfg.tol)?;
    let mut powers = InversePowers::new(inv);
    sequence_membership_diagnostic(
        |k| powers.at(k),
        &cfg.deep_growth_depths,
        alpha.kind(),
        &cfg.tol,
    )
}

/// Full spectrum of the unilateral shift over a function algebra:
/// membership iff inf|a| <= 1, with the threshold inclusive (the
/// spectrum is norm-closed, so band cases resolve to In).
pub fn unilateral_shift_spectrum(
    alpha: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    require_function_kind(alpha, "mn_shift_spectrum")?;
    let d = alpha.inf_abs();
    let band = cfg.tol.boundary_band;
    if d > 1.0 + band {
        let growth = inverse_power_diagnostic(alpha, cfg)?;
        return Ok(SpectrumVerdict::new(
            Membership::Out,
            SpectrumPart::Full,
            Certificate::Growth(growth),
            "unilateral-shift-range",
        ));
    }
    if d < 1.0 - band {
        let certificate = shift_cokernel_witness(alpha, cfg.depth, cfg)?;
        return Ok(SpectrumVerdict::new(
            Membership::In,
            SpectrumPart::Full,
            certificate,
            "unilateral-shift-range",
        ));
    }
    Ok(SpectrumVerdict::new(
        Membership::In,
        SpectrumPart::Full,
        Certificate::None {
            reason: format!("inf|a| = {d} lies within the boundary band; the spectrum is closed"),
        },
        "unilateral-shift-closure",
    ))
}

/// The point spectrum of the unilateral shift is empty: the kernel
/// recursion a x_1 = 0, a x_{k+1} = x_k forces x = 0 coordinatewise.
pub fn unilateral_shift_point_spectrum(
    alpha: &AlgebraElement,
    _cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    require_function_kind(alpha, "mn_shift_spectrum")?;
    Ok(SpectrumVerdict::new(
        Membership::Out,
        SpectrumPart::Point,
        Certificate::None {
            reason: "kernel recursion forces x = 0".into(),
        },
        "unilateral-shift-point-empty",
    ))
}

/// Support indicator of {|a| < threshold} at grid scale; for the
/// continuous kind, falls back to the endpoints of the segment holding
/// the refined minimum when no node qualifies. Returns None when the
/// set is empty.
pub(crate) fn sublevel_indicator(
    alpha: &AlgebraElement,
    threshold: f64,
) -> Option<AlgebraElement> {
    let kind = alpha.kind();
    let values = alpha.grid_values()?;
    let mut mask = vec![C64::new(0.0, 0.0); values.len()];
    let mut any = false;
    for (i, v) in values.iter().enumerate() {
        if v.norm() < threshold {
            mask[i] = C64::new(1.0, 0.0);
            any = true;
        }
    }
    if !any {
        if let AlgebraKind::ContinuousFunctions(g) = kind {
            // interior dip: take the two nodes of the minimizing segment
            let samples = alpha.refined_abs_samples();
            let (mut best, mut best_val) = (0usize, f64::INFINITY);
            for (i, s) in samples.iter().enumerate() {
                if *s < best_val {
                    best = i;
                    best_val = *s;
                }
            }
            if best_val < threshold {
                let seg = (best / g.refinement_factor).min(values.len() - 2);
                mask[seg] = C64::new(1.0, 0.0);
                mask[seg + 1] = C64::new(1.0, 0.0);
                any = true;
            }
        }
    }
    if any {
        Some(AlgebraElement::from_grid_values(kind, mask).expect("mask matches grid"))
    } else {
        None
    }
}

/// Pairing max_k ||<(aI - F)e_k, x>|| over interior k.
pub(crate) fn max_cokernel_pairing(
    op: &OperatorExpr,
    alpha: &AlgebraElement,
    x: &ModuleVector,
) -> Result<f64> {
    let shifted = OperatorExpr::sum(
        OperatorExpr::ScalarMult(alpha.clone()),
        OperatorExpr::negate(op.clone()),
    );
    let indexing = x.indexing();
    let mut max_pairing = 0.0f64;
    for slot in 0..indexing.count() {
        let k = indexing.index_at(slot);
        if !indexing.is_interior(k) {
            continue;
        }
        let ek = ModuleVector::basis_vector(k, x.kind(), indexing)?;
        let image = apply(&shifted, &ek)?;
        max_pairing = max_pairing.max(image.inner_product(x)?.norm());
    }
    Ok(max_pairing)
}

/// Cokernel witness x = (g, a*g, a*^2 g, ...) for the unilateral shift
/// at inf|a| < 1, with g the indicator of {|a| <= 1 - eps},
/// eps = (1 - inf|a|)/2. The pairing <(aI - S)e_k, x> telescopes to
/// zero exactly for every interior k.
pub fn shift_cokernel_witness(
    alpha: &AlgebraElement,
    depth: usize,
    cfg: &EngineConfig,
) -> Result<Certificate> {
    require_function_kind(alpha, "mn_shift_spectrum")?;
    let d = alpha.inf_abs();
    let band = cfg.tol.boundary_band;
    if d >= 1.0 - band {
        return Err(CoreError::NotApplicable(format!(
            "inf|a| = {d} leaves no sublevel support below 1"
        )));
    }
    let eps = (1.0 - d) / 2.0;
    let g = sublevel_indicator(alpha, 1.0 - eps).ok_or_else(|| {
        CoreError::NotApplicable("no grid support with |a| < 1 - eps".into())
    })?;
    let indexing = Indexing::natural(depth);
    let mut x = ModuleVector::zero(alpha.kind(), indexing);
    let astar = alpha.star();
    let mut coeff = g.clone();
    for k in 1..=depth as i64 {
        x.set_entry(k, coeff.clone())?;
        coeff = coeff.mul(&astar)?;
    }
    let max_pairing = max_cokernel_pairing(&OperatorExpr::UnilateralShift, alpha, &x)?;
    if max_pairing > 1e-8 {
        return Err(CoreError::WitnessCheckFailed(format!(
            "cokernel pairing {max_pairing:.3e} exceeds 1e-8"
        )));
    }
    if x.vector_norm() < 1e-6 {
        return Err(CoreError::WitnessCheckFailed("witness vanishes".into()));
    }
    Ok(Certificate::CokernelWitness {
        vector: x,
        max_pairing,
    })
}

/// Solution of (aI - S)x = e_k by forward recurrence: x_n = 0 below k
/// and a^{-(n-k+1)} from k on, with the growth diagnostic of the
/// inverse powers attached and the truncation remainder reported.
pub fn shift_resolvent_solution(
    alpha: &AlgebraElement,
    k: i64,
    depth: usize,
    cfg: &EngineConfig,
) -> Result<Certificate> {
    let inv = alpha.try_invert(&cfg.tol)?;
    let indexing = Indexing::natural(depth);
    if indexing.position(k).is_none() {
        return Err(CoreError::IndexOutOfRange {
            index: k,
            range: indexing.describe(),
        });
    }
    let kind = alpha.kind();
    let mut x = ModuleVector::zero(kind, indexing);
    let mut coeff = AlgebraElement::unit(kind);
    let mut remainder = 0.0;
    for n in k..=depth as i64 {
        coeff = coeff.mul(&inv)?;
        if !coeff.norm().is_finite() {
            break;
        }
        x.set_entry(n, coeff.clone())?;
        if n == depth as i64 {
            remainder = coeff.norm();
        }
    }
    let shifted = OperatorExpr::sum(
        OperatorExpr::ScalarMult(alpha.clone()),
        OperatorExpr::negate(OperatorExpr::UnilateralShift),
    );
    let target = ModuleVector::basis_vector(k, kind, indexing)?;
    let residual = apply(&shifted, &x)?.sub(&target)?.interior_norm();
    if residual > 1e-8 {
        return Err(CoreError::WitnessCheckFailed(format!(
            "resolvent recurrence residual {residual:.3e} exceeds 1e-8"
        )));
    }
    let growth = {
        let mut powers = InversePowers::new(inv);
        sequence_membership_diagnostic(
            |m| powers.at(m),
            &cfg.deep_growth_depths,
            kind,
            &cfg.tol,
        )?
    };
    Ok(Certificate::ResolventSolution {
        vector: x,
        target_index: k,
        residual,
        truncation_remainder: remainder,
        growth,
    })
}

/// Commutative characterization: a is in the spectrum iff it is not
/// invertible or the inverse-power sequence leaves the module.
pub fn shift_spectrum_commutative(
    alpha: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    require_function_kind(alpha, "mn_shift_spectrum")?;
    if alpha.inf_abs() <= cfg.tol.eq_tol {
        return Ok(SpectrumVerdict::new(
            Membership::In,
            SpectrumPart::Full,
            Certificate::None {
                reason: "a is not invertible".into(),
            },
            "commutative-shift-resolvent",
        ));
    }
    let growth = inverse_power_diagnostic(alpha, cfg)?;
    let membership = match growth.verdict {
        GrowthVerdict::Converging => Membership::Out,
        _ => Membership::In,
    };
    Ok(SpectrumVerdict::new(
        membership,
        SpectrumPart::Full,
        Certificate::Growth(growth),
        "commutative-shift-resolvent",
    ))
}

/// Matrix specialization of the shift spectrum.
///
/// Over a full matrix algebra, right invertible collapses to invertible
/// and invertible elements have trivial right-annihilator sets, so the
/// kernel branch of the general characterization is empty: membership
/// reduces to "T not invertible, or (T^-k) leaves the module".
pub fn mn_shift_spectrum(t: &AlgebraElement, cfg: &EngineConfig) -> Result<SpectrumVerdict> {
    if !t.kind().is_matrix() {
        return Err(CoreError::KindUnsupported(
            "matrix-algebra rule; function algebras route to unilateral_shift_spectrum".into(),
        ));
    }
    let inv = match t.try_invert(&cfg.tol) {
        Ok(inv) => inv,
        Err(CoreError::NotInvertible { inf_abs }) => {
            return Ok(SpectrumVerdict::new(
                Membership::In,
                SpectrumPart::Full,
                Certificate::None {
                    reason: format!("T is not invertible (sigma_min = {inf_abs:.3e})"),
                },
                "mn-shift",
            )
            .with_note(
                "finite dimension: right invertible = invertible, and invertible T leave only \
                 the trivial right annihilator"
                    .into(),
            ));
        }
        Err(e) => return Err(e),
    };
    let mut powers = InversePowers::new(inv);
    let growth = sequence_membership_diagnostic(
        |k| powers.at(k),
        &cfg.matrix_growth_depths,
        t.kind(),
        &cfg.tol,
    )?;
    let membership = match growth.verdict {
        GrowthVerdict::Converging => Membership::Out,
        _ => Membership::In,
    };
    Ok(SpectrumVerdict::new(
        membership,
        SpectrumPart::Full,
        Certificate::Growth(growth),
        "mn-shift",
    ))
}

/// Kernel witness for a weighted shift: a common right annihilator of a
/// and w_j placed at coordinate j lies in ker(aI - S_w).
pub fn weighted_shift_kernel_witness(
    alpha: &AlgebraElement,
    weights: &[AlgebraElement],
    j: i64,
    cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    if j < 1 || j as usize > weights.len() {
        return Err(CoreError::IndexOutOfRange {
            index: j,
            range: format!("1..={}", weights.len()),
        });
    }
    let wj = &weights[(j - 1) as usize];
    if wj.kind() != alpha.kind() {
        return Err(CoreError::KindMismatch {
            left: alpha.kind().describe(),
            right: wj.kind().describe(),
        });
    }
    let gamma = common_right_annihilator(alpha, wj, cfg)?;
    let Some(gamma) = gamma else {
        return Ok(SpectrumVerdict::new(
            Membership::Out,
            SpectrumPart::Point,
            Certificate::None {
                reason: format!("no common right annihilator at index {j}"),
            },
            "weighted-shift-kernel",
        ));
    };
    let indexing = Indexing::natural(cfg.depth.max(2 * j as usize));
    let x = ModuleVector::basis_times(j, &gamma, indexing)?;
    let op = OperatorExpr::weighted_shift(weights.to_vec())?;
    let shifted = OperatorExpr::sum(
        OperatorExpr::ScalarMult(alpha.clone()),
        OperatorExpr::negate(op),
    );
    let residual = apply(&shifted, &x)?.vector_norm();
    if residual > 1e-8 {
        return Err(CoreError::WitnessCheckFailed(format!(
            "weighted-shift kernel residual {residual:.3e} exceeds 1e-8"
        )));
    }
    Ok(SpectrumVerdict::new(
        Membership::In,
        SpectrumPart::Point,
        Certificate::KernelWitness {
            vector: x,
            residual,
        },
        "weighted-shift-kernel",
    ))
}

/// Common right annihilator of two elements, or None.
fn common_right_annihilator(
    a: &AlgebraElement,
    b: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<Option<AlgebraElement>> {
    if a.kind().is_function() {
        let anns_a = a.right_annihilator_basis(&cfg.tol);
        let anns_b = b.right_annihilator_basis(&cfg.tol);
        match (anns_a.first(), anns_b.first()) {
            (Some(ia), Some(ib)) => {
                let product = ia.mul(ib)?;
                if product.norm() > 0.5 {
                    Ok(Some(product))
                } else {
                    Ok(None)
                }
            }
            _ => Ok(None),
        }
    } else {
        // stack [a; b] and intersect the null spaces
        let n = a.kind().matrix_dim().expect("matrix kind");
        let ma = a.matrix().unwrap();
        let mb = b.matrix().unwrap();
        let mut stacked = nalgebra::DMatrix::zeros(2 * n, n);
        for r in 0..n {
            for c in 0..n {
                stacked[(r, c)] = ma[(r, c)];
                stacked[(n + r, c)] = mb[(r, c)];
            }
        }
        let scale = stacked.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1.0);
        let null = crate::linalg::null_space_basis(&stacked, cfg.tol.eq_tol * scale);
        match null.first() {
            Some(v) => {
                let mut gamma = nalgebra::DMatrix::zeros(n, n);
                gamma.set_column(0, v);
                Ok(Some(AlgebraElement::from_matrix(a.kind(), gamma)?))
            }
            None => Ok(None),
        }
    }
}

/// Spectrum of the two-block shift (identity on the left half of the
/// interval, unilateral shift on the right half): membership iff the
/// right-block infimum of |a| is at most 1, or a equals 1 on some left
/// cell.
pub fn block_shift_spectrum(alpha: &AlgebraElement, cfg: &EngineConfig) -> Result<SpectrumVerdict> {
    let kind = alpha.kind();
    if !matches!(kind, AlgebraKind::EssentiallyBounded(_)) {
        return Err(CoreError::KindUnsupported(
            "the two-block shift lives over the step algebra on (0,1)".into(),
        ));
    }
    let values = alpha.grid_values().unwrap();
    let band = cfg.tol.boundary_band;
    let mut right_inf = f64::INFINITY;
    let mut left_unit_cell = false;
    let mut left_dist = f64::INFINITY;
    for (i, v) in values.iter().enumerate() {
        let t = kind.fiber_position(i);
        if t > 0.5 {
            right_inf = right_inf.min(v.norm());
        } else {
            let d = (v - C64::new(1.0, 0.0)).norm();
            left_dist = left_dist.min(d);
            if d <= cfg.tol.eq_tol {
                left_unit_cell = true;
            }
        }
    }

    if left_unit_cell {
        // kernel witness on the coinciding left cells
        let mask: Vec<C64> = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let t = kind.fiber_position(i);
                if t < 0.5 && (v - C64::new(1.0, 0.0)).norm() <= cfg.tol.eq_tol {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        let chi_m = AlgebraElement::from_grid_values(kind, mask)?;
        let indexing = Indexing::natural(cfg.depth);
        let x = ModuleVector::basis_times(1, &chi_m, indexing)?;
        let op = block_shift_operator(kind)?;
        let shifted = OperatorExpr::sum(
            OperatorExpr::ScalarMult(alpha.clone()),
            OperatorExpr::negate(op),
        );
        let residual = apply(&shifted, &x)?.interior_norm();
        return Ok(SpectrumVerdict::new(
            Membership::In,
            SpectrumPart::Full,
            Certificate::KernelWitness {
                vector: x,
                residual,
            },
            "block-shift-left-coincidence",
        ));
    }

    if right_inf <= 1.0 + band {
        let certificate = if right_inf < 1.0 - band {
            block_right_cokernel_witness(alpha, right_inf, cfg)?
        } else {
            Certificate::None {
                reason: format!(
                    "right-block inf|a| = {right_inf} within the boundary band; closed spectrum"
                ),
            }
        };
        return Ok(SpectrumVerdict::new(
            Membership::In,
            SpectrumPart::Full,
            certificate,
            "block-shift-right-range",
        ));
    }

    let bound = left_dist.min(right_inf - 1.0);
    Ok(SpectrumVerdict::new(
        Membership::Out,
        SpectrumPart::Full,
        Certificate::InvertibilityBound { bound },
        "block-shift",
    ))
}

pub(crate) fn block_shift_operator(kind: AlgebraKind) -> Result<OperatorExpr> {
    let chi_left = AlgebraElement::indicator(kind, 0.0, 0.5)?;
    OperatorExpr::block_by_indicator(
        chi_left,
        OperatorExpr::ScalarMult(AlgebraElement::unit(kind)),
        OperatorExpr::UnilateralShift,
    )
}

fn block_right_cokernel_witness(
    alpha: &AlgebraElement,
    right_inf: f64,
    cfg: &EngineConfig,
) -> Result<Certificate> {
    let kind = alpha.kind();
    let values = alpha.grid_values().unwrap();
    let eps = (1.0 - right_inf) / 2.0;
    let mask: Vec<C64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = kind.fiber_position(i);
            if t > 0.5 && v.norm() < 1.0 - eps {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let g = AlgebraElement::from_grid_values(kind, mask)?;
    if g.norm() < 0.5 {
        return Err(CoreError::NotApplicable(
            "no right-block support below 1 - eps".into(),
        ));
    }
    let indexing = Indexing::natural(cfg.depth);
    let mut x = ModuleVector::zero(kind, indexing);
    let astar = alpha.star();
    let mut coeff = g;
    for k in 1..=cfg.depth as i64 {
        x.set_entry(k, coeff.clone())?;
        coeff = coeff.mul(&astar)?;
    }
    let op = block_shift_operator(kind)?;
    let max_pairing = max_cokernel_pairing(&op, alpha, &x)?;
    if max_pairing > 1e-8 {
        return Err(CoreError::WitnessCheckFailed(format!(
            "block cokernel pairing {max_pairing:.3e} exceeds 1e-8"
        )));
    }
    Ok(Certificate::CokernelWitness {
        vector: x,
        max_pairing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;
    use nalgebra::DMatrix;

    fn cfg() -> EngineConfig {
        EngineConfig::default()
    }

    fn ckind() -> AlgebraKind {
        AlgebraKind::continuous(64).unwrap()
    }

    fn skind() -> AlgebraKind {
        AlgebraKind::step(64).unwrap()
    }

    #[test]
    fn unit_element_is_in_the_shift_spectrum() {
        let one = AlgebraElement::unit(ckind());
        let v = unilateral_shift_spectrum(&one, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::In);
    }

    #[test]
    fn twice_the_unit_is_out_with_converging_tail() {
        let two = AlgebraElement::scalar(skind(), C64::new(2.0, 0.0));
        let v = unilateral_shift_spectrum(&two, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::Out);
        match v.certificate {
            Certificate::Growth(g) => assert_eq!(g.verdict, GrowthVerdict::Converging),
            other => panic!("expected growth certificate, got {other:?}"),
        }
    }

    #[test]
    fn ramp_plus_half_is_in_with_cokernel_witness() {
        let alpha = parse_expression("t + 0.5", ckind()).unwrap();
        let v = unilateral_shift_spectrum(&alpha, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::In);
        match v.certificate {
            Certificate::CokernelWitness { max_pairing, .. } => {
                assert!(max_pairing <= 1e-8);
            }
            other => panic!("expected cokernel witness, got {other:?}"),
        }
    }

    #[test]
    fn point_spectrum_is_always_empty() {
        for alpha in [
            AlgebraElement::zero(ckind()),
            AlgebraElement::unit(ckind()),
            AlgebraElement::indicator(skind(), 0.0, 0.5).unwrap(),
        ] {
            let v = unilateral_shift_point_spectrum(&alpha, &cfg()).unwrap();
            assert_eq!(v.membership, Membership::Out);
        }
    }

    #[test]
    fn cokernel_witness_telescopes_for_constant_half() {
        let alpha = AlgebraElement::scalar(skind(), C64::new(0.5, 0.0));
        match shift_cokernel_witness(&alpha, 48, &cfg()).unwrap() {
            Certificate::CokernelWitness {
                vector,
                max_pairing,
            } => {
                assert!(max_pairing <= 1e-12);
                // x = (1, 1/2, 1/4, ...)
                let x2 = vector.entry(2).unwrap().fiber(0);
                assert!((x2 - C64::new(0.5, 0.0)).norm() <= 1e-12);
            }
            other => panic!("unexpected certificate {other:?}"),
        }

        // alpha = 0: witness is (g, 0, 0, ...)
        let zero = AlgebraElement::zero(skind());
        match shift_cokernel_witness(&zero, 48, &cfg()).unwrap() {
            Certificate::CokernelWitness { vector, .. } => {
                assert!(vector.entry(1).unwrap().norm() > 0.5);
                assert!(vector.entry(2).unwrap().norm() <= 1e-15);
            }
            other => panic!("unexpected certificate {other:?}"),
        }

        let two = AlgebraElement::scalar(skind(), C64::new(2.0, 0.0));
        assert!(matches!(
            shift_cokernel_witness(&two, 48, &cfg()),
            Err(CoreError::NotApplicable(_))
        ));
    }

    #[test]
    fn resolvent_solution_examples() {
        let two = AlgebraElement::scalar(skind(), C64::new(2.0, 0.0));
        match shift_resolvent_solution(&two, 1, 64, &cfg()).unwrap() {
            Certificate::ResolventSolution {
                vector,
                residual,
                truncation_remainder,
                growth,
                ..
            } => {
                assert!(residual <= 1e-8);
                let x1 = vector.entry(1).unwrap().fiber(0);
                assert!((x1 - C64::new(0.5, 0.0)).norm() <= 1e-12);
                assert!((truncation_remainder - 0.5f64.powi(64)).abs() <= 1e-25);
                assert_eq!(growth.verdict, GrowthVerdict::Converging);
            }
            other => panic!("unexpected certificate {other:?}"),
        }

        // alpha = 1: the solution sequence is constant and diverges
        let one = AlgebraElement::unit(skind());
        match shift_resolvent_solution(&one, 1, 64, &cfg()).unwrap() {
            Certificate::ResolventSolution { growth, .. } => {
                assert_eq!(growth.verdict, GrowthVerdict::Diverging);
            }
            other => panic!("unexpected certificate {other:?}"),
        }

        let ramp = parse_expression("t", ckind()).unwrap();
        assert!(matches!(
            shift_resolvent_solution(&ramp, 1, 64, &cfg()),
            Err(CoreError::NotInvertible { .. })
        ));
    }

    #[test]
    fn commutative_rule_agrees_with_range_rule() {
        let cases = [
            parse_expression("t", ckind()).unwrap(),
            parse_expression("2", ckind()).unwrap(),
            parse_expression("1", ckind()).unwrap(),
            parse_expression("0.3 + 0.2*i", ckind()).unwrap(),
            parse_expression("3 + sin(6*t)", ckind()).unwrap(),
        ];
        for alpha in cases {
            let a = unilateral_shift_spectrum(&alpha, &cfg()).unwrap();
            let b = shift_spectrum_commutative(&alpha, &cfg()).unwrap();
            assert_eq!(a.membership, b.membership, "disagree on {alpha:?}");
        }
    }

    #[test]
    fn mn_shift_examples() {
        let kind = AlgebraKind::matrix(2).unwrap();
        let id = AlgebraElement::unit(kind);
        assert_eq!(
            mn_shift_spectrum(&id, &cfg()).unwrap().membership,
            Membership::In
        );
        let two_id = id.scale(C64::new(2.0, 0.0));
        assert_eq!(
            mn_shift_spectrum(&two_id, &cfg()).unwrap().membership,
            Membership::Out
        );
        let mixed = AlgebraElement::from_matrix(
            kind,
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(2.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.5, 0.0),
                ],
            ),
        )
        .unwrap();
        assert_eq!(
            mn_shift_spectrum(&mixed, &cfg()).unwrap().membership,
            Membership::In
        );
    }

    #[test]
    fn weighted_shift_witness_cases() {
        let kind = skind();
        let chi_right = AlgebraElement::indicator(kind, 0.5, 1.0).unwrap();
        let weights = vec![chi_right.clone(), AlgebraElement::unit(kind)];
        // alpha and w_1 share the right-half support: the complementary
        // indicator annihilates both.
        let v = weighted_shift_kernel_witness(&chi_right, &weights, 1, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::In);
        match &v.certificate {
            Certificate::KernelWitness { vector, residual } => {
                assert!(*residual <= 1e-8);
                let w = vector.entry(1).unwrap();
                let chi_left = AlgebraElement::indicator(kind, 0.0, 0.5).unwrap();
                assert!(w.distance_to(&chi_left).unwrap() <= 1e-12);
            }
            other => panic!("unexpected certificate {other:?}"),
        }

        // the unit has no annihilator
        let one = AlgebraElement::unit(kind);
        let v = weighted_shift_kernel_witness(&one, &weights, 1, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::Out);

        // matrix kind: common null space of diag(1,0) with itself
        let mkind = AlgebraKind::matrix(2).unwrap();
        let p = AlgebraElement::from_matrix(
            mkind,
            DMatrix::from_row_slice(
                2,
                2,
                &[
                    C64::new(1.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                    C64::new(0.0, 0.0),
                ],
            ),
        )
        .unwrap();
        let v =
            weighted_shift_kernel_witness(&p, &[p.clone(), AlgebraElement::unit(mkind)], 1, &cfg())
                .unwrap();
        assert_eq!(v.membership, Membership::In);

        assert!(matches!(
            weighted_shift_kernel_witness(&one, &weights, 5, &cfg()),
            Err(CoreError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn block_shift_examples() {
        let kind = skind();
        // 3 on the left, 1/2 on the right: right-block inf = 1/2 -> In
        let values: Vec<C64> = (0..64)
            .map(|i| {
                if kind.fiber_position(i) < 0.5 {
                    C64::new(3.0, 0.0)
                } else {
                    C64::new(0.5, 0.0)
                }
            })
            .collect();
        let alpha = AlgebraElement::from_grid_values(kind, values).unwrap();
        let v = block_shift_spectrum(&alpha, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::In);
        assert!(matches!(v.certificate, Certificate::CokernelWitness { .. }));

        // 1 on the left, 5 on the right: left coincidence -> In
        let values: Vec<C64> = (0..64)
            .map(|i| {
                if kind.fiber_position(i) < 0.5 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(5.0, 0.0)
                }
            })
            .collect();
        let alpha = AlgebraElement::from_grid_values(kind, values).unwrap();
        let v = block_shift_spectrum(&alpha, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::In);
        match &v.certificate {
            Certificate::KernelWitness { residual, .. } => assert!(*residual <= 1e-8),
            other => panic!("expected kernel witness, got {other:?}"),
        }

        // constant 5: out
        let five = AlgebraElement::scalar(kind, C64::new(5.0, 0.0));
        let v = block_shift_spectrum(&five, &cfg()).unwrap();
        assert_eq!(v.membership, Membership::Out);
        match v.certificate {
            Certificate::InvertibilityBound { bound } => assert!(bound >= 3.9),
            other => panic!("expected bound, got {other:?}"),
        }
    }
}
