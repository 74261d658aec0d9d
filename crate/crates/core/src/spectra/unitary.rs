//! Bilateral shift, diagonal unitaries, and the norm screen for general
//! unitaries.

use crate::algebra::{AlgebraElement, AlgebraKind};
use crate::config::EngineConfig;
use crate::error::{CoreError, Result};
use crate::operators::{apply, OperatorExpr};
use crate::standard_module::{Indexing, ModuleVector};

use super::{Certificate, Membership, SpectrumPart, SpectrumVerdict};

/// Full spectrum of the bilateral shift.
///
/// Continuous kind: |f| has connected range, so membership holds iff
/// the refined-grid range of |f| brackets 1. Step kind: membership iff
/// some cell value lies within the boundary band of 1 — the "for every
/// eps" condition read at grid scale.
pub fn bilateral_shift_spectrum(
    f: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    let band = cfg.tol.boundary_band;
    match f.kind() {
        AlgebraKind::ContinuousFunctions(_) => {
            let (lo, hi) = f.abs_range();
            if lo <= 1.0 + band && hi >= 1.0 - band {
                Ok(SpectrumVerdict::new(
                    Membership::In,
                    SpectrumPart::Full,
                    Certificate::None {
                        reason: format!(
                            "range of |f| = [{lo:.6}, {hi:.6}] meets the unit circle"
                        ),
                    },
                    "bilateral-shift-range",
                ))
            } else {
                let bound = if lo > 1.0 { lo - 1.0 } else { 1.0 - hi };
                Ok(SpectrumVerdict::new(
                    Membership::Out,
                    SpectrumPart::Full,
                    Certificate::InvertibilityBound { bound },
                    "bilateral-shift-range",
                ))
            }
        }
        AlgebraKind::EssentiallyBounded(_) => {
            let values = f.grid_values().unwrap();
            let min_dist = values
                .iter()
                .map(|v| (v.norm() - 1.0).abs())
                .fold(f64::INFINITY, f64::min);
            if min_dist <= band {
                Ok(SpectrumVerdict::new(
                    Membership::In,
                    SpectrumPart::Full,
                    Certificate::None {
                        reason: format!(
                            "a cell has ||f| - 1| = {min_dist:.3e} <= boundary band (grid-scale \
                             reading of the for-all-eps condition)"
                        ),
                    },
                    "bilateral-shift-cells",
                ))
            } else {
                Ok(SpectrumVerdict::new(
                    Membership::Out,
                    SpectrumPart::Full,
                    Certificate::InvertibilityBound { bound: min_dist },
                    "bilateral-shift-cells",
                ))
            }
        }
        AlgebraKind::MatrixAlgebra(_) => Err(CoreError::KindUnsupported(
            "bilateral rule is stated for the function algebras".into(),
        )),
    }
}

/// The bilateral shift has empty point spectrum: fiberwise the two-sided
/// recursion admits no square-summable solution.
pub fn bilateral_shift_point_spectrum(
    f: &AlgebraElement,
    _cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    if !f.kind().is_function() {
        return Err(CoreError::KindUnsupported(
            "bilateral rule is stated for the function algebras".into(),
        ));
    }
    Ok(SpectrumVerdict::new(
        Membership::Out,
        SpectrumPart::Point,
        Certificate::None {
            reason: "two-sided kernel recursion forces x = 0 fiberwise".into(),
        },
        "bilateral-shift-point-empty",
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScreenOutcome {
    /// Certainly outside the spectrum of every unitary.
    Out { reason: String },
    /// The screen cannot decide; membership depends on the unitary.
    Inconclusive,
}

/// Necessary conditions for membership in the spectrum of any unitary:
/// ||a|| >= 1, and ||a^{-1}|| >= 1 when a is invertible.
pub fn unitary_norm_screen(alpha: &AlgebraElement, cfg: &EngineConfig) -> Result<ScreenOutcome> {
    let band = cfg.tol.boundary_band;
    let norm = alpha.norm();
    if norm < 1.0 - band {
        return Ok(ScreenOutcome::Out {
            reason: format!("||a|| = {norm:.6} < 1"),
        });
    }
    if let Ok(inv) = alpha.try_invert(&cfg.tol) {
        let inv_norm = inv.norm();
        if inv_norm < 1.0 - band {
            return Ok(ScreenOutcome::Out {
                reason: format!("||a^-1|| = {inv_norm:.6} < 1"),
            });
        }
    }
    Ok(ScreenOutcome::Inconclusive)
}

/// Spectrum of the diagonal unitary V(x_1, x_2, ...) = (a_1 x_1, ...)
/// with a finite cyclic list of unitaries: membership iff some b - a_k
/// fails to be invertible or has a nonzero right annihilator.
pub fn diagonal_unitary_spectrum(
    beta: &AlgebraElement,
    alphas: &[AlgebraElement],
    cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    let op = OperatorExpr::diagonal_unitary(alphas.to_vec())?;
    for a in alphas {
        if a.kind() != beta.kind() {
            return Err(CoreError::KindMismatch {
                left: beta.kind().describe(),
                right: a.kind().describe(),
            });
        }
    }
    let mut out_bound = f64::INFINITY;
    for (i, a) in alphas.iter().enumerate() {
        let k = i as i64 + 1;
        let delta = beta.sub(a)?;
        let annihilators = delta.right_annihilator_basis(&cfg.tol);
        if let Some(gamma) = annihilators.first() {
            // kernel witness gamma . e_k
            let indexing = Indexing::natural(cfg.depth.max(2 * k as usize));
            let x = ModuleVector::basis_times(k, gamma, indexing)?;
            let shifted = OperatorExpr::sum(
                OperatorExpr::ScalarMult(beta.clone()),
                OperatorExpr::negate(op.clone()),
            );
            let residual = apply(&shifted, &x)?.vector_norm();
            let mut verdict = SpectrumVerdict::new(
                Membership::In,
                SpectrumPart::Full,
                Certificate::KernelWitness {
                    vector: x,
                    residual,
                },
                "diagonal-unitary",
            );
            if beta.norm() > 1.0 {
                verdict = verdict.with_note(format!(
                    "||b|| = {:.6} > 1 yet b is in the spectrum of a unitary",
                    beta.norm()
                ));
            }
            return Ok(verdict);
        }
        let inf = delta.inf_abs();
        if inf <= cfg.tol.eq_tol {
            let mut verdict = SpectrumVerdict::new(
                Membership::In,
                SpectrumPart::Full,
                Certificate::None {
                    reason: format!("b - a_{k} is not invertible (inf = {inf:.3e})"),
                },
                "diagonal-unitary",
            );
            if beta.norm() > 1.0 {
                verdict = verdict.with_note(format!(
                    "||b|| = {:.6} > 1 yet b is in the spectrum of a unitary",
                    beta.norm()
                ));
            }
            return Ok(verdict);
        }
        out_bound = out_bound.min(inf);
    }
    Ok(SpectrumVerdict::new(
        Membership::Out,
        SpectrumPart::Full,
        Certificate::InvertibilityBound { bound: out_bound },
        "diagonal-unitary",
    ))
}
