//! The expander/compressor family: W' (k -> 2k), W'' (k -> 2k-1), their
//! adjoints Z and Z', and the two block operators combining them over
//! the splitting of (0,1) at 1/2.
//!
//! All six share the full-spectrum rule inf|a| <= 1. Point spectra
//! differ: W' has none; W'' picks up unit-coincidence sets; Z has the
//! geometric witness supported on powers of two; Z' adds the
//! r-ladder witness r_1 = 2, r_{k+1} = 2 r_k - 1 and the coincidence
//! branch; the blocks restrict those branches to their halves.
//!
//! The dyadic kernel witness starts at e_1 (coefficient a^0): starting
//! the sum at e_2 leaves a residual -chi at coordinate 1, which the
//! residual check below would reject.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, AlgebraKind};
use crate::config::EngineConfig;
use crate::error::{CoreError, Result};
use crate::operators::{apply, OperatorExpr};
use crate::standard_module::{Indexing, ModuleVector};

use super::shift::{max_cokernel_pairing, sublevel_indicator};
use super::{Certificate, Membership, SpectrumPart, SpectrumVerdict};

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpanderKind {
    DyadicExpand,
    OddExpand,
    DyadicCompress,
    OddCompress,
    /// Block diagonal (odd-expand, dyadic-expand) over the halves of (0,1).
    BlockExpand,
    /// Its adjoint: block diagonal (odd-compress, dyadic-compress).
    BlockCompress,
}

impl ExpanderKind {
    pub fn all() -> [ExpanderKind; 6] {
        [
            ExpanderKind::DyadicExpand,
            ExpanderKind::OddExpand,
            ExpanderKind::DyadicCompress,
            ExpanderKind::OddCompress,
            ExpanderKind::BlockExpand,
            ExpanderKind::BlockCompress,
        ]
    }

    pub fn is_block(&self) -> bool {
        matches!(self, ExpanderKind::BlockExpand | ExpanderKind::BlockCompress)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExpanderKind::DyadicExpand => "dyadic-expand",
            ExpanderKind::OddExpand => "odd-expand",
            ExpanderKind::DyadicCompress => "dyadic-compress",
            ExpanderKind::OddCompress => "odd-compress",
            ExpanderKind::BlockExpand => "block-expand",
            ExpanderKind::BlockCompress => "block-compress",
        }
    }

    /// Bank operator for this kind over the given algebra.
    pub fn operator(&self, kind: AlgebraKind) -> Result<OperatorExpr> {
        match self {
            ExpanderKind::DyadicExpand => Ok(OperatorExpr::DyadicExpand),
            ExpanderKind::OddExpand => Ok(OperatorExpr::OddExpand),
            ExpanderKind::DyadicCompress => Ok(OperatorExpr::DyadicCompress),
            ExpanderKind::OddCompress => Ok(OperatorExpr::OddCompress),
            ExpanderKind::BlockExpand => {
                let chi = AlgebraElement::indicator(kind, 0.0, 0.5)?;
                OperatorExpr::block_by_indicator(
                    chi,
                    OperatorExpr::OddExpand,
                    OperatorExpr::DyadicExpand,
                )
            }
            ExpanderKind::BlockCompress => {
                let chi = AlgebraElement::indicator(kind, 0.0, 0.5)?;
                OperatorExpr::block_by_indicator(
                    chi,
                    OperatorExpr::OddCompress,
                    OperatorExpr::DyadicCompress,
                )
            }
        }
    }

    fn check_kind(&self, kind: AlgebraKind) -> Result<()> {
        if self.is_block() {
            if !matches!(kind, AlgebraKind::EssentiallyBounded(_)) {
                return Err(CoreError::KindUnsupported(
                    "block variants live over the step algebra on (0,1)".into(),
                ));
            }
        } else if !kind.is_function() {
            return Err(CoreError::KindUnsupported(
                "expander rules are stated for the function algebras".into(),
            ));
        }
        Ok(())
    }
}

/// Indices 1, 2, 4, 8, ... within depth.
fn dyadic_indices(depth: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut k: i64 = 1;
    while k <= depth as i64 {
        out.push(k);
        k *= 2;
    }
    out
}

/// Ladder r_1 = 2, r_{k+1} = 2 r_k - 1 within depth.
fn odd_ladder_indices(depth: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut r: i64 = 2;
    while r <= depth as i64 {
        out.push(r);
        r = 2 * r - 1;
    }
    out
}

/// x = sum_m e_{idx_m} . chi . ratio^m.
fn geometric_chain(
    indices: &[i64],
    chi: &AlgebraElement,
    ratio: &AlgebraElement,
    indexing: Indexing,
) -> Result<ModuleVector> {
    let mut x = ModuleVector::zero(chi.kind(), indexing);
    let mut coeff = chi.clone();
    for &idx in indices {
        x.set_entry(idx, coeff.clone())?;
        coeff = coeff.mul(ratio)?;
    }
    Ok(x)
}

/// Restriction of the sublevel support to one half of (0,1); None when
/// the intersection is empty.
fn half_restricted(chi: &AlgebraElement, left: bool) -> Option<AlgebraElement> {
    let kind = chi.kind();
    let values = chi.grid_values()?;
    let mut any = false;
    let mask: Vec<C64> = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let t = kind.fiber_position(i);
            let in_half = if left { t < 0.5 } else { t > 0.5 };
            if in_half && v.re > 0.5 {
                any = true;
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    if any {
        Some(AlgebraElement::from_grid_values(kind, mask).expect("mask matches grid"))
    } else {
        None
    }
}

fn verified_kernel_certificate(
    op: &OperatorExpr,
    alpha: &AlgebraElement,
    x: ModuleVector,
) -> Result<Certificate> {
    let shifted = OperatorExpr::sum(
        OperatorExpr::ScalarMult(alpha.clone()),
        OperatorExpr::negate(op.clone()),
    );
    let residual = apply(&shifted, &x)?.interior_norm();
    if residual > 1e-8 {
        return Err(CoreError::WitnessCheckFailed(format!(
            "kernel witness residual {residual:.3e} exceeds 1e-8"
        )));
    }
    if x.vector_norm() < 1e-6 {
        return Err(CoreError::WitnessCheckFailed("witness vanishes".into()));
    }
    Ok(Certificate::KernelWitness {
        vector: x,
        residual,
    })
}

fn verified_cokernel_certificate(
    op: &OperatorExpr,
    alpha: &AlgebraElement,
    x: ModuleVector,
) -> Result<Certificate> {
    let max_pairing = max_cokernel_pairing(op, alpha, &x)?;
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

/// Kernel witness of (aI - op) for the compressor kinds at inf|a| < 1,
/// built from the sublevel indicator chi. For the block compressor the
/// two halves carry their own chains.
fn compressor_kernel_witness(
    ek: ExpanderKind,
    alpha: &AlgebraElement,
    chi: &AlgebraElement,
    indexing: Indexing,
) -> Result<ModuleVector> {
    let depth = indexing.count();
    match ek {
        ExpanderKind::DyadicCompress => {
            geometric_chain(&dyadic_indices(depth), chi, alpha, indexing)
        }
        ExpanderKind::OddCompress => {
            geometric_chain(&odd_ladder_indices(depth), chi, alpha, indexing)
        }
        ExpanderKind::BlockCompress => {
            let mut x = ModuleVector::zero(alpha.kind(), indexing);
            if let Some(chi_l) = half_restricted(chi, true) {
                let xl = geometric_chain(&odd_ladder_indices(depth), &chi_l, alpha, indexing)?;
                x = x.add(&xl)?;
            }
            if let Some(chi_r) = half_restricted(chi, false) {
                let xr = geometric_chain(&dyadic_indices(depth), &chi_r, alpha, indexing)?;
                x = x.add(&xr)?;
            }
            Ok(x)
        }
        _ => unreachable!("kernel witnesses exist for the compressor kinds"),
    }
}

/// Cokernel witness of (aI - op) for the expander kinds: the kernel
/// witness of the adjoint compressor at a*.
fn expander_cokernel_witness(
    ek: ExpanderKind,
    alpha: &AlgebraElement,
    chi: &AlgebraElement,
    indexing: Indexing,
) -> Result<ModuleVector> {
    let astar = alpha.star();
    match ek {
        ExpanderKind::DyadicExpand => {
            compressor_kernel_witness(ExpanderKind::DyadicCompress, &astar, chi, indexing)
        }
        ExpanderKind::OddExpand => {
            compressor_kernel_witness(ExpanderKind::OddCompress, &astar, chi, indexing)
        }
        ExpanderKind::BlockExpand => {
            compressor_kernel_witness(ExpanderKind::BlockCompress, &astar, chi, indexing)
        }
        _ => unreachable!("cokernel witnesses exist for the expander kinds"),
    }
}

/// Full spectrum for every member of the family: inf|a| <= 1, threshold
/// inclusive. In verdicts with inf|a| < 1 attach the kind-specific
/// witness: cokernel chains for the expanders, kernel chains for the
/// compressors.
pub fn expander_spectra(
    ek: ExpanderKind,
    alpha: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    ek.check_kind(alpha.kind())?;
    let d = alpha.inf_abs();
    let band = cfg.tol.boundary_band;
    let op = ek.operator(alpha.kind())?;
    if d > 1.0 + band {
        return Ok(SpectrumVerdict::new(
            Membership::Out,
            SpectrumPart::Full,
            Certificate::InvertibilityBound { bound: d - 1.0 },
            "expander-full",
        ));
    }
    if d >= 1.0 - band {
        return Ok(SpectrumVerdict::new(
            Membership::In,
            SpectrumPart::Full,
            Certificate::None {
                reason: format!("inf|a| = {d} within the boundary band; the spectrum is closed"),
            },
            "expander-full-closure",
        ));
    }
    let eps = (1.0 - d) / 2.0;
    let chi = sublevel_indicator(alpha, 1.0 - eps).ok_or_else(|| {
        CoreError::NotApplicable("no grid support with |a| < 1 - eps".into())
    })?;
    let indexing = Indexing::natural(cfg.depth.max(64));
    let certificate = match ek {
        ExpanderKind::DyadicExpand | ExpanderKind::OddExpand | ExpanderKind::BlockExpand => {
            let x = expander_cokernel_witness(ek, alpha, &chi, indexing)?;
            verified_cokernel_certificate(&op, alpha, x)?
        }
        ExpanderKind::DyadicCompress
        | ExpanderKind::OddCompress
        | ExpanderKind::BlockCompress => {
            let x = compressor_kernel_witness(ek, alpha, &chi, indexing)?;
            verified_kernel_certificate(&op, alpha, x)?
        }
    };
    Ok(SpectrumVerdict::new(
        Membership::In,
        SpectrumPart::Full,
        certificate,
        "expander-full",
    ))
}

/// Indicator of the coincidence set {a = 1} restricted to a half (or the
/// whole interval), at grid scale. None when empty.
fn coincidence_indicator(
    alpha: &AlgebraElement,
    cfg: &EngineConfig,
    half: Option<bool>,
) -> Option<AlgebraElement> {
    let kind = alpha.kind();
    let values = alpha.grid_values()?;
    let one = C64::new(1.0, 0.0);
    let qualifies = |i: usize| -> bool {
        let t = kind.fiber_position(i);
        match half {
            Some(true) => t < 0.5,
            Some(false) => t > 0.5,
            None => true,
        }
    };
    let mut mask = vec![C64::new(0.0, 0.0); values.len()];
    let mut any = false;
    match kind {
        AlgebraKind::EssentiallyBounded(_) => {
            for (i, v) in values.iter().enumerate() {
                if qualifies(i) && (v - one).norm() <= cfg.tol.eq_tol {
                    mask[i] = one;
                    any = true;
                }
            }
        }
        AlgebraKind::ContinuousFunctions(_) => {
            // "a = 1 on a closed subinterval": a full grid segment
            for j in 0..values.len() - 1 {
                if qualifies(j)
                    && qualifies(j + 1)
                    && (values[j] - one).norm() <= cfg.tol.eq_tol
                    && (values[j + 1] - one).norm() <= cfg.tol.eq_tol
                {
                    mask[j] = one;
                    mask[j + 1] = one;
                    any = true;
                }
            }
        }
        AlgebraKind::MatrixAlgebra(_) => return None,
    }
    if any {
        Some(AlgebraElement::from_grid_values(kind, mask).expect("mask matches grid"))
    } else {
        None
    }
}

/// Point spectra of the family, with verified witnesses.
pub fn expander_point_spectra(
    ek: ExpanderKind,
    alpha: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<SpectrumVerdict> {
    ek.check_kind(alpha.kind())?;
    let op = ek.operator(alpha.kind())?;
    let d = alpha.inf_abs();
    let band = cfg.tol.boundary_band;
    let indexing = Indexing::natural(cfg.depth.max(64));

    let coincidence_half = match ek {
        ExpanderKind::OddExpand | ExpanderKind::OddCompress => Some(None),
        ExpanderKind::BlockExpand | ExpanderKind::BlockCompress => Some(Some(true)),
        _ => None,
    };
    let coincidence = coincidence_half.and_then(|half| coincidence_indicator(alpha, cfg, half));

    let inf_branch = matches!(
        ek,
        ExpanderKind::DyadicCompress | ExpanderKind::OddCompress | ExpanderKind::BlockCompress
    );

    // coincidence branch: x = (chi_M, 0, 0, ...)
    if let Some(chi_m) = coincidence {
        let x = ModuleVector::basis_times(1, &chi_m, indexing)?;
        let certificate = verified_kernel_certificate(&op, alpha, x)?;
        return Ok(SpectrumVerdict::new(
            Membership::In,
            SpectrumPart::Point,
            certificate,
            "expander-point-coincidence",
        ));
    }

    if inf_branch {
        if d < 1.0 - band {
            let eps = (1.0 - d) / 2.0;
            let chi = sublevel_indicator(alpha, 1.0 - eps).ok_or_else(|| {
                CoreError::NotApplicable("no grid support with |a| < 1 - eps".into())
            })?;
            let x = compressor_kernel_witness(ek, alpha, &chi, indexing)?;
            if x.vector_norm() < 1e-9 {
                // block variant whose sublevel support misses both halves
                // cannot happen: chi nonempty implies one half is hit
                return Err(CoreError::WitnessCheckFailed("empty chain support".into()));
            }
            let certificate = verified_kernel_certificate(&op, alpha, x)?;
            return Ok(SpectrumVerdict::new(
                Membership::In,
                SpectrumPart::Point,
                certificate,
                "expander-point-sublevel",
            ));
        }
        if d <= 1.0 + band {
            // strict threshold: inf|a| < 1 is required, and the scalar
            // sits inside the band
            return Ok(SpectrumVerdict::new(
                Membership::BoundaryIndeterminate,
                SpectrumPart::Point,
                Certificate::None {
                    reason: format!(
                        "inf|a| = {d} within the boundary band of the strict threshold 1"
                    ),
                },
                "expander-point-sublevel",
            ));
        }
    }

    Ok(SpectrumVerdict::new(
        Membership::Out,
        SpectrumPart::Point,
        Certificate::None {
            reason: match ek {
                ExpanderKind::DyadicExpand => "kernel recursion forces x = 0".into(),
                ExpanderKind::OddExpand | ExpanderKind::BlockExpand => {
                    "no unit-coincidence set at grid scale".into()
                }
                _ => "inf|a| >= 1 and no unit-coincidence set at grid scale".into(),
            },
        },
        "expander-point",
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualityPair {
    /// Unilateral shift against its adjoint.
    ShiftWithAdjoint,
    /// Dyadic expander against the dyadic compressor.
    DyadicPair,
    /// Odd expander against the odd compressor.
    OddPair,
}

/// Star duality: membership of a for F must equal membership of a* for
/// F*. Both sides are evaluated by their own closed forms.
pub fn spectrum_star_duality_check(
    pair: DualityPair,
    alpha: &AlgebraElement,
    cfg: &EngineConfig,
) -> Result<bool> {
    let astar = alpha.star();
    let (lhs, rhs) = match pair {
        DualityPair::ShiftWithAdjoint => {
            // sigma(S*) = sigma(S)*, so the closed form for S* reads
            // inf|b| <= 1 as well; evaluate it independently at a*.
            let lhs = super::shift::unilateral_shift_spectrum(alpha, cfg)?.membership;
            let d = astar.inf_abs();
            let rhs = if d <= 1.0 + cfg.tol.boundary_band {
                Membership::In
            } else {
                Membership::Out
            };
            (lhs, rhs)
        }
        DualityPair::DyadicPair => (
            expander_spectra(ExpanderKind::DyadicExpand, alpha, cfg)?.membership,
            expander_spectra(ExpanderKind::DyadicCompress, &astar, cfg)?.membership,
        ),
        DualityPair::OddPair => (
            expander_spectra(ExpanderKind::OddExpand, alpha, cfg)?.membership,
            expander_spectra(ExpanderKind::OddCompress, &astar, cfg)?.membership,
        ),
    };
    Ok(lhs == rhs)
}
