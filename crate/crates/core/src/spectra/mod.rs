//! Closed-form membership predicates for the generalized spectra of the
//! operator bank, with witness-producing certificates.
//!
//! Every predicate returns a [`SpectrumVerdict`]: a three-valued
//! membership decision, the spectrum part it concerns, the rule
//! identifier that was applied, and a certificate that re-verifies
//! under [`crate::operators::apply`]. Boundary-indeterminate verdicts
//! appear only when the deciding scalar falls inside the configured
//! boundary band of a strict threshold; inclusive thresholds (the full
//! spectra, which are norm-closed) resolve band cases to In.
//!
//! Witness residuals and pairings are evaluated on interior coordinates
//! (k <= N/2): geometric witnesses necessarily carry a truncation tail
//! at their last in-range coordinate, which always lies beyond N/2.

mod expanders;
mod approx;
mod selfadjoint;
mod shift;
mod unitary;

pub use approx::{approx_point_membership, residual_point_duality, BoundedBelowEvidence};
pub use expanders::{
    expander_point_spectra, expander_spectra, spectrum_star_duality_check, DualityPair,
    ExpanderKind,
};
pub use selfadjoint::{
    bounded_below_implies_invertible, normal_kernel_orthogonality, normal_residual_empty_check,
    selfadjoint_point_star_transfer, selfadjoint_spectrum_envelope, skew_resolvent_bound,
};
pub use shift::{
    block_shift_spectrum, mn_shift_spectrum, shift_cokernel_witness, shift_resolvent_solution,
    shift_spectrum_commutative, unilateral_shift_point_spectrum, unilateral_shift_spectrum,
    weighted_shift_kernel_witness,
};
pub use unitary::{
    bilateral_shift_point_spectrum, bilateral_shift_spectrum, diagonal_unitary_spectrum,
    unitary_norm_screen, ScreenOutcome,
};

use serde::{Deserialize, Serialize};

use crate::oracle::OracleReport;
use crate::standard_module::{GrowthDiagnostic, ModuleVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    In,
    Out,
    BoundaryIndeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumPart {
    Full,
    Point,
    ResidualLike,
    ApproxPoint,
}

/// Evidence attached to a verdict.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// x with ||(F - aI)x|| <= tol on interior coordinates, x != 0.
    KernelWitness { vector: ModuleVector, residual: f64 },
    /// x != 0 with max_k ||<(aI - F)e_k, x>|| <= tol over interior k.
    CokernelWitness {
        vector: ModuleVector,
        max_pairing: f64,
    },
    /// Solution of (aI - F)x = e_k with interior residual and the
    /// truncation remainder ||a^{-(N-k+1)}|| left at the boundary.
    ResolventSolution {
        vector: ModuleVector,
        target_index: i64,
        residual: f64,
        truncation_remainder: f64,
        growth: GrowthDiagnostic,
    },
    /// Certified lower bound on the bounded-below constant.
    InvertibilityBound { bound: f64 },
    Growth(GrowthDiagnostic),
    Oracle(OracleReport),
    None { reason: String },
}

#[derive(Debug, Clone)]
pub struct SpectrumVerdict {
    pub membership: Membership,
    pub spectrum_part: SpectrumPart,
    pub certificate: Certificate,
    /// Identifier of the closed-form rule that decided membership.
    pub rule: &'static str,
    pub notes: Vec<String>,
}

impl SpectrumVerdict {
    pub fn new(
        membership: Membership,
        spectrum_part: SpectrumPart,
        certificate: Certificate,
        rule: &'static str,
    ) -> Self {
        SpectrumVerdict {
            membership,
            spectrum_part,
            certificate,
            rule,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.notes.push(note);
        self
    }

    pub fn is_in(&self) -> bool {
        self.membership == Membership::In
    }

    pub fn is_out(&self) -> bool {
        self.membership == Membership::Out
    }
}
