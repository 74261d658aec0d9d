//! Truncated vectors of the standard module over a coefficient algebra.
//!
//! The inner product is conjugate-linear in the first slot:
//! <x,y> = sum_i x_i* y_i. Natural indexing runs 1..=N; bilateral
//! indexing runs -M..=M. "Interior" coordinates (k <= N/2, |k| <= M/2)
//! are the truncation-faithful region: identities and residuals are
//! asserted there, since images of boundary coordinates fall outside
//! the truncation window.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraKind};
use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::linalg::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Indexing {
    /// Coordinates 1..=len.
    Natural { len: usize },
    /// Coordinates -half..=half.
    Integers { half: usize },
}

impl Indexing {
    pub fn natural(len: usize) -> Self {
        Indexing::Natural { len }
    }

    pub fn integers(half: usize) -> Self {
        Indexing::Integers { half }
    }

    pub fn count(&self) -> usize {
        match self {
            Indexing::Natural { len } => *len,
            Indexing::Integers { half } => 2 * half + 1,
        }
    }

    /// Storage slot of coordinate k, if in range.
    pub fn position(&self, k: i64) -> Option<usize> {
        match self {
            Indexing::Natural { len } => {
                if k >= 1 && k <= *len as i64 {
                    Some((k - 1) as usize)
                } else {
                    None
                }
            }
            Indexing::Integers { half } => {
                let h = *half as i64;
                if k >= -h && k <= h {
                    Some((k + h) as usize)
                } else {
                    None
                }
            }
        }
    }

    pub fn index_at(&self, slot: usize) -> i64 {
        match self {
            Indexing::Natural { .. } => slot as i64 + 1,
            Indexing::Integers { half } => slot as i64 - *half as i64,
        }
    }

    /// Truncation-faithful coordinates.
    pub fn is_interior(&self, k: i64) -> bool {
        match self {
            Indexing::Natural { len } => k >= 1 && k <= (*len / 2) as i64,
            Indexing::Integers { half } => k.unsigned_abs() as usize <= *half / 2,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Indexing::Natural { len } => format!("natural(1..={len})"),
            Indexing::Integers { half } => format!("integers(-{half}..={half})"),
        }
    }
}

/// Finitely many algebra-valued coordinates of a standard-module vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    kind: AlgebraKind,
    indexing: Indexing,
    entries: Vec<AlgebraElement>,
}

impl ModuleVector {
    pub fn zero(kind: AlgebraKind, indexing: Indexing) -> Self {
        ModuleVector {
            kind,
            indexing,
            entries: vec![AlgebraElement::zero(kind); indexing.count()],
        }
    }

    pub fn from_entries(
        kind: AlgebraKind,
        indexing: Indexing,
        entries: Vec<AlgebraElement>,
    ) -> Result<Self> {
        if entries.len() != indexing.count() {
            return Err(CoreError::ShapeMismatch {
                expected: format!("{} entries", indexing.count()),
                got: format!("{} entries", entries.len()),
            });
        }
        for e in &entries {
            if e.kind() != kind {
                return Err(CoreError::KindMismatch {
                    left: kind.describe(),
                    right: e.kind().describe(),
                });
            }
        }
        Ok(ModuleVector {
            kind,
            indexing,
            entries,
        })
    }

    /// Standard basis vector e_k.
    pub fn basis_vector(k: i64, kind: AlgebraKind, indexing: Indexing) -> Result<Self> {
        let slot = indexing.position(k).ok_or(CoreError::IndexOutOfRange {
            index: k,
            range: indexing.describe(),
        })?;
        let mut v = Self::zero(kind, indexing);
        v.entries[slot] = AlgebraElement::unit(kind);
        Ok(v)
    }

    /// e_k scaled by an algebra element.
    pub fn basis_times(k: i64, value: &AlgebraElement, indexing: Indexing) -> Result<Self> {
        let slot = indexing.position(k).ok_or(CoreError::IndexOutOfRange {
            index: k,
            range: indexing.describe(),
        })?;
        let mut v = Self::zero(value.kind(), indexing);
        v.entries[slot] = value.clone();
        Ok(v)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn indexing(&self) -> Indexing {
        self.indexing
    }

    pub fn entries(&self) -> &[AlgebraElement] {
        &self.entries
    }

    pub fn entry(&self, k: i64) -> Option<&AlgebraElement> {
        self.indexing.position(k).map(|s| &self.entries[s])
    }

    pub fn set_entry(&mut self, k: i64, value: AlgebraElement) -> Result<()> {
        if value.kind() != self.kind {
            return Err(CoreError::KindMismatch {
                left: self.kind.describe(),
                right: value.kind().describe(),
            });
        }
        let slot = self.indexing.position(k).ok_or(CoreError::IndexOutOfRange {
            index: k,
            range: self.indexing.describe(),
        })?;
        self.entries[slot] = value;
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(CoreError::KindMismatch {
                left: self.kind.describe(),
                right: other.kind.describe(),
            });
        }
        if self.indexing != other.indexing {
            return Err(CoreError::IndexingMismatch {
                left: self.indexing.describe(),
                right: other.indexing.describe(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleVector {
            kind: self.kind,
            indexing: self.indexing,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleVector {
            kind: self.kind,
            indexing: self.indexing,
            entries,
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        ModuleVector {
            kind: self.kind,
            indexing: self.indexing,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Right module action x . a, coordinatewise x_i a.
    pub fn mul_element(&self, a: &AlgebraElement) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.mul(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleVector {
            kind: self.kind,
            indexing: self.indexing,
            entries,
        })
    }

    /// <x,y> = sum_i x_i* y_i.
    pub fn inner_product(&self, other: &Self) -> Result<AlgebraElement> {
        self.check_compatible(other)?;
        let mut acc = AlgebraElement::zero(self.kind);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = acc.add(&a.star().mul(b)?)?;
        }
        Ok(acc)
    }

    pub fn vector_norm(&self) -> f64 {
        let ip = self
            .inner_product(self)
            .expect("self inner product is always compatible");
        ip.norm().max(0.0).sqrt()
    }

    pub fn is_orthogonal(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self.inner_product(other)?.norm() <= tol)
    }

    /// Fraction of the squared norm carried by interior coordinates.
    pub fn interior_mass_fraction(&self) -> f64 {
        let mut interior = 0.0;
        let mut total = 0.0;
        for (slot, e) in self.entries.iter().enumerate() {
            let k = self.indexing.index_at(slot);
            let mass = e.norm().powi(2);
            total += mass;
            if self.indexing.is_interior(k) {
                interior += mass;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            interior / total
        }
    }

    /// Norm restricted to interior coordinates.
    pub fn interior_norm(&self) -> f64 {
        let mut acc = AlgebraElement::zero(self.kind);
        for (slot, e) in self.entries.iter().enumerate() {
            if self.indexing.is_interior(self.indexing.index_at(slot)) {
                acc = acc
                    .add(&e.star().mul(e).expect("same kind"))
                    .expect("same kind");
            }
        }
        acc.norm().max(0.0).sqrt()
    }

    /// Zero-pad / truncate to a different indexing of the same family.
    pub fn reindexed(&self, indexing: Indexing) -> Self {
        let mut out = ModuleVector::zero(self.kind, indexing);
        for (slot, e) in self.entries.iter().enumerate() {
            let k = self.indexing.index_at(slot);
            if let Some(dst) = indexing.position(k) {
                out.entries[dst] = e.clone();
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthVerdict {
    Converging,
    Diverging,
    Indeterminate,
}

/// Window sums of sum_k x_k* x_k between consecutive ladder depths,
/// classifying whether the underlying infinite sequence can lie in the
/// standard module.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthDiagnostic {
    pub depths: Vec<usize>,
    pub tail_norms: Vec<f64>,
    pub verdict: GrowthVerdict,
}

/// Tail diagnostics for a coordinate generator k -> x_k.
///
/// Converging requires the last window below `oracle_sv_tol` and
/// nonincreasing windows across the last three depths; a window growing
/// by a factor >= 2 (or overflowing) reads as divergence.
pub fn sequence_membership_diagnostic(
    mut gen: impl FnMut(usize) -> AlgebraElement,
    depths: &[usize],
    kind: AlgebraKind,
    tol: &ToleranceConfig,
) -> Result<GrowthDiagnostic> {
    if depths.len() < 3 || !depths.windows(2).all(|w| w[0] < w[1]) {
        return Err(CoreError::ConfigError(
            "growth ladder needs at least 3 strictly increasing depths".into(),
        ));
    }
    let mut tail_norms = Vec::with_capacity(depths.len() - 1);
    let mut overflow = false;
    'windows: for w in depths.windows(2) {
        let mut acc = AlgebraElement::zero(kind);
        for k in w[0]..w[1] {
            let x = gen(k);
            if x.kind() != kind {
                return Err(CoreError::KindMismatch {
                    left: kind.describe(),
                    right: x.kind().describe(),
                });
            }
            let term = x.star().mul(&x)?;
            acc = acc.add(&term)?;
            if !acc.norm().is_finite() {
                overflow = true;
                tail_norms.push(f64::INFINITY);
                break 'windows;
            }
        }
        tail_norms.push(acc.norm());
    }

    let verdict = if overflow || tail_norms.iter().any(|t| !t.is_finite()) {
        GrowthVerdict::Diverging
    } else {
        classify_tails(&tail_norms, tol.oracle_sv_tol)
    };
    Ok(GrowthDiagnostic {
        depths: depths.to_vec(),
        tail_norms,
        verdict,
    })
}

fn classify_tails(tails: &[f64], sv_tol: f64) -> GrowthVerdict {
    let n = tails.len();
    let last = tails[n - 1];
    let nonincreasing = if n >= 3 {
        tails[n - 3] >= tails[n - 2] && tails[n - 2] >= tails[n - 1]
    } else {
        tails[n - 2] >= tails[n - 1]
    };
    if last <= sv_tol && nonincreasing {
        return GrowthVerdict::Converging;
    }
    if n >= 2 && last >= 2.0 * tails[n - 2] && last > 0.0 {
        return GrowthVerdict::Diverging;
    }
    GrowthVerdict::Indeterminate
}

/// Overflow-guarded power sequence a^(-k) or T^(-k): the generator used
/// by the resolvent membership tests. Entries are clamped to infinity
/// once they leave the representable range; the diagnostic reads that as
/// divergence.
pub struct InversePowers {
    current: AlgebraElement,
    inverse: AlgebraElement,
    exponent: usize,
    saturated: bool,
}

impl InversePowers {
    pub fn new(inverse: AlgebraElement) -> Self {
        InversePowers {
            current: AlgebraElement::unit(inverse.kind()),
            inverse,
            exponent: 0,
            saturated: false,
        }
    }

    /// Advance to a^(-k) (k must be nondecreasing across calls).
    pub fn at(&mut self, k: usize) -> AlgebraElement {
        while self.exponent < k && !self.saturated {
            match self.current.mul(&self.inverse) {
                Ok(next) => {
                    if !next.norm().is_finite() || next.norm() > 1e120 {
                        self.saturated = true;
                    } else {
                        self.current = next;
                    }
                }
                Err(_) => self.saturated = true,
            }
            self.exponent += 1;
        }
        if self.saturated && self.exponent < k {
            self.exponent = k;
        }
        if self.saturated {
            // A saturated tail keeps growing; report a huge constant so
            // the diagnostic classifies divergence.
            self.current.scale(C64::new(2.0, 0.0))
        } else {
            self.current.clone()
        }
    }
}
