use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Decision thresholds used everywhere a real-valued reading has to be
/// turned into a yes/no answer on floats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Equality / invertibility threshold.
    pub eq_tol: f64,
    /// Half-width of the undecidable band around closed-form thresholds.
    pub boundary_band: f64,
    /// Smallest singular value below which the oracle treats a
    /// truncation as singular; also the residual bound for witnesses.
    pub oracle_sv_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            eq_tol: 1e-9,
            boundary_band: 1e-6,
            oracle_sv_tol: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eq_tol > 0.0 && self.boundary_band > 0.0 && self.oracle_sv_tol > 0.0) {
            return Err(CoreError::ConfigError(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.boundary_band <= self.eq_tol {
            return Err(CoreError::ConfigError(
                "boundary_band must exceed eq_tol".into(),
            ));
        }
        Ok(())
    }
}

/// Truncation depths and sampling budgets for the predicate engine.
///
/// The growth ladders are chosen so that geometric tails at the
/// acceptance margins decay below `oracle_sv_tol` within the last
/// window: margin 0.05 needs depth 512, margin 1e-3 (matrix spectra)
/// needs depth 32768.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub tol: ToleranceConfig,
    /// Default truncation length for Natural indexing.
    pub depth: usize,
    /// Default half-range M for Integers indexing (coordinates -M..=M).
    pub bilateral_half: usize,
    /// Depth ladder for singular-value screening.
    pub sv_ladder: Vec<usize>,
    /// Default window ladder for sequence membership diagnostics.
    pub growth_depths: Vec<usize>,
    /// Deeper ladder used by resolvent-style predicates (margin 0.05).
    pub deep_growth_depths: Vec<usize>,
    /// Ladder for matrix-algebra shift spectra (margin 1e-3).
    pub matrix_growth_depths: Vec<usize>,
    /// Sample count for sampled sup/inf searches.
    pub samples: usize,
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            tol: ToleranceConfig::default(),
            depth: 48,
            bilateral_half: 24,
            sv_ladder: vec![16, 32, 64],
            growth_depths: vec![16, 32, 64, 128],
            deep_growth_depths: vec![64, 128, 256, 512],
            matrix_growth_depths: vec![4096, 8192, 16384, 32768],
            samples: 64,
            seed: 0x5eed,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        for ladder in [
            &self.sv_ladder,
            &self.growth_depths,
            &self.deep_growth_depths,
            &self.matrix_growth_depths,
        ] {
            if ladder.len() < 3 {
                return Err(CoreError::ConfigError(
                    "depth ladders need at least 3 entries".into(),
                ));
            }
            if !ladder.windows(2).all(|w| w[0] < w[1]) {
                return Err(CoreError::ConfigError(
                    "depth ladders must be strictly increasing".into(),
                ));
            }
        }
        if self.depth < 4 || self.bilateral_half < 2 {
            return Err(CoreError::ConfigError("truncation too shallow".into()));
        }
        Ok(())
    }
}
