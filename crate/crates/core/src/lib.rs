//! Generalized spectra of shift-type, diagonal, unitary, and normal
//! operators on truncated standard modules over concrete C*-algebras.
//!
//! The crate has five layers:
//!
//! * [`algebra`] — grid-backed function algebras and matrix algebras;
//! * [`standard_module`] — truncated module vectors, A-valued inner
//!   products, and tail diagnostics for sequence membership;
//! * [`operators`] — the operator bank as lazy symbolic expressions;
//! * [`spectra`] — closed-form membership predicates with
//!   witness-producing certificates;
//! * [`oracle`] — the independent finite-section machinery that
//!   cross-validates every predicate.

pub mod algebra;
pub mod config;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod literal;
pub mod operators;
pub mod oracle;
pub mod spectra;
pub mod standard_module;

pub use algebra::{AlgebraElement, AlgebraKind, GridSpec};
pub use config::{EngineConfig, ToleranceConfig};
pub use error::{CoreError, Result};
pub use operators::OperatorExpr;
pub use standard_module::{GrowthDiagnostic, GrowthVerdict, Indexing, ModuleVector};
