//! Named verification suites, one per implemented characterization.
//!
//! Every suite is deterministic for a fixed seed, shards its cases with
//! rayon, and reports failures with enough data to reproduce them. Run
//! counts at `Scale::Small` match the acceptance targets; `Scale::Full`
//! triples them.
//!
//! Predicate-versus-oracle agreement means no contradiction: a closed-
//! form In may not be certified bounded below, and a closed-form Out may
//! not show a near-singular trend. An indeterminate ladder contradicts
//! nothing; suites additionally report how many cases the oracle
//! resolved decisively.

use std::time::Instant;

use genspectra::algebra::{AlgebraElement, AlgebraKind};
use genspectra::config::EngineConfig;
use genspectra::error::{CoreError, Result};
use genspectra::linalg::C64;
use genspectra::literal;
use genspectra::operators::{adjoint, apply, OperatorExpr};
use genspectra::oracle::{self, OracleVerdict};
use genspectra::spectra::{
    self, BoundedBelowEvidence, Certificate, DualityPair, ExpanderKind, Membership,
};
use genspectra::standard_module::{GrowthVerdict, Indexing, ModuleVector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Small,
    Full,
}

impl Scale {
    fn factor(&self) -> usize {
        match self {
            Scale::Small => 1,
            Scale::Full => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scale::Small => "small",
            Scale::Full => "full",
        }
    }
}

#[derive(Debug, Clone)]
pub struct FailureRecord {
    pub case: String,
    pub message: String,
    pub reproduction: Value,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<FailureRecord>,
    pub notes: Vec<String>,
    pub wall_ms: u128,
    pub seed: u64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_value(&self) -> Value {
        let mut failures: Vec<Value> = self
            .failures
            .iter()
            .map(|f| {
                json!({
                    "case": f.case,
                    "message": f.message,
                    "reproduction": f.reproduction,
                })
            })
            .collect();
        failures.sort_by_key(|v| v["case"].as_str().unwrap_or_default().to_string());
        json!({
            "suite": self.suite,
            "cases": self.cases,
            "failures": failures,
            "notes": self.notes,
            "seed": self.seed,
            "wall_ms": self.wall_ms,
        })
    }
}

struct SuiteBuilder {
    suite: String,
    cases: usize,
    failures: Vec<FailureRecord>,
    notes: Vec<String>,
    start: Instant,
    seed: u64,
}

impl SuiteBuilder {
    fn new(suite: &str, seed: u64) -> Self {
        SuiteBuilder {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            start: Instant::now(),
            seed,
        }
    }

    fn case(&mut self, ok: bool, case: String, message: String, reproduction: Value) {
        self.cases += 1;
        if !ok {
            self.failures.push(FailureRecord {
                case,
                message,
                reproduction,
            });
        }
    }

    fn merge(&mut self, outcomes: Vec<(bool, String, String, Value)>) {
        for (ok, case, message, reproduction) in outcomes {
            self.case(ok, case, message, reproduction);
        }
    }

    fn note(&mut self, note: String) {
        self.notes.push(note);
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            suite: self.suite,
            cases: self.cases,
            failures: self.failures,
            notes: self.notes,
            wall_ms: self.start.elapsed().as_millis(),
            seed: self.seed,
        }
    }
}

pub fn suite_ids() -> &'static [&'static str] {
    &[
        "scalar-reduction",
        "prop-shift",
        "lemma-resolvent",
        "mn-shift",
        "cor-skew-bound",
        "cor-envelope",
        "ex-expanders",
        "prop-bilateral",
        "ex-star-transfer",
        "ex-matrix-residual",
        "ex-kernel-overlap",
        "ex-diagonal-unitary",
        "ex-m2-counterexample",
        "star-duality",
    ]
}

pub fn run_suite(id: &str, seed: u64, scale: Scale) -> Result<SuiteResult> {
    match id {
        "scalar-reduction" => scalar_reduction(seed, scale),
        "prop-shift" => prop_shift(seed, scale),
        "lemma-resolvent" => lemma_resolvent(seed, scale),
        "mn-shift" => mn_shift(seed, scale),
        "cor-skew-bound" => cor_skew_bound(seed, scale),
        "cor-envelope" => cor_envelope(seed, scale),
        "ex-expanders" => ex_expanders(seed, scale),
        "prop-bilateral" => prop_bilateral(seed, scale),
        "ex-star-transfer" => ex_star_transfer(seed),
        "ex-matrix-residual" => ex_matrix_residual(seed),
        "ex-kernel-overlap" => ex_kernel_overlap(seed),
        "ex-diagonal-unitary" => ex_diagonal_unitary(seed),
        "ex-m2-counterexample" => ex_m2_counterexample(seed),
        "star-duality" => star_duality(seed, scale),
        other => Err(CoreError::ConfigError(format!("unknown suite \"{other}\""))),
    }
}

fn cfg() -> EngineConfig {
    EngineConfig::default()
}

// ---------------------------------------------------------------------
// random inputs

fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    C64::new(
        (rng.random::<f64>() * 2.0 - 1.0) * radius,
        (rng.random::<f64>() * 2.0 - 1.0) * radius,
    )
}

/// Random element of a function algebra: low-order trigonometric data
/// for the continuous kind, independent cell values for the step kind.
fn random_function_element(rng: &mut ChaCha8Rng, kind: AlgebraKind) -> AlgebraElement {
    match kind {
        AlgebraKind::ContinuousFunctions(_) => {
            let coeffs: Vec<C64> = (0..4).map(|_| random_complex(rng, 1.0)).collect();
            let values = (0..kind.fiber_count())
                .map(|i| {
                    let t = kind.fiber_position(i);
                    let mut v = C64::new(0.0, 0.0);
                    for (j, c) in coeffs.iter().enumerate() {
                        let phase = std::f64::consts::TAU * j as f64 * t;
                        v += c * C64::new(phase.cos(), phase.sin());
                    }
                    v
                })
                .collect();
            AlgebraElement::from_grid_values(kind, values).expect("finite values")
        }
        AlgebraKind::EssentiallyBounded(_) => {
            let values = (0..kind.fiber_count())
                .map(|_| random_complex(rng, 1.5))
                .collect();
            AlgebraElement::from_grid_values(kind, values).expect("finite values")
        }
        AlgebraKind::MatrixAlgebra(_) => unreachable!("function kinds only"),
    }
}

/// Rescale so that inf|a| equals the target exactly; resamples when the
/// base element nearly vanishes somewhere.
fn element_with_inf(rng: &mut ChaCha8Rng, kind: AlgebraKind, target: f64) -> AlgebraElement {
    loop {
        let base = random_function_element(rng, kind);
        let inf = base.inf_abs();
        if inf > 1e-3 {
            return base.scale(C64::new(target / inf, 0.0));
        }
    }
}

/// Element r(t) e^{i theta(t)} with smooth modulus in [lo, hi] and a
/// slowly varying phase, so the refined-grid range stays inside the
/// band even for the continuous kind. Verified by construction via
/// abs_range; resamples otherwise.
fn modulus_banded_element(
    rng: &mut ChaCha8Rng,
    kind: AlgebraKind,
    lo: f64,
    hi: f64,
) -> AlgebraElement {
    loop {
        let mid = (lo + hi) / 2.0;
        let amp = (hi - lo) / 2.0 * rng.random::<f64>();
        let freq = 1.0 + (rng.random::<f64>() * 2.0).floor();
        let phase0 = rng.random::<f64>() * std::f64::consts::TAU;
        let theta0 = rng.random::<f64>() * std::f64::consts::TAU;
        let theta_rate = rng.random::<f64>() * 1.5;
        let values: Vec<C64> = (0..kind.fiber_count())
            .map(|i| {
                let t = kind.fiber_position(i);
                let r = mid + amp * (std::f64::consts::TAU * freq * t + phase0).sin();
                let th = theta0 + theta_rate * t;
                C64::new(r * th.cos(), r * th.sin())
            })
            .collect();
        let e = AlgebraElement::from_grid_values(kind, values).expect("finite");
        let (a, b) = e.abs_range();
        if a >= lo - 1e-12 && b <= hi + 1e-12 {
            return e;
        }
    }
}

fn random_matrix_element(rng: &mut ChaCha8Rng, n: usize) -> AlgebraElement {
    let kind = AlgebraKind::matrix(n).expect("n >= 1");
    let m = DMatrix::from_fn(n, n, |_, _| random_complex(rng, 1.0));
    AlgebraElement::from_matrix(kind, m).expect("finite")
}

// ---------------------------------------------------------------------
// test-side eigenvalue oracle (closed-form roots of the characteristic
// polynomial; independent of the growth-diagnostic route)

fn eigenvalues_2x2(m: &DMatrix<C64>) -> Vec<C64> {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - det * C64::new(4.0, 0.0)).sqrt();
    vec![
        (tr + disc) * C64::new(0.5, 0.0),
        (tr - disc) * C64::new(0.5, 0.0),
    ]
}

fn eigenvalues_3x3(m: &DMatrix<C64>) -> Vec<C64> {
    // characteristic polynomial l^3 + a l^2 + b l + c
    let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
        + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let det = m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]);
    let a = -tr;
    let b = minors;
    let c = -det;

    // depressed cubic t^3 + p t + q with l = t - a/3
    let third = C64::new(1.0 / 3.0, 0.0);
    let p = b - a * a * third;
    let q = a * a * a * C64::new(2.0 / 27.0, 0.0) - a * b * third + c;
    let half_q = q * C64::new(0.5, 0.0);
    let disc = (half_q * half_q + p * p * p * C64::new(1.0 / 27.0, 0.0)).sqrt();
    // pick the branch with the larger magnitude for stability
    let u3 = {
        let cand1 = -half_q + disc;
        let cand2 = -half_q - disc;
        if cand1.norm() >= cand2.norm() {
            cand1
        } else {
            cand2
        }
    };
    let shift = a * third;
    if u3.norm() < 1e-300 {
        return vec![-shift, -shift, -shift];
    }
    let u = u3.powf(1.0 / 3.0);
    let omega = C64::new(-0.5, 3.0f64.sqrt() / 2.0);
    let mut roots = Vec::with_capacity(3);
    let mut w = C64::new(1.0, 0.0);
    for _ in 0..3 {
        let uu = u * w;
        let t = uu - p / (uu * C64::new(3.0, 0.0));
        roots.push(t - shift);
        w *= omega;
    }
    roots
}

fn min_eigenvalue_modulus(e: &AlgebraElement) -> f64 {
    let m = e.matrix().expect("matrix kind");
    let eigs = match m.nrows() {
        1 => vec![m[(0, 0)]],
        2 => eigenvalues_2x2(m),
        3 => eigenvalues_3x3(m),
        _ => unreachable!("suite uses n <= 3"),
    };
    eigs.into_iter().map(|l| l.norm()).fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod eig_tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn quadratic_roots_match_known_eigenvalues() {
        // [[2,1],[1,0]] has eigenvalues 1 +/- sqrt(2)
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let mut eigs: Vec<f64> = eigenvalues_2x2(&m).iter().map(|l| l.re).collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((eigs[0] - (1.0 - 2.0f64.sqrt())).abs() <= 1e-12);
        assert!((eigs[1] - (1.0 + 2.0f64.sqrt())).abs() <= 1e-12);
    }

    #[test]
    fn cubic_roots_match_triangular_matrices() {
        // upper triangular: eigenvalues on the diagonal
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 2.0),
                c(0.5, -0.3),
                c(2.0, 0.0),
                c(0.0, 0.0),
                c(-0.7, 0.1),
                c(1.0, 1.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.25, -1.5),
            ],
        );
        let mut got: Vec<(f64, f64)> = eigenvalues_3x3(&m).iter().map(|l| (l.re, l.im)).collect();
        let mut expected = [(1.0, 2.0), (-0.7, 0.1), (0.25, -1.5)];
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, e) in got.iter().zip(&expected) {
            assert!((g.0 - e.0).abs() <= 1e-9 && (g.1 - e.1).abs() <= 1e-9, "{got:?}");
        }
    }

    #[test]
    fn cubic_roots_reproduce_the_characteristic_polynomial() {
        // residual check: each root nearly annihilates det(M - l I)
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..50 {
            let m = DMatrix::from_fn(3, 3, |_, _| random_complex(&mut rng, 2.0));
            for l in eigenvalues_3x3(&m) {
                let shifted = &m - DMatrix::identity(3, 3).map(|x: C64| x * l);
                let det = shifted[(0, 0)]
                    * (shifted[(1, 1)] * shifted[(2, 2)] - shifted[(1, 2)] * shifted[(2, 1)])
                    - shifted[(0, 1)]
                        * (shifted[(1, 0)] * shifted[(2, 2)] - shifted[(1, 2)] * shifted[(2, 0)])
                    + shifted[(0, 2)]
                        * (shifted[(1, 0)] * shifted[(2, 1)] - shifted[(1, 1)] * shifted[(2, 0)]);
                assert!(det.norm() <= 1e-8 * (1.0 + m.norm().powi(3)), "residual {}", det.norm());
            }
        }
    }
}

// ---------------------------------------------------------------------
// suites

/// Classical sanity over A = C (constant step functions): the shift
/// spectrum is the closed unit disk and the bilateral spectrum is the
/// unit circle.
fn scalar_reduction(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("scalar-reduction", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = AlgebraKind::step(2)?;
    let config = cfg();
    let count = 1000 * scale.factor();
    let mut done = 0;
    while done < count {
        let z = random_complex(&mut rng, 2.0);
        if (z.norm() - 1.0).abs() <= 1e-3 {
            continue;
        }
        done += 1;
        let alpha = AlgebraElement::scalar(kind, z);
        let expected_in = z.norm() <= 1.0;
        let got = spectra::unilateral_shift_spectrum(&alpha, &config)?;
        let ok_shift = got.is_in() == expected_in;

        let bilateral = spectra::bilateral_shift_spectrum(&alpha, &config)?;
        let expected_bi = (z.norm() - 1.0).abs() <= config.tol.boundary_band;
        let ok_bi = bilateral.is_in() == expected_bi;

        b.case(
            ok_shift && ok_bi,
            format!("alpha={z}"),
            format!(
                "|alpha|={}, shift {:?} (expected in={expected_in}), bilateral {:?} (expected in={expected_bi})",
                z.norm(),
                got.membership,
                bilateral.membership,
            ),
            json!({"re": z.re, "im": z.im}),
        );
    }
    Ok(b.finish())
}

fn oracle_contradicts(membership: Membership, verdict: &OracleVerdict) -> bool {
    match (membership, verdict) {
        (Membership::In, OracleVerdict::CertifiedBoundedBelow { .. }) => true,
        (Membership::Out, OracleVerdict::NearSingularTrend) => true,
        _ => false,
    }
}

/// Ladder with adaptive extension: start at the default depths and add
/// the deeper stage only when the short ladder is indeterminate.
fn agreement_ladder(
    op: &OperatorExpr,
    alpha: &AlgebraElement,
    config: &EngineConfig,
) -> Result<genspectra::oracle::OracleReport> {
    let mut report = oracle::bounded_below_ladder(op, alpha, &[16, 32, 64], &config.tol)?;
    if !matches!(report.verdict, OracleVerdict::Indeterminate) {
        return Ok(report);
    }
    report.depths.push(128);
    report
        .sv_mins
        .push(oracle::section_min_singular(op, alpha, 128)?);
    report.verdict = oracle::classify_ladder(&report.sv_mins, config.tol.oracle_sv_tol);
    Ok(report)
}

/// Shift characterization panel: closed form versus the section ladder,
/// cokernel witnesses for the decided In cases, and empty kernel
/// search everywhere.
fn prop_shift(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("prop-shift", seed);
    let config = cfg();
    let per_kind = 100 * scale.factor();
    let kinds = [AlgebraKind::step(8)?, AlgebraKind::continuous(5)?];

    let mut inputs = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for kind in kinds {
        for i in 0..per_kind {
            let target = if rng.random::<bool>() {
                0.1 + rng.random::<f64>() * 0.85
            } else {
                1.051 + rng.random::<f64>() * 1.5
            };
            let alpha = element_with_inf(&mut rng, kind, target);
            inputs.push((format!("{}-{i}", kind.describe()), alpha));
        }
    }

    let outcomes: Vec<(bool, String, String, Value)> = inputs
        .par_iter()
        .map(|(case, alpha)| {
            let run = || -> Result<(bool, String)> {
                let verdict = spectra::unilateral_shift_spectrum(alpha, &config)?;
                let report =
                    agreement_ladder(&OperatorExpr::UnilateralShift, alpha, &config)?;
                if oracle_contradicts(verdict.membership, &report.verdict) {
                    return Ok((
                        false,
                        format!(
                            "oracle contradiction: predicate {:?}, ladder {:?} (svs {:?})",
                            verdict.membership, report.verdict, report.sv_mins
                        ),
                    ));
                }
                let d = alpha.inf_abs();
                if verdict.is_in() && d < 0.95 {
                    match &verdict.certificate {
                        Certificate::CokernelWitness { max_pairing, .. } => {
                            if *max_pairing > 1e-8 {
                                return Ok((
                                    false,
                                    format!("cokernel pairing {max_pairing:.3e} too large"),
                                ));
                            }
                        }
                        other => {
                            return Ok((false, format!("expected cokernel witness, got {other:?}")));
                        }
                    }
                }
                let kernels = oracle::kernel_search(
                    &OperatorExpr::UnilateralShift,
                    alpha,
                    64,
                    &config.tol,
                )?;
                if !kernels.is_empty() {
                    return Ok((false, "kernel search found a spurious witness".into()));
                }
                Ok((true, String::new()))
            };
            match run() {
                Ok((ok, msg)) => (
                    ok,
                    case.clone(),
                    msg,
                    json!({"element": literal::element_to_value(alpha)}),
                ),
                Err(e) => (
                    false,
                    case.clone(),
                    format!("error: {e}"),
                    json!({"element": literal::element_to_value(alpha)}),
                ),
            }
        })
        .collect();
    b.merge(outcomes);
    Ok(b.finish())
}

/// Resolvent solutions by forward recurrence: small residual, tails
/// converging for inf|a| > 1.05, diverging for the unit.
fn lemma_resolvent(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("lemma-resolvent", seed);
    let config = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = AlgebraKind::step(8)?;
    for i in 0..(100 * scale.factor()) {
        let target = 1.051 + rng.random::<f64>() * 1.5;
        let alpha = element_with_inf(&mut rng, kind, target);
        let k = 1 + (rng.random::<u32>() % 4) as i64;
        match spectra::shift_resolvent_solution(&alpha, k, 64, &config) {
            Ok(Certificate::ResolventSolution {
                residual, growth, ..
            }) => {
                let ok = residual <= 1e-8 && growth.verdict == GrowthVerdict::Converging;
                b.case(
                    ok,
                    format!("case-{i}"),
                    format!("residual {residual:.3e}, growth {:?}", growth.verdict),
                    json!({"element": literal::element_to_value(&alpha), "k": k}),
                );
            }
            other => b.case(
                false,
                format!("case-{i}"),
                format!("unexpected outcome {other:?}"),
                json!({"element": literal::element_to_value(&alpha), "k": k}),
            ),
        }
    }
    // the unit: constant solution sequence diverges
    let one = AlgebraElement::unit(kind);
    match spectra::shift_resolvent_solution(&one, 1, 64, &config) {
        Ok(Certificate::ResolventSolution { growth, .. }) => b.case(
            growth.verdict == GrowthVerdict::Diverging,
            "unit".into(),
            format!("growth {:?}", growth.verdict),
            json!({"element": literal::element_to_value(&one)}),
        ),
        other => b.case(
            false,
            "unit".into(),
            format!("unexpected outcome {other:?}"),
            Value::Null,
        ),
    }
    Ok(b.finish())
}

/// Matrix-algebra shift spectrum against the closed-form eigenvalue
/// oracle: membership iff some eigenvalue modulus is at most 1.
fn mn_shift(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("mn-shift", seed);
    let config = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::new();
    let count = 100 * scale.factor();
    for n in [2usize, 3] {
        let mut done = 0;
        while done < count {
            // scale a raw random matrix so min eigenvalue moduli spread
            // around 1, then enforce the modulus margin
            let raw = random_matrix_element(&mut rng, n);
            let min_mod = min_eigenvalue_modulus(&raw);
            if min_mod < 1e-6 {
                continue;
            }
            let target = 0.2 + rng.random::<f64>() * 2.0;
            let t = raw.scale(C64::new(target / min_mod, 0.0));
            let m = min_eigenvalue_modulus(&t);
            if (m - 1.0).abs() <= 1e-3 {
                continue;
            }
            inputs.push((format!("n{n}-{done}"), t, m));
            done += 1;
        }
    }
    let outcomes: Vec<(bool, String, String, Value)> = inputs
        .par_iter()
        .map(|(case, t, min_mod)| {
            let expected_in = *min_mod <= 1.0 + cfg().tol.boundary_band;
            match spectra::mn_shift_spectrum(t, &config) {
                Ok(v) => (
                    v.is_in() == expected_in,
                    case.clone(),
                    format!(
                        "min eigen modulus {min_mod:.6}, verdict {:?} (expected in={expected_in})",
                        v.membership
                    ),
                    json!({"element": literal::element_to_value(t)}),
                ),
                Err(e) => (
                    false,
                    case.clone(),
                    format!("error: {e}"),
                    json!({"element": literal::element_to_value(t)}),
                ),
            }
        })
        .collect();
    b.merge(outcomes);
    Ok(b.finish())
}

/// Skew resolvent bound: sections of F - aI respect the closed-form
/// lower bound for uniformly positive diagonals and skew-invertible a;
/// the 2x2 counterexample reproduces.
fn cor_skew_bound(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("cor-skew-bound", seed);
    let config = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = AlgebraKind::continuous(256)?;
    for i in 0..(50 * scale.factor()) {
        // uniformly positive diagonal: g_k(t) = c_k + a_k sin(...) >= 0.2
        let entries: Vec<AlgebraElement> = (0..2)
            .map(|_| {
                let c = 0.5 + rng.random::<f64>() * 2.0;
                let a = rng.random::<f64>() * (c - 0.3);
                let f = 1.0 + (rng.random::<f64>() * 3.0).floor();
                let phi = rng.random::<f64>() * std::f64::consts::TAU;
                let values: Vec<C64> = (0..kind.fiber_count())
                    .map(|idx| {
                        let t = kind.fiber_position(idx);
                        C64::new(c + a * (std::f64::consts::TAU * f * t + phi).sin(), 0.0)
                    })
                    .collect();
                AlgebraElement::from_grid_values(kind, values).expect("finite")
            })
            .collect();
        let op = OperatorExpr::diagonal_self_adjoint(entries.clone())?;

        // alpha with a skew part bounded away from zero: imaginary part
        // of modulus >= 0.05 pointwise gives inf|a - a*| >= 0.1
        let re = random_function_element(&mut rng, kind);
        let im_floor = 0.05 + rng.random::<f64>() * 0.5;
        let alpha = {
            let values: Vec<C64> = re
                .grid_values()
                .unwrap()
                .iter()
                .enumerate()
                .map(|(idx, v)| {
                    let t = kind.fiber_position(idx);
                    let wobble = (std::f64::consts::TAU * t).cos().abs();
                    C64::new(v.re, im_floor * (1.0 + wobble))
                })
                .collect();
            AlgebraElement::from_grid_values(kind, values).expect("finite")
        };
        let skew_inf = alpha.sub(&alpha.star()).unwrap().inf_abs();
        if skew_inf < 0.1 {
            continue;
        }

        match spectra::skew_resolvent_bound(&op, &alpha, 48, &config) {
            Ok(v) => {
                let bound = match v.certificate {
                    Certificate::InvertibilityBound { bound } => bound,
                    _ => f64::NAN,
                };
                // independent fiberwise check on the refined grid
                let mut min_sigma = f64::INFINITY;
                for g in &entries {
                    for idx in 0..kind.refined_fiber_count() {
                        let gv = g.refined_fiber(idx);
                        let av = alpha.refined_fiber(idx);
                        min_sigma = min_sigma.min((gv - av).norm());
                    }
                }
                let ok = v.is_out() && min_sigma >= bound - 1e-6;
                b.case(
                    ok,
                    format!("case-{i}"),
                    format!("bound {bound:.6e}, fiberwise sigma_min {min_sigma:.6e}"),
                    json!({
                        "alpha": literal::element_to_value(&alpha),
                        "diagonal": entries.iter().map(literal::element_to_value).collect::<Vec<_>>(),
                    }),
                );
            }
            Err(e) => b.case(
                false,
                format!("case-{i}"),
                format!("error: {e}"),
                json!({"alpha": literal::element_to_value(&alpha)}),
            ),
        }
    }

    // 2x2 counterexample: T2 - T2* invertible yet det(T1 - T2) = 0
    let mkind = AlgebraKind::matrix(2)?;
    let t1 = AlgebraElement::from_matrix(
        mkind,
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        ),
    )?;
    let t2 = AlgebraElement::from_matrix(
        mkind,
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 1.0),
            ],
        ),
    )?;
    let skew_ok = t2.sub(&t2.star())?.try_invert(&config.tol).is_ok();
    let diff = t1.sub(&t2)?;
    let m = diff.matrix().unwrap();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let rejected = matches!(
        spectra::skew_resolvent_bound(&OperatorExpr::ScalarMult(t1.clone()), &t2, 8, &config),
        Err(CoreError::NotCommutative(_))
    );
    b.case(
        skew_ok && det.norm() <= 1e-12 && rejected,
        "m2-counterexample".into(),
        format!(
            "skew invertible: {skew_ok}, |det(T1-T2)| = {:.3e}, rule rejected: {rejected}",
            det.norm()
        ),
        json!({"t1": literal::element_to_value(&t1), "t2": literal::element_to_value(&t2)}),
    );
    Ok(b.finish())
}

/// Envelope rule for the diagonal 1 + t: out verdicts with certified
/// bounds whenever the range of |a| misses [m, M] with margin, and the
/// ladder certifies invertibility.
fn cor_envelope(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("cor-envelope", seed);
    let config = cfg();
    let kind = AlgebraKind::continuous(64)?;
    let g = genspectra::expr::parse_expression("1 + t", kind)?;
    let op = OperatorExpr::diagonal_self_adjoint(vec![g])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::new();
    for i in 0..(200 * scale.factor()) {
        // |alpha| range misses [1 - 0.05, 2 + 0.05]
        let alpha = if rng.random::<bool>() {
            modulus_banded_element(&mut rng, kind, 0.05, 0.90)
        } else {
            modulus_banded_element(&mut rng, kind, 2.10, 3.50)
        };
        inputs.push((format!("case-{i}"), alpha));
    }
    let outcomes: Vec<(bool, String, String, Value)> = inputs
        .par_iter()
        .map(|(case, alpha)| {
            let run = || -> Result<(bool, String)> {
                let v = spectra::selfadjoint_spectrum_envelope(&op, alpha, &config)?;
                let bound = match v.certificate {
                    Certificate::InvertibilityBound { bound } => bound,
                    _ => return Ok((false, format!("verdict {:?} without bound", v.membership))),
                };
                if !v.is_out() || bound <= 0.0 {
                    return Ok((false, format!("expected certified Out, got {:?}", v.membership)));
                }
                let report =
                    oracle::bounded_below_ladder(&op, alpha, &[16, 32, 64], &config.tol)?;
                match report.verdict {
                    OracleVerdict::CertifiedBoundedBelow { .. } => Ok((true, String::new())),
                    other => Ok((
                        false,
                        format!("oracle failed to confirm invertibility: {other:?}"),
                    )),
                }
            };
            match run() {
                Ok((ok, msg)) => (
                    ok,
                    case.clone(),
                    msg,
                    json!({"alpha": literal::element_to_value(alpha)}),
                ),
                Err(e) => (
                    false,
                    case.clone(),
                    format!("error: {e}"),
                    json!({"alpha": literal::element_to_value(alpha)}),
                ),
            }
        })
        .collect();
    b.merge(outcomes);
    Ok(b.finish())
}

/// Expander and compressor family: the shared range rule against the
/// ladder, kernel witnesses for the compressors (including the
/// corrected dyadic indexing), coincidence witnesses, and the empty
/// kernel search for the dyadic expander.
fn ex_expanders(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("ex-expanders", seed);
    let config = cfg();
    let per_kind = 100 * scale.factor();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::new();
    for ek in ExpanderKind::all() {
        let kind = if ek.is_block() {
            AlgebraKind::step(8)?
        } else if matches!(ek, ExpanderKind::DyadicExpand | ExpanderKind::DyadicCompress) {
            AlgebraKind::step(8)?
        } else {
            AlgebraKind::continuous(5)?
        };
        for i in 0..per_kind {
            let target = if rng.random::<bool>() {
                0.1 + rng.random::<f64>() * 0.85
            } else {
                1.051 + rng.random::<f64>() * 1.5
            };
            let alpha = element_with_inf(&mut rng, kind, target);
            inputs.push((format!("{}-{i}", ek.name()), ek, alpha));
        }
    }
    let outcomes: Vec<(bool, String, String, Value)> = inputs
        .par_iter()
        .map(|(case, ek, alpha)| {
            let run = || -> Result<(bool, String)> {
                let verdict = spectra::expander_spectra(*ek, alpha, &config)?;
                let op = ek.operator(alpha.kind())?;
                let report = agreement_ladder(&op, alpha, &config)?;
                if oracle_contradicts(verdict.membership, &report.verdict) {
                    return Ok((
                        false,
                        format!(
                            "oracle contradiction: predicate {:?}, ladder {:?} (svs {:?})",
                            verdict.membership, report.verdict, report.sv_mins
                        ),
                    ));
                }
                // witnesses must verify for decided In cases
                if verdict.is_in() && alpha.inf_abs() < 0.95 {
                    match &verdict.certificate {
                        Certificate::KernelWitness { residual, .. } => {
                            if *residual > 1e-8 {
                                return Ok((false, format!("kernel residual {residual:.3e}")));
                            }
                        }
                        Certificate::CokernelWitness { max_pairing, .. } => {
                            if *max_pairing > 1e-8 {
                                return Ok((false, format!("pairing {max_pairing:.3e}")));
                            }
                        }
                        other => return Ok((false, format!("missing witness: {other:?}"))),
                    }
                }
                // point spectrum checks for the compressors at depth 64
                if matches!(
                    ek,
                    ExpanderKind::DyadicCompress | ExpanderKind::OddCompress
                ) && alpha.inf_abs() < 0.95
                {
                    let point = spectra::expander_point_spectra(*ek, alpha, &config)?;
                    match &point.certificate {
                        Certificate::KernelWitness { residual, .. } => {
                            if *residual > 1e-8 {
                                return Ok((
                                    false,
                                    format!("point-spectrum kernel residual {residual:.3e}"),
                                ));
                            }
                        }
                        other => {
                            return Ok((false, format!("missing point witness: {other:?}")));
                        }
                    }
                }
                // dyadic expander: kernel search must come back empty
                if matches!(ek, ExpanderKind::DyadicExpand) {
                    let found = oracle::kernel_search(&op, alpha, 64, &config.tol)?;
                    if !found.is_empty() {
                        return Ok((false, "dyadic expander produced a kernel".into()));
                    }
                }
                Ok((true, String::new()))
            };
            match run() {
                Ok((ok, msg)) => (
                    ok,
                    case.clone(),
                    msg,
                    json!({"element": literal::element_to_value(alpha), "kind": ek.name()}),
                ),
                Err(e) => (
                    false,
                    case.clone(),
                    format!("error: {e}"),
                    json!({"element": literal::element_to_value(alpha), "kind": ek.name()}),
                ),
            }
        })
        .collect();
    b.merge(outcomes);

    // unit-coincidence witnesses for the odd family verify exactly
    let kind = AlgebraKind::step(8)?;
    let chi_l = AlgebraElement::indicator(kind, 0.0, 0.5)?;
    let chi_r = AlgebraElement::indicator(kind, 0.5, 1.0)?;
    let coincide = chi_l.add(&chi_r.scale(C64::new(3.0, 0.0)))?;
    for ek in [ExpanderKind::OddExpand, ExpanderKind::OddCompress] {
        let v = spectra::expander_point_spectra(ek, &coincide, &config)?;
        let ok = v.is_in()
            && matches!(&v.certificate, Certificate::KernelWitness { residual, .. } if *residual <= 1e-9);
        b.case(
            ok,
            format!("{}-coincidence", ek.name()),
            format!("verdict {:?}", v.membership),
            json!({"element": literal::element_to_value(&coincide)}),
        );
    }
    Ok(b.finish())
}

/// Bilateral shift panel: range rule against the recurrence-branch
/// solvability oracle on target e_0, kernel search empty throughout.
fn prop_bilateral(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("prop-bilateral", seed);
    let config = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::new();
    for i in 0..(200 * scale.factor()) {
        let step = rng.random::<bool>();
        let kind = if step {
            AlgebraKind::step(16)?
        } else {
            AlgebraKind::continuous(65)?
        };
        let style = rng.random::<u32>() % 3;
        let alpha = match style {
            // range above the circle
            0 => modulus_banded_element(&mut rng, kind, 1.05, 2.5),
            // range below
            1 => modulus_banded_element(&mut rng, kind, 0.1, 0.95),
            // crossing: for the step kind plant an exact unit cell
            _ => {
                if step {
                    let mut e = modulus_banded_element(&mut rng, kind, 0.3, 2.2);
                    let mut values = e.grid_values().unwrap().to_vec();
                    let cell = (rng.random::<u32>() as usize) % values.len();
                    let theta = rng.random::<f64>() * std::f64::consts::TAU;
                    values[cell] = C64::new(theta.cos(), theta.sin());
                    e = AlgebraElement::from_grid_values(kind, values)?;
                    e
                } else {
                    // smooth modulus sweeping through [0.5, 1.5]
                    loop {
                        let e = modulus_banded_element(&mut rng, kind, 0.4, 1.8);
                        let (lo, hi) = e.abs_range();
                        if lo <= 0.95 && hi >= 1.05 {
                            break e;
                        }
                    }
                }
            }
        };
        inputs.push((format!("case-{i}"), alpha));
    }
    let outcomes: Vec<(bool, String, String, Value)> = inputs
        .par_iter()
        .map(|(case, alpha)| {
            let run = || -> Result<(bool, String)> {
                let verdict = spectra::bilateral_shift_spectrum(alpha, &config)?;
                let e0 = ModuleVector::basis_vector(0, alpha.kind(), Indexing::integers(32))?;
                let outcome = oracle::solve(
                    &OperatorExpr::BilateralShift,
                    alpha,
                    &e0,
                    &[8, 16, 32],
                    &config.tol,
                )?;
                let solvable = oracle::solve_indicates_membership(&outcome);
                // membership iff e_0 is not attained: solvable iff Out
                if verdict.is_in() == solvable {
                    return Ok((
                        false,
                        format!(
                            "predicate {:?} but recurrence solve says solvable={solvable} \
                             (norms {:?})",
                            verdict.membership, outcome.solution_norms
                        ),
                    ));
                }
                let kernels = oracle::kernel_search(
                    &OperatorExpr::BilateralShift,
                    alpha,
                    32,
                    &config.tol,
                )?;
                if !kernels.is_empty() {
                    return Ok((false, "bilateral kernel search found a witness".into()));
                }
                Ok((true, String::new()))
            };
            match run() {
                Ok((ok, msg)) => (
                    ok,
                    case.clone(),
                    msg,
                    json!({"element": literal::element_to_value(alpha)}),
                ),
                Err(e) => (
                    false,
                    case.clone(),
                    format!("error: {e}"),
                    json!({"element": literal::element_to_value(alpha)}),
                ),
            }
        })
        .collect();
    b.merge(outcomes);
    Ok(b.finish())
}

/// Star transfer of kernel witnesses for the diagonal example, plus the
/// rejection when the skew part is not invertible.
fn ex_star_transfer(seed: u64) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("ex-star-transfer", seed);
    let config = cfg();
    let kind = AlgebraKind::step(8)?;
    let g1 = AlgebraElement::indicator(kind, 0.0, 0.25)?;
    let op = OperatorExpr::diagonal_self_adjoint(vec![g1.clone(), AlgebraElement::unit(kind)])?;
    let alpha = g1.scale(C64::new(0.0, 1.0));
    let f = AlgebraElement::indicator(kind, 0.5, 0.75)?;
    let x = ModuleVector::basis_times(1, &f, Indexing::natural(48))?;

    let transferred = spectra::selfadjoint_point_star_transfer(&op, &alpha, &x, 48, &config)?;
    b.case(
        transferred,
        "transfer".into(),
        format!("star transfer: {transferred}"),
        json!({"alpha": literal::element_to_value(&alpha)}),
    );

    // self-adjoint alpha transfers vacuously
    let sa = AlgebraElement::scalar(kind, C64::new(0.0, 0.0));
    let zero_x = ModuleVector::basis_times(1, &f, Indexing::natural(48))?;
    let op0 = OperatorExpr::diagonal_self_adjoint(vec![g1.clone()])?;
    let vacuous = spectra::selfadjoint_point_star_transfer(&op0, &sa, &zero_x, 48, &config)?;
    b.case(
        vacuous,
        "self-adjoint-alpha".into(),
        format!("vacuous transfer: {vacuous}"),
        Value::Null,
    );

    let rejected = matches!(
        spectra::skew_resolvent_bound(&op, &alpha, 32, &config),
        Err(CoreError::SkewPartNotInvertible)
    );
    b.case(
        rejected,
        "skew-not-invertible".into(),
        format!("skew rejection: {rejected}"),
        Value::Null,
    );

    // g~ I - G really is near singular: the oracle sees it
    let report = oracle::bounded_below_ladder(&op, &alpha, &[16, 32, 64], &config.tol)?;
    b.case(
        matches!(report.verdict, OracleVerdict::NearSingularTrend),
        "oracle-near-singular".into(),
        format!("{:?}", report.verdict),
        Value::Null,
    );
    Ok(b.finish())
}

/// Matrix-kind residual behavior at the 4x4 truncation of the classical
/// shift: the adjoint kernel is exact, the interior columns stay
/// bounded below by 1, and the duality equivalence holds once the
/// bounded-below screen is discharged by that interior bound. The full
/// 4x4 section is genuinely singular (last column leaves the
/// truncation), which is the artifact the interior restriction removes.
fn ex_matrix_residual(seed: u64) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("ex-matrix-residual", seed);
    let config = cfg();
    let kind = AlgebraKind::matrix(4)?;
    let mut p = DMatrix::zeros(4, 4);
    p[(0, 0)] = C64::new(1.0, 0.0);
    let p = AlgebraElement::from_matrix(kind, p)?;
    let mut s = DMatrix::zeros(4, 4);
    for k in 0..3 {
        s[(k + 1, k)] = C64::new(1.0, 0.0);
    }
    let s = AlgebraElement::from_matrix(kind, s)?;

    // (S* - P)(e1 + e2) = 0 exactly
    let sm = s.matrix().unwrap();
    let pm = p.matrix().unwrap();
    let v = nalgebra::DVector::from_vec(vec![
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ]);
    let image = (sm.adjoint() - pm) * &v;
    b.case(
        image.norm() <= 1e-15,
        "adjoint-kernel-exact".into(),
        format!("||(S*-P)(e1+e2)|| = {:.3e}", image.norm()),
        Value::Null,
    );

    // interior bounded-below constant: ||(S-P)x|| >= ||x|| away from the
    // truncation edge e4
    let diff = sm - pm;
    let interior = diff.columns(0, 3).into_owned();
    let sigma = genspectra::linalg::sigma_min(&interior);
    b.case(
        sigma >= 1.0 - 1e-12,
        "interior-bound".into(),
        format!("sigma_min on interior columns = {sigma:.12}"),
        Value::Null,
    );

    // the full section is singular at the edge: documented artifact
    let full_sigma = genspectra::linalg::sigma_min(&diff.clone_owned());
    b.case(
        full_sigma <= 1e-12,
        "edge-artifact".into(),
        format!("full-section sigma_min = {full_sigma:.3e}"),
        Value::Null,
    );
    b.note(
        "the 4x4 encoding of the shift is nilpotent: its last column leaves the truncation, \
         so S - P is singular in M4 even though the infinite-dimensional operator is bounded \
         below; the interior-column bound is the truncation-faithful reading"
            .into(),
    );

    // adjoint kernel is found by the oracle, and the surjectivity
    // defect matches: the duality equivalence holds under the assumed
    // interior bound
    let op = OperatorExpr::ScalarMult(p.clone());
    let found = oracle::kernel_search(&adjoint(&op), &s.star(), 8, &config.tol)?;
    b.case(
        !found.is_empty(),
        "oracle-adjoint-kernel".into(),
        format!("candidates: {}", found.len()),
        Value::Null,
    );

    let holds = spectra::residual_point_duality(
        &op,
        &s,
        8,
        &[8, 16, 32],
        BoundedBelowEvidence::Assume {
            bound: 1.0,
            justification: "sigma_min on interior columns of S - P equals 1; the full-section \
                            zero is the nilpotent-edge artifact"
                .into(),
        },
        &config,
    )?;
    b.case(
        holds,
        "duality-equivalence".into(),
        format!("equivalence holds: {holds}"),
        Value::Null,
    );

    // the oracle refuses to certify the full section, as it must
    let refused = matches!(
        spectra::residual_point_duality(
            &op,
            &s,
            8,
            &[8, 16, 32],
            BoundedBelowEvidence::OracleCertify,
            &config,
        ),
        Err(CoreError::PreconditionNotCertified)
    );
    b.case(
        refused,
        "honest-refusal".into(),
        format!("oracle refused certification: {refused}"),
        Value::Null,
    );
    Ok(b.finish())
}

/// Overlapping kernels when the difference of the two elements is not
/// invertible.
fn ex_kernel_overlap(seed: u64) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("ex-kernel-overlap", seed);
    let config = cfg();
    let kind = AlgebraKind::step(8)?;
    let g1 = AlgebraElement::indicator(kind, 0.0, 0.25)?;
    let op = OperatorExpr::diagonal_self_adjoint(vec![g1.clone(), AlgebraElement::unit(kind)])?;
    let alpha1 = AlgebraElement::zero(kind);
    let alpha2 = g1.scale(C64::new(0.0, 1.0));
    let f = AlgebraElement::indicator(kind, 0.5, 0.75)?;
    let idx = Indexing::natural(48);
    let x1 = ModuleVector::basis_times(1, &f, idx)?;
    let x2 = ModuleVector::basis_times(1, &f, idx)?;

    // both are genuine kernel witnesses
    for (name, alpha, x) in [("x1", &alpha1, &x1), ("x2", &alpha2, &x2)] {
        let residual = apply(&op.minus_scalar(alpha), x)?.interior_norm();
        b.case(
            residual <= 1e-12,
            format!("witness-{name}"),
            format!("residual {residual:.3e}"),
            Value::Null,
        );
    }

    let err = spectra::normal_kernel_orthogonality(&op, &alpha1, &alpha2, &x1, &x2, &config);
    b.case(
        matches!(err, Err(CoreError::DifferenceNotInvertible)),
        "difference-not-invertible".into(),
        format!("{err:?}"),
        Value::Null,
    );
    let overlap = !x1.is_orthogonal(&x2, 1e-7)?;
    b.case(
        overlap,
        "witnesses-overlap".into(),
        format!("overlap: {overlap}"),
        Value::Null,
    );

    // control: with an invertible difference the kernels are orthogonal
    let g = AlgebraElement::indicator(kind, 0.5, 1.0)?;
    let opg = OperatorExpr::diagonal_self_adjoint(vec![g.clone()])?;
    let one = AlgebraElement::unit(kind);
    let y1 = ModuleVector::basis_times(1, &AlgebraElement::indicator(kind, 0.0, 0.5)?, idx)?;
    let y2 = ModuleVector::basis_times(1, &g, idx)?;
    let ortho =
        spectra::normal_kernel_orthogonality(&opg, &AlgebraElement::zero(kind), &one, &y1, &y2, &config)?;
    b.case(
        ortho,
        "control-orthogonal".into(),
        format!("orthogonal: {ortho}"),
        Value::Null,
    );
    Ok(b.finish())
}

/// A diagonal unitary whose spectrum contains an element of norm 3.
fn ex_diagonal_unitary(seed: u64) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("ex-diagonal-unitary", seed);
    let config = cfg();
    let kind = AlgebraKind::step(8)?;
    let one = AlgebraElement::unit(kind);
    let chi_l = AlgebraElement::indicator(kind, 0.0, 0.5)?;
    let chi_r = AlgebraElement::indicator(kind, 0.5, 1.0)?;
    let beta = chi_l.add(&chi_r.scale(C64::new(3.0, 0.0)))?;
    let v = spectra::diagonal_unitary_spectrum(&beta, &[one.clone()], &config)?;
    b.case(
        v.is_in() && (beta.norm() - 3.0).abs() <= 1e-12 && !v.notes.is_empty(),
        "large-norm-member".into(),
        format!("membership {:?}, ||b|| = {}", v.membership, beta.norm()),
        json!({"beta": literal::element_to_value(&beta)}),
    );

    // beta = a_1 is a member; a distant constant is not
    let member = spectra::diagonal_unitary_spectrum(&one, &[one.clone()], &config)?;
    b.case(
        member.is_in(),
        "unit-member".into(),
        format!("{:?}", member.membership),
        Value::Null,
    );
    let five = AlgebraElement::scalar(kind, C64::new(5.0, 0.0));
    let out = spectra::diagonal_unitary_spectrum(&five, &[one], &config)?;
    b.case(
        out.is_out(),
        "distant-out".into(),
        format!("{:?}", out.membership),
        Value::Null,
    );
    Ok(b.finish())
}

/// Standalone 2x2 counterexample suite: the singular path asserted by
/// det and by the oracle.
fn ex_m2_counterexample(seed: u64) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("ex-m2-counterexample", seed);
    let config = cfg();
    let kind = AlgebraKind::matrix(2)?;
    let t1 = AlgebraElement::from_matrix(
        kind,
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(2.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        ),
    )?;
    let t2 = AlgebraElement::from_matrix(
        kind,
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 1.0),
            ],
        ),
    )?;
    let skew = t2.sub(&t2.star())?;
    b.case(
        skew.try_invert(&config.tol).is_ok(),
        "skew-invertible".into(),
        "T2 - T2* invertible".into(),
        Value::Null,
    );
    let diff = t1.sub(&t2)?;
    let m = diff.matrix().unwrap();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    b.case(
        det.norm() <= 1e-12,
        "determinant-vanishes".into(),
        format!("|det(T1 - T2)| = {:.3e}", det.norm()),
        Value::Null,
    );
    b.case(
        diff.try_invert(&config.tol).is_err(),
        "difference-singular".into(),
        "T1 - T2 not invertible".into(),
        Value::Null,
    );
    // oracle route: the sections of (T1 - T2) I are singular
    let op = OperatorExpr::ScalarMult(t1.clone());
    let report = oracle::bounded_below_ladder(&op, &t2, &[8, 16, 32], &config.tol)?;
    b.case(
        matches!(report.verdict, OracleVerdict::NearSingularTrend),
        "oracle-near-singular".into(),
        format!("{:?}", report.verdict),
        Value::Null,
    );
    // and the rule itself refuses the noncommutative algebra
    b.case(
        matches!(
            spectra::skew_resolvent_bound(&op, &t2, 8, &config),
            Err(CoreError::NotCommutative(_))
        ),
        "rule-rejects".into(),
        "skew bound rejects matrix algebra".into(),
        Value::Null,
    );
    Ok(b.finish())
}

/// Star duality across the three implemented pairs.
fn star_duality(seed: u64, scale: Scale) -> Result<SuiteResult> {
    let mut b = SuiteBuilder::new("star-duality", seed);
    let config = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = [AlgebraKind::step(8)?, AlgebraKind::continuous(5)?];
    let count = 500 * scale.factor();
    let mut inputs = Vec::new();
    for i in 0..count {
        let kind = kinds[i % kinds.len()];
        let alpha = random_function_element(&mut rng, kind).scale(C64::new(
            0.2 + rng.random::<f64>() * 2.0,
            0.0,
        ));
        inputs.push((format!("case-{i}"), alpha));
    }
    let outcomes: Vec<(bool, String, String, Value)> = inputs
        .par_iter()
        .map(|(case, alpha)| {
            let run = || -> Result<bool> {
                for pair in [
                    DualityPair::ShiftWithAdjoint,
                    DualityPair::DyadicPair,
                    DualityPair::OddPair,
                ] {
                    if !spectra::spectrum_star_duality_check(pair, alpha, &config)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            };
            match run() {
                Ok(ok) => (
                    ok,
                    case.clone(),
                    if ok { String::new() } else { "duality mismatch".into() },
                    json!({"element": literal::element_to_value(alpha)}),
                ),
                Err(e) => (
                    false,
                    case.clone(),
                    format!("error: {e}"),
                    json!({"element": literal::element_to_value(alpha)}),
                ),
            }
        })
        .collect();
    b.merge(outcomes);
    Ok(b.finish())
}
