//! Concrete coefficient algebras and their elements.
//!
//! Three representations are supported:
//!
//! * continuous functions on [0,1], stored as node values of a
//!   piecewise-linear interpolant on a uniform grid;
//! * essentially bounded functions on (0,1), stored as step functions
//!   with one value per uniform cell;
//! * full complex matrix algebras.
//!
//! Grid semantics are deliberate: pointwise products of node/cell
//! values keep the star and product operations exact, the sup-norm of a
//! piecewise-linear |f| is attained at nodes, and interior dips of |f|
//! between nodes are captured by evaluating on a refined grid. "Positive
//! measure" statements are read at grid scale: a property holds on a set
//! of positive measure iff at least one cell (step kind) or one full
//! grid segment (continuous kind) satisfies it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::config::ToleranceConfig;
use crate::error::{CoreError, Result};
use crate::linalg::{self, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Node count (continuous) or cell count (step).
    pub resolution: usize,
    /// Oversampling factor for extremizing |f| between nodes.
    pub refinement_factor: usize,
}

impl GridSpec {
    pub fn new(resolution: usize) -> Result<Self> {
        Self::with_refinement(resolution, 4)
    }

    pub fn with_refinement(resolution: usize, refinement_factor: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(CoreError::ConfigError(
                "grid resolution must be at least 2".into(),
            ));
        }
        if refinement_factor < 1 {
            return Err(CoreError::ConfigError(
                "refinement factor must be at least 1".into(),
            ));
        }
        Ok(GridSpec {
            resolution,
            refinement_factor,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlgebraKind {
    ContinuousFunctions(GridSpec),
    EssentiallyBounded(GridSpec),
    MatrixAlgebra(usize),
}

impl AlgebraKind {
    pub fn continuous(resolution: usize) -> Result<Self> {
        Ok(AlgebraKind::ContinuousFunctions(GridSpec::new(resolution)?))
    }

    pub fn step(resolution: usize) -> Result<Self> {
        Ok(AlgebraKind::EssentiallyBounded(GridSpec::new(resolution)?))
    }

    pub fn matrix(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(CoreError::ConfigError(
                "matrix algebra dimension must be positive".into(),
            ));
        }
        Ok(AlgebraKind::MatrixAlgebra(n))
    }

    pub fn is_function(&self) -> bool {
        matches!(
            self,
            AlgebraKind::ContinuousFunctions(_) | AlgebraKind::EssentiallyBounded(_)
        )
    }

    pub fn is_matrix(&self) -> bool {
        matches!(self, AlgebraKind::MatrixAlgebra(_))
    }

    /// Commutative algebras are the two function kinds and the trivial
    /// 1x1 matrix algebra.
    pub fn is_commutative(&self) -> bool {
        match self {
            AlgebraKind::MatrixAlgebra(n) => *n == 1,
            _ => true,
        }
    }

    pub fn grid(&self) -> Option<GridSpec> {
        match self {
            AlgebraKind::ContinuousFunctions(g) | AlgebraKind::EssentiallyBounded(g) => Some(*g),
            AlgebraKind::MatrixAlgebra(_) => None,
        }
    }

    pub fn matrix_dim(&self) -> Option<usize> {
        match self {
            AlgebraKind::MatrixAlgebra(n) => Some(*n),
            _ => None,
        }
    }

    /// Number of independent evaluation fibers: grid size for the
    /// function kinds, 1 for matrix algebras.
    pub fn fiber_count(&self) -> usize {
        match self {
            AlgebraKind::ContinuousFunctions(g) | AlgebraKind::EssentiallyBounded(g) => {
                g.resolution
            }
            AlgebraKind::MatrixAlgebra(_) => 1,
        }
    }

    /// Fiber count on the refined grid: the continuous kind samples each
    /// segment refinement_factor times so that the oracle sees the same
    /// interior extrema as inf_abs and norm do.
    pub fn refined_fiber_count(&self) -> usize {
        match self {
            AlgebraKind::ContinuousFunctions(g) => (g.resolution - 1) * g.refinement_factor + 1,
            AlgebraKind::EssentiallyBounded(g) => g.resolution,
            AlgebraKind::MatrixAlgebra(_) => 1,
        }
    }

    /// Parameter t in [0,1] associated with fiber i: node positions for
    /// the continuous kind, cell midpoints for the step kind.
    pub fn fiber_position(&self, i: usize) -> f64 {
        match self {
            AlgebraKind::ContinuousFunctions(g) => i as f64 / (g.resolution - 1) as f64,
            AlgebraKind::EssentiallyBounded(g) => (i as f64 + 0.5) / g.resolution as f64,
            AlgebraKind::MatrixAlgebra(_) => 0.0,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            AlgebraKind::ContinuousFunctions(g) => format!("continuous({})", g.resolution),
            AlgebraKind::EssentiallyBounded(g) => format!("step({})", g.resolution),
            AlgebraKind::MatrixAlgebra(n) => format!("matrix({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum ElementData {
    Grid(Vec<C64>),
    Matrix(DMatrix<C64>),
}

/// An element of a concrete C*-algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    kind: AlgebraKind,
    data: ElementData,
}

impl AlgebraElement {
    pub fn from_grid_values(kind: AlgebraKind, values: Vec<C64>) -> Result<Self> {
        let grid = kind.grid().ok_or_else(|| {
            CoreError::KindUnsupported("grid values require a function kind".into())
        })?;
        if values.len() != grid.resolution {
            return Err(CoreError::ShapeMismatch {
                expected: format!("{} values", grid.resolution),
                got: format!("{} values", values.len()),
            });
        }
        if let Some(pos) = values
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(CoreError::NonFiniteEntry { position: pos });
        }
        Ok(AlgebraElement {
            kind,
            data: ElementData::Grid(values),
        })
    }

    pub fn from_matrix(kind: AlgebraKind, matrix: DMatrix<C64>) -> Result<Self> {
        let n = kind.matrix_dim().ok_or_else(|| {
            CoreError::KindUnsupported("matrix data requires the matrix kind".into())
        })?;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(CoreError::ShapeMismatch {
                expected: format!("{n}x{n} matrix"),
                got: format!("{}x{} matrix", matrix.nrows(), matrix.ncols()),
            });
        }
        if let Some(pos) = matrix
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(CoreError::NonFiniteEntry { position: pos });
        }
        Ok(AlgebraElement {
            kind,
            data: ElementData::Matrix(matrix),
        })
    }

    /// Multiplicative unit.
    pub fn unit(kind: AlgebraKind) -> Self {
        match kind {
            AlgebraKind::MatrixAlgebra(n) => AlgebraElement {
                kind,
                data: ElementData::Matrix(DMatrix::identity(n, n)),
            },
            _ => AlgebraElement {
                kind,
                data: ElementData::Grid(vec![C64::new(1.0, 0.0); kind.fiber_count()]),
            },
        }
    }

    pub fn zero(kind: AlgebraKind) -> Self {
        match kind {
            AlgebraKind::MatrixAlgebra(n) => AlgebraElement {
                kind,
                data: ElementData::Matrix(DMatrix::zeros(n, n)),
            },
            _ => AlgebraElement {
                kind,
                data: ElementData::Grid(vec![C64::new(0.0, 0.0); kind.fiber_count()]),
            },
        }
    }

    /// c * 1_A.
    pub fn scalar(kind: AlgebraKind, c: C64) -> Self {
        Self::unit(kind).scale(c)
    }

    /// Indicator of the open interval (a,b), sampled at fiber positions.
    pub fn indicator(kind: AlgebraKind, a: f64, b: f64) -> Result<Self> {
        if !kind.is_function() {
            return Err(CoreError::KindUnsupported(
                "indicator requires a function kind".into(),
            ));
        }
        let values = (0..kind.fiber_count())
            .map(|i| {
                let t = kind.fiber_position(i);
                if t > a && t < b {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::from_grid_values(kind, values)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn grid_values(&self) -> Option<&[C64]> {
        match &self.data {
            ElementData::Grid(v) => Some(v),
            ElementData::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&DMatrix<C64>> {
        match &self.data {
            ElementData::Matrix(m) => Some(m),
            ElementData::Grid(_) => None,
        }
    }

    /// Scalar value of the element at fiber i (function kinds only).
    pub fn fiber(&self, i: usize) -> C64 {
        match &self.data {
            ElementData::Grid(v) => v[i],
            ElementData::Matrix(_) => panic!("fiber access on matrix kind"),
        }
    }

    /// Value at refined-grid fiber i: interpolated for the continuous
    /// kind, the cell value otherwise.
    pub fn refined_fiber(&self, i: usize) -> C64 {
        match (&self.kind, &self.data) {
            (AlgebraKind::ContinuousFunctions(g), ElementData::Grid(v)) => {
                let r = g.refinement_factor;
                let seg = i / r;
                let q = i % r;
                if seg >= v.len() - 1 {
                    v[v.len() - 1]
                } else if q == 0 {
                    v[seg]
                } else {
                    let s = q as f64 / r as f64;
                    v[seg] * C64::new(1.0 - s, 0.0) + v[seg + 1] * C64::new(s, 0.0)
                }
            }
            (_, ElementData::Grid(v)) => v[i],
            _ => panic!("fiber access on matrix kind"),
        }
    }

    fn check_same_kind(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(CoreError::KindMismatch {
                left: self.kind.describe(),
                right: other.kind.describe(),
            });
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        self.check_same_kind(other)?;
        match (&self.data, &other.data) {
            (ElementData::Grid(a), ElementData::Grid(b)) => Ok(AlgebraElement {
                kind: self.kind,
                data: ElementData::Grid(a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()),
            }),
            _ => unreachable!("zip is only used for grid data"),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_kind(other)?;
        match (&self.data, &other.data) {
            (ElementData::Matrix(a), ElementData::Matrix(b)) => Ok(AlgebraElement {
                kind: self.kind,
                data: ElementData::Matrix(a + b),
            }),
            _ => self.zip(other, |x, y| x + y),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_kind(other)?;
        match (&self.data, &other.data) {
            (ElementData::Matrix(a), ElementData::Matrix(b)) => Ok(AlgebraElement {
                kind: self.kind,
                data: ElementData::Matrix(a - b),
            }),
            _ => self.zip(other, |x, y| x - y),
        }
    }

    /// Pointwise product for the function kinds, matrix product for the
    /// matrix kind.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_kind(other)?;
        match (&self.data, &other.data) {
            (ElementData::Matrix(a), ElementData::Matrix(b)) => Ok(AlgebraElement {
                kind: self.kind,
                data: ElementData::Matrix(a * b),
            }),
            _ => self.zip(other, |x, y| x * y),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        match &self.data {
            ElementData::Grid(v) => AlgebraElement {
                kind: self.kind,
                data: ElementData::Grid(v.iter().map(|x| x * c).collect()),
            },
            ElementData::Matrix(m) => AlgebraElement {
                kind: self.kind,
                data: ElementData::Matrix(m.map(|x| x * c)),
            },
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }

    /// The involution: complex conjugate pointwise, or conjugate
    /// transpose.
    pub fn star(&self) -> Self {
        match &self.data {
            ElementData::Grid(v) => AlgebraElement {
                kind: self.kind,
                data: ElementData::Grid(v.iter().map(|x| x.conj()).collect()),
            },
            ElementData::Matrix(m) => AlgebraElement {
                kind: self.kind,
                data: ElementData::Matrix(m.adjoint()),
            },
        }
    }

    /// Samples of |f| on the refined grid. For the step kind this is
    /// just the cell values; for the continuous kind each segment of the
    /// piecewise-linear interpolant is sampled refinement_factor + 1
    /// times.
    pub fn refined_abs_samples(&self) -> Vec<f64> {
        match (&self.kind, &self.data) {
            (AlgebraKind::EssentiallyBounded(_), ElementData::Grid(v)) => {
                v.iter().map(|c| c.norm()).collect()
            }
            (AlgebraKind::ContinuousFunctions(g), ElementData::Grid(v)) => {
                let r = g.refinement_factor;
                let mut out = Vec::with_capacity((v.len() - 1) * r + 1);
                for j in 0..v.len() - 1 {
                    for q in 0..r {
                        let s = q as f64 / r as f64;
                        let val = v[j] * C64::new(1.0 - s, 0.0) + v[j + 1] * C64::new(s, 0.0);
                        out.push(val.norm());
                    }
                }
                out.push(v[v.len() - 1].norm());
                out
            }
            _ => panic!("refined samples on matrix kind"),
        }
    }

    /// Range of |f| over the refined grid (function kinds).
    pub fn abs_range(&self) -> (f64, f64) {
        let samples = self.refined_abs_samples();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for s in samples {
            lo = lo.min(s);
            hi = hi.max(s);
        }
        (lo, hi)
    }

    /// C*-norm: sup of |f| over the refined grid, or the largest
    /// singular value.
    pub fn norm(&self) -> f64 {
        match &self.data {
            ElementData::Grid(_) => self.abs_range().1,
            ElementData::Matrix(m) => linalg::sigma_max(m),
        }
    }

    /// inf |f| over the refined grid, or the smallest singular value.
    pub fn inf_abs(&self) -> f64 {
        match &self.data {
            ElementData::Grid(_) => self.abs_range().0,
            ElementData::Matrix(m) => linalg::sigma_min(m),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// Pointwise reciprocal / matrix inverse, defined when the element
    /// is bounded away from the singular set by eq_tol.
    pub fn try_invert(&self, cfg: &ToleranceConfig) -> Result<Self> {
        let measure = self.inf_abs();
        if measure <= cfg.eq_tol {
            return Err(CoreError::NotInvertible { inf_abs: measure });
        }
        match &self.data {
            ElementData::Grid(v) => Ok(AlgebraElement {
                kind: self.kind,
                data: ElementData::Grid(v.iter().map(|c| c.inv()).collect()),
            }),
            ElementData::Matrix(m) => {
                let inv = linalg::try_inverse(m)
                    .ok_or(CoreError::NotInvertible { inf_abs: measure })?;
                Ok(AlgebraElement {
                    kind: self.kind,
                    data: ElementData::Matrix(inv),
                })
            }
        }
    }

    /// Basis of right annihilators: nonzero Y with self * Y = 0.
    ///
    /// Matrix kind: one matrix per (null-space vector, column position)
    /// pair. Function kinds: the indicator of the vanishing set, or an
    /// empty list when that set is empty at grid scale. For the
    /// continuous kind a segment counts as vanishing only when |f| stays
    /// below eq_tol on the whole segment, which for a piecewise-linear
    /// interpolant is decided at its endpoints.
    pub fn right_annihilator_basis(&self, cfg: &ToleranceConfig) -> Vec<AlgebraElement> {
        match (&self.kind, &self.data) {
            (AlgebraKind::MatrixAlgebra(n), ElementData::Matrix(m)) => {
                let scale = linalg::sigma_max(m).max(1.0);
                let null = linalg::null_space_basis(m, cfg.eq_tol * scale);
                let mut out = Vec::new();
                for v in null {
                    for col in 0..*n {
                        let mut y = DMatrix::zeros(*n, *n);
                        y.set_column(col, &v);
                        out.push(AlgebraElement {
                            kind: self.kind,
                            data: ElementData::Matrix(y),
                        });
                    }
                }
                out
            }
            (AlgebraKind::EssentiallyBounded(_), ElementData::Grid(v)) => {
                let mask: Vec<C64> = v
                    .iter()
                    .map(|c| {
                        if c.norm() <= cfg.eq_tol {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                    .collect();
                if mask.iter().all(|c| c.re == 0.0) {
                    vec![]
                } else {
                    vec![AlgebraElement {
                        kind: self.kind,
                        data: ElementData::Grid(mask),
                    }]
                }
            }
            (AlgebraKind::ContinuousFunctions(_), ElementData::Grid(v)) => {
                let mut node_in = vec![false; v.len()];
                for j in 0..v.len() - 1 {
                    if v[j].norm() <= cfg.eq_tol && v[j + 1].norm() <= cfg.eq_tol {
                        node_in[j] = true;
                        node_in[j + 1] = true;
                    }
                }
                if node_in.iter().any(|b| *b) {
                    let mask = node_in
                        .iter()
                        .map(|b| {
                            if *b {
                                C64::new(1.0, 0.0)
                            } else {
                                C64::new(0.0, 0.0)
                            }
                        })
                        .collect();
                    vec![AlgebraElement {
                        kind: self.kind,
                        data: ElementData::Grid(mask),
                    }]
                } else {
                    vec![]
                }
            }
            _ => unreachable!("data always matches kind"),
        }
    }

    /// Max norm of the difference, cheaper than sub().norm() and exact
    /// at nodes.
    pub fn distance_to(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }

    pub fn is_self_adjoint_within(&self, tol: f64) -> bool {
        match self.sub(&self.star()) {
            Ok(d) => d.norm() <= tol,
            Err(_) => false,
        }
    }

    /// Projection test: p = p* = p^2.
    pub fn is_projection(&self, tol: f64) -> bool {
        if !self.is_self_adjoint_within(tol) {
            return false;
        }
        match self.mul(self).and_then(|sq| sq.distance_to(self)) {
            Ok(d) => d <= tol,
            Err(_) => false,
        }
    }

    /// True when some cell (step) or some full segment (continuous)
    /// satisfies |f - c| <= tol: the grid-scale reading of "f = c on a
    /// set of positive measure / on a closed subinterval".
    pub fn coincides_with_scalar_on_grid_set(&self, c: C64, tol: f64) -> bool {
        match (&self.kind, &self.data) {
            (AlgebraKind::EssentiallyBounded(_), ElementData::Grid(v)) => {
                v.iter().any(|x| (x - c).norm() <= tol)
            }
            (AlgebraKind::ContinuousFunctions(_), ElementData::Grid(v)) => (0..v.len() - 1)
                .any(|j| (v[j] - c).norm() <= tol && (v[j + 1] - c).norm() <= tol),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn t1() -> AlgebraElement {
        AlgebraElement::from_matrix(
            AlgebraKind::matrix(2).unwrap(),
            DMatrix::from_row_slice(2, 2, &[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        )
        .unwrap()
    }

    fn t2() -> AlgebraElement {
        AlgebraElement::from_matrix(
            AlgebraKind::matrix(2).unwrap(),
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 1.0)]),
        )
        .unwrap()
    }

    fn linear_ramp(kind: AlgebraKind, offset: f64) -> AlgebraElement {
        let values = (0..kind.fiber_count())
            .map(|i| c(kind.fiber_position(i) + offset, 0.0))
            .collect();
        AlgebraElement::from_grid_values(kind, values).unwrap()
    }

    #[test]
    fn unit_has_norm_one_in_every_kind() {
        for kind in [
            AlgebraKind::continuous(256).unwrap(),
            AlgebraKind::step(8).unwrap(),
            AlgebraKind::matrix(3).unwrap(),
        ] {
            let one = AlgebraElement::unit(kind);
            assert!((one.norm() - 1.0).abs() <= 1e-12);
            assert!((one.inf_abs() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn make_element_validates_shape_and_finiteness() {
        let kind = AlgebraKind::step(4).unwrap();
        assert!(matches!(
            AlgebraElement::from_grid_values(kind, vec![c(1.0, 0.0); 3]),
            Err(CoreError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            AlgebraElement::from_grid_values(kind, vec![c(1.0, 0.0), c(f64::NAN, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
            Err(CoreError::NonFiniteEntry { position: 1 })
        ));
    }

    #[test]
    fn indicator_of_left_half_covers_half_the_cells() {
        let kind = AlgebraKind::step(256).unwrap();
        let chi = AlgebraElement::indicator(kind, 0.0, 0.5).unwrap();
        let ones = chi
            .grid_values()
            .unwrap()
            .iter()
            .filter(|v| v.re == 1.0)
            .count();
        assert_eq!(ones, 128);
    }

    #[test]
    fn unit_law_and_inverse_consistency() {
        let kind = AlgebraKind::continuous(64).unwrap();
        let alpha = linear_ramp(kind, 0.5);
        let one = AlgebraElement::unit(kind);
        assert!(one.mul(&alpha).unwrap().distance_to(&alpha).unwrap() <= 1e-15);

        let inv = alpha.try_invert(&tol()).unwrap();
        let prod = alpha.mul(&inv).unwrap();
        assert!(prod.distance_to(&one).unwrap() <= 1e-7);
    }

    #[test]
    fn t1_times_its_inverse_is_identity() {
        let a = t1();
        let inv = a.try_invert(&tol()).unwrap();
        let prod = a.mul(&inv).unwrap();
        let id = AlgebraElement::unit(a.kind());
        assert!(prod.distance_to(&id).unwrap() <= 1e-9);
    }

    #[test]
    fn t2_minus_its_star_matches_the_skew_form() {
        // T2 - T2* = 2i * [[0,1],[1,1]]
        let d = t2().sub(&t2().star()).unwrap();
        let expected = AlgebraElement::from_matrix(
            AlgebraKind::matrix(2).unwrap(),
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 2.0), c(0.0, 2.0), c(0.0, 2.0)]),
        )
        .unwrap();
        assert!(d.distance_to(&expected).unwrap() <= 1e-12);
        assert!(d.try_invert(&tol()).is_ok());
    }

    #[test]
    fn star_is_an_involution_and_conjugates() {
        let kind = AlgebraKind::step(16).unwrap();
        let i_one = AlgebraElement::scalar(kind, c(0.0, 1.0));
        assert_eq!(i_one.star(), AlgebraElement::scalar(kind, c(0.0, -1.0)));
        assert_eq!(i_one.star().star(), i_one);

        let st = t2().star();
        let expected = AlgebraElement::from_matrix(
            AlgebraKind::matrix(2).unwrap(),
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, -1.0), c(0.0, -1.0)]),
        )
        .unwrap();
        assert_eq!(st, expected);
    }

    #[test]
    fn norm_of_linear_ramp_and_of_t1() {
        let kind = AlgebraKind::continuous(256).unwrap();
        let alpha = linear_ramp(kind, 0.5); // t + 1/2
        assert!((alpha.norm() - 1.5).abs() <= 1e-12);
        assert!((alpha.inf_abs() - 0.5).abs() <= 1e-12);

        // Eigenvalues of the symmetric matrix T1 are 1 +/- sqrt(2).
        let expected = 1.0 + 2.0f64.sqrt();
        assert!((t1().norm() - expected).abs() <= 1e-10);
    }

    #[test]
    fn inf_abs_of_step_function_is_min_over_cells() {
        let kind = AlgebraKind::step(8).unwrap();
        let values: Vec<C64> = (0..8)
            .map(|i| if i < 4 { c(3.0, 0.0) } else { c(0.5, 0.0) })
            .collect();
        let alpha = AlgebraElement::from_grid_values(kind, values).unwrap();
        assert!((alpha.inf_abs() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn inf_abs_sees_dips_between_nodes() {
        // f(t) = 2t - 1 + 0.1i on two nodes only: |f| dips near t = 0.5
        // even though both node values have modulus > 1.
        let kind = AlgebraKind::ContinuousFunctions(GridSpec::with_refinement(2, 64).unwrap());
        let alpha =
            AlgebraElement::from_grid_values(kind, vec![c(-1.0, 0.1), c(1.0, 0.1)]).unwrap();
        assert!(alpha.inf_abs() < 0.15);
    }

    #[test]
    fn non_invertible_examples() {
        let kind = AlgebraKind::continuous(64).unwrap();
        let ramp = linear_ramp(kind, 0.0); // t, vanishing at 0
        assert!(matches!(
            ramp.try_invert(&tol()),
            Err(CoreError::NotInvertible { .. })
        ));

        // det(T1 - T2) = 0.
        let d = t1().sub(&t2()).unwrap();
        assert!(matches!(
            d.try_invert(&tol()),
            Err(CoreError::NotInvertible { .. })
        ));
    }

    #[test]
    fn scalar_inverse() {
        let kind = AlgebraKind::step(8).unwrap();
        let two = AlgebraElement::scalar(kind, c(2.0, 0.0));
        let inv = two.try_invert(&tol()).unwrap();
        let half = AlgebraElement::scalar(kind, c(0.5, 0.0));
        assert!(inv.distance_to(&half).unwrap() <= 1e-15);
    }

    #[test]
    fn annihilators_match_supports() {
        // Invertible matrix: trivial annihilator set.
        assert!(t1().right_annihilator_basis(&tol()).is_empty());

        // diag(1,0): annihilators span matrices with columns in ker.
        let kind = AlgebraKind::matrix(2).unwrap();
        let p = AlgebraElement::from_matrix(
            kind,
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
        )
        .unwrap();
        let basis = p.right_annihilator_basis(&tol());
        assert_eq!(basis.len(), 2);
        let target = AlgebraElement::from_matrix(
            kind,
            DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        )
        .unwrap();
        assert!(basis
            .iter()
            .any(|y| y.distance_to(&target).unwrap() <= 1e-9
                || y.neg().distance_to(&target).unwrap() <= 1e-9
                || y.scale(c(0.0, 1.0)).distance_to(&target).unwrap() <= 1.0 + 1e-9));
        for y in &basis {
            assert!(p.mul(y).unwrap().norm() <= 1e-7);
            assert!(y.norm() > 0.0);
        }

        // Step function vanishing on the left half.
        let skind = AlgebraKind::step(8).unwrap();
        let chi_right = AlgebraElement::indicator(skind, 0.5, 1.0).unwrap();
        let ann = chi_right.right_annihilator_basis(&tol());
        assert_eq!(ann.len(), 1);
        let chi_left = AlgebraElement::indicator(skind, 0.0, 0.5).unwrap();
        assert!(ann[0].distance_to(&chi_left).unwrap() <= 1e-12);
    }

    #[test]
    fn coincidence_reading_is_grid_scale() {
        let kind = AlgebraKind::continuous(16).unwrap();
        // equals 1 on the whole left half
        let values: Vec<C64> = (0..16)
            .map(|i| {
                let t = kind.fiber_position(i);
                if t <= 0.5 {
                    c(1.0, 0.0)
                } else {
                    c(2.0, 0.0)
                }
            })
            .collect();
        let alpha = AlgebraElement::from_grid_values(kind, values).unwrap();
        assert!(alpha.coincides_with_scalar_on_grid_set(c(1.0, 0.0), 1e-9));

        // crosses 1 transversally at a single node: no full segment
        let ramp = linear_ramp(kind, 0.5);
        assert!(!ramp.coincides_with_scalar_on_grid_set(c(1.0, 0.0), 1e-9));
    }
}
