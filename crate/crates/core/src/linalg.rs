//! Dense complex linear algebra helpers shared by the algebra layer and
//! the truncation oracle. Everything here is a thin policy layer over
//! nalgebra: singular values via SVD for small problems, LU-based
//! inverse iteration (with SVD fallback) for larger ones, and full
//! null-space bases via the Hermitian Gram eigenproblem so that wide
//! matrices are handled too.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;

const SVD_DIRECT_LIMIT: usize = 48;
const MAX_INVERSE_ITERS: usize = 48;
const INVERSE_ITER_RTOL: f64 = 3e-10;

fn try_svd_values(m: &DMatrix<C64>) -> Option<Vec<f64>> {
    m.clone()
        .try_svd(false, false, f64::EPSILON, 4000)
        .map(|svd| svd.singular_values.iter().copied().collect())
}

/// Singular values through the Gram matrix; used only as a fallback
/// when the iterative SVD fails to converge.
fn gram_singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let gram = m.adjoint() * m;
    let eig = SymmetricEigen::new(gram);
    let mut vals: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals
}

pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    try_svd_values(m).unwrap_or_else(|| gram_singular_values(m))
}

pub fn sigma_max(m: &DMatrix<C64>) -> f64 {
    let (rows, cols) = m.shape();
    if rows == cols {
        let mut diagonal = true;
        'scan: for r in 0..rows {
            for c in 0..cols {
                if r != c && m[(r, c)] != C64::new(0.0, 0.0) {
                    diagonal = false;
                    break 'scan;
                }
            }
        }
        if diagonal {
            return (0..rows).map(|i| m[(i, i)].norm()).fold(0.0, f64::max);
        }
    }
    singular_values(m).into_iter().fold(0.0, f64::max)
}

fn svd_smallest_pair(m: &DMatrix<C64>) -> (f64, DVector<C64>) {
    if let Some(svd) = m.clone().try_svd(false, true, f64::EPSILON, 4000) {
        let vt = svd.v_t.expect("requested v_t");
        let mut min_idx = 0;
        for (i, s) in svd.singular_values.iter().enumerate() {
            if *s < svd.singular_values[min_idx] {
                min_idx = i;
            }
        }
        let v = vt.row(min_idx).adjoint();
        return (svd.singular_values[min_idx], v);
    }
    // Gram fallback.
    let gram = m.adjoint() * m;
    let eig = SymmetricEigen::new(gram);
    let mut min_idx = 0;
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        if *l < eig.eigenvalues[min_idx] {
            min_idx = i;
        }
    }
    (
        eig.eigenvalues[min_idx].max(0.0).sqrt(),
        eig.eigenvectors.column(min_idx).into_owned(),
    )
}

/// Deterministic start vector for inverse iteration.
fn seeded_vector(n: usize) -> DVector<C64> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let mut v = DVector::from_fn(n, |_, _| C64::new(next(), next()));
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    v
}

fn diagonal_smallest(m: &DMatrix<C64>) -> Option<(f64, DVector<C64>)> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return None;
    }
    for r in 0..rows {
        for c in 0..cols {
            if r != c && m[(r, c)] != C64::new(0.0, 0.0) {
                return None;
            }
        }
    }
    let mut min_idx = 0;
    for i in 0..rows {
        if m[(i, i)].norm() < m[(min_idx, min_idx)].norm() {
            min_idx = i;
        }
    }
    let mut v = DVector::zeros(cols);
    v[min_idx] = C64::new(1.0, 0.0);
    Some((m[(min_idx, min_idx)].norm(), v))
}

/// Smallest singular value and its right singular vector.
///
/// Diagonal matrices short-circuit (multiplication operators flatten to
/// diagonal fibers). For square matrices beyond `SVD_DIRECT_LIMIT` this
/// runs inverse iteration on U*U via two LU solves per step, falling
/// back to a full SVD whenever the factorization degenerates. The
/// returned estimate is an upper bound on the true value; iteration
/// stops once successive estimates agree to 1e-11 relative.
pub fn smallest_singular_pair(m: &DMatrix<C64>) -> (f64, DVector<C64>) {
    if let Some(pair) = diagonal_smallest(m) {
        return pair;
    }
    let (rows, cols) = m.shape();
    if rows != cols || rows <= SVD_DIRECT_LIMIT {
        return svd_smallest_pair(m);
    }
    let lu = m.clone().lu();
    let lu_adj = m.adjoint().lu();
    let mut v = seeded_vector(cols);
    let mut sigma = f64::INFINITY;
    for _ in 0..MAX_INVERSE_ITERS {
        let w = match lu_adj.solve(&v) {
            Some(w) if w.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => w,
            _ => return svd_smallest_pair(m),
        };
        let z = match lu.solve(&w) {
            Some(z) if z.iter().all(|c| c.re.is_finite() && c.im.is_finite()) => z,
            _ => return svd_smallest_pair(m),
        };
        let nz = z.norm();
        if !nz.is_finite() || nz == 0.0 {
            return svd_smallest_pair(m);
        }
        v = z / C64::new(nz, 0.0);
        let estimate = (m * &v).norm();
        let converged = (sigma - estimate).abs() <= INVERSE_ITER_RTOL * estimate.max(1e-300);
        sigma = estimate;
        if converged {
            break;
        }
    }
    (sigma, v)
}

pub fn sigma_min(m: &DMatrix<C64>) -> f64 {
    smallest_singular_pair(m).0
}

/// Smallest singular value and right singular vector via the Gram
/// eigenproblem. Unlike thin SVD this sees the full column space of a
/// wide matrix; accuracy near zero is limited by the squared condition,
/// which is fine for direction extraction.
pub fn gram_smallest_pair(m: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let gram = m.adjoint() * m;
    let eig = SymmetricEigen::new(gram);
    let mut min_idx = 0;
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        if *l < eig.eigenvalues[min_idx] {
            min_idx = i;
        }
    }
    (
        eig.eigenvalues[min_idx].max(0.0).sqrt(),
        eig.eigenvectors.column(min_idx).into_owned(),
    )
}

/// Full basis of the (near-)null space {x : ||Mx|| <= sigma_tol}.
///
/// Goes through the Gram eigenproblem so wide matrices yield their full
/// null space, which plain thin SVD cannot provide.
pub fn null_space_basis(m: &DMatrix<C64>, sigma_tol: f64) -> Vec<DVector<C64>> {
    let gram = m.adjoint() * m;
    let eig = SymmetricEigen::new(gram);
    let mut basis = Vec::new();
    for (i, l) in eig.eigenvalues.iter().enumerate() {
        if l.max(0.0).sqrt() <= sigma_tol {
            basis.push(eig.eigenvectors.column(i).into_owned());
        }
    }
    basis
}

/// Least-squares solve via SVD pseudo-inverse.
pub fn lstsq(m: &DMatrix<C64>, rhs: &DVector<C64>) -> DVector<C64> {
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 4000)
        .expect("SVD for least squares");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    svd.solve(rhs, 1e-13 * smax.max(1.0))
        .expect("pseudo-inverse solve")
}

/// Eigenvalue range of a Hermitian matrix.
pub fn hermitian_eig_bounds(m: &DMatrix<C64>) -> (f64, f64) {
    let herm = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(herm);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for l in eig.eigenvalues.iter() {
        lo = lo.min(*l);
        hi = hi.max(*l);
    }
    (lo, hi)
}

pub fn try_inverse(m: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    m.clone().try_inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(n: usize, seed: u64) -> DMatrix<C64> {
        let mut state = seed | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        DMatrix::from_fn(n, n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn inverse_iteration_matches_svd() {
        for seed in 1..12u64 {
            let m = random_matrix(64, seed);
            let direct = singular_values(&m).into_iter().fold(f64::INFINITY, f64::min);
            let (iter, v) = smallest_singular_pair(&m);
            assert!((direct - iter).abs() <= 1e-7 * direct.max(1.0), "seed {seed}: {direct} vs {iter}");
            assert!(((&m * &v).norm() - iter).abs() <= 1e-9 * iter.max(1.0));
        }
    }

    #[test]
    fn null_space_of_wide_matrix_is_complete() {
        // 2x4 matrix with rank 2: null space has dimension 2.
        let m = DMatrix::from_row_slice(
            2,
            4,
            &[
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        );
        let basis = null_space_basis(&m, 1e-10);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!((&m * v).norm() <= 1e-10);
        }
    }

    #[test]
    fn sigma_min_of_singular_matrix_is_zero() {
        let mut m = random_matrix(24, 7);
        let col = m.ncols() - 1;
        for r in 0..m.nrows() {
            m[(r, col)] = C64::new(0.0, 0.0);
        }
        assert!(sigma_min(&m) <= 1e-12);
    }
}
