//! Numerical rank, orthonormal bases, nullspaces and projections.
//!
//! Every dimension claim in this crate is an integer, so rank decisions are
//! made with a relative threshold *and* a gap check: the smallest kept
//! singular value must exceed the largest dropped one by [`RANK_GAP`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::Signature;
use crate::error::{Error, Result};

/// Default relative rank threshold.
pub const RANK_TOL: f64 = 1e-8;

/// Minimum ratio between the smallest kept and the largest dropped singular value.
pub const RANK_GAP: f64 = 1e4;

/// Stack vectors as the columns of a matrix.
pub fn column_matrix(vectors: &[DVector<f64>]) -> Result<DMatrix<f64>> {
    let Some(first) = vectors.first() else {
        return Ok(DMatrix::zeros(0, 0));
    };
    let rows = first.len();
    for v in vectors {
        if v.len() != rows {
            return Err(Error::Dimension { expected: rows, found: v.len() });
        }
    }
    Ok(DMatrix::from_columns(vectors))
}

/// Full singular value decomposition `m = u diag(sv) v^T` with `u` and `v`
/// square and `sv` of length `min(rows, cols)` in decreasing order.
///
/// Computed with faer: nalgebra's iteration returns wrong factorisations for
/// some rank-deficient inputs (for instance rank-one 50x2 matrices), which
/// silently corrupts spans. The reconstruction is still checked.
fn checked_svd(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>, DMatrix<f64>)> {
    let (rows, cols) = m.shape();
    let f = faer::Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let svd = f.svd().map_err(|e| Error::Degeneracy(format!("singular value decomposition failed: {e:?}")))?;
    let (fu, fs, fv) = (svd.U(), svd.S().column_vector(), svd.V());
    let u = DMatrix::from_fn(rows, rows, |i, j| fu[(i, j)]);
    let sv = DVector::from_fn(rows.min(cols), |i, _| fs[i]);
    let v = DMatrix::from_fn(cols, cols, |i, j| fv[(i, j)]);
    let k = sv.len();
    let rec = u.columns(0, k) * DMatrix::from_diagonal(&sv) * v.columns(0, k).transpose();
    let err = (rec - m).norm();
    if err > 1e-12 * m.norm() * (rows.max(cols) as f64) {
        return Err(Error::Degeneracy(format!("singular value decomposition off by {err:e}")));
    }
    Ok((u, sv, v))
}

/// Left singular vectors (square in the row dimension, so that complements
/// are available) and singular values in decreasing order.
fn svd_parts(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let (u, sv, _) = checked_svd(m)?;
    Ok((u, sv.iter().copied().collect()))
}

/// Count singular values above `tol * max`, enforcing the [`RANK_GAP`] guard.
fn rank_from_singular_values(sv: &[f64], tol: f64) -> Result<usize> {
    let largest = sv.iter().copied().fold(0.0_f64, f64::max);
    if largest == 0.0 {
        return Ok(0);
    }
    let cutoff = tol * largest;
    let rank = sv.iter().filter(|&&s| s > cutoff).count();
    if rank < sv.len() {
        let kept = sv.iter().copied().filter(|&s| s > cutoff).fold(f64::INFINITY, f64::min);
        let dropped = sv.iter().copied().filter(|&s| s <= cutoff).fold(0.0_f64, f64::max);
        if dropped > 0.0 && kept / dropped < RANK_GAP {
            return Err(Error::Degeneracy(format!("rank gap too small: kept {kept:e}, dropped {dropped:e}")));
        }
    }
    Ok(rank)
}

/// Numerical rank of a family of vectors of common length.
pub fn numerical_rank(vectors: &[DVector<f64>], tol: f64) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let m = column_matrix(vectors)?;
    let (_, sv, _) = checked_svd(&m)?;
    rank_from_singular_values(sv.as_slice(), tol)
}

/// Orthonormal (Euclidean) basis of the span, as matrix columns.
pub fn orthonormal_basis(vectors: &[DVector<f64>], dim: usize, tol: f64) -> Result<DMatrix<f64>> {
    if vectors.is_empty() {
        return Ok(DMatrix::zeros(dim, 0));
    }
    let m = column_matrix(vectors)?;
    if m.nrows() != dim {
        return Err(Error::Dimension { expected: dim, found: m.nrows() });
    }
    let (u, sv) = svd_parts(&m)?;
    let rank = rank_from_singular_values(&sv, tol)?;
    Ok(u.columns(0, rank).into_owned())
}

/// Orthonormal basis of the orthogonal complement of the span (Euclidean).
pub fn orthogonal_complement(vectors: &[DVector<f64>], dim: usize, tol: f64) -> Result<DMatrix<f64>> {
    if vectors.is_empty() {
        return Ok(DMatrix::identity(dim, dim));
    }
    let m = column_matrix(vectors)?;
    let (u, sv) = svd_parts(&m)?;
    let rank = rank_from_singular_values(&sv, tol)?;
    Ok(u.columns(rank, dim - rank).into_owned())
}

/// Orthonormal basis of the nullspace `{x : A x = 0}`, as matrix columns.
pub fn nullspace(a: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    let cols = a.ncols();
    if a.nrows() == 0 {
        return Ok(DMatrix::identity(cols, cols));
    }
    // Row space of A lives in R^cols; its complement is the nullspace.
    let rows: Vec<DVector<f64>> = a.row_iter().map(|r| r.transpose()).collect();
    orthogonal_complement(&rows, cols, tol)
}

/// True when `v` lies in the column span of `orthonormal` (Euclidean residual).
pub fn in_span(v: &DVector<f64>, orthonormal: &DMatrix<f64>, tol: f64) -> bool {
    let norm = v.norm();
    if norm == 0.0 {
        return true;
    }
    let residual = v - orthonormal * (orthonormal.transpose() * v);
    residual.norm() <= tol * norm
}

/// Projection of `v` onto `span(basis)`, orthogonal with respect to `sig`.
///
/// The Gram matrix of the basis under `sig` must be positive definite.
pub fn project_onto(v: &DVector<f64>, basis: &[DVector<f64>], sig: Signature) -> Result<DVector<f64>> {
    let dim = sig.dim();
    if v.len() != dim {
        return Err(Error::Dimension { expected: dim, found: v.len() });
    }
    if basis.is_empty() {
        return Ok(DVector::zeros(dim));
    }
    let k = basis.len();
    let mut gram = DMatrix::zeros(k, k);
    let mut rhs = DVector::zeros(k);
    for i in 0..k {
        rhs[i] = super::scalar_product(&basis[i], v, sig)?;
        for j in 0..k {
            gram[(i, j)] = super::scalar_product(&basis[i], &basis[j], sig)?;
        }
    }
    let eig = SymmetricEigen::new(gram.clone());
    let max = eig.eigenvalues.iter().copied().fold(0.0_f64, |a, b| a.max(b.abs()));
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -1e-12 * max.max(1.0) {
        return Err(Error::Unsupported("subspace carries an indefinite induced form".into()));
    }
    if min <= 1e-12 * max {
        return Err(Error::Degeneracy("projection basis is linearly dependent".into()));
    }
    let coeffs = gram.cholesky().ok_or_else(|| Error::Numeric("Gram matrix factorisation failed".into()))?.solve(&rhs);
    let mut out = DVector::zeros(dim);
    for (c, b) in coeffs.iter().zip(basis) {
        out.axpy(*c, b, 1.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, n: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    // a tangent frame on which the unscaled iteration returns a wrong
    // factorisation; column j is i p in a rank-6 span
    #[rustfmt::skip]
    const FRAME: [f64; 56] = [
        1.2122232633828958, 1.613444214798215, -2.4353897333481416, -1.7909087173120675, 0.0, 0.0, 0.0, 0.0,
        -0.3929425702319447, -0.29984559316941456, 0.0, 0.0, -2.4353897333481416, -1.7909087173120675, 0.0, 0.0,
        0.7282817218890119, -1.8141345602816104, 0.0, 0.0, 0.0, 0.0, -2.4353897333481416, -1.7909087173120675,
        0.0, 0.0, -0.3929425702319447, -0.29984559316941456, -1.2122232633828958, -1.613444214798215, 0.0, 0.0,
        0.0, 0.0, 0.7282817218890119, -1.8141345602816104, 0.0, 0.0, -1.2122232633828958, -1.613444214798215,
        0.0, 0.0, 0.0, 0.0, 0.7282817218890119, -1.8141345602816104, 0.3929425702319447, 0.29984559316941456,
        1.7909087173120675, -2.4353897333481416, -1.613444214798215, 1.2122232633828958, 0.29984559316941456,
        -0.3929425702319447, 1.8141345602816104, 0.7282817218890119,
    ];

    #[test]
    fn frame_spans_its_columns() {
        let m = DMatrix::from_column_slice(8, 7, &FRAME);
        let cols: Vec<DVector<f64>> = m.column_iter().map(|c| c.into_owned()).collect();
        assert_eq!(numerical_rank(&cols, RANK_TOL).unwrap(), 6);
        let frame = orthonormal_basis(&cols, 8, RANK_TOL).unwrap();
        assert_eq!(frame.ncols(), 6);
        for c in &cols {
            assert!(in_span(c, &frame, 1e-12));
        }
        let (u, sv, v) = checked_svd(&m).unwrap();
        let err = (u.columns(0, 7) * DMatrix::from_diagonal(&sv) * v.transpose() - &m).norm();
        assert!(err < 1e-12, "{err:e}");
    }

    #[test]
    fn rank_of_dependent_family() {
        let v = vec![e(0, 3), e(1, 3), e(0, 3) + e(1, 3)];
        assert_eq!(numerical_rank(&v, RANK_TOL).unwrap(), 2);
    }

    #[test]
    fn rank_of_zero_vector() {
        assert_eq!(numerical_rank(&[DVector::zeros(4)], RANK_TOL).unwrap(), 0);
    }

    #[test]
    fn rank_gap_guard_fires() {
        // kept 1e-7 vs dropped 5e-9: ratio 20
        let v = vec![e(0, 3), e(1, 3) * 1e-7, e(2, 3) * 5e-9];
        assert!(matches!(numerical_rank(&v, RANK_TOL), Err(Error::Degeneracy(_))));
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let ns = nullspace(&a, RANK_TOL).unwrap();
        assert_eq!(ns.ncols(), 2);
        assert!((&a * &ns).norm() < 1e-12);
    }

    #[test]
    fn projection_identities() {
        let sig = Signature::euclidean(4);
        let basis = vec![e(0, 4), e(1, 4)];
        let inside = DVector::from_vec(vec![2.0, -1.0, 0.0, 0.0]);
        assert!((project_onto(&inside, &basis, sig).unwrap() - &inside).norm() < 1e-14);
        let outside = e(3, 4);
        assert!(project_onto(&outside, &basis, sig).unwrap().norm() < 1e-14);
    }

    #[test]
    fn indefinite_projection_is_rejected() {
        let sig = Signature::new(1, 1);
        let basis = vec![e(0, 2), e(1, 2)];
        let v = e(0, 2);
        assert!(matches!(project_onto(&v, &basis, sig), Err(Error::Unsupported(_))));
    }
}
