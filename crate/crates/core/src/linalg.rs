//! Small dense helpers on top of nalgebra shared by the other modules.

use nalgebra::{linalg::Schur, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::tensor::{CMatrix, CVector, C64};

/// Eigenvalues (ascending) and matching eigenvector columns of a Hermitian matrix.
pub fn hermitian_eigen(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(h.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

pub fn hermitian_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Unit eigenvector of the smallest eigenvalue of a Hermitian matrix.
pub fn smallest_eigenvector(h: &CMatrix) -> (f64, CVector) {
    let (values, vectors) = hermitian_eigen(h);
    (values[0], vectors.column(0).into_owned())
}

/// Singular values of a complex matrix, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Numerical rank with a cutoff relative to the largest singular value.
pub fn numerical_rank(a: &CMatrix, rel_tol: f64) -> usize {
    let s = singular_values(a);
    match s.first() {
        Some(&top) if top > 1e-12 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

pub fn real_rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let s = a.clone().singular_values();
    let top = s.max();
    if top <= 1e-12 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * top).count()
}

/// Columns as a matrix.
pub fn columns(vectors: &[CVector]) -> CMatrix {
    let rows = vectors.first().map_or(0, |v| v.len());
    CMatrix::from_fn(rows, vectors.len(), |r, c| vectors[c][r])
}

/// Orthonormal basis (as columns) of the span of the given columns.
pub fn orthonormal_span(a: &CMatrix, rel_tol: f64) -> CMatrix {
    if a.ncols() == 0 {
        return CMatrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let top = svd.singular_values.max();
    if top <= 1e-12 {
        return CMatrix::zeros(a.nrows(), 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rel_tol * top)
        .collect();
    CMatrix::from_fn(a.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Orthonormal basis of the orthogonal complement of the column span of `q`,
/// where `q` already has orthonormal columns.
pub fn orthocomplement(q: &CMatrix) -> CMatrix {
    let dim = q.nrows();
    let projector = CMatrix::identity(dim, dim) - q * q.adjoint();
    let (values, vectors) = hermitian_eigen(&projector);
    let keep: Vec<usize> = (0..dim).rev().filter(|&i| values[i] > 0.5).collect();
    CMatrix::from_fn(dim, keep.len(), |r, c| vectors[(r, keep[c])])
}

/// Least-squares solution of a complex system with rank-revealing SVD.
pub fn complex_lstsq(a: &CMatrix, b: &CVector) -> Result<CVector> {
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.max();
    svd.solve(b, top * 1e-13)
        .map_err(|e| Error::Numerical(e.to_string()))
}

/// Least-squares solve; also reports the numerical column rank.
pub fn real_lstsq(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    rel_tol: f64,
) -> Result<(DVector<f64>, usize)> {
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > rel_tol * top)
        .count();
    let x = svd
        .solve(b, rel_tol * top)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    Ok((x, rank))
}

/// All eigenvalues of a general complex square matrix via the complex Schur form.
pub fn general_eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
