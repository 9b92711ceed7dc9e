//! Complex linear algebra on a bipartite system `C^m (x) C^n`.
//!
//! Index convention throughout: the composite index of the basis vector
//! `e_i (x) f_j` is `i * n + j`, so operators are `m x m` grids of `n x n`
//! blocks indexed by the first factor.

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

pub type C64 = Complex<f64>;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

/// Largest local dimension accepted anywhere in the crate.
pub const MAX_LOCAL_DIM: usize = 6;

/// Spectra whose largest modulus is below this are treated as the zero matrix.
pub const ZERO_SPECTRUM_CUTOFF: f64 = 1e-12;

const HERMITIAN_REL_TOL: f64 = 1e-10;

/// Numerical thresholds shared by every module.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Eigenvalues below `rank_rel_tol * max|eigenvalue|` count as zero.
    pub rank_rel_tol: f64,
    pub residual_tol: f64,
    /// Polynomial roots closer than this are merged.
    pub root_tol: f64,
    /// Componentwise distance under which two canonical product vectors are equal.
    pub match_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-9,
            residual_tol: 1e-8,
            root_tol: 1e-7,
            match_tol: 1e-7,
        }
    }
}

impl Tolerance {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("rank_rel_tol", self.rank_rel_tol),
            ("residual_tol", self.residual_tol),
            ("root_tol", self.root_tol),
            ("match_tol", self.match_tol),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.rank_rel_tol >= 1.0 {
            return Err(Error::InvalidTolerance(
                "rank_rel_tol must be below 1".into(),
            ));
        }
        Ok(())
    }
}

fn check_local_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 || m > MAX_LOCAL_DIM || n > MAX_LOCAL_DIM {
        return Err(Error::UnsupportedDimensions { m, n });
    }
    Ok(())
}

/// `x (x) y`, component `i * n + j` equal to `x_i * y_j`.
pub fn tensor(x: &CVector, y: &CVector) -> CVector {
    let n = y.len();
    CVector::from_fn(x.len() * n, |k, _| x[k / n] * y[k % n])
}

pub fn cvec(re: &[f64]) -> CVector {
    CVector::from_iterator(re.len(), re.iter().map(|&r| C64::new(r, 0.0)))
}

/// Normalizes `v` and rotates its phase so that the first component with
/// modulus above `pivot_tol` is real and positive.
pub(crate) fn canonicalize(v: &CVector, pivot_tol: f64) -> Result<CVector> {
    let norm = v.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut u = v.unscale(norm);
    let pivot = u
        .iter()
        .position(|z| z.norm() > pivot_tol)
        .or_else(|| u.iter().position(|z| z.norm() > 0.0))
        .ok_or(Error::ZeroVector)?;
    let p = u[pivot];
    let phase = p.conj() / p.norm();
    u.apply(|z| *z *= phase);
    u[pivot] = C64::new(u[pivot].norm(), 0.0);
    Ok(u)
}

/// A product vector `x (x) y`, stored as unit, phase-canonical local factors.
#[derive(Clone, PartialEq)]
pub struct ProductVector {
    x: CVector,
    y: CVector,
}

impl ProductVector {
    pub fn new(x: CVector, y: CVector) -> Result<Self> {
        check_local_dims(x.len(), y.len())?;
        let pivot = Tolerance::default().match_tol;
        Ok(Self {
            x: canonicalize(&x, pivot)?,
            y: canonicalize(&y, pivot)?,
        })
    }

    pub fn from_real(x: &[f64], y: &[f64]) -> Result<Self> {
        Self::new(cvec(x), cvec(y))
    }

    pub fn from_complex(x: &[C64], y: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(x), CVector::from_column_slice(y))
    }

    pub fn x(&self) -> &CVector {
        &self.x
    }

    pub fn y(&self) -> &CVector {
        &self.y
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.x.len(), self.y.len())
    }

    /// The unit vector `x (x) y` in `C^(mn)`.
    pub fn tensor(&self) -> CVector {
        tensor(&self.x, &self.y)
    }

    /// `conj(x) (x) y`, re-canonicalized.
    pub fn partial_conjugate(&self) -> Self {
        let pivot = Tolerance::default().match_tol;
        Self {
            x: canonicalize(&self.x.conjugate(), pivot).expect("unit vector"),
            y: self.y.clone(),
        }
    }

    /// The pure product state `|z><z|`.
    pub fn projector(&self) -> BipartiteOperator {
        let (m, n) = self.dims();
        let z = self.tensor();
        BipartiteOperator::from_parts(&z * z.adjoint(), m, n)
    }

    /// Phase-invariant equality: canonical components within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dims() == other.dims() && self.distance(other) < tol
    }

    /// Largest componentwise distance between canonical forms.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.dims() != other.dims() {
            return f64::INFINITY;
        }
        self.x
            .iter()
            .zip(other.x.iter())
            .chain(self.y.iter().zip(other.y.iter()))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Lexicographic order on canonical components, treating values closer
    /// than `tol` as equal.
    pub fn canonical_cmp(&self, other: &Self, tol: f64) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let a = self.x.iter().chain(self.y.iter());
        let b = other.x.iter().chain(other.y.iter());
        for (p, q) in a.zip(b) {
            for (u, v) in [(p.re, q.re), (p.im, q.im)] {
                if (u - v).abs() > tol {
                    return u.total_cmp(&v);
                }
            }
        }
        self.dims().cmp(&other.dims()).then(Ordering::Equal)
    }
}

impl fmt::Debug for ProductVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &CVector| {
            v.iter()
                .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "({}) (x) ({})", show(&self.x), show(&self.y))
    }
}

pub fn partial_conjugate(p: &ProductVector) -> ProductVector {
    p.partial_conjugate()
}

/// A Hermitian operator on `C^m (x) C^n`. Density matrices and witnesses both
/// use this type.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    matrix: CMatrix,
    m: usize,
    n: usize,
}

impl BipartiteOperator {
    /// Validates shape and Hermiticity; the stored matrix is symmetrized.
    pub fn new(matrix: CMatrix, m: usize, n: usize) -> Result<Self> {
        check_local_dims(m, n)?;
        let d = m * n;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected {d}x{d} matrix for {m}x{n} system, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let scale = matrix.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
        let deviation = (&matrix - matrix.adjoint())
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()));
        if !deviation.is_finite() || deviation > HERMITIAN_REL_TOL * scale {
            return Err(Error::NotHermitian(deviation));
        }
        let sym = (&matrix + matrix.adjoint()).scale(0.5);
        Ok(Self::from_parts(sym, m, n))
    }

    pub(crate) fn from_parts(matrix: CMatrix, m: usize, n: usize) -> Self {
        Self { matrix, m, n }
    }

    pub fn identity(m: usize, n: usize) -> Result<Self> {
        check_local_dims(m, n)?;
        Ok(Self::from_parts(CMatrix::identity(m * n, m * n), m, n))
    }

    pub fn maximally_mixed(m: usize, n: usize) -> Result<Self> {
        Ok(Self::identity(m, n)?.scaled(1.0 / (m * n) as f64))
    }

    /// `|v><v| / <v|v>` for a vector of length `m n`.
    pub fn pure(v: &CVector, m: usize, n: usize) -> Result<Self> {
        check_local_dims(m, n)?;
        if v.len() != m * n {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs {}",
                v.len(),
                m * n
            )));
        }
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::ZeroVector);
        }
        let u = v.unscale(norm);
        Ok(Self::from_parts(&u * u.adjoint(), m, n))
    }

    /// Builds from a real row-major table (used by the gallery displays).
    pub fn from_complex_rows(rows: &[Vec<C64>], m: usize, n: usize) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(CMatrix::from_fn(d, d, |i, j| rows[i][j]), m, n)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn dim(&self) -> usize {
        self.m * self.n
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_parts(self.matrix.scale(factor), self.m, self.n)
    }

    /// Divides by the trace.
    pub fn normalized(&self) -> Result<Self> {
        let t = self.trace();
        if !(t.abs() > 1e-14) {
            return Err(Error::MalformedState(format!(
                "trace {t:e} too small to normalize"
            )));
        }
        Ok(self.scaled(1.0 / t))
    }

    /// `sum_i c_i A_i` over operators of equal dimensions.
    pub fn linear_combination(terms: &[(f64, &BipartiteOperator)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::Empty)?;
        let (m, n) = first.dims();
        let mut acc = CMatrix::zeros(m * n, m * n);
        for (c, op) in terms {
            if op.dims() != (m, n) {
                return Err(Error::DimensionMismatch(format!(
                    "{:?} vs {:?}",
                    op.dims(),
                    (m, n)
                )));
            }
            acc += op.matrix.scale(*c);
        }
        Ok(Self::from_parts(acc, m, n))
    }

    pub fn ensure_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(())
    }

    /// Transpose on the first tensor factor: block `(i, j)` of the result is
    /// block `(j, i)` of the input.
    pub fn partial_transpose(&self) -> Self {
        let (m, n) = (self.m, self.n);
        let out = CMatrix::from_fn(m * n, m * n, |r, c| {
            let (i, k) = (r / n, r % n);
            let (j, l) = (c / n, c % n);
            self.matrix[(j * n + k, i * n + l)]
        });
        Self::from_parts(out, m, n)
    }

    /// Full transpose (equal to the entrywise conjugate for Hermitian input).
    pub fn transpose(&self) -> Self {
        Self::from_parts(self.matrix.transpose(), self.m, self.n)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        linalg::hermitian_eigen(&self.matrix)
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        let values = self.eigenvalues();
        let cut = rank_cutoff(&values, tol.rank_rel_tol);
        match cut {
            None => 0,
            Some(c) => values.iter().filter(|v| v.abs() > c).count(),
        }
    }

    /// Eigenvectors below the rank cutoff.
    pub fn kernel(&self, tol: &Tolerance) -> Option<Subspace> {
        self.split_spectrum(tol).0
    }

    /// Eigenvectors above the rank cutoff.
    pub fn range(&self, tol: &Tolerance) -> Option<Subspace> {
        self.split_spectrum(tol).1
    }

    fn split_spectrum(&self, tol: &Tolerance) -> (Option<Subspace>, Option<Subspace>) {
        let (values, vectors) = self.eigen();
        let cut = rank_cutoff(&values, tol.rank_rel_tol);
        let (mut low, mut high) = (Vec::new(), Vec::new());
        for (i, v) in values.iter().enumerate() {
            match cut {
                Some(c) if v.abs() > c => high.push(i),
                _ => low.push(i),
            }
        }
        let pick = |idx: &[usize]| {
            (!idx.is_empty()).then(|| {
                let basis =
                    CMatrix::from_fn(vectors.nrows(), idx.len(), |r, c| vectors[(r, idx[c])]);
                Subspace::from_parts(basis, self.m, self.n)
            })
        };
        (pick(&low), pick(&high))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Smallest eigenvalue is at least `-rank_rel_tol * max|eigenvalue|`.
    pub fn is_psd(&self, tol: &Tolerance) -> bool {
        let values = self.eigenvalues();
        let top = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        values[0] >= -tol.rank_rel_tol * top.max(ZERO_SPECTRUM_CUTOFF)
    }

    /// Checks the density-matrix invariants: PSD and unit trace.
    pub fn validate_state(&self, tol: &Tolerance) -> Result<()> {
        if !self.is_psd(tol) {
            return Err(Error::MalformedState(format!(
                "not positive semidefinite (min eigenvalue {:e})",
                self.min_eigenvalue()
            )));
        }
        let t = self.trace();
        if (t - 1.0).abs() > tol.residual_tol {
            return Err(Error::MalformedState(format!("trace {t} is not 1")));
        }
        Ok(())
    }

    /// Real coordinates: the diagonal, then `sqrt2 Re` and `sqrt2 Im` of each
    /// strictly upper entry (row-major). Preserves the Frobenius inner product.
    pub fn realify(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        out.extend((0..d).map(|i| self.matrix[(i, i)].re));
        let s = std::f64::consts::SQRT_2;
        for i in 0..d {
            for j in (i + 1)..d {
                let z = self.matrix[(i, j)];
                out.push(s * z.re);
                out.push(s * z.im);
            }
        }
        out
    }

    /// `Tr(A B)`.
    pub fn trace_product(&self, other: &Self) -> C64 {
        self.matrix
            .iter()
            .zip(other.matrix.transpose().iter())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// The cutoff below which eigenvalues count as zero, or `None` for the zero matrix.
pub fn rank_cutoff(values: &[f64], rel_tol: f64) -> Option<f64> {
    let top = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    (top > ZERO_SPECTRUM_CUTOFF).then_some(rel_tol * top)
}

pub fn partial_transpose(rho: &BipartiteOperator) -> BipartiteOperator {
    rho.partial_transpose()
}

pub fn hermitian_rank(a: &BipartiteOperator, tol: &Tolerance) -> usize {
    a.rank(tol)
}

pub fn kernel_of(a: &BipartiteOperator, tol: &Tolerance) -> Option<Subspace> {
    a.kernel(tol)
}

pub fn range_of(a: &BipartiteOperator, tol: &Tolerance) -> Option<Subspace> {
    a.range(tol)
}

pub fn realify(a: &BipartiteOperator) -> Vec<f64> {
    a.realify()
}

/// A nonzero linear subspace of `C^m (x) C^n` held as orthonormal columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: CMatrix,
    m: usize,
    n: usize,
}

impl Subspace {
    pub(crate) fn from_parts(basis: CMatrix, m: usize, n: usize) -> Self {
        Self { basis, m, n }
    }

    /// The span of arbitrary vectors, orthonormalized with a relative rank cutoff.
    pub fn span(vectors: &[CVector], m: usize, n: usize, tol: &Tolerance) -> Result<Self> {
        check_local_dims(m, n)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != m * n) {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs {}",
                v.len(),
                m * n
            )));
        }
        let basis = linalg::orthonormal_span(&linalg::columns(vectors), tol.rank_rel_tol);
        if basis.ncols() == 0 {
            return Err(Error::Empty);
        }
        Ok(Self::from_parts(basis, m, n))
    }

    pub fn span_of_products(family: &[ProductVector], tol: &Tolerance) -> Result<Self> {
        let first = family.first().ok_or(Error::Empty)?;
        let (m, n) = first.dims();
        let vectors: Vec<CVector> = family.iter().map(|p| p.tensor()).collect();
        Self::span(&vectors, m, n, tol)
    }

    /// Accepts columns that must already be orthonormal.
    pub fn from_orthonormal(basis: CMatrix, m: usize, n: usize) -> Result<Self> {
        check_local_dims(m, n)?;
        if basis.nrows() != m * n || basis.ncols() == 0 {
            return Err(Error::DimensionMismatch("basis shape".into()));
        }
        let gram = basis.adjoint() * &basis;
        let dev = linalg::frobenius(&(gram - CMatrix::identity(basis.ncols(), basis.ncols())));
        if dev > 1e-10 {
            return Err(Error::Numerical(format!(
                "basis not orthonormal (deviation {dev:e})"
            )));
        }
        Ok(Self::from_parts(basis, m, n))
    }

    pub fn full(m: usize, n: usize) -> Result<Self> {
        check_local_dims(m, n)?;
        Ok(Self::from_parts(CMatrix::identity(m * n, m * n), m, n))
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<CVector> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.m * self.n
    }

    /// Orthonormal columns spanning the orthogonal complement; may be empty.
    pub fn orthocomplement_basis(&self) -> CMatrix {
        linalg::orthocomplement(&self.basis)
    }

    pub fn orthocomplement(&self) -> Result<Self> {
        let b = self.orthocomplement_basis();
        if b.ncols() == 0 {
            return Err(Error::Empty);
        }
        Ok(Self::from_parts(b, self.m, self.n))
    }

    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// `|| (I - P) v ||`.
    pub fn residual(&self, v: &CVector) -> f64 {
        (v - &self.basis * (self.basis.adjoint() * v)).norm()
    }

    pub fn contains(&self, v: &CVector, tol: f64) -> bool {
        self.residual(v) < tol * v.norm().max(f64::MIN_POSITIVE)
    }

    /// Frobenius distance between orthogonal projectors.
    pub fn projector_distance(&self, other: &Self) -> f64 {
        linalg::frobenius(&(self.projector() - other.projector()))
    }

    /// Frobenius norm of `P_self P_other`; zero iff the subspaces are orthogonal.
    pub fn overlap(&self, other: &Self) -> f64 {
        linalg::frobenius(&(self.basis.adjoint() * &other.basis))
    }
}

// ---------------------------------------------------------------- JSON

type Pair = [f64; 2];

fn to_pairs(v: impl Iterator<Item = C64>) -> Vec<Pair> {
    v.map(|z| [z.re, z.im]).collect()
}

fn from_pairs(p: &[Pair]) -> CVector {
    CVector::from_iterator(p.len(), p.iter().map(|[re, im]| C64::new(*re, *im)))
}

#[derive(Serialize, Deserialize)]
struct OperatorJson {
    m: usize,
    n: usize,
    entries: Vec<Pair>,
}

impl Serialize for BipartiteOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let entries = (0..d * d).map(|k| self.matrix[(k / d, k % d)]);
        OperatorJson {
            m: self.m,
            n: self.n,
            entries: to_pairs(entries),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BipartiteOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = OperatorJson::deserialize(d)?;
        let dim = raw.m * raw.n;
        if raw.entries.len() != dim * dim {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries, got {}",
                dim * dim,
                raw.entries.len()
            )));
        }
        let mat = CMatrix::from_fn(dim, dim, |r, c| {
            let [re, im] = raw.entries[r * dim + c];
            C64::new(re, im)
        });
        BipartiteOperator::new(mat, raw.m, raw.n).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ProductJson {
    x: Vec<Pair>,
    y: Vec<Pair>,
}

impl Serialize for ProductVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProductJson {
            x: to_pairs(self.x.iter().copied()),
            y: to_pairs(self.y.iter().copied()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProductVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ProductJson::deserialize(d)?;
        ProductVector::new(from_pairs(&raw.x), from_pairs(&raw.y)).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    m: usize,
    n: usize,
    basis: Vec<Vec<Pair>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceJson {
            m: self.m,
            n: self.n,
            basis: self
                .basis
                .column_iter()
                .map(|c| to_pairs(c.iter().copied()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    /// Any spanning set is accepted and orthonormalized.
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SubspaceJson::deserialize(d)?;
        let vectors: Vec<CVector> = raw.basis.iter().map(|v| from_pairs(v)).collect();
        Subspace::span(&vectors, raw.m, raw.n, &Tolerance::default())
            .map_err(serde::de::Error::custom)
    }
}

/// Real matrix whose rows are realified operators.
pub(crate) fn realified_rows(ops: &[BipartiteOperator]) -> DMatrix<f64> {
    let cols = ops.first().map_or(0, |o| o.dim() * o.dim());
    let rows: Vec<Vec<f64>> = ops.iter().map(|o| o.realify()).collect();
    DMatrix::from_fn(ops.len(), cols, |r, c| rows[r][c])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn basis(d: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(d);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn tensor_of_basis_vectors() {
        let t = tensor(&cvec(&[1.0, 0.0, 0.0]), &cvec(&[1.0, 0.0, 0.0]));
        assert_eq!(t, basis(9, 0));
        let t = tensor(&cvec(&[0.0, 1.0]), &cvec(&[0.0, 0.0, 1.0]));
        assert_eq!(t, basis(6, 5));
    }

    #[test]
    fn canonical_phase() {
        let p =
            ProductVector::from_complex(&[c(0.0, 0.0), c(0.0, 2.0)], &[c(-1.0, 0.0), c(1.0, 1.0)])
                .unwrap();
        assert_eq!(p.x()[1], c(1.0, 0.0));
        assert!(p.y()[0].re > 0.0 && p.y()[0].im == 0.0);
        assert!((p.y().norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            ProductVector::from_real(&[0.0, 0.0], &[1.0]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn phase_invariant_equality() {
        let x = CVector::from_vec(vec![c(1.0, 2.0), c(0.5, -1.0)]);
        let y = CVector::from_vec(vec![c(0.3, 0.0), c(0.0, 1.0), c(2.0, 0.0)]);
        let a = ProductVector::new(x.clone(), y.clone()).unwrap();
        let phase = C64::from_polar(1.0, 0.7);
        let b = ProductVector::new(x.scale(3.0) * phase, y * phase.conj()).unwrap();
        assert!(a.approx_eq(&b, 1e-12));
    }

    #[test]
    fn partial_conjugate_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = ProductVector::from_complex(&[c(s, 0.0), c(0.0, s)], &[c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let q = p.partial_conjugate();
        assert!((q.x()[1] - c(0.0, -s)).norm() < 1e-15);
        assert_eq!(q.y(), p.y());
        let real = ProductVector::from_real(&[1.0, 2.0, 3.0], &[0.0, 1.0, -1.0]).unwrap();
        assert!(real.partial_conjugate().approx_eq(&real, 1e-15));
        assert!(q.partial_conjugate().approx_eq(&p, 1e-15));
    }

    #[test]
    fn partial_transpose_moves_blocks() {
        // |e1 f2><e2 f1|  ->  |e2 f2><e1 f1|  in 3x3
        let mut m = CMatrix::zeros(9, 9);
        m[(1, 3)] = c(1.0, 0.0);
        m[(3, 1)] = c(1.0, 0.0);
        let op = BipartiteOperator::new(m, 3, 3).unwrap();
        let pt = op.partial_transpose();
        let mut want = CMatrix::zeros(9, 9);
        want[(4, 0)] = c(1.0, 0.0);
        want[(0, 4)] = c(1.0, 0.0);
        assert_eq!(pt.matrix(), &want);
        assert_eq!(pt.partial_transpose(), op);

        let id = BipartiteOperator::identity(3, 3).unwrap();
        assert_eq!(id.partial_transpose(), id);
    }

    #[test]
    fn rank_kernel_range_of_identity() {
        let tol = Tolerance::default();
        let id = BipartiteOperator::identity(3, 3).unwrap();
        assert_eq!(id.rank(&tol), 9);
        assert!(id.kernel(&tol).is_none());
        assert_eq!(id.range(&tol).unwrap().dim(), 9);
        let zero = id.scaled(0.0);
        assert_eq!(zero.rank(&tol), 0);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            BipartiteOperator::new(m, 2, 2),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            BipartiteOperator::new(CMatrix::zeros(4, 4), 3, 3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn realify_basics() {
        let zero = BipartiteOperator::identity(3, 3).unwrap().scaled(0.0);
        assert!(zero.realify().iter().all(|&v| v == 0.0));
        let r = BipartiteOperator::identity(3, 3).unwrap().realify();
        assert_eq!(r.len(), 81);
        assert!(r[..9].iter().all(|&v| v == 1.0));
        assert!(r[9..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tolerance_validation() {
        assert!(Tolerance::default().validate().is_ok());
        let bad = Tolerance {
            rank_rel_tol: 1.5,
            ..Tolerance::default()
        };
        assert!(bad.validate().is_err());
        let bad = Tolerance {
            match_tol: 0.0,
            ..Tolerance::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn subspace_membership_and_complement() {
        let tol = Tolerance::default();
        let d = Subspace::span(&[basis(9, 0), basis(9, 4)], 3, 3, &tol).unwrap();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.orthocomplement().unwrap().dim(), 7);
        assert!(d.contains(&basis(9, 4), 1e-12));
        assert!(!d.contains(&basis(9, 1), 1e-12));
        assert!(Subspace::full(3, 3).unwrap().orthocomplement().is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = c(0.25, 0.0);
        m[(0, 3)] = c(0.1, 0.2);
        m[(3, 0)] = c(0.1, -0.2);
        m[(3, 3)] = c(0.75, 0.0);
        let op = BipartiteOperator::new(m, 2, 2).unwrap();
        let text = serde_json::to_string(&op).unwrap();
        assert!(text.starts_with(r#"{"m":2,"n":2,"entries":[[0.25,0.0]"#));
        let back: BipartiteOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(back, op);

        let p =
            ProductVector::from_complex(&[c(1.0, 0.0), c(0.3, -0.4)], &[c(0.0, 1.0), c(2.0, 0.0)])
                .unwrap();
        let back: ProductVector =
            serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert!(back.distance(&p) < 1e-15);

        let bad = r#"{"m":2,"n":2,"entries":[[1,0]]}"#;
        assert!(serde_json::from_str::<BipartiteOperator>(bad).is_err());
    }
}
