//! Exact reference constructions: the Choi-type edge states and their
//! kernel product vectors, the asymmetric rank-five family, the ten-vector
//! non-induced simplex, generalized Choi maps and a qubit-qutrit face.
//!
//! Matrices are written out entry by entry from their closed forms rather
//! than assembled from decompositions, so the decompositions can serve as
//! independent checks.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{tensor, BipartiteOperator, CMatrix, CVector, ProductVector, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalleryParams {
    pub b: f64,
    pub theta: f64,
    pub s: f64,
}

impl Default for GalleryParams {
    fn default() -> Self {
        Self {
            b: 2.0,
            theta: PI / 6.0,
            s: 0.5,
        }
    }
}

impl GalleryParams {
    pub fn new(b: f64, theta: f64, s: f64) -> Result<Self> {
        check_b(b)?;
        check_theta(theta)?;
        check_s(s)?;
        Ok(Self { b, theta, s })
    }
}

pub fn check_b(b: f64) -> Result<()> {
    if !(b.is_finite() && b > 0.0) || b == 1.0 {
        return Err(Error::Domain(format!(
            "b must be positive and different from 1, got {b}"
        )));
    }
    Ok(())
}

pub fn check_theta(theta: f64) -> Result<()> {
    if !(theta.abs() < PI / 3.0) || theta == 0.0 {
        return Err(Error::Domain(format!(
            "theta must lie in (-pi/3, pi/3) and be nonzero, got {theta}"
        )));
    }
    Ok(())
}

pub fn check_s(s: f64) -> Result<()> {
    if !(s.is_finite() && s > 0.0) || s == 1.0 {
        return Err(Error::Domain(format!(
            "s must be positive and different from 1, got {s}"
        )));
    }
    Ok(())
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// 9x9 operator from 1-based `(row, col, value)` triples; the rest is zero.
fn sparse9(entries: &[(usize, usize, C64)]) -> Result<BipartiteOperator> {
    let mut m = CMatrix::zeros(9, 9);
    for &(r, c, v) in entries {
        m[(r - 1, c - 1)] = v;
    }
    BipartiteOperator::new(m, 3, 3)
}

fn products(pairs: &[([C64; 3], [C64; 3])]) -> Result<Vec<ProductVector>> {
    pairs
        .iter()
        .map(|(x, y)| ProductVector::from_complex(x, y))
        .collect()
}

/// The rank-four two-qutrit edge state; `b = 2` is Choi's original example.
pub fn rho_b(b: f64) -> Result<BipartiteOperator> {
    check_b(b)?;
    let one = re(1.0);
    let (bb, ib) = (re(b), re(1.0 / b));
    let display = sparse9(&[
        (1, 1, one),
        (1, 5, one),
        (1, 9, one),
        (2, 2, bb),
        (2, 4, one),
        (3, 3, ib),
        (3, 7, one),
        (4, 2, one),
        (4, 4, ib),
        (5, 1, one),
        (5, 5, one),
        (5, 9, one),
        (6, 6, bb),
        (6, 8, one),
        (7, 3, one),
        (7, 7, bb),
        (8, 6, one),
        (8, 8, ib),
        (9, 1, one),
        (9, 5, one),
        (9, 9, one),
    ])?;
    Ok(display.scaled(1.0 / (3.0 * (1.0 + b + 1.0 / b))))
}

/// The six product vectors of `ker rho_b(b)`, normalized.
pub fn six_products_b(b: f64) -> Result<Vec<ProductVector>> {
    check_b(b)?;
    let r = b.sqrt();
    let (z, o) = (0.0, 1.0);
    let v = |a: [f64; 3]| a.map(re);
    products(&[
        (v([o, r, z]), v([o, -1.0 / r, z])),
        (v([o, -r, z]), v([o, 1.0 / r, z])),
        (v([z, o, r]), v([z, o, -1.0 / r])),
        (v([z, o, -r]), v([z, o, 1.0 / r])),
        (v([r, z, o]), v([-1.0 / r, z, o])),
        (v([-r, z, o]), v([1.0 / r, z, o])),
    ])
}

/// `(1/k) sum |z><z|` over the family.
pub fn uniform_mixture(family: &[ProductVector]) -> Result<BipartiteOperator> {
    let first = family.first().ok_or(Error::Empty)?;
    let (m, n) = first.dims();
    let mut acc = CMatrix::zeros(m * n, m * n);
    for p in family {
        if p.dims() != (m, n) {
            return Err(Error::DimensionMismatch(
                "mixed local dimensions in family".into(),
            ));
        }
        acc += p.projector().matrix();
    }
    BipartiteOperator::new(acc.unscale(family.len() as f64), m, n)
}

/// Uniform mixture of the family with member `skip` (0-based) left out.
pub fn drop_one_mixture(family: &[ProductVector], skip: usize) -> Result<BipartiteOperator> {
    if skip >= family.len() {
        return Err(Error::Index(format!(
            "index {skip} outside family of {}",
            family.len()
        )));
    }
    let rest: Vec<ProductVector> = family
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != skip)
        .map(|(_, p)| p.clone())
        .collect();
    uniform_mixture(&rest)
}

/// The rank-four edge state `(5/4)(rho_k - rho0/5)` obtained from the
/// six-vector face by dropping member `skip` (0-based).
pub fn sigma_k_b(b: f64, skip: usize) -> Result<BipartiteOperator> {
    let family = six_products_b(b)?;
    let rho_k = drop_one_mixture(&family, skip)?;
    let rho0 = uniform_mixture(&family)?;
    BipartiteOperator::linear_combination(&[(1.25, &rho_k), (-0.25, &rho0)])
}

/// `t sigma_i + (1 - t) sigma_j` on the segment between two edge states.
pub fn sigma_segment(b: f64, i: usize, j: usize, t: f64) -> Result<BipartiteOperator> {
    let si = sigma_k_b(b, i)?;
    let sj = sigma_k_b(b, j)?;
    BipartiteOperator::linear_combination(&[(t, &si), (1.0 - t, &sj)])
}

fn rho_theta_display(b: f64, theta: f64) -> Result<BipartiteOperator> {
    check_b(b)?;
    check_theta(theta)?;
    let e = C64::from_polar(1.0, theta);
    let (me, mec) = (-e, -e.conj());
    let c = re(2.0 * theta.cos());
    let (bb, ib) = (re(b), re(1.0 / b));
    sparse9(&[
        (1, 1, c),
        (1, 5, me),
        (1, 9, mec),
        (2, 2, ib),
        (2, 4, mec),
        (3, 3, bb),
        (3, 7, me),
        (4, 2, me),
        (4, 4, bb),
        (5, 1, mec),
        (5, 5, c),
        (5, 9, me),
        (6, 6, ib),
        (6, 8, mec),
        (7, 3, mec),
        (7, 7, ib),
        (8, 6, me),
        (8, 8, bb),
        (9, 1, me),
        (9, 5, mec),
        (9, 9, c),
    ])
}

/// The rank-five edge state of type (5,5), normalized to unit trace.
pub fn rho_theta(b: f64, theta: f64) -> Result<BipartiteOperator> {
    rho_theta_display(b, theta)?.normalized()
}

/// The four (unnormalized) vectors spanning `ker rho_theta`.
pub fn kernel_w(b: f64, theta: f64) -> Result<Vec<CVector>> {
    check_b(b)?;
    check_theta(theta)?;
    let e = C64::from_polar(1.0, theta);
    let vec9 = |pairs: &[(usize, C64)]| {
        let mut v = CVector::zeros(9);
        for &(i, z) in pairs {
            v[i - 1] = z;
        }
        v
    };
    let one = re(1.0);
    Ok(vec![
        vec9(&[(1, one), (5, one), (9, one)]),
        vec9(&[(2, re(b)), (4, e)]),
        vec9(&[(6, re(b)), (8, e)]),
        vec9(&[(3, e), (7, re(b))]),
    ])
}

/// Unnormalized factors of the six range product vectors of `rho_theta`.
fn z_factors(b: f64, theta: f64) -> [([C64; 3], [C64; 3]); 6] {
    let w = C64::from_polar(b.sqrt(), theta / 2.0);
    let (o, z) = (re(1.0), re(0.0));
    [
        ([o, w, z], [w, -o, z]),
        ([-o, w, z], [w, o, z]),
        ([z, o, w], [z, w, -o]),
        ([z, -o, w], [z, w, o]),
        ([w, z, o], [-o, z, w]),
        ([w, z, -o], [o, z, w]),
    ]
}

/// The six product vectors spanning `range rho_theta`, normalized.
pub fn six_products_theta(b: f64, theta: f64) -> Result<Vec<ProductVector>> {
    check_b(b)?;
    check_theta(theta)?;
    products(&z_factors(b, theta))
}

/// The separable state as written entrywise, before normalization.
pub fn rho_sep_display(b: f64, theta: f64) -> Result<BipartiteOperator> {
    check_b(b)?;
    check_theta(theta)?;
    let e = C64::from_polar(1.0, theta);
    let (me, mec) = (-e, -e.conj());
    let (two, m1) = (re(2.0), re(-1.0));
    let (bb, ib) = (re(b), re(1.0 / b));
    sparse9(&[
        (1, 1, two),
        (1, 5, m1),
        (1, 9, m1),
        (2, 2, ib),
        (2, 4, mec),
        (3, 3, bb),
        (3, 7, me),
        (4, 2, me),
        (4, 4, bb),
        (5, 1, m1),
        (5, 5, two),
        (5, 9, m1),
        (6, 6, ib),
        (6, 8, mec),
        (7, 3, mec),
        (7, 7, ib),
        (8, 6, me),
        (8, 8, bb),
        (9, 1, m1),
        (9, 5, m1),
        (9, 9, two),
    ])
}

/// `(1/(2b)) sum |z_i><z_i|` over the unnormalized range product vectors;
/// must agree with [`rho_sep_display`].
pub fn rho_sep_from_sum(b: f64, theta: f64) -> Result<BipartiteOperator> {
    check_b(b)?;
    check_theta(theta)?;
    let mut acc = CMatrix::zeros(9, 9);
    for (x, y) in z_factors(b, theta) {
        let v = tensor(
            &CVector::from_column_slice(&x),
            &CVector::from_column_slice(&y),
        );
        acc += &v * v.adjoint();
    }
    BipartiteOperator::new(acc.unscale(2.0 * b), 3, 3)
}

/// The separable state of type (5,6) with a unique decomposition, normalized.
pub fn rho_sep(b: f64, theta: f64) -> Result<BipartiteOperator> {
    rho_sep_display(b, theta)?.normalized()
}

/// Half the sum of the two displayed (unnormalized) matrices, normalized;
/// a PPT state of type (5,9).
pub fn asymmetric_mix(b: f64, theta: f64) -> Result<BipartiteOperator> {
    let sep = rho_sep_display(b, theta)?;
    let edge = rho_theta_display(b, theta)?;
    BipartiteOperator::linear_combination(&[(0.5, &sep), (0.5, &edge)])?.normalized()
}

/// `(rho_sep + rho_theta) / 2` with both states first normalized.
pub fn asymmetric_mix_of_states(b: f64, theta: f64) -> Result<BipartiteOperator> {
    let sep = rho_sep(b, theta)?;
    let edge = rho_theta(b, theta)?;
    BipartiteOperator::linear_combination(&[(0.5, &sep), (0.5, &edge)])
}

/// The partial transpose of `(display_sep + display_theta) / 2`, written
/// entrywise.
pub fn asymmetric_mix_gamma_display(b: f64, theta: f64) -> Result<BipartiteOperator> {
    check_b(b)?;
    check_theta(theta)?;
    let e = C64::from_polar(1.0, theta);
    let (me, mec) = (-e, -e.conj());
    let d = re(1.0 + theta.cos());
    let h = (re(1.0) + e) / 2.0;
    let (mh, mhc) = (-h, -h.conj());
    let (bb, ib) = (re(b), re(1.0 / b));
    sparse9(&[
        (1, 1, d),
        (1, 5, me),
        (1, 9, mec),
        (2, 2, ib),
        (2, 4, mhc),
        (3, 3, bb),
        (3, 7, mh),
        (4, 2, mh),
        (4, 4, bb),
        (5, 1, mec),
        (5, 5, d),
        (5, 9, me),
        (6, 6, ib),
        (6, 8, mhc),
        (7, 3, mhc),
        (7, 7, ib),
        (8, 6, mh),
        (8, 8, bb),
        (9, 1, me),
        (9, 5, mec),
        (9, 9, d),
    ])
}

/// The decomposable witness supported on the kernel of the mixed state, as
/// written entrywise.
pub fn witness_w(b: f64, theta: f64) -> Result<BipartiteOperator> {
    check_b(b)?;
    check_theta(theta)?;
    let e = C64::from_polar(1.0, theta);
    let ec = e.conj();
    let one = re(1.0);
    let (bb, ib) = (re(b), re(1.0 / b));
    sparse9(&[
        (1, 1, one),
        (1, 5, e),
        (1, 9, ec),
        (2, 2, bb),
        (2, 4, one),
        (3, 3, ib),
        (3, 7, one),
        (4, 2, one),
        (4, 4, ib),
        (5, 1, ec),
        (5, 5, one),
        (5, 9, e),
        (6, 6, bb),
        (6, 8, one),
        (7, 3, one),
        (7, 7, bb),
        (8, 6, one),
        (8, 8, ib),
        (9, 1, e),
        (9, 5, ec),
        (9, 9, one),
    ])
}

/// `(|w1><w1| + (1/b) sum_{i>1} |w_i><w_i|)^Gamma`.
pub fn witness_w_from_kernel(b: f64, theta: f64) -> Result<BipartiteOperator> {
    let w = kernel_w(b, theta)?;
    let mut acc = &w[0] * w[0].adjoint();
    for v in &w[1..] {
        acc += (v * v.adjoint()).unscale(b);
    }
    Ok(BipartiteOperator::new(acc, 3, 3)?.partial_transpose())
}

/// Ten product vectors: six real `b`-dependent ones, then four sign patterns.
pub fn ten_vector_family(b: f64) -> Result<Vec<ProductVector>> {
    check_b(b)?;
    let r = b.sqrt();
    let (z, o) = (0.0, 1.0);
    let v = |a: [f64; 3]| a.map(re);
    products(&[
        (v([o, r, z]), v([o, 1.0 / r, z])),
        (v([o, -r, z]), v([o, -1.0 / r, z])),
        (v([z, o, r]), v([z, o, 1.0 / r])),
        (v([z, o, -r]), v([z, o, -1.0 / r])),
        (v([r, z, o]), v([1.0 / r, z, o])),
        (v([-r, z, o]), v([-1.0 / r, z, o])),
        (v([o, o, o]), v([o, o, o])),
        (v([o, o, -o]), v([o, o, -o])),
        (v([o, -o, o]), v([o, -o, o])),
        (v([-o, o, o]), v([-o, o, o])),
    ])
}

/// The three vectors spanning the complement of the first six of
/// [`ten_vector_family`].
pub fn six_vector_complement(b: f64) -> Result<Vec<CVector>> {
    check_b(b)?;
    let r = b.sqrt();
    let e = |i: usize| {
        let mut v = CVector::zeros(3);
        v[i] = re(1.0);
        v
    };
    let pair = |i: usize, j: usize| tensor(&e(i), &e(j)).scale(r) - tensor(&e(j), &e(i)).unscale(r);
    Ok(vec![pair(0, 1), pair(1, 2), pair(2, 0)])
}

/// Choi matrix `sum_ij E_ij (x) Phi(E_ij)` of the generalized Choi map
/// `Phi[alpha, beta, gamma]`.
pub fn choi_matrix_generalized(alpha: f64, beta: f64, gamma: f64) -> Result<BipartiteOperator> {
    if [alpha, beta, gamma]
        .iter()
        .any(|v| !(v.is_finite() && *v >= 0.0))
    {
        return Err(Error::Domain(format!(
            "map parameters must be nonnegative, got ({alpha}, {beta}, {gamma})"
        )));
    }
    // diagonal weights: row r of Phi(X) gets weights[r][k] * x_kk
    let weights = [
        [alpha, beta, gamma],
        [gamma, alpha, beta],
        [beta, gamma, alpha],
    ];
    let phi = |x: &CMatrix| {
        CMatrix::from_fn(3, 3, |r, c| {
            if r == c {
                (0..3).map(|k| x[(k, k)] * weights[r][k]).sum()
            } else {
                -x[(r, c)]
            }
        })
    };
    let mut choi = CMatrix::zeros(9, 9);
    for i in 0..3 {
        for j in 0..3 {
            let mut eij = CMatrix::zeros(3, 3);
            eij[(i, j)] = re(1.0);
            choi.view_mut((3 * i, 3 * j), (3, 3)).copy_from(&phi(&eij));
        }
    }
    BipartiteOperator::new(choi, 3, 3)
}

/// `(alpha(s), beta(s), gamma(s))` of the positive one-parameter family.
pub fn phi_s_params(s: f64) -> Result<(f64, f64, f64)> {
    check_s(s)?;
    let d = 1.0 - s + s * s;
    Ok(((1.0 - s).powi(2) / d, s * s / d, 1.0 / d))
}

/// `max { eps : sigma_k - eps rho0 is PPT }` for the ten-vector simplex,
/// with `k` 1-based.
pub fn lambda_k_closed_form(b: f64, k: usize) -> Result<f64> {
    check_b(b)?;
    let q = 1.0 + 8.0 * b + b * b;
    match k {
        1..=6 => Ok(5.0 * (1.0 + b).powi(2) / (27.0 * q)),
        7..=10 => Ok(5.0 * b / (3.0 * q)),
        _ => Err(Error::Index(format!("k must be in 1..=10, got {k}"))),
    }
}

/// Five product vectors in `C^2 (x) C^3`: `(0,1) (x) (0,0,1)` and
/// `(1,z) (x) (1,z,z^2)` for `z = 0, 1, w, w^2` with `w` a primitive cube
/// root of unity.
pub fn qubit_qudit_example() -> Vec<ProductVector> {
    let (o, z) = (re(1.0), re(0.0));
    let mut out = vec![ProductVector::from_complex(&[z, o], &[z, z, o]).expect("nonzero")];
    let w = C64::from_polar(1.0, 2.0 * PI / 3.0);
    for root in [z, o, w, w * w] {
        out.push(
            ProductVector::from_complex(&[o, root], &[o, root, root * root]).expect("nonzero"),
        );
    }
    out
}

/// `((m-1)(n-1), C(m+n-2, n-1))`: the largest dimension of a subspace
/// without product vectors, and the generic number of product vectors one
/// dimension above it.
pub fn dimension_constants(m: usize, n: usize) -> Result<(usize, u64)> {
    if m < 2 || n < 2 {
        return Err(Error::UnsupportedDimensions { m, n });
    }
    let (top, k) = ((m + n - 2) as u64, (n - 1) as u64);
    let count = (1..=k).fold(1u64, |acc, i| acc * (top - k + i) / i);
    Ok(((m - 1) * (n - 1), count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::Tolerance;

    fn max_entry_diff(a: &BipartiteOperator, b: &BipartiteOperator) -> f64 {
        (a.matrix() - b.matrix())
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    #[test]
    fn rho_b_entry_and_trace() {
        let rho = rho_b(2.0).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 2.0 / 21.0).abs() < 1e-15);
        assert!((rho.trace() - 1.0).abs() < 1e-14);
        assert!(rho.validate_state(&Tolerance::default()).is_ok());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(rho_b(1.0), Err(Error::Domain(_))));
        assert!(matches!(rho_b(-2.0), Err(Error::Domain(_))));
        assert!(rho_theta(2.0, 0.0).is_err());
        assert!(rho_theta(2.0, PI / 3.0).is_err());
        assert!(phi_s_params(1.0).is_err());
        assert!(lambda_k_closed_form(2.0, 11).is_err());
        assert!(choi_matrix_generalized(-1.0, 0.0, 0.0).is_err());
        assert!(GalleryParams::new(2.0, 0.5, 0.5).is_ok());
    }

    #[test]
    fn first_kernel_vector_matches_tensor_product() {
        // x = (1, sqrt2, 0)/sqrt3, y = (1, -1/sqrt2, 0) sqrt(2/3)
        let p = &six_products_b(2.0).unwrap()[0];
        let s2 = 2f64.sqrt();
        let x = crate::tensor::cvec(&[1.0 / 3f64.sqrt(), s2 / 3f64.sqrt(), 0.0]);
        let y = crate::tensor::cvec(&[1.0, -1.0 / s2, 0.0]).scale((2.0f64 / 3.0).sqrt());
        let want = tensor(&x, &y);
        assert!((p.tensor() - want).norm() < 1e-15);
    }

    #[test]
    fn sep_display_equals_sum() {
        for (b, theta) in [(2.0, PI / 6.0), (3.0, -PI / 4.0), (0.4, 0.9)] {
            let d = rho_sep_display(b, theta).unwrap();
            let s = rho_sep_from_sum(b, theta).unwrap();
            assert!(max_entry_diff(&d, &s) < 1e-12, "b={b} theta={theta}");
        }
    }

    #[test]
    fn mix_gamma_display_matches() {
        for (b, theta) in [(2.0, PI / 6.0), (3.0, -PI / 4.0)] {
            let sep = rho_sep_display(b, theta).unwrap();
            let edge = rho_theta_display(b, theta).unwrap();
            let half = BipartiteOperator::linear_combination(&[(0.5, &sep), (0.5, &edge)]).unwrap();
            let d = asymmetric_mix_gamma_display(b, theta).unwrap();
            assert!(max_entry_diff(&half.partial_transpose(), &d) < 1e-15);
        }
    }

    #[test]
    fn witness_matches_formula() {
        let (a, f) = (
            witness_w(2.0, PI / 6.0).unwrap(),
            witness_w_from_kernel(2.0, PI / 6.0).unwrap(),
        );
        assert_eq!(a.matrix(), f.matrix());
        let (a, f) = (
            witness_w(3.0, -0.7).unwrap(),
            witness_w_from_kernel(3.0, -0.7).unwrap(),
        );
        assert!(max_entry_diff(&a, &f) < 1e-14);
    }

    #[test]
    fn choi_pattern() {
        let (a, bt, g) = phi_s_params(0.5).unwrap();
        assert!((a - 1.0 / 3.0).abs() < 1e-15 && (bt - 1.0 / 3.0).abs() < 1e-15);
        assert!((g - 4.0 / 3.0).abs() < 1e-15);
        let c = choi_matrix_generalized(a, bt, g).unwrap();
        let diag: Vec<f64> = (0..9).map(|i| c.matrix()[(i, i)].re).collect();
        let want = [a, g, bt, bt, a, g, g, bt, a];
        for (d, w) in diag.iter().zip(want) {
            assert!((d - w).abs() < 1e-15);
        }
        for (r, cc) in [(0, 4), (0, 8), (4, 8), (4, 0), (8, 0), (8, 4)] {
            assert_eq!(c.matrix()[(r, cc)], re(-1.0));
        }
    }

    #[test]
    fn phi_params_identities() {
        for s in [0.1, 0.5, 2.0, 7.3] {
            let (a, b, g) = phi_s_params(s).unwrap();
            assert!((a + b + g - 2.0).abs() < 1e-12);
            assert!((b * g - (1.0 - a).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_values() {
        assert!((lambda_k_closed_form(2.0, 1).unwrap() - 5.0 / 63.0).abs() < 1e-15);
        assert!((lambda_k_closed_form(2.0, 8).unwrap() - 10.0 / 63.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_table() {
        assert_eq!(dimension_constants(3, 3).unwrap(), (4, 6));
        assert_eq!(dimension_constants(3, 4).unwrap(), (6, 10));
        for n in 2..=6 {
            assert_eq!(dimension_constants(2, n).unwrap(), (n - 1, n as u64));
        }
        assert!(dimension_constants(1, 3).is_err());
    }

    #[test]
    fn qubit_qudit_family_shape() {
        let fam = qubit_qudit_example();
        assert_eq!(fam.len(), 5);
        assert!(fam.iter().all(|p| p.dims() == (2, 3)));
    }

    #[test]
    fn sigma_k_has_expected_trace() {
        let s = sigma_k_b(2.0, 0).unwrap();
        assert!((s.trace() - 1.0).abs() < 1e-14);
    }
}
