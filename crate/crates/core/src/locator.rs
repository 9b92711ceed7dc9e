//! Finding the product vectors `x (x) y` inside a subspace.
//!
//! A product vector lies in `D` iff `<w_i | x (x) y> = 0` for every `w_i` in
//! an orthonormal basis of the complement. For fixed `x` this is linear in
//! `y`, `M(x) y = 0`, so admissible `x` are where `M(x)` drops rank: in
//! `3 (x) 3` that is the common zero set of its `3 x 3` minors, which we
//! eliminate with a resultant.
//!
//! Two multistart searches back this up: one for plain membership, and one
//! that also asks the partial conjugate to lie in a second subspace.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{self, BiPoly};
use crate::random;
use crate::tensor::{tensor, CMatrix, CVector, ProductVector, Subspace, Tolerance, C64};

/// Minimum `sigma_min / sigma_max` of the polishing Jacobian for a root to
/// count as isolated and simple.
const JACOBIAN_RATIO_MIN: f64 = 1e-6;
/// Resultant coefficients below this (after normalizing both minors) are
/// considered identically zero.
const VANISHING_RESULTANT: f64 = 1e-10;
const REMIX_ATTEMPTS: u64 = 3;
const ALTERNATING_ITERS: usize = 300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocatorConfig {
    pub max_degree_guard: usize,
    pub newton_iters: usize,
    pub multistart_count: usize,
    pub rng_seed: u64,
    pub tol: Tolerance,
}

impl Default for LocatorConfig {
    fn default() -> Self {
        Self {
            max_degree_guard: 9,
            newton_iters: 30,
            multistart_count: 200,
            rng_seed: 7,
            tol: Tolerance::default(),
        }
    }
}

impl LocatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.multistart_count == 0 || self.newton_iters == 0 {
            return Err(Error::InvalidTolerance(
                "multistart_count and newton_iters must be at least 1".into(),
            ));
        }
        self.tol.validate()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LocatorResult {
    pub vectors: Vec<ProductVector>,
    /// Whether the solver vouches that the list is exhaustive.
    pub complete: bool,
    pub residuals: Vec<f64>,
}

impl LocatorResult {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn contains(&self, p: &ProductVector, tol: f64) -> bool {
        self.vectors.iter().any(|q| q.approx_eq(p, tol))
    }
}

/// `M(x)`: row `i` is `x^T conj(W_i)`, with `W_i` the `i`-th complement vector
/// reshaped to `m x n`.
pub fn constraint_matrix(orthocomplement: &[CVector], x: &CVector) -> CMatrix {
    let m = x.len();
    let n = orthocomplement.first().map_or(0, |w| w.len() / m);
    CMatrix::from_fn(orthocomplement.len(), n, |i, j| {
        (0..m)
            .map(|a| x[a] * orthocomplement[i][a * n + j].conj())
            .sum()
    })
}

/// `p` lies in `D` up to `residual_tol`.
pub fn membership(p: &ProductVector, d: &Subspace, tol: &Tolerance) -> bool {
    p.dims() == d.dims() && d.residual(&p.tensor()) < tol.residual_tol
}

/// The bilinear system `A (x (x) y) = 0` where `A` has `m n` columns.
struct Bilinear<'a> {
    a: &'a CMatrix,
    m: usize,
    n: usize,
}

impl Bilinear<'_> {
    /// `k x n`, linear in `y` for fixed `x`.
    fn in_y(&self, x: &CVector) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(self.a.nrows(), n, |i, j| {
            (0..self.m).map(|p| x[p] * self.a[(i, p * n + j)]).sum()
        })
    }

    /// `k x m`, linear in `x` for fixed `y`.
    fn in_x(&self, y: &CVector) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(self.a.nrows(), self.m, |i, p| {
            (0..n).map(|j| y[j] * self.a[(i, p * n + j)]).sum()
        })
    }

    fn eval(&self, x: &CVector, y: &CVector) -> CVector {
        self.a * tensor(x, y)
    }

    /// Residual of the unit product vector along `(x, y)`.
    fn unit_residual(&self, x: &CVector, y: &CVector) -> f64 {
        self.eval(x, y).norm() / (x.norm() * y.norm())
    }
}

fn argmax_abs(v: &CVector) -> usize {
    v.iter()
        .enumerate()
        .fold((0, -1.0), |(bi, bv), (i, z)| {
            if z.norm() > bv {
                (i, z.norm())
            } else {
                (bi, bv)
            }
        })
        .0
}

/// Complex Gauss-Newton on `A (x (x) y) = 0` with the gauge fixed by
/// `x_p = y_q = 1` at the largest components. Returns the polished pair and
/// `sigma_min / sigma_max` of the final Jacobian.
fn polish(sys: &Bilinear<'_>, x0: &CVector, y0: &CVector, iters: usize) -> (CVector, CVector, f64) {
    let (m, n) = (sys.m, sys.n);
    let p = argmax_abs(x0);
    let q = argmax_abs(y0);
    let mut x = x0.map(|z| z / x0[p]);
    let mut y = y0.map(|z| z / y0[q]);
    let one = C64::new(1.0, 0.0);
    let k = sys.a.nrows();
    let jacobian = |x: &CVector, y: &CVector| {
        let jx = sys.in_x(y);
        let jy = sys.in_y(x);
        let mut j = CMatrix::zeros(k + 2, m + n);
        j.view_mut((0, 0), (k, m)).copy_from(&jx);
        j.view_mut((0, m), (k, n)).copy_from(&jy);
        j[(k, p)] = one;
        j[(k + 1, m + q)] = one;
        j
    };
    for _ in 0..iters {
        let j = jacobian(&x, &y);
        let mut f = CVector::zeros(k + 2);
        f.rows_mut(0, k).copy_from(&sys.eval(&x, &y));
        f[k] = x[p] - one;
        f[k + 1] = y[q] - one;
        let step = match linalg::complex_lstsq(&j, &(-f)) {
            Ok(s) => s,
            Err(_) => break,
        };
        for a in 0..m {
            x[a] += step[a];
        }
        for b in 0..n {
            y[b] += step[m + b];
        }
        if step.norm() < 1e-15 * (x.norm() + y.norm()) {
            break;
        }
    }
    let sv = linalg::singular_values(&jacobian(&x, &y));
    let ratio = match (sv.first(), sv.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    };
    (x, y, ratio)
}

/// Greedy clustering in input order (keeping the best residual), then
/// canonical sort.
fn merge(found: Vec<(ProductVector, f64)>, tol: f64) -> (Vec<ProductVector>, Vec<f64>) {
    let mut kept: Vec<(ProductVector, f64)> = Vec::new();
    for (p, r) in found {
        match kept.iter_mut().find(|(q, _)| q.approx_eq(&p, tol)) {
            Some(slot) => {
                if r < slot.1 {
                    *slot = (p, r);
                }
            }
            None => kept.push((p, r)),
        }
    }
    kept.sort_by(|a, b| a.0.canonical_cmp(&b.0, tol));
    kept.into_iter().unzip()
}

enum ChartFailure {
    /// The chosen minors share a factor; a different row mix may help.
    Vanishing,
    Fatal(Error),
}

impl From<Error> for ChartFailure {
    fn from(e: Error) -> Self {
        ChartFailure::Fatal(e)
    }
}

/// Starting points `(x, y)` from the three charts of the frame `g`, using the
/// minors of rows {0,1,2} and {0,1,3} of `rows`. `y` comes from the smallest
/// singular direction of `M(x)` over all rows of `full`.
fn chart_candidates(
    rows: &CMatrix,
    full: &Bilinear<'_>,
    g: &CMatrix,
    cfg: &LocatorConfig,
) -> std::result::Result<Vec<(CVector, CVector)>, ChartFailure> {
    // entry (i, j) of M(G (c0, c1, c2)) is sum_a G[a, l] rows[i, 3a + j] c_l
    let coef = |i: usize, j: usize, l: usize| -> C64 {
        (0..3).map(|a| g[(a, l)] * rows[(i, 3 * a + j)]).sum()
    };
    let entries = |r: [usize; 3], chart: usize| -> [[BiPoly; 3]; 3] {
        std::array::from_fn(|ii| {
            std::array::from_fn(|j| {
                let i = r[ii];
                let z = C64::new(0.0, 0.0);
                match chart {
                    0 => BiPoly::affine(coef(i, j, 0), coef(i, j, 1), coef(i, j, 2)),
                    _ => BiPoly::affine(coef(i, j, 1), z, coef(i, j, 2)),
                }
            })
        })
    };
    let normalized = |p: BiPoly| {
        let s = p.max_abs();
        if s == 0.0 {
            p
        } else {
            BiPoly(
                p.0.iter()
                    .map(|c| c.scale(C64::new(1.0 / s, 0.0)))
                    .collect(),
            )
        }
    };

    let mut candidates = Vec::new();
    let push = |x: CVector, candidates: &mut Vec<(CVector, CVector)>| {
        let mx = full.in_y(&x);
        let (_, y) = linalg::smallest_eigenvector(&(mx.adjoint() * &mx));
        candidates.push((x, y));
    };
    let frame = |c: [C64; 3]| g * CVector::from_column_slice(&c);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);

    // affine chart x = G (1, s, t)
    let f = normalized(poly::det3(&entries([0, 1, 2], 0)));
    let h = normalized(poly::det3(&entries([0, 1, 3], 0)));
    if f.max_abs() == 0.0 || h.max_abs() == 0.0 {
        return Err(ChartFailure::Vanishing);
    }
    let res = poly::resultant_t(&f, &h, 3, 3);
    if res.max_abs() < VANISHING_RESULTANT {
        return Err(ChartFailure::Vanishing);
    }
    let degree = res.degree(1e-12).unwrap_or(0);
    if degree > cfg.max_degree_guard {
        return Err(Error::DegreeGuard {
            degree,
            guard: cfg.max_degree_guard,
        }
        .into());
    }
    let s_roots = poly::cluster(&res.roots(1e-12)?, cfg.tol.root_tol);
    for s in s_roots {
        let mut ts = f.at_s(s).roots(1e-10)?;
        ts.extend(h.at_s(s).roots(1e-10)?);
        for t in poly::cluster(&ts, cfg.tol.root_tol) {
            push(frame([one, s, t]), &mut candidates);
        }
    }

    // line at infinity x = G (0, 1, t)
    let f2 = poly::det3(&entries([0, 1, 2], 1)).at_s(zero);
    let h2 = poly::det3(&entries([0, 1, 3], 1)).at_s(zero);
    let on_line = if f2.max_abs() > 1e-12 { f2 } else { h2 };
    if on_line.max_abs() <= 1e-12 {
        return Err(ChartFailure::Vanishing);
    }
    for t in poly::cluster(&on_line.roots(1e-10)?, cfg.tol.root_tol) {
        push(frame([zero, one, t]), &mut candidates);
    }

    // the single remaining point
    push(frame([zero, zero, one]), &mut candidates);
    Ok(candidates)
}

/// All product vectors in a subspace of `C^3 (x) C^3`, by resultant
/// elimination over three charts followed by Newton polishing.
///
/// Fails with [`Error::DegeneratePencil`] when the subspace holds a
/// positive-dimensional family of product vectors (always the case once
/// `dim D >= 6`).
pub fn find_product_vectors(d: &Subspace, cfg: &LocatorConfig) -> Result<LocatorResult> {
    cfg.validate()?;
    let (m, n) = d.dims();
    if (m, n) != (3, 3) {
        return Err(Error::UnsupportedDimensions { m, n });
    }
    let w = d.orthocomplement_basis();
    let k = w.ncols();
    if k <= 3 {
        return Err(Error::DegeneratePencil(format!(
            "a {}-dimensional subspace of C3 (x) C3 always contains a curve of product vectors",
            d.dim()
        )));
    }
    let a = w.adjoint();
    let sys = Bilinear { a: &a, m, n };
    let g = random::complex_gaussian(&mut random::seeded(cfg.rng_seed, u64::MAX), 3, 3);

    let mut outcome = None;
    for attempt in 0..REMIX_ATTEMPTS {
        let rows = if attempt == 0 {
            a.clone()
        } else {
            random::complex_gaussian(&mut random::seeded(cfg.rng_seed, u64::MAX - attempt), k, k)
                * &a
        };
        match chart_candidates(&rows, &sys, &g, cfg) {
            Ok(c) => {
                outcome = Some(c);
                break;
            }
            Err(ChartFailure::Vanishing) => continue,
            Err(ChartFailure::Fatal(e)) => return Err(e),
        }
    }
    let candidates = outcome.ok_or_else(|| {
        Error::DegeneratePencil("the eliminating resultant vanishes identically".into())
    })?;

    let tol = &cfg.tol;
    let mut complete = true;
    let mut found = Vec::new();
    for (x0, y0) in candidates {
        let (x, y, ratio) = polish(&sys, &x0, &y0, cfg.newton_iters);
        let r = sys.unit_residual(&x, &y);
        if !(r < tol.residual_tol) {
            continue;
        }
        if ratio < JACOBIAN_RATIO_MIN {
            complete = false;
        }
        found.push((ProductVector::new(x, y)?, r));
    }
    let (vectors, residuals) = merge(found, tol.match_tol);
    Ok(LocatorResult {
        vectors,
        complete,
        residuals,
    })
}

/// Multistart alternating minimization of `||P_{D-perp}(x (x) y)||`; makes no
/// claim of exhaustiveness.
pub fn brute_force_products(d: &Subspace, cfg: &LocatorConfig) -> Result<LocatorResult> {
    cfg.validate()?;
    let (m, n) = d.dims();
    if m > 4 || n > 4 {
        return Err(Error::UnsupportedDimensions { m, n });
    }
    let w = d.orthocomplement_basis();
    let a = if w.ncols() == 0 {
        CMatrix::zeros(1, m * n)
    } else {
        w.adjoint()
    };
    let sys = Bilinear { a: &a, m, n };
    let tol = cfg.tol;

    let found: Vec<Option<(ProductVector, f64)>> = (0..cfg.multistart_count)
        .into_par_iter()
        .map(|start| {
            let mut rng = random::seeded(cfg.rng_seed, start as u64);
            let mut x = random::unit_vector(&mut rng, m);
            let mut y = random::unit_vector(&mut rng, n);
            let mut last = f64::INFINITY;
            for _ in 0..ALTERNATING_ITERS {
                let my = sys.in_y(&x);
                y = linalg::smallest_eigenvector(&(my.adjoint() * &my)).1;
                let mx = sys.in_x(&y);
                x = linalg::smallest_eigenvector(&(mx.adjoint() * &mx)).1;
                let r = sys.unit_residual(&x, &y);
                if r < 1e-13 || r > last * (1.0 - 1e-9) {
                    break;
                }
                last = r;
            }
            let (x, y, _) = polish(&sys, &x, &y, cfg.newton_iters);
            let r = sys.unit_residual(&x, &y);
            (r < tol.residual_tol)
                .then(|| ProductVector::new(x, y).ok().map(|p| (p, r)))
                .flatten()
        })
        .collect();
    let (vectors, residuals) = merge(found.into_iter().flatten().collect(), tol.match_tol);
    Ok(LocatorResult {
        vectors,
        complete: false,
        residuals,
    })
}

/// Residual of `x (x) y` against `D` and of `conj(x) (x) y` against `E`,
/// for unit factors.
fn conjugate_residual(sd: &Bilinear<'_>, se: &Bilinear<'_>, x: &CVector, y: &CVector) -> f64 {
    let scale = x.norm() * y.norm();
    let r1 = sd.eval(x, y).norm_squared();
    let r2 = se.eval(&x.conjugate(), y).norm_squared();
    (r1 + r2).sqrt() / scale
}

/// Real Gauss-Newton for the mixed holomorphic / antiholomorphic system
/// `A (x (x) y) = 0`, `B (conj(x) (x) y) = 0`.
fn polish_conjugate(
    sd: &Bilinear<'_>,
    se: &Bilinear<'_>,
    x0: &CVector,
    y0: &CVector,
    iters: usize,
) -> (CVector, CVector) {
    let (m, n) = (sd.m, sd.n);
    let p = argmax_abs(x0);
    let q = argmax_abs(y0);
    let mut x = x0.map(|z| z / x0[p]);
    let mut y = y0.map(|z| z / y0[q]);
    let (ka, kb) = (sd.a.nrows(), se.a.nrows());
    let eqs = ka + kb + 2;
    let vars = m + n;
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    for _ in 0..iters {
        let xc = x.conjugate();
        // complex derivative blocks: d/du and d/dv for x = u + i v, likewise y
        let mut du = CMatrix::zeros(eqs, vars);
        let mut dv = CMatrix::zeros(eqs, vars);
        let jx = sd.in_x(&y);
        let jy = sd.in_y(&x);
        let kx = se.in_x(&y);
        let ky = se.in_y(&xc);
        for r in 0..ka {
            for c in 0..m {
                du[(r, c)] = jx[(r, c)];
                dv[(r, c)] = i * jx[(r, c)];
            }
            for c in 0..n {
                du[(r, m + c)] = jy[(r, c)];
                dv[(r, m + c)] = i * jy[(r, c)];
            }
        }
        for r in 0..kb {
            for c in 0..m {
                du[(ka + r, c)] = kx[(r, c)];
                dv[(ka + r, c)] = -i * kx[(r, c)];
            }
            for c in 0..n {
                du[(ka + r, m + c)] = ky[(r, c)];
                dv[(ka + r, m + c)] = i * ky[(r, c)];
            }
        }
        du[(ka + kb, p)] = one;
        dv[(ka + kb, p)] = i;
        du[(ka + kb + 1, m + q)] = one;
        dv[(ka + kb + 1, m + q)] = i;

        let mut f = CVector::zeros(eqs);
        f.rows_mut(0, ka).copy_from(&sd.eval(&x, &y));
        f.rows_mut(ka, kb).copy_from(&se.eval(&xc, &y));
        f[ka + kb] = x[p] - one;
        f[ka + kb + 1] = y[q] - one;

        // stack real and imaginary parts
        let jr = DMatrix::<f64>::from_fn(2 * eqs, 2 * vars, |r, c| {
            let block = if c < vars { &du } else { &dv };
            let z = block[(r % eqs, c % vars)];
            if r < eqs {
                z.re
            } else {
                z.im
            }
        });
        let fr = nalgebra::DVector::<f64>::from_fn(2 * eqs, |r, _| {
            if r < eqs {
                -f[r].re
            } else {
                -f[r - eqs].im
            }
        });
        let step = match linalg::real_lstsq(&jr, &fr, 1e-13) {
            Ok((s, _)) => s,
            Err(_) => break,
        };
        for a in 0..m {
            x[a] += C64::new(step[a], step[vars + a]);
        }
        for b in 0..n {
            y[b] += C64::new(step[m + b], step[vars + m + b]);
        }
        if step.norm() < 1e-15 * (x.norm() + y.norm()) {
            break;
        }
    }
    (x, y)
}

/// Multistart search for product vectors `z` in `D` whose partial conjugate
/// lies in `E`. Never claims completeness.
pub fn conjugate_constrained_products(
    d: &Subspace,
    e: &Subspace,
    cfg: &LocatorConfig,
) -> Result<LocatorResult> {
    cfg.validate()?;
    if d.dims() != e.dims() {
        return Err(Error::DimensionMismatch(format!(
            "{:?} vs {:?}",
            d.dims(),
            e.dims()
        )));
    }
    let (m, n) = d.dims();
    if m > 4 || n > 4 {
        return Err(Error::UnsupportedDimensions { m, n });
    }
    let rows = |s: &Subspace| {
        let w = s.orthocomplement_basis();
        if w.ncols() == 0 {
            CMatrix::zeros(1, m * n)
        } else {
            w.adjoint()
        }
    };
    let (a, b) = (rows(d), rows(e));
    let sd = Bilinear { a: &a, m, n };
    let se = Bilinear { a: &b, m, n };
    let tol = cfg.tol;

    let found: Vec<Option<(ProductVector, f64)>> = (0..cfg.multistart_count)
        .into_par_iter()
        .map(|start| {
            let mut rng = random::seeded(cfg.rng_seed, start as u64);
            let mut x = random::unit_vector(&mut rng, m);
            let mut y = random::unit_vector(&mut rng, n);
            let mut last = f64::INFINITY;
            for _ in 0..ALTERNATING_ITERS {
                let xc = x.conjugate();
                let (my, ny) = (sd.in_y(&x), se.in_y(&xc));
                y = linalg::smallest_eigenvector(&(my.adjoint() * &my + ny.adjoint() * &ny)).1;
                let (mx, nx) = (sd.in_x(&y), se.in_x(&y));
                let h = mx.adjoint() * &mx + (nx.adjoint() * &nx).conjugate();
                x = linalg::smallest_eigenvector(&h).1;
                let r = conjugate_residual(&sd, &se, &x, &y);
                if r < 1e-13 || r > last * (1.0 - 1e-9) {
                    break;
                }
                last = r;
            }
            let (x, y) = polish_conjugate(&sd, &se, &x, &y, cfg.newton_iters);
            let r = conjugate_residual(&sd, &se, &x, &y);
            (r < tol.residual_tol)
                .then(|| ProductVector::new(x, y).ok().map(|p| (p, r)))
                .flatten()
        })
        .collect();
    let (vectors, residuals) = merge(found.into_iter().flatten().collect(), tol.match_tol);
    Ok(LocatorResult {
        vectors,
        complete: false,
        residuals,
    })
}
