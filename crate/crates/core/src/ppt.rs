//! Geometry of the PPT cone: membership, rank types, how far a state can be
//! pushed away from a reference state before leaving the cone, edge-state
//! tests, and linear solves for decompositions over a fixed product family.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::locator::{self, LocatorConfig};
use crate::tensor::{rank_cutoff, BipartiteOperator, CMatrix, ProductVector, Tolerance};

/// `(rank rho, rank rho^Gamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankType {
    pub p: usize,
    pub q: usize,
}

impl fmt::Display for RankType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Whether `op^Gamma` is positive semidefinite up to the relative rank cutoff,
/// without any trace requirement.
pub fn gamma_psd(op: &BipartiteOperator, tol: &Tolerance) -> bool {
    op.partial_transpose().is_psd(tol)
}

/// PPT test for a density matrix.
pub fn is_ppt(rho: &BipartiteOperator, tol: &Tolerance) -> Result<bool> {
    rho.validate_state(tol)?;
    Ok(gamma_psd(rho, tol))
}

pub fn state_type(rho: &BipartiteOperator, tol: &Tolerance) -> RankType {
    RankType {
        p: rho.rank(tol),
        q: rho.partial_transpose().rank(tol),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonBound {
    /// Largest `eps` with `sigma - eps rho0 >= 0`; zero when the range of
    /// `rho0` escapes the range of `sigma`.
    pub epsilon: f64,
    pub range_contained: bool,
}

/// `1 / lambda_max(S rho0 S)` with `S` the pseudo-inverse square root of
/// `sigma` on its range.
pub fn max_epsilon_positive(
    sigma: &BipartiteOperator,
    rho0: &BipartiteOperator,
    tol: &Tolerance,
) -> Result<EpsilonBound> {
    sigma.ensure_same_dims(rho0)?;
    let (values, vectors) = sigma.eigen();
    let d = sigma.dim();
    let keep: Vec<usize> = match rank_cutoff(&values, tol.rank_rel_tol) {
        Some(c) => (0..d).filter(|&i| values[i] > c).collect(),
        None => Vec::new(),
    };
    let mut projector = CMatrix::zeros(d, d);
    let mut s = CMatrix::zeros(d, d);
    for &i in &keep {
        let v = vectors.column(i);
        let outer = v * v.adjoint();
        s += outer.scale(1.0 / values[i].sqrt());
        projector += outer;
    }
    let outside = CMatrix::identity(d, d) - &projector;
    let leak = linalg::frobenius(&(&outside * rho0.matrix() * &outside));
    let scale = linalg::frobenius(rho0.matrix()).max(f64::MIN_POSITIVE);
    if keep.is_empty() || leak > tol.residual_tol * scale.max(1.0) {
        return Ok(EpsilonBound {
            epsilon: 0.0,
            range_contained: false,
        });
    }
    let top = linalg::hermitian_eigenvalues(&(&s * rho0.matrix() * &s))
        .last()
        .copied()
        .unwrap_or(0.0);
    let epsilon = if top > 0.0 { 1.0 / top } else { f64::INFINITY };
    Ok(EpsilonBound {
        epsilon,
        range_contained: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpsilonBounds {
    pub epsilon_star: f64,
    pub eps_positive: f64,
    pub eps_ppt_side: f64,
    pub range_contained: bool,
}

/// Largest `eps` keeping `sigma - eps rho0` in the PPT cone: the smaller of
/// the bounds for the operator and for its partial transpose.
pub fn max_epsilon_ppt(
    sigma: &BipartiteOperator,
    rho0: &BipartiteOperator,
    tol: &Tolerance,
) -> Result<EpsilonBounds> {
    let pos = max_epsilon_positive(sigma, rho0, tol)?;
    let gam = max_epsilon_positive(&sigma.partial_transpose(), &rho0.partial_transpose(), tol)?;
    Ok(EpsilonBounds {
        epsilon_star: pos.epsilon.min(gam.epsilon),
        eps_positive: pos.epsilon,
        eps_ppt_side: gam.epsilon,
        range_contained: pos.range_contained && gam.range_contained,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum EdgeVerdict {
    Edge,
    /// A product vector in the range whose partial conjugate lies in the
    /// range of the partial transpose.
    NotEdge {
        witness: ProductVector,
    },
    Undecided {
        reason: String,
    },
}

impl EdgeVerdict {
    pub fn is_edge(&self) -> bool {
        matches!(self, EdgeVerdict::Edge)
    }

    pub fn label(&self) -> &'static str {
        match self {
            EdgeVerdict::Edge => "edge",
            EdgeVerdict::NotEdge { .. } => "not_edge",
            EdgeVerdict::Undecided { .. } => "undecided",
        }
    }
}

/// A PPT state is an edge state when no product vector `x (x) y` in its
/// range has `conj(x) (x) y` in the range of its partial transpose.
pub fn is_edge_state(rho: &BipartiteOperator, cfg: &LocatorConfig) -> Result<EdgeVerdict> {
    let tol = &cfg.tol;
    let d = rho
        .range(tol)
        .ok_or_else(|| Error::MalformedState("zero operator has no range".into()))?;
    let e = rho
        .partial_transpose()
        .range(tol)
        .ok_or_else(|| Error::MalformedState("partial transpose has no range".into()))?;

    let exhaustive = if d.dims() == (3, 3) {
        match locator::find_product_vectors(&d, cfg) {
            Ok(res) => Some(res),
            Err(Error::DegeneratePencil(_)) => None,
            Err(err) => return Err(err),
        }
    } else {
        None
    };
    if let Some(res) = exhaustive {
        let hit = res
            .vectors
            .iter()
            .find(|p| locator::membership(&p.partial_conjugate(), &e, tol));
        return Ok(match (hit, res.complete) {
            (Some(p), _) => EdgeVerdict::NotEdge { witness: p.clone() },
            (None, true) => EdgeVerdict::Edge,
            (None, false) => EdgeVerdict::Undecided {
                reason: "product vector list in the range is not certified complete".into(),
            },
        });
    }
    let found = locator::conjugate_constrained_products(&d, &e, cfg)?;
    Ok(match found.vectors.into_iter().next() {
        Some(witness) => EdgeVerdict::NotEdge { witness },
        None => EdgeVerdict::Undecided {
            reason: "range holds infinitely many product vectors and the multistart search found none with a conjugate in the transposed range".into(),
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeExtraction {
    pub epsilon_star: f64,
    pub eps_positive: f64,
    pub eps_ppt_side: f64,
    /// `(sigma - eps* rho0) / trace`.
    pub boundary_state: BipartiteOperator,
    /// `sigma - eps* rho0` before normalization.
    pub unnormalized: BipartiteOperator,
    pub rank_type: RankType,
    pub edge: EdgeVerdict,
}

/// Pushes `sigma` away from `rho0` to the boundary of the PPT cone.
pub fn extract_edge_state(
    sigma: &BipartiteOperator,
    rho0: &BipartiteOperator,
    cfg: &LocatorConfig,
) -> Result<EdgeExtraction> {
    let tol = &cfg.tol;
    let bounds = max_epsilon_ppt(sigma, rho0, tol)?;
    let eps = bounds.epsilon_star;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::DegenerateExtension(format!(
            "maximal epsilon is {eps} (range contained: {})",
            bounds.range_contained
        )));
    }
    let unnormalized = BipartiteOperator::linear_combination(&[(1.0, sigma), (-eps, rho0)])?;
    let size = linalg::frobenius(unnormalized.matrix());
    if size <= tol.residual_tol * linalg::frobenius(sigma.matrix()) {
        return Err(Error::DegenerateExtension(
            "extension reaches the zero operator".into(),
        ));
    }
    let boundary_state = unnormalized
        .normalized()
        .map_err(|e| Error::DegenerateExtension(e.to_string()))?;
    let rank_type = state_type(&boundary_state, tol);
    let edge = is_edge_state(&boundary_state, cfg)?;
    Ok(EdgeExtraction {
        epsilon_star: eps,
        eps_positive: bounds.eps_positive,
        eps_ppt_side: bounds.eps_ppt_side,
        boundary_state,
        unnormalized,
        rank_type,
        edge,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionSolve {
    pub coefficients: Vec<f64>,
    pub mu: Option<f64>,
    pub residual: f64,
    pub feasible: bool,
    /// 0-based index of the family member whose coefficient is pinned to zero.
    pub dropped_index: Option<usize>,
    /// The linear system has full column rank.
    pub unique: bool,
}

fn projector_columns(family: &[ProductVector]) -> Result<Vec<Vec<f64>>> {
    let (m, n) = family.first().ok_or(Error::Empty)?.dims();
    if family.iter().any(|p| p.dims() != (m, n)) {
        return Err(Error::DimensionMismatch(
            "mixed local dimensions in family".into(),
        ));
    }
    Ok(family.iter().map(|p| p.projector().realify()).collect())
}

/// Least squares for `A u = rhs` where the columns of `A` are given; also
/// returns the residual and whether the columns are independent.
fn solve_columns(cols: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64, bool)> {
    let rows = rhs.len();
    let a = DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r]);
    let b = DVector::from_column_slice(rhs);
    let (u, rank) = linalg::real_lstsq(&a, &b, 1e-10)?;
    let residual = (&a * &u - &b).norm();
    Ok((u.iter().copied().collect(), residual, rank == cols.len()))
}

/// Solves `sum_i l_i |z_i><z_i| = rho`, `sum_i l_i = 1` in least squares; the
/// state is separable over the family iff the solution is exact and
/// nonnegative.
pub fn separability_solve(
    rho: &BipartiteOperator,
    family: &[ProductVector],
    tol: &Tolerance,
) -> Result<DecompositionSolve> {
    let mut cols = projector_columns(family)?;
    if family[0].dims() != rho.dims() {
        return Err(Error::DimensionMismatch(
            "state and family dimensions differ".into(),
        ));
    }
    for c in &mut cols {
        c.push(1.0);
    }
    let mut rhs = rho.realify();
    rhs.push(1.0);
    let (coefficients, residual, unique) = solve_columns(&cols, &rhs)?;
    let sum: f64 = coefficients.iter().sum();
    let feasible = residual < tol.residual_tol
        && coefficients.iter().all(|&l| l >= -tol.residual_tol)
        && (sum - 1.0).abs() < tol.residual_tol;
    Ok(DecompositionSolve {
        coefficients,
        mu: None,
        residual,
        feasible,
        dropped_index: None,
        unique,
    })
}

/// Where the segment from the family barycenter `rho0` towards `rho` leaves
/// the simplex: for each member `i`, solve
/// `sum_{j != i} l_j P_j - mu (rho - rho0) = rho0`, `sum l_j = 1`, and keep
/// the lowest index with `l >= 0` and `0 <= mu <= 1`.
///
/// When `rho` already lies in the simplex the crossing is undefined; the
/// result then has `mu = 0`, no dropped index and the barycentric
/// coefficients of `rho0`.
pub fn nearest_face_solve(
    rho: &BipartiteOperator,
    rho0: &BipartiteOperator,
    family: &[ProductVector],
    tol: &Tolerance,
) -> Result<DecompositionSolve> {
    rho.ensure_same_dims(rho0)?;
    let inside = separability_solve(rho, family, tol)?;
    if inside.feasible {
        let base = separability_solve(rho0, family, tol)?;
        return Ok(DecompositionSolve {
            mu: Some(0.0),
            dropped_index: None,
            ..base
        });
    }
    let cols = projector_columns(family)?;
    let direction: Vec<f64> = rho
        .realify()
        .iter()
        .zip(rho0.realify())
        .map(|(a, b)| -(a - b))
        .collect();
    let mut rhs = rho0.realify();
    rhs.push(1.0);

    let k = family.len();
    let candidates: Vec<Result<DecompositionSolve>> = (0..k)
        .into_par_iter()
        .map(|drop| {
            let mut system: Vec<Vec<f64>> = cols
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != drop)
                .map(|(_, c)| {
                    let mut c = c.clone();
                    c.push(1.0);
                    c
                })
                .collect();
            let mut mu_col = direction.clone();
            mu_col.push(0.0);
            system.push(mu_col);
            let (u, residual, unique) = solve_columns(&system, &rhs)?;
            let mu = u[k - 1];
            let mut coefficients = u[..k - 1].to_vec();
            coefficients.insert(drop, 0.0);
            let feasible = residual < tol.residual_tol
                && coefficients.iter().all(|&l| l >= -tol.residual_tol)
                && (-tol.residual_tol..=1.0 + tol.residual_tol).contains(&mu);
            Ok(DecompositionSolve {
                coefficients,
                mu: Some(mu),
                residual,
                feasible,
                dropped_index: Some(drop),
                unique,
            })
        })
        .collect();
    for c in candidates {
        let c = c?;
        if c.feasible {
            return Ok(c);
        }
    }
    Err(Error::NoFeasibleDrop)
}

/// `<rho, phi> = Re Tr(rho C^t)` for a map with Choi matrix `C`.
pub fn dual_pairing(rho: &BipartiteOperator, choi: &BipartiteOperator) -> Result<f64> {
    rho.ensure_same_dims(choi)?;
    Ok(rho.trace_product(&choi.transpose()).re)
}
