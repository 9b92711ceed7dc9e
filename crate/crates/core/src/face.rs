//! Predicates on families of product vectors: general position, the
//! partition criterion for unextendibility, independence of the pure states,
//! and the conditions under which a family spans a simplicial (or induced
//! simplicial) face of the separable states.
//!
//! Subset and partition indices are 0-based throughout.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::locator::{self, LocatorConfig, LocatorResult};
use crate::random;
use crate::tensor::{realified_rows, CVector, ProductVector, Subspace, Tolerance};

/// Enumerations over subsets and partitions stop here.
pub const MAX_ENUMERATED_FAMILY: usize = 20;

fn family_dims(family: &[ProductVector]) -> Result<(usize, usize)> {
    let dims = family.first().ok_or(Error::Empty)?.dims();
    if family.iter().any(|p| p.dims() != dims) {
        return Err(Error::DimensionMismatch(
            "mixed local dimensions in family".into(),
        ));
    }
    Ok(dims)
}

fn rank_of(vectors: &[&CVector], tol: &Tolerance) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let owned: Vec<CVector> = vectors.iter().map(|v| (*v).clone()).collect();
    linalg::numerical_rank(&linalg::columns(&owned), tol.rank_rel_tol)
}

fn pick<'a>(family: &'a [ProductVector], idx: &[usize], side: Side) -> Vec<&'a CVector> {
    idx.iter()
        .map(|&i| match side {
            Side::X => family[i].x(),
            Side::Y => family[i].y(),
        })
        .collect()
}

fn mask_indices(mask: u32, k: usize) -> Vec<usize> {
    (0..k).filter(|i| mask >> i & 1 == 1).collect()
}

fn ensure_enumerable(k: usize) -> Result<()> {
    if k > MAX_ENUMERATED_FAMILY {
        return Err(Error::FamilyTooLarge {
            size: k,
            limit: MAX_ENUMERATED_FAMILY,
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetViolation {
    pub side: Side,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralPosition {
    pub holds: bool,
    pub violation: Option<SubsetViolation>,
}

/// Every `<= m` of the `x`'s and every `<= n` of the `y`'s are independent.
/// The reported violation is the first one met scanning `x` before `y`, by
/// size, then lexicographically.
pub fn is_general_position(family: &[ProductVector], tol: &Tolerance) -> Result<GeneralPosition> {
    let (m, n) = family_dims(family)?;
    let k = family.len();
    for (side, cap) in [(Side::X, m), (Side::Y, n)] {
        for size in 1..=cap.min(k) {
            let bad = (0..k)
                .combinations(size)
                .find(|idx| rank_of(&pick(family, idx, side), tol) < size);
            if let Some(indices) = bad {
                return Ok(GeneralPosition {
                    holds: false,
                    violation: Some(SubsetViolation { side, indices }),
                });
            }
        }
    }
    Ok(GeneralPosition {
        holds: true,
        violation: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GupbCheck {
    pub holds: bool,
    /// A partition where neither `{x_i : i in I}` spans `C^m` nor
    /// `{y_j : j in J}` spans `C^n`.
    pub violation: Option<Partition>,
}

/// Partition criterion: no product vector is orthogonal to the family iff
/// for every split `I | J` of the indices, the `x`'s over `I` span `C^m` or
/// the `y`'s over `J` span `C^n`.
pub fn is_gupb(family: &[ProductVector], tol: &Tolerance) -> Result<GupbCheck> {
    let (m, n) = family_dims(family)?;
    let k = family.len();
    if k < m + n - 1 {
        return Err(Error::FamilyTooSmall {
            size: k,
            required: m + n - 1,
        });
    }
    ensure_enumerable(k)?;
    let full = (1u32 << k) - 1;
    let bad = (0..=full).into_par_iter().find_first(|&mask| {
        let i = mask_indices(mask, k);
        let j = mask_indices(full & !mask, k);
        rank_of(&pick(family, &i, Side::X), tol) < m && rank_of(&pick(family, &j, Side::Y), tol) < n
    });
    Ok(GupbCheck {
        holds: bad.is_none(),
        violation: bad.map(|mask| Partition {
            i: mask_indices(mask, k),
            j: mask_indices(full & !mask, k),
        }),
    })
}

/// The projectors `|z_i><z_i|` are linearly independent.
pub fn pure_states_independent(family: &[ProductVector], tol: &Tolerance) -> Result<bool> {
    family_dims(family)?;
    let projectors: Vec<_> = family.iter().map(|p| p.projector()).collect();
    Ok(linalg::real_rank(&realified_rows(&projectors), tol.rank_rel_tol) == family.len())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `exhaustive` is false when the conclusion rests on multistart
    /// evidence rather than a complete solve.
    Holds {
        exhaustive: bool,
    },
    Fails {
        witness: ProductVector,
    },
    Undecided {
        reason: String,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds { .. } => "holds",
            Verdict::Fails { .. } => "fails",
            Verdict::Undecided { .. } => "undecided",
        }
    }
}

fn foreign<'a>(
    found: impl IntoIterator<Item = &'a ProductVector>,
    family: &[ProductVector],
    tol: &Tolerance,
) -> Option<ProductVector> {
    found
        .into_iter()
        .find(|p| !family.iter().any(|q| q.approx_eq(p, tol.match_tol)))
        .cloned()
}

/// Exhaustive solve when available; `None` on a degenerate pencil or
/// unsupported dimensions.
fn exhaustive_products(d: &Subspace, cfg: &LocatorConfig) -> Result<Option<LocatorResult>> {
    if d.dims() != (3, 3) {
        return Ok(None);
    }
    match locator::find_product_vectors(d, cfg) {
        Ok(res) => Ok(Some(res)),
        Err(Error::DegeneratePencil(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Every product vector in the span is parallel to a family member.
pub fn check_condition_b(family: &[ProductVector], cfg: &LocatorConfig) -> Result<Verdict> {
    let tol = &cfg.tol;
    let d = Subspace::span_of_products(family, tol)?;
    if d.dim() == 1 {
        return Ok(Verdict::Holds { exhaustive: true });
    }
    if let Some(res) = exhaustive_products(&d, cfg)? {
        return Ok(match foreign(&res.vectors, family, tol) {
            Some(witness) => Verdict::Fails { witness },
            None if res.complete => Verdict::Holds { exhaustive: true },
            None => Verdict::Undecided {
                reason: "product vector list is not certified complete".into(),
            },
        });
    }
    let res = locator::brute_force_products(&d, cfg)?;
    Ok(match foreign(&res.vectors, family, tol) {
        Some(witness) => Verdict::Fails { witness },
        None => Verdict::Undecided {
            reason: "no exhaustive solve for this span; multistart found only family members"
                .into(),
        },
    })
}

/// Every product vector `z` in the span whose partial conjugate lies in the
/// span of the partially conjugated family is parallel to a family member.
pub fn check_condition_c(family: &[ProductVector], cfg: &LocatorConfig) -> Result<Verdict> {
    let tol = &cfg.tol;
    let d = Subspace::span_of_products(family, tol)?;
    let conj: Vec<ProductVector> = family.iter().map(|p| p.partial_conjugate()).collect();
    let e = Subspace::span_of_products(&conj, tol)?;
    if d.dim() == 1 {
        return Ok(Verdict::Holds { exhaustive: true });
    }
    if let Some(res) = exhaustive_products(&d, cfg)? {
        let compatible = res
            .vectors
            .iter()
            .filter(|p| locator::membership(&p.partial_conjugate(), &e, tol));
        return Ok(match foreign(compatible, family, tol) {
            Some(witness) => Verdict::Fails { witness },
            None if res.complete => Verdict::Holds { exhaustive: true },
            None => Verdict::Undecided {
                reason: "product vector list is not certified complete".into(),
            },
        });
    }
    let res = locator::conjugate_constrained_products(&d, &e, cfg)?;
    if let Some(witness) = foreign(&res.vectors, family, tol) {
        return Ok(Verdict::Fails { witness });
    }
    let missing = family
        .iter()
        .filter(|p| !res.contains(p, tol.match_tol))
        .count();
    Ok(if missing == 0 {
        Verdict::Holds { exhaustive: false }
    } else {
        Verdict::Undecided {
            reason: format!(
                "multistart search recovered all but {missing} family members and nothing else"
            ),
        }
    })
}

/// Subsets `I` with `|I| >= 2` and
/// `dim span{x_i} + dim span{y_i} <= |I| + 1`, ordered by size then
/// lexicographically.
pub fn cohen_subsets(family: &[ProductVector], tol: &Tolerance) -> Result<Vec<Vec<usize>>> {
    family_dims(family)?;
    let k = family.len();
    if k < 2 {
        return Err(Error::FamilyTooSmall {
            size: k,
            required: 2,
        });
    }
    ensure_enumerable(k)?;
    let mut out: Vec<Vec<usize>> = (0..1u32 << k)
        .into_par_iter()
        .filter(|mask| mask.count_ones() >= 2)
        .map(|mask| mask_indices(mask, k))
        .filter(|idx| {
            rank_of(&pick(family, idx, Side::X), tol) + rank_of(&pick(family, idx, Side::Y), tol)
                <= idx.len() + 1
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Non-reality test for families in `C^2 (x) C^n`. With `x_1, x_2` as basis
/// and the last `x` as pivot `p`, write every `x_k = a_k1 x_1 + a_k2 x_2`;
/// the test passes iff `a_p1 a_k2 conj(a_p2 a_k1)` has a nonzero imaginary
/// part for every middle index `k`. The quantity is invariant under
/// rescaling of the vectors.
pub fn check_2xn_condition(family: &[ProductVector], tol: &Tolerance) -> Result<bool> {
    let (m, n) = family_dims(family)?;
    if m != 2 {
        return Err(Error::UnsupportedDimensions { m, n });
    }
    if family.len() < 3 {
        return Err(Error::FamilyTooSmall {
            size: family.len(),
            required: 3,
        });
    }
    if !is_general_position(family, tol)?.holds {
        return Err(Error::NotGeneralPosition);
    }
    let (e1, e2) = (family[0].x(), family[1].x());
    let det = e1[0] * e2[1] - e2[0] * e1[1];
    let coords = |v: &CVector| {
        (
            (v[0] * e2[1] - e2[0] * v[1]) / det,
            (e1[0] * v[1] - v[0] * e1[1]) / det,
        )
    };
    let (p1, p2) = coords(family[family.len() - 1].x());
    Ok(family[2..family.len() - 1].iter().all(|z| {
        let (k1, k2) = coords(z.x());
        (p1 * k2 * (p2 * k1).conj()).im.abs() > tol.residual_tol
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceCertificate {
    pub family_size: usize,
    pub dims: (usize, usize),
    /// The pure states are linearly independent.
    pub condition_a: bool,
    pub condition_b: Verdict,
    pub condition_c: Verdict,
    pub general_position: GeneralPosition,
    /// `None` when the family is outside the range of the partition criterion.
    pub gupb: Option<GupbCheck>,
    pub cohen_subsets: Option<Vec<Vec<usize>>>,
    /// Present only when condition A holds.
    pub simplex_dim: Option<usize>,
    pub extreme_points: Option<usize>,
    /// A and C both hold: the family spans an induced simplicial face.
    pub induced: bool,
    pub notes: Vec<String>,
}

pub fn certify_simplicial_face(
    family: &[ProductVector],
    cfg: &LocatorConfig,
) -> Result<FaceCertificate> {
    let tol = &cfg.tol;
    let dims = family_dims(family)?;
    let k = family.len();
    let mut notes = Vec::new();

    let condition_a = pure_states_independent(family, tol)?;
    let condition_b = check_condition_b(family, cfg)?;
    let condition_c = if condition_b.holds() {
        // C filters the product vectors B already matched to the family.
        condition_b.clone()
    } else {
        check_condition_c(family, cfg)?
    };
    let general_position = is_general_position(family, tol)?;
    let gupb = match is_gupb(family, tol) {
        Ok(g) => Some(g),
        Err(e @ (Error::FamilyTooSmall { .. } | Error::FamilyTooLarge { .. })) => {
            notes.push(format!("partition criterion skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let cohen = match cohen_subsets(family, tol) {
        Ok(c) => Some(c),
        Err(e @ (Error::FamilyTooSmall { .. } | Error::FamilyTooLarge { .. })) => {
            notes.push(format!("subset inequality scan skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    let simplex_dim = condition_a.then(|| k - 1);
    if condition_a {
        notes.push(format!(
            "{k} extreme points span a simplex of dimension {}: Δ{}, not Δ{k}",
            k - 1,
            k - 1
        ));
    } else {
        notes.push("pure states are dependent; the family does not span a simplex".into());
    }
    if condition_a && !condition_b.holds() && !condition_c.holds() {
        notes.push("neither B nor C established; simpliciality is not certified here".into());
    }
    if matches!(condition_c, Verdict::Holds { exhaustive: false }) {
        notes.push("condition C rests on multistart evidence".into());
    }
    Ok(FaceCertificate {
        family_size: k,
        dims,
        condition_a,
        induced: condition_a && condition_c.holds(),
        condition_b,
        condition_c,
        general_position,
        gupb,
        cohen_subsets: cohen,
        simplex_dim,
        extreme_points: condition_a.then_some(k),
        notes,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GupbSearch {
    pub count: usize,
    pub seed: u64,
    pub gupb_and_general_position: usize,
    pub gupb_only: usize,
    pub general_position_only: usize,
    pub neither: usize,
    /// Samples whose span did not yield a complete list of six.
    pub skipped: usize,
}

/// Samples five random product vectors in `3 (x) 3`, completes them to the
/// six product vectors of their 5-dimensional span, and tabulates how often
/// the six form a gUPB and are in general position.
pub fn gupb_search(count: usize, seed: u64, cfg: &LocatorConfig) -> Result<GupbSearch> {
    let tol = &cfg.tol;
    let outcomes: Vec<Result<Option<(bool, bool)>>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::seeded(seed, i);
            let gens: Vec<_> = (0..5)
                .map(|_| random::product_vector(&mut rng, 3, 3))
                .collect();
            let d = Subspace::span_of_products(&gens, tol)?;
            let res = match locator::find_product_vectors(&d, cfg) {
                Ok(r) => r,
                Err(Error::DegeneratePencil(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            if !res.complete || res.len() != 6 {
                return Ok(None);
            }
            let g = is_gupb(&res.vectors, tol)?.holds;
            let p = is_general_position(&res.vectors, tol)?.holds;
            Ok(Some((g, p)))
        })
        .collect();
    let mut out = GupbSearch {
        count,
        seed,
        ..Default::default()
    };
    for o in outcomes {
        match o? {
            Some((true, true)) => out.gupb_and_general_position += 1,
            Some((true, false)) => out.gupb_only += 1,
            Some((false, true)) => out.general_position_only += 1,
            Some((false, false)) => out.neither += 1,
            None => out.skipped += 1,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn pv(x: &[f64], y: &[f64]) -> ProductVector {
        ProductVector::from_real(x, y).unwrap()
    }

    #[test]
    fn parallel_x_breaks_general_position() {
        let tol = Tolerance::default();
        let fam = vec![
            pv(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]),
            pv(&[2.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
        ];
        let gp = is_general_position(&fam, &tol).unwrap();
        assert!(!gp.holds);
        assert_eq!(
            gp.violation,
            Some(SubsetViolation {
                side: Side::X,
                indices: vec![0, 1]
            })
        );
    }

    #[test]
    fn coordinate_family_is_not_gupb() {
        let tol = Tolerance::default();
        let e = |i: usize| {
            let mut v = [0.0; 3];
            v[i] = 1.0;
            v
        };
        let mut fam: Vec<_> = (0..3).map(|i| pv(&e(i), &e(i))).collect();
        fam.push(pv(&e(0), &e(1)));
        fam.push(pv(&e(0), &e(2)));
        let g = is_gupb(&fam, &tol).unwrap();
        assert!(!g.holds);
        let part = g.violation.unwrap();
        let xs = pick(&fam, &part.i, Side::X);
        let ys = pick(&fam, &part.j, Side::Y);
        assert!(rank_of(&xs, &tol) < 3 && rank_of(&ys, &tol) < 3);
    }

    #[test]
    fn small_family_rejected_by_partition_criterion() {
        let fam = vec![pv(&[1.0, 0.0], &[1.0, 0.0])];
        assert!(matches!(
            is_gupb(&fam, &Tolerance::default()),
            Err(Error::FamilyTooSmall {
                size: 1,
                required: 3
            })
        ));
    }

    #[test]
    fn duplicate_states_are_dependent() {
        let fam = vec![pv(&[1.0, 0.0], &[1.0, 0.0]), pv(&[1.0, 0.0], &[1.0, 0.0])];
        assert!(!pure_states_independent(&fam, &Tolerance::default()).unwrap());
    }

    #[test]
    fn cohen_pair_with_parallel_factors() {
        let tol = Tolerance::default();
        let fam = vec![
            pv(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]),
            pv(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]),
            pv(&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]),
        ];
        assert!(cohen_subsets(&fam, &tol).unwrap().contains(&vec![0, 1]));
    }

    #[test]
    fn singleton_satisfies_b() {
        let fam = vec![pv(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0])];
        let v = check_condition_b(&fam, &LocatorConfig::default()).unwrap();
        assert_eq!(v, Verdict::Holds { exhaustive: true });
    }

    #[test]
    fn real_family_fails_2xn_test() {
        let tol = Tolerance::default();
        let fam = vec![
            pv(&[1.0, 0.0], &[1.0, 0.0, 0.0]),
            pv(&[0.0, 1.0], &[0.0, 1.0, 0.0]),
            pv(&[1.0, 1.0], &[0.0, 0.0, 1.0]),
            pv(&[1.0, 2.0], &[1.0, 1.0, 1.0]),
        ];
        assert!(!check_2xn_condition(&fam, &tol).unwrap());
    }

    #[test]
    fn complex_pivot_passes_2xn_test() {
        use crate::tensor::C64;
        let tol = Tolerance::default();
        let r = |v: f64| C64::new(v, 0.0);
        let fam = vec![
            pv(&[1.0, 0.0], &[1.0, 0.0, 0.0]),
            pv(&[0.0, 1.0], &[0.0, 1.0, 0.0]),
            pv(&[1.0, 1.0], &[0.0, 0.0, 1.0]),
            ProductVector::from_complex(&[r(1.0), C64::new(0.0, 1.0)], &[r(1.0), r(1.0), r(1.0)])
                .unwrap(),
        ];
        assert!(check_2xn_condition(&fam, &tol).unwrap());
    }

    #[test]
    fn qubit_qudit_family_is_induced() {
        let cfg = LocatorConfig::default();
        let fam = gallery::qubit_qudit_example();
        assert!(check_2xn_condition(&fam, &cfg.tol).unwrap());
        let cert = certify_simplicial_face(&fam, &cfg).unwrap();
        assert!(cert.condition_a && cert.general_position.holds);
        assert!(cert.condition_c.holds(), "{:?}", cert.condition_c);
        assert_eq!(cert.simplex_dim, Some(4));
        assert!(cert.induced);
    }

    #[test]
    fn kernel_family_certificate() {
        let cfg = LocatorConfig::default();
        let fam = gallery::six_products_b(2.0).unwrap();
        let cert = certify_simplicial_face(&fam, &cfg).unwrap();
        assert!(cert.condition_a);
        assert_eq!(cert.condition_b, Verdict::Holds { exhaustive: true });
        assert_eq!(cert.simplex_dim, Some(5));
        assert!(cert.induced);
        assert!(cert.gupb.unwrap().holds && cert.general_position.holds);
    }
}
