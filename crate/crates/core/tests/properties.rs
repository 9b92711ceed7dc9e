use proptest::prelude::*;

use sepfaces::face;
use sepfaces::gallery;
use sepfaces::linalg;
use sepfaces::locator::{self, LocatorConfig};
use sepfaces::random;
use sepfaces::{tensor, BipartiteOperator, ProductVector, Subspace, Tolerance, C64};

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=4)
}

fn gp_family(seed: u64, m: usize, n: usize, k: usize) -> Vec<ProductVector> {
    let mut rng = random::seeded(seed, 0);
    (0..k)
        .map(|_| random::product_vector(&mut rng, m, n))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), (m, n) in dims()) {
        let a = random::hermitian(&mut random::seeded(seed, 0), m, n);
        let back = a.partial_transpose().partial_transpose();
        prop_assert_eq!(back.matrix(), a.matrix());
    }

    #[test]
    fn trace_pairing_survives_partial_transpose(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = random::seeded(seed, 0);
        let rho = random::density(&mut rng, m, n);
        let sigma = random::density(&mut rng, m, n);
        let lhs = rho.trace_product(&sigma);
        let rhs = rho.partial_transpose().trace_product(&sigma.partial_transpose());
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn tensor_is_bilinear(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mut rng = random::seeded(seed, 0);
        let (x1, x2) = (random::unit_vector(&mut rng, 3), random::unit_vector(&mut rng, 3));
        let y = random::unit_vector(&mut rng, 4);
        let c = C64::new(re, im);
        let lhs = tensor(&(&x1 * c + &x2), &y);
        let rhs = tensor(&x1, &y) * c + tensor(&x2, &y);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn realify_preserves_inner_products(seed in any::<u64>(), (m, n) in dims()) {
        let mut rng = random::seeded(seed, 0);
        let a = random::hermitian(&mut rng, m, n);
        let b = random::hermitian(&mut rng, m, n);
        let dot: f64 = a.realify().iter().zip(b.realify()).map(|(u, v)| u * v).sum();
        let tr = a.trace_product(&b).re;
        prop_assert!((dot - tr).abs() < 1e-10 * (1.0 + tr.abs()));
    }

    #[test]
    fn rank_and_kernel_fill_the_space(seed in any::<u64>(), (m, n) in dims(), r in 1usize..6) {
        let tol = Tolerance::default();
        let mut rng = random::seeded(seed, 0);
        let r = r.min(m * n);
        let mut acc = sepfaces::CMatrix::zeros(m * n, m * n);
        for _ in 0..r {
            let v = random::unit_vector(&mut rng, m * n);
            acc += &v * v.adjoint();
        }
        let op = BipartiteOperator::new(acc, m, n).unwrap();
        let ker = op.kernel(&tol).map_or(0, |k| k.dim());
        prop_assert_eq!(op.rank(&tol), r);
        prop_assert_eq!(op.rank(&tol) + ker, m * n);
    }

    #[test]
    fn partial_conjugate_is_an_involution(seed in any::<u64>(), (m, n) in dims()) {
        let p = random::product_vector(&mut random::seeded(seed, 0), m, n);
        prop_assert!(p.partial_conjugate().partial_conjugate().approx_eq(&p, 1e-12));
    }

    #[test]
    fn conjugation_preserves_general_position(seed in any::<u64>(), k in 2usize..8) {
        let tol = Tolerance::default();
        let fam = gp_family(seed, 3, 3, k);
        let conj: Vec<_> = fam.iter().map(|p| p.partial_conjugate()).collect();
        prop_assert_eq!(
            face::is_general_position(&fam, &tol).unwrap().holds,
            face::is_general_position(&conj, &tol).unwrap().holds
        );
    }

    #[test]
    fn gupb_is_monotone(seed in any::<u64>(), k in 5usize..9) {
        let tol = Tolerance::default();
        let fam = gp_family(seed, 3, 3, k);
        prop_assume!(face::is_gupb(&fam, &tol).unwrap().holds);
        let mut bigger = fam.clone();
        bigger.push(random::product_vector(&mut random::seeded(seed, 1), 3, 3));
        prop_assert!(face::is_gupb(&bigger, &tol).unwrap().holds);
    }

    #[test]
    fn operator_json_round_trip(seed in any::<u64>(), (m, n) in dims()) {
        let a = random::density(&mut random::seeded(seed, 0), m, n);
        let back: BipartiteOperator = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back.matrix(), a.matrix());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn small_general_position_families_are_independent(seed in any::<u64>(), k in 1usize..=5) {
        let tol = Tolerance::default();
        let fam = gp_family(seed, 3, 3, k);
        prop_assert!(face::is_general_position(&fam, &tol).unwrap().holds);
        let vectors: Vec<_> = fam.iter().map(|p| p.tensor()).collect();
        prop_assert_eq!(linalg::numerical_rank(&linalg::columns(&vectors), tol.rank_rel_tol), k);
    }

    #[test]
    fn general_position_pure_states_are_independent(seed in any::<u64>(), k in 1usize..=9) {
        let tol = Tolerance::default();
        let fam = gp_family(seed, 3, 3, k);
        prop_assert!(face::is_general_position(&fam, &tol).unwrap().holds);
        prop_assert!(face::pure_states_independent(&fam, &tol).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn solvers_agree_on_five_dimensional_spans(seed in any::<u64>()) {
        let cfg = LocatorConfig { multistart_count: 40, ..LocatorConfig::default() };
        let gens = gp_family(seed, 3, 3, 5);
        let d = Subspace::span_of_products(&gens, &cfg.tol).unwrap();
        let found = locator::find_product_vectors(&d, &cfg).unwrap();
        prop_assert!(found.complete);
        prop_assert_eq!(found.len(), 6);
        for g in &gens {
            prop_assert!(found.contains(g, 1e-6));
        }
        let oracle = locator::brute_force_products(&d, &cfg).unwrap();
        for p in &oracle.vectors {
            prop_assert!(found.contains(p, 1e-6));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn condition_b_implies_condition_c(seed in any::<u64>()) {
        let cfg = LocatorConfig::default();
        let gens = gp_family(seed, 3, 3, 5);
        let d = Subspace::span_of_products(&gens, &cfg.tol).unwrap();
        let six = locator::find_product_vectors(&d, &cfg).unwrap().vectors;
        let b = face::check_condition_b(&six, &cfg).unwrap();
        prop_assert!(b.holds());
        prop_assert!(face::check_condition_c(&six, &cfg).unwrap().holds());
    }
}

fn gallery_states() -> Vec<BipartiteOperator> {
    use std::f64::consts::PI;
    let fam = gallery::ten_vector_family(2.0).unwrap();
    let rho0 = gallery::uniform_mixture(&fam).unwrap();
    let mut out = vec![
        gallery::rho_b(2.0).unwrap(),
        gallery::rho_b(3.0).unwrap(),
        gallery::sigma_k_b(2.0, 0).unwrap(),
        gallery::rho_theta(2.0, PI / 6.0).unwrap(),
        gallery::rho_theta(3.0, -PI / 4.0).unwrap(),
        gallery::rho_sep(2.0, PI / 6.0).unwrap(),
        gallery::asymmetric_mix(2.0, PI / 6.0).unwrap(),
        gallery::asymmetric_mix_of_states(3.0, -PI / 4.0).unwrap(),
        rho0.clone(),
    ];
    let sigma = gallery::drop_one_mixture(&fam, 6).unwrap();
    let eps = sepfaces::ppt::max_epsilon_ppt(&sigma, &rho0, &Tolerance::default())
        .unwrap()
        .epsilon_star;
    out.push(
        BipartiteOperator::linear_combination(&[(1.0, &sigma), (-eps, &rho0)])
            .unwrap()
            .normalized()
            .unwrap(),
    );
    out
}

#[test]
fn kernel_products_conjugate_into_transposed_kernel() {
    let cfg = LocatorConfig::default();
    let tol = cfg.tol;
    let mut rng = random::seeded(11, 0);
    for rho in gallery_states() {
        let gamma = rho.partial_transpose();
        // <z|rho|z> = <conj-x y|rho^Gamma|conj-x y> for every product vector
        for _ in 0..50 {
            let z = random::product_vector(&mut rng, 3, 3);
            let a = rho.trace_product(&z.projector()).re;
            let b = gamma.trace_product(&z.partial_conjugate().projector()).re;
            assert!((a - b).abs() < 1e-12);
        }
        let Some(ker) = rho.kernel(&tol) else {
            continue;
        };
        let ker_g = gamma.kernel(&tol);
        let found = match locator::find_product_vectors(&ker, &cfg) {
            Ok(r) => r.vectors,
            Err(_) => locator::brute_force_products(&ker, &cfg).unwrap().vectors,
        };
        for z in found {
            let ker_g = ker_g
                .as_ref()
                .expect("kernel product forces a transposed kernel");
            assert!(locator::membership(&z.partial_conjugate(), ker_g, &tol));
        }
    }
}
