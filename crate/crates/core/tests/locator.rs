use std::f64::consts::PI;

use sepfaces::gallery;
use sepfaces::locator::{self, LocatorConfig};
use sepfaces::{Error, Subspace, Tolerance};

#[test]
fn choi_kernels_hold_exactly_six_products() {
    let cfg = LocatorConfig::default();
    for b in [2.0, 3.0, 0.5] {
        let ker = gallery::rho_b(b).unwrap().kernel(&cfg.tol).unwrap();
        assert_eq!(ker.dim(), 5);
        let found = locator::find_product_vectors(&ker, &cfg).unwrap();
        assert!(found.complete);
        assert_eq!(found.len(), 6, "b={b}");
        assert!(found.max_residual() < 1e-8);
        for p in gallery::six_products_b(b).unwrap() {
            assert!(
                found.contains(&p, cfg.tol.match_tol),
                "b={b}: missing {p:?}"
            );
        }
    }
}

#[test]
fn asymmetric_edge_state_has_product_free_kernel() {
    let cfg = LocatorConfig::default();
    for (b, theta) in [(2.0, PI / 6.0), (3.0, -PI / 4.0)] {
        let rho = gallery::rho_theta(b, theta).unwrap();
        let ker = rho.kernel(&cfg.tol).unwrap();
        let found = locator::find_product_vectors(&ker, &cfg).unwrap();
        assert!(found.is_empty() && found.complete);
    }
}

#[test]
fn range_products_of_asymmetric_edge_state() {
    let cfg = LocatorConfig::default();
    let (b, theta) = (2.0, PI / 6.0);
    let range = gallery::rho_theta(b, theta)
        .unwrap()
        .range(&cfg.tol)
        .unwrap();
    let expected = gallery::six_products_theta(b, theta).unwrap();
    for p in &expected {
        assert!(locator::membership(p, &range, &cfg.tol));
    }
    let found = locator::find_product_vectors(&range, &cfg).unwrap();
    assert_eq!(found.len(), 6);
    for p in &expected {
        assert!(found.contains(p, cfg.tol.match_tol));
    }
}

#[test]
fn oracle_never_leaves_exhaustive_list() {
    let cfg = LocatorConfig::default();
    let ker = gallery::rho_b(2.0).unwrap().kernel(&cfg.tol).unwrap();
    let exhaustive = locator::find_product_vectors(&ker, &cfg).unwrap();
    let oracle = locator::brute_force_products(&ker, &cfg).unwrap();
    assert!(!oracle.complete);
    assert!(!oracle.is_empty());
    for p in &oracle.vectors {
        assert!(exhaustive.contains(p, cfg.tol.match_tol));
    }
}

#[test]
fn other_dimensions_are_unsupported_by_exhaustive_solver() {
    let cfg = LocatorConfig::default();
    let fam = gallery::qubit_qudit_example();
    let d = Subspace::span_of_products(&fam, &Tolerance::default()).unwrap();
    assert!(matches!(
        locator::find_product_vectors(&d, &cfg),
        Err(Error::UnsupportedDimensions { m: 2, n: 3 })
    ));
    // the span is 4-dimensional in 2 (x) 3, so it carries a curve of products
    let found = locator::brute_force_products(&d, &cfg).unwrap();
    assert!(found.len() > 5);
}

#[test]
fn subspace_json_round_trip() {
    let tol = Tolerance::default();
    let ker = gallery::rho_b(2.0).unwrap().kernel(&tol).unwrap();
    let text = serde_json::to_string(&ker).unwrap();
    let back: Subspace = serde_json::from_str(&text).unwrap();
    assert!(back.projector_distance(&ker) < 1e-12);
}
