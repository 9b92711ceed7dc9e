use std::ffi::{CStr, CString};
use std::ptr;

use sepfaces_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { sf_string_free(s) };
    out
}

fn last_error() -> String {
    let p = sf_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn operator_round_trip_through_json() {
    unsafe {
        let mut rho = ptr::null_mut();
        assert_eq!(
            sf_gallery_rho_theta(2.0, std::f64::consts::PI / 6.0, &mut rho),
            SfStatus::Ok
        );
        let mut text = ptr::null_mut();
        assert_eq!(sf_operator_to_json(rho, &mut text), SfStatus::Ok);
        let text = CString::new(take(text)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(
            sf_operator_from_json(text.as_ptr(), &mut back),
            SfStatus::Ok
        );
        let (mut m, mut n) = (0, 0);
        assert_eq!(sf_operator_dims(back, &mut m, &mut n), SfStatus::Ok);
        assert_eq!((m, n), (3, 3));
        let (mut p, mut q) = (0, 0);
        assert_eq!(sf_operator_state_type(back, &mut p, &mut q), SfStatus::Ok);
        assert_eq!((p, q), (5, 5));
        let mut rank = 0;
        assert_eq!(sf_operator_rank(back, 0.0, &mut rank), SfStatus::Ok);
        assert_eq!(rank, 5);
        let mut gamma = ptr::null_mut();
        assert_eq!(
            sf_operator_partial_transpose(back, &mut gamma),
            SfStatus::Ok
        );
        assert_eq!(sf_operator_rank(gamma, -1.0, &mut rank), SfStatus::Ok);
        assert_eq!(rank, 5);
        sf_operator_free(rho);
        sf_operator_free(back);
        sf_operator_free(gamma);
    }
}

#[test]
fn edge_extraction_report() {
    unsafe {
        let (mut face, mut drop) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(sf_gallery_choi_face_state(2.0, -1, &mut face), SfStatus::Ok);
        assert_eq!(sf_gallery_choi_face_state(2.0, 4, &mut drop), SfStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(sf_extract_edge_json(drop, face, 7, &mut out), SfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert!((v["epsilon_star"].as_f64().unwrap() - 0.2).abs() < 1e-7);
        assert_eq!(v["edge"]["verdict"], "edge");
        assert_eq!(
            sf_extract_edge_json(face, face, 7, &mut out),
            SfStatus::Degenerate
        );
        assert!(last_error().contains("degenerate"));
        sf_operator_free(face);
        sf_operator_free(drop);
    }
}

#[test]
fn json_entry_points() {
    unsafe {
        let name = CString::new("qubit-qudit").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(
            sf_gallery_json(name.as_ptr(), 2.0, 0.5, 0.5, &mut out),
            SfStatus::Ok
        );
        let family = CString::new(take(out)).unwrap();
        assert_eq!(sf_certify_json(family.as_ptr(), 7, &mut out), SfStatus::Ok);
        let cert: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(cert["simplex_dim"], 4);
        assert_eq!(cert["induced"], true);

        let name = CString::new("kernel-rho-b").unwrap();
        assert_eq!(
            sf_gallery_json(name.as_ptr(), 2.0, 0.5, 0.5, &mut out),
            SfStatus::Ok
        );
        let ker = CString::new(take(out)).unwrap();
        assert_eq!(
            sf_find_products_json(ker.as_ptr(), false, 7, &mut out),
            SfStatus::Ok
        );
        let rep: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(rep["result"]["count"], 6);
    }
}

#[test]
fn errors_are_reported_not_raised() {
    unsafe {
        let mut op = ptr::null_mut();
        assert_eq!(
            sf_operator_from_json(ptr::null(), &mut op),
            SfStatus::NullPointer
        );
        let bad = CString::new("{\"m\":2").unwrap();
        assert_eq!(
            sf_operator_from_json(bad.as_ptr(), &mut op),
            SfStatus::Parse
        );
        assert!(!last_error().is_empty());
        let not_hermitian =
            CString::new("{\"m\":1,\"n\":2,\"entries\":[[1,0],[1,0],[0,0],[1,0]]}").unwrap();
        // rejected while decoding, so it surfaces as a parse failure
        assert_eq!(
            sf_operator_from_json(not_hermitian.as_ptr(), &mut op),
            SfStatus::Parse
        );
        assert!(last_error().contains("Hermitian"));
        assert_eq!(sf_gallery_rho_b(1.0, ptr::null_mut()), SfStatus::Domain);
        assert_eq!(
            sf_gallery_rho_b(2.0, ptr::null_mut()),
            SfStatus::NullPointer
        );
        let mut x = 0;
        assert_eq!(
            sf_operator_rank(ptr::null(), 0.0, &mut x),
            SfStatus::NullPointer
        );
        // a successful call clears the message
        assert_eq!(sf_gallery_rho_b(2.0, &mut op), SfStatus::Ok);
        assert!(sf_last_error_message().is_null());
        sf_operator_free(op);
        sf_operator_free(ptr::null_mut());
        sf_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(sf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
