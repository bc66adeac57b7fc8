use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gapforge_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let v = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { gf_string_free(s) };
    v
}

#[test]
fn planted_instance_through_the_abi() {
    unsafe {
        let mut lc = ptr::null_mut();
        assert_eq!(gf_label_cover_generate(GfGenerator::Planted, 2, 1, 2, 3, 3, 7, &mut lc), GfStatus::Ok);
        let mut eps = ptr::null_mut();
        assert_eq!(gf_label_cover_eps(lc, 0, &mut eps), GfStatus::Ok);
        assert_eq!(take(eps), "1");

        let mut vs = ptr::null_mut();
        assert_eq!(gf_vector_system_build(2, 2, 3, false, &mut vs), GfStatus::Ok);
        let mut pass = false;
        assert_eq!(gf_vector_system_verify(vs, 0, &mut pass, ptr::null_mut()), GfStatus::Ok);
        assert!(pass);

        let mut red = ptr::null_mut();
        assert_eq!(gf_reduction_build(lc, 2, vs, &mut red), GfStatus::Ok);
        let mut best = ptr::null_mut();
        let mut json = ptr::null_mut();
        assert_eq!(gf_solve_min(red, 1, GfCaps::default(), &mut best, &mut json), GfStatus::Ok);
        let best = take(best);
        let json = take(json);
        assert!(json.contains("\"kind\": \"solve-report\""));

        // the same instance after a JSON round trip gives the same answer
        let mut text = ptr::null_mut();
        assert_eq!(gf_reduction_to_json(red, &mut text), GfStatus::Ok);
        let text = CString::new(take(text)).unwrap();
        let mut red2 = ptr::null_mut();
        assert_eq!(gf_reduction_from_json(text.as_ptr(), &mut red2), GfStatus::Ok);
        let mut best2 = ptr::null_mut();
        assert_eq!(gf_solve_min(red2, 1, GfCaps::default(), &mut best2, ptr::null_mut()), GfStatus::Ok);
        assert_eq!(take(best2), best);

        let mut ok = false;
        assert_eq!(gf_verify(red, GfCheck::BaseGap, 1, GfCaps::default(), &mut ok, ptr::null_mut()), GfStatus::Ok);
        assert!(ok);

        gf_reduction_free(red2);
        gf_reduction_free(red);
        gf_vector_system_free(vs);
        gf_label_cover_free(lc);
    }
}

#[test]
fn caps_surface_as_status() {
    unsafe {
        let mut lc = ptr::null_mut();
        assert_eq!(gf_label_cover_generate(GfGenerator::Random, 2, 1, 3, 3, 4, 1, &mut lc), GfStatus::Ok);
        let mut vs = ptr::null_mut();
        assert_eq!(gf_vector_system_build(2, 2, 3, false, &mut vs), GfStatus::Ok);
        let mut red = ptr::null_mut();
        assert_eq!(gf_reduction_build(lc, 2, vs, &mut red), GfStatus::Ok);
        let caps = GfCaps { paths: 10, ..GfCaps::default() };
        let mut best = ptr::null_mut();
        assert_eq!(gf_solve_min(red, 2, caps, &mut best, ptr::null_mut()), GfStatus::CapExceeded);
        assert!(best.is_null());
        assert!(!gf_last_error().is_null());
        gf_reduction_free(red);
        gf_vector_system_free(vs);
        gf_label_cover_free(lc);
    }
}

#[test]
fn bad_input_is_rejected() {
    unsafe {
        let bad = CString::new("{ \"format\": \"gapforge\", ").unwrap();
        let mut lc = ptr::null_mut();
        assert_eq!(gf_label_cover_from_json(bad.as_ptr(), &mut lc), GfStatus::Parse);
        assert!(lc.is_null());
        assert_eq!(gf_label_cover_from_json(ptr::null(), &mut lc), GfStatus::NullPointer);
        gf_label_cover_free(ptr::null_mut());
        gf_string_free(ptr::null_mut());
    }
}

#[test]
fn infinity_pipeline() {
    unsafe {
        let mut lc = ptr::null_mut();
        assert_eq!(gf_label_cover_generate(GfGenerator::Disjoint, 2, 1, 2, 2, 2, 0, &mut lc), GfStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(gf_modified_vs_search(4, 4, 0, 0, 50, &mut m), GfStatus::Ok);
        let mut pass = false;
        assert_eq!(gf_modified_vs_verify(m, &mut pass, ptr::null_mut()), GfStatus::Ok);
        assert!(pass);
        let mut red = ptr::null_mut();
        assert_eq!(gf_reduction_build_infty(lc, m, &mut red), GfStatus::Ok);
        let mut best = ptr::null_mut();
        assert_eq!(gf_solve_min(red, 1, GfCaps::default(), &mut best, ptr::null_mut()), GfStatus::Ok);
        take(best);
        gf_reduction_free(red);
        gf_modified_vs_free(m);
        gf_label_cover_free(lc);
    }
}
