use std::ffi::CStr;
use std::ptr;

use nls_waveguide_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 256];
    let n = unsafe { nlsw_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_cargo_version() {
    let v = unsafe { CStr::from_ptr(nlsw_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn cubic_constants() {
    let mut g = 0.0;
    let mut r = 0.0;
    unsafe {
        assert_eq!(nlsw_g_constant(2.0, 1, &mut g), NlswStatus::Ok);
        assert_eq!(nlsw_rho0(2.0, 1, &mut r), NlswStatus::Ok);
    }
    assert!((g - 1.0 / 96.0).abs() < 1e-12);
    assert!((r - 2.0).abs() < 1e-12);
}

#[test]
fn sphere_problem_thresholds() {
    let mut p = ptr::null_mut();
    let mut t = NlswThresholds::default();
    unsafe {
        assert_eq!(nlsw_problem_new_sphere(4, 1.0, &mut p), NlswStatus::Ok);
        assert_eq!(nlsw_thresholds(p, &mut t), NlswStatus::Ok);
    }
    assert!(t.criterion_improved);
    assert!(!t.conditional_on_a && !t.conditional_on_b);
    assert!(t.rho_ex_basic > 0.0 && t.rho_tr_upper > 0.0 && t.t_star.is_finite());
    let mut sv_below = 0.0;
    let mut sv_above = 0.0;
    unsafe {
        assert_eq!(nlsw_second_variation(p, 0.5 * t.rho_tr_upper, &mut sv_below), NlswStatus::Ok);
        assert_eq!(nlsw_second_variation(p, 1.5 * t.rho_tr_upper, &mut sv_above), NlswStatus::Ok);
        nlsw_problem_free(p);
    }
    assert!(sv_below > 0.0 && sv_above < 0.0);
}

#[test]
fn torus_is_conditional_and_mass_critical_has_infinite_t_star() {
    let mut p = ptr::null_mut();
    let mut t = NlswThresholds::default();
    unsafe {
        assert_eq!(nlsw_problem_new_torus(2.0 * std::f64::consts::PI, 2.0, &mut p), NlswStatus::Ok);
        assert_eq!(nlsw_thresholds(p, &mut t), NlswStatus::Ok);
        nlsw_problem_free(p);
    }
    assert!(t.conditional_on_b);
    assert!(t.t_star.is_infinite());
    assert!(t.rho_ex_improved.is_nan());
}

#[test]
fn sphere_terms_and_mass_critical() {
    let mut terms = NlswSphereTerms::default();
    let mut mc = false;
    unsafe {
        assert_eq!(nlsw_sphere_terms(8, 0.5, &mut terms), NlswStatus::Ok);
        assert_eq!(nlsw_sphere_mass_critical(3, &mut mc), NlswStatus::Ok);
        assert!(mc);
        assert_eq!(nlsw_sphere_mass_critical(2, &mut mc), NlswStatus::Ok);
    }
    assert!(terms.holds);
    assert!(!mc);
}

#[test]
fn errors_are_reported() {
    let mut p = ptr::null_mut();
    let s = unsafe { nlsw_problem_new_generic(2, 1, 5.0, 1.0, 1.0, 0.0, 0.0, &mut p) };
    assert_eq!(s, NlswStatus::Domain);
    assert!(p.is_null());
    assert!(!last_error().is_empty());

    let s = unsafe { nlsw_rho0(2.0, 1, ptr::null_mut()) };
    assert_eq!(s, NlswStatus::NullPointer);
    assert!(last_error().contains("null"));

    let mut t = NlswThresholds::default();
    assert_eq!(unsafe { nlsw_thresholds(ptr::null(), &mut t) }, NlswStatus::NullPointer);
    unsafe { nlsw_problem_free(ptr::null_mut()) };
}

#[test]
fn truncated_error_buffer() {
    unsafe { nlsw_rho0(2.0, 1, ptr::null_mut()) };
    let mut buf = [1 as std::ffi::c_char; 4];
    let n = unsafe { nlsw_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 3);
    assert_eq!(buf[3], 0);
}

#[test]
fn small_scan_round_trip() {
    let rhos = [1.0, 1.5];
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(nlsw_scan_run(2.5, 2.0 * std::f64::consts::PI, rhos.as_ptr(), 2, 256, 16, &mut s), NlswStatus::Ok);
        assert_eq!(nlsw_scan_len(s), 2);
        let mut row = NlswScanRow::default();
        assert_eq!(nlsw_scan_row(s, 0, &mut row), NlswStatus::Ok);
        assert_eq!(row.rho, 1.0);
        assert_eq!(row.status, 0);
        assert!((row.m_numeric - row.i_closed).abs() < 1e-2 * row.i_closed.abs());
        assert_eq!(nlsw_scan_row(s, 2, &mut row), NlswStatus::OutOfRange);
        nlsw_scan_free(s);
    }
    let mut s = ptr::null_mut();
    let bad = unsafe { nlsw_scan_run(2.5, 1.0, rhos.as_ptr(), 2, 7, 16, &mut s) };
    assert_eq!(bad, NlswStatus::Grid);
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/nls_waveguide.h");
    for name in [
        "nlsw_last_error",
        "nlsw_version",
        "nlsw_problem_new_sphere",
        "nlsw_problem_new_torus",
        "nlsw_problem_new_generic",
        "nlsw_problem_free",
        "nlsw_thresholds",
        "nlsw_second_variation",
        "nlsw_rho0",
        "nlsw_g_constant",
        "nlsw_sphere_terms",
        "nlsw_sphere_mass_critical",
        "nlsw_scan_run",
        "nlsw_scan_len",
        "nlsw_scan_estimate",
        "nlsw_scan_row",
        "nlsw_scan_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}
