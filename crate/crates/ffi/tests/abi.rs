use std::ffi::CStr;
use std::ptr;

use dlfold_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(dlf_last_error()) }.to_string_lossy().into_owned()
}

fn miura() -> *mut DlfPattern {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { dlf_gen_miura(2, 2, 60f64.to_radians(), &mut p) }, DlfStatus::Ok);
    assert!(!p.is_null());
    p
}

#[test]
fn count_modes_matches_closed_form() {
    let mut c = 0u64;
    for (n, want) in [(1, 1), (2, 2), (4, 10), (5, 26), (6, 80)] {
        assert_eq!(unsafe { dlf_count_modes(n, &mut c) }, DlfStatus::Ok);
        assert_eq!(c, want);
    }
    assert_eq!(unsafe { dlf_count_modes(0, &mut c) }, DlfStatus::Domain);
    assert!(!last_error().is_empty());
}

#[test]
fn classify_reports_regimes() {
    let (a, b) = (60f64.to_radians(), 80f64.to_radians());
    let mut r = DlfRegime::Critical;
    let mut m = f64::NAN;
    let st = unsafe { dlf_classify_theta(DlfMode::AI, a, b, 90f64.to_radians(), &mut r, &mut m) };
    assert_eq!(st, DlfStatus::Ok, "{}", last_error());
    assert!(matches!(r, DlfRegime::FullRange | DlfRegime::Finite));
    assert!(m.is_finite());
    let st = unsafe { dlf_classify_theta(DlfMode::AI, a, b, 0.5, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, DlfStatus::NullPointer);
}

#[test]
fn fold_round_trip_through_buffers() {
    let p = miura();
    let mut len = 0usize;
    assert_eq!(unsafe { dlf_pattern_save_fold(p, ptr::null_mut(), 0, &mut len) }, DlfStatus::BufferTooSmall);
    let mut buf = vec![0u8; len];
    assert_eq!(unsafe { dlf_pattern_save_fold(p, buf.as_mut_ptr(), buf.len(), &mut len) }, DlfStatus::Ok);
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { dlf_pattern_load_fold(buf.as_ptr(), len, &mut q) }, DlfStatus::Ok);
    let (mut v1, mut c1, mut f1) = (0, 0, 0);
    let (mut v2, mut c2, mut f2) = (0, 0, 0);
    unsafe {
        dlf_pattern_counts(p, &mut v1, &mut c1, &mut f1);
        dlf_pattern_counts(q, &mut v2, &mut c2, &mut f2);
    }
    assert_eq!((v1, c1, f1), (v2, c2, f2));
    let (mut x1, mut y1, mut x2, mut y2) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..v1 {
        unsafe {
            dlf_pattern_vertex(p, i, &mut x1, &mut y1);
            dlf_pattern_vertex(q, i, &mut x2, &mut y2);
        }
        assert_eq!((x1, y1), (x2, y2));
    }
    assert_eq!(unsafe { dlf_pattern_vertex(p, v1, &mut x1, &mut y1) }, DlfStatus::InvalidArgument);
    unsafe {
        dlf_pattern_free(p);
        dlf_pattern_free(q);
    }
}

#[test]
fn bad_fold_is_a_parse_error() {
    let mut p = ptr::null_mut();
    let text = b"{not json";
    assert_eq!(unsafe { dlf_pattern_load_fold(text.as_ptr(), text.len(), &mut p) }, DlfStatus::Parse);
    assert!(p.is_null());
    assert!(!last_error().is_empty());
}

#[test]
fn motion_closes_along_the_path() {
    let p = miura();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dlf_motion_new(p, &mut m) }, DlfStatus::Ok, "{}", last_error());
    let mut n = 0;
    unsafe { dlf_pattern_counts(p, ptr::null_mut(), &mut n, ptr::null_mut()) };
    let mut angles = vec![0.0; n];
    for t in [0.1, 0.7, 3.0] {
        assert_eq!(unsafe { dlf_motion_angles(m, t, angles.as_mut_ptr(), n) }, DlfStatus::Ok);
        assert!(angles.iter().any(|a| a.abs() > 1e-3));
        let mut res = f64::NAN;
        assert_eq!(unsafe { dlf_pattern_fold_residual(p, angles.as_ptr(), n, &mut res) }, DlfStatus::Ok);
        assert!(res < 1e-9, "residual {res} at t = {t}");
    }
    assert_eq!(unsafe { dlf_motion_angles(m, 1.0, angles.as_mut_ptr(), n - 1) }, DlfStatus::InvalidArgument);
    unsafe {
        dlf_motion_free(m);
        dlf_pattern_free(p);
    }
}

#[test]
fn thick_panels_below_bound_clear() {
    let p = miura();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { dlf_motion_new(p, &mut m) }, DlfStatus::Ok, "{}", last_error());
    let (mut bound, mut clearance) = (0.0, 0.0);
    let st = unsafe { dlf_motion_thick_clearance(m, DlfSide::Above, 0.5, 3.0, 40, &mut bound, &mut clearance) };
    assert_eq!(st, DlfStatus::Ok, "{}", last_error());
    assert!(bound > 0.0);
    assert!(clearance >= -1e-9, "clearance {clearance}");
    unsafe {
        dlf_motion_free(m);
        dlf_pattern_free(p);
    }
}

#[test]
fn double_line_vertex_and_svg() {
    let mut p = ptr::null_mut();
    let st = unsafe { dlf_double_line(60f64.to_radians(), 80f64.to_radians(), 1.2, DlfMode::BII, &mut p) };
    assert_eq!(st, DlfStatus::Ok, "{}", last_error());
    let mut len = 0;
    unsafe { dlf_pattern_save_svg(p, ptr::null_mut(), 0, &mut len) };
    let mut buf = vec![0u8; len];
    assert_eq!(unsafe { dlf_pattern_save_svg(p, buf.as_mut_ptr(), len, &mut len) }, DlfStatus::Ok);
    assert!(String::from_utf8(buf).unwrap().contains("<svg"));
    unsafe { dlf_pattern_free(p) };
}

#[test]
fn max_thickness_formula() {
    let t = dlf_max_thickness(0.5, std::f64::consts::FRAC_PI_2);
    assert!((t - 0.5).abs() < 1e-15);
    let v = unsafe { CStr::from_ptr(dlf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn free_accepts_null() {
    unsafe {
        dlf_pattern_free(ptr::null_mut());
        dlf_motion_free(ptr::null_mut());
    }
}
