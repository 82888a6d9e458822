use qlmass_ffi::*;
use std::ffi::{c_char, CStr};
use std::path::{Path, PathBuf};
use std::ptr;

fn last_error() -> String {
    let mut buf = [0 as c_char; 512];
    let n = unsafe { qlm_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn metric(kind: QlmMetricKind, mass: f64) -> *mut QlmMetric {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qlm_metric_new(kind as i32, mass, &mut m) }, QlmStatus::Ok);
    m
}

#[test]
fn liu_yau_mass_of_schwarzschild_sphere() {
    let m = metric(QlmMetricKind::Schwarzschild, 1.0);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qlm_surface_sphere_new(m, 4.0, 32, 16, &mut s) }, QlmStatus::Ok);
    let mut v = 0.0;
    assert_eq!(unsafe { qlm_liu_yau_mass(s, &mut v) }, QlmStatus::Ok);
    assert!((v - 4.0 * (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
    let mut area = 0.0;
    assert_eq!(unsafe { qlm_surface_area(s, &mut area) }, QlmStatus::Ok);
    assert!((area - 64.0 * std::f64::consts::PI).abs() < 1e-10);
    unsafe {
        qlm_surface_free(s);
        qlm_metric_free(m);
    }
}

#[test]
fn minkowski_formula_on_graph() {
    let m = metric(QlmMetricKind::Minkowski, 0.0);
    let (r, t) = ([2.0], [0.0, 0.2]);
    let mut s = ptr::null_mut();
    let st = unsafe { qlm_surface_graph_new(m, r.as_ptr(), 1, t.as_ptr(), 2, 32, 16, &mut s) };
    assert_eq!(st, QlmStatus::Ok);
    let (mut l, mut rr, mut res) = (0.0, 0.0, 1.0);
    assert_eq!(unsafe { qlm_minkowski_formula(s, &mut l, &mut rr, &mut res) }, QlmStatus::Ok);
    assert!(res < 1e-9 && l.is_finite() && (l - rr).abs() == res);
    unsafe {
        qlm_surface_free(s);
        qlm_metric_free(m);
    }
}

#[test]
fn cky_residual_is_small() {
    let m = metric(QlmMetricKind::AdsSchwarzschild, 1.0);
    let p = [0.0, 3.0, 1.0, 0.5];
    let (x, y, z) = ([0.1, 0.2, -0.1, 0.05], [0.0, -0.3, 0.1, 0.2], [0.2, 0.1, 0.0, -0.1]);
    let mut out = 1.0;
    assert_eq!(unsafe { qlm_cky_residual(m, p.as_ptr(), x.as_ptr(), y.as_ptr(), z.as_ptr(), &mut out) }, QlmStatus::Ok);
    assert!(out < 1e-12);
    unsafe { qlm_metric_free(m) };
}

#[test]
fn errors_map_to_status_codes() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qlm_metric_new(9, 1.0, &mut m) }, QlmStatus::InvalidArgument);
    assert!(last_error().contains("unknown metric kind"));
    assert_eq!(
        unsafe { qlm_metric_new(QlmMetricKind::Schwarzschild as i32, -1.0, &mut m) },
        QlmStatus::InvalidArgument
    );
    assert!(m.is_null());

    let m = metric(QlmMetricKind::Schwarzschild, 1.0);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qlm_surface_sphere_new(m, 1.5, 32, 16, &mut s) }, QlmStatus::Domain);
    assert!(s.is_null());
    assert_eq!(unsafe { qlm_surface_sphere_new(m, 4.0, 2, 16, &mut s) }, QlmStatus::InvalidArgument);
    let mut v = 0.0;
    assert_eq!(unsafe { qlm_liu_yau_mass(ptr::null(), &mut v) }, QlmStatus::NullPointer);
    assert_eq!(last_error(), "surface is null");
    unsafe { qlm_metric_free(m) };
    unsafe { qlm_metric_free(ptr::null_mut()) };
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(qlm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qlmass.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for f in [
        "qlm_metric_new",
        "qlm_metric_free",
        "qlm_surface_sphere_new",
        "qlm_surface_graph_new",
        "qlm_surface_free",
        "qlm_cky_residual",
        "qlm_minkowski_formula",
        "qlm_liu_yau_mass",
        "qlm_last_error_message",
        "QLM_STATUS_HYPOTHESIS",
        "typedef struct QlmSurface QlmSurface",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    // target/<profile>/deps/<test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libqlmass_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/c/smoke.c");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = std::process::Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
