//! C ABI over `qlmass-core`.
//!
//! Every entry point returns a [`QlmStatus`]; results are written through
//! out-pointers. On failure the message is kept per thread and can be read
//! with [`qlm_last_error_message`]. Handles are opaque and must be released
//! with the matching `*_free` function.

use qlmass_core::chart::{CosSeries, SurfaceChart};
use qlmass_core::cky::cky_residual;
use qlmass_core::embed::Ambient;
use qlmass_core::identities::minkowski_formula_20;
use qlmass_core::qlm::{isometric_reference, liu_yau_mass};
use qlmass_core::quadrature::{make_grid, Grid};
use qlmass_core::spacetime::{MetricKind, SpacetimePoint, StaticMetric};
use qlmass_core::surface::{canonical_frame, SurfaceGeometry};
use qlmass_core::QlmError;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Hypothesis = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QlmMetricKind {
    Minkowski = 0,
    AntiDeSitter = 1,
    Schwarzschild = 2,
    AdsSchwarzschild = 3,
}

/// Opaque static spacetime.
pub struct QlmMetric {
    inner: StaticMetric,
}

/// Opaque closed surface: chart, quadrature grid and slice-adapted geometry.
pub struct QlmSurface {
    chart: SurfaceChart,
    grid: Grid,
    geometry: SurfaceGeometry,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &QlmError) -> QlmStatus {
    match e {
        QlmError::Domain { .. } | QlmError::Pole { .. } => QlmStatus::Domain,
        QlmError::Config(_) | QlmError::GridMismatch(_) | QlmError::Contract(_) => QlmStatus::InvalidArgument,
        QlmError::Hypothesis { .. }
        | QlmError::Gauge { .. }
        | QlmError::GaugeMismatch { .. }
        | QlmError::MetricMismatch { .. }
        | QlmError::NotSpacelike { .. } => QlmStatus::Hypothesis,
        _ => QlmStatus::Numerical,
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (QlmStatus, String)>) -> QlmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QlmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QlmStatus::Panic
        }
    }
}

fn lift<T>(r: qlmass_core::Result<T>) -> Result<T, (QlmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QlmStatus, String) {
    (QlmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read4(p: *const f64, what: &str) -> Result<[f64; 4], (QlmStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::array::from_fn(|i| *p.add(i)))
}

unsafe fn read_slice(p: *const f64, len: usize, what: &str) -> Result<Vec<f64>, (QlmStatus, String)> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len).to_vec())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qlm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the last error message of this thread into `buf` (truncated and
/// NUL-terminated). Returns the full message length excluding the NUL, or
/// 0 if there is none.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qlm_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// `kind` is a [`QlmMetricKind`] value; `mass` is ignored for the
/// massless kinds.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qlm_metric_new(kind: i32, mass: f64, out: *mut *mut QlmMetric) -> QlmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match kind {
            k if k == QlmMetricKind::Minkowski as i32 => MetricKind::Minkowski,
            k if k == QlmMetricKind::AntiDeSitter as i32 => MetricKind::AntiDeSitter,
            k if k == QlmMetricKind::Schwarzschild as i32 => MetricKind::Schwarzschild,
            k if k == QlmMetricKind::AdsSchwarzschild as i32 => MetricKind::AdsSchwarzschild,
            k => return Err((QlmStatus::InvalidArgument, format!("unknown metric kind {k}"))),
        };
        let inner = lift(StaticMetric::new(kind, mass))?;
        *out = Box::into_raw(Box::new(QlmMetric { inner }));
        Ok(())
    })
}

/// # Safety
/// `metric` must be null or a handle from [`qlm_metric_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qlm_metric_free(metric: *mut QlmMetric) {
    if !metric.is_null() {
        drop(Box::from_raw(metric));
    }
}

/// Residual of the conformal Killing-Yano equation for `r dr ^ dt` at
/// `point = (t, r, theta, phi)` on coordinate vectors `x, y, z`.
///
/// # Safety
/// Pointers must be valid; arrays hold four doubles.
#[no_mangle]
pub unsafe extern "C" fn qlm_cky_residual(
    metric: *const QlmMetric,
    point: *const f64,
    x: *const f64,
    y: *const f64,
    z: *const f64,
    out: *mut f64,
) -> QlmStatus {
    guard(|| {
        let m = metric.as_ref().ok_or_else(|| null("metric"))?;
        let p = read4(point, "point")?;
        let (x, y, z) = (read4(x, "x")?, read4(y, "y")?, read4(z, "z")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lift(cky_residual(&m.inner, &SpacetimePoint::new(p[0], p[1], p[2], p[3]), &x, &y, &z))?;
        Ok(())
    })
}

fn surface(
    metric: &StaticMetric,
    chart: SurfaceChart,
    n_theta: usize,
    n_phi: usize,
) -> Result<QlmSurface, (QlmStatus, String)> {
    let grid = lift(make_grid(n_theta, n_phi))?;
    let geometry = lift(canonical_frame(metric, &chart, &grid))?.1;
    Ok(QlmSurface { chart, grid, geometry })
}

/// Coordinate sphere `t = 0, r = radius`.
///
/// # Safety
/// `metric` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn qlm_surface_sphere_new(
    metric: *const QlmMetric,
    radius: f64,
    n_theta: usize,
    n_phi: usize,
    out: *mut *mut QlmSurface,
) -> QlmStatus {
    guard(|| {
        let m = metric.as_ref().ok_or_else(|| null("metric"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let chart = lift(SurfaceChart::coordinate_sphere(m.inner, radius))?;
        *out = Box::into_raw(Box::new(surface(&m.inner, chart, n_theta, n_phi)?));
        Ok(())
    })
}

/// Axisymmetric graph `r = sum r_k cos(k theta)`, `t = sum t_k cos(k theta)`.
///
/// # Safety
/// `r_coeffs` and `t_coeffs` must hold `n_r` and `n_t` doubles (either may
/// be null when its length is 0); `metric` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qlm_surface_graph_new(
    metric: *const QlmMetric,
    r_coeffs: *const f64,
    n_r: usize,
    t_coeffs: *const f64,
    n_t: usize,
    n_theta: usize,
    n_phi: usize,
    out: *mut *mut QlmSurface,
) -> QlmStatus {
    guard(|| {
        let m = metric.as_ref().ok_or_else(|| null("metric"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = read_slice(r_coeffs, n_r, "r_coeffs")?;
        let t = read_slice(t_coeffs, n_t, "t_coeffs")?;
        let chart = lift(SurfaceChart::graph(m.inner, CosSeries(r), CosSeries(t)))?;
        *out = Box::into_raw(Box::new(surface(&m.inner, chart, n_theta, n_phi)?));
        Ok(())
    })
}

/// # Safety
/// `surface` must be null or a live surface handle.
#[no_mangle]
pub unsafe extern "C" fn qlm_surface_free(surface: *mut QlmSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Area of the surface.
///
/// # Safety
/// `surface` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qlm_surface_area(surface: *const QlmSurface, out: *mut f64) -> QlmStatus {
    guard(|| {
        let s = surface.as_ref().ok_or_else(|| null("surface"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.geometry.area(&s.grid);
        Ok(())
    })
}

/// Both sides of the (2,0) Minkowski formula and their difference.
///
/// # Safety
/// `surface` must be live; each out-pointer must be valid.
#[no_mangle]
pub unsafe extern "C" fn qlm_minkowski_formula(
    surface: *const QlmSurface,
    lhs: *mut f64,
    rhs: *mut f64,
    residual: *mut f64,
) -> QlmStatus {
    guard(|| {
        let s = surface.as_ref().ok_or_else(|| null("surface"))?;
        if lhs.is_null() || rhs.is_null() || residual.is_null() {
            return Err(null("output pointer"));
        }
        let rep = lift(minkowski_formula_20(&s.geometry, &s.grid))?;
        *lhs = rep.lhs;
        *rhs = rep.rhs;
        *residual = rep.residual;
        Ok(())
    })
}

/// Liu-Yau mass of a surface in a static slice against its Euclidean image.
///
/// # Safety
/// `surface` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn qlm_liu_yau_mass(surface: *const QlmSurface, out: *mut f64) -> QlmStatus {
    guard(|| {
        let s = surface.as_ref().ok_or_else(|| null("surface"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let reference = lift(isometric_reference(&s.chart, Ambient::Euclidean3, &s.grid))?;
        *out = lift(liu_yau_mass(&s.geometry, &reference, &s.grid))?.value;
        Ok(())
    })
}
