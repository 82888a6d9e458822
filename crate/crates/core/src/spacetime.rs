//! Static spherically symmetric spacetimes `-f^2 dt^2 + dr^2/f^2 + r^2 dS^2`
//! and their exact curvature, together with the Riemannian geometry of the
//! `t = 0` slices.
//!
//! Coordinates are ordered `(t, r, theta, phi)`. Curvature uses the
//! convention `R_{abcd} = g_{ae} R^e_{bcd}` with
//! `R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}`,
//! so that `R_{abab}` is the sectional curvature of an orthonormal pair and
//! the unit AdS space form satisfies `R_{abcd} = -(g_ac g_bd - g_ad g_bc)`.

use crate::error::{QlmError, Result};
use serde::{Deserialize, Serialize};

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];
pub type Tensor4<const D: usize> = [[[[f64; D]; D]; D]; D];
pub type Christoffel<const D: usize> = [[[f64; D]; D]; D];

pub const T: usize = 0;
pub const R: usize = 1;
pub const TH: usize = 2;
pub const PH: usize = 3;

/// Horizon margin below which radii are rejected.
pub const HORIZON_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricKind {
    Minkowski,
    AntiDeSitter,
    Schwarzschild,
    AdsSchwarzschild,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Minkowski => "minkowski",
            MetricKind::AntiDeSitter => "anti-de-sitter",
            MetricKind::Schwarzschild => "schwarzschild",
            MetricKind::AdsSchwarzschild => "ads-schwarzschild",
        }
    }
}

/// `f^2` and its first two radial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Warp {
    pub f2: f64,
    pub df2: f64,
    pub ddf2: f64,
}

/// A catalog static metric. The mass parameter is ignored by the two vacuum
/// models without mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaticMetric {
    pub kind: MetricKind,
    pub mass: f64,
}

impl StaticMetric {
    pub fn new(kind: MetricKind, mass: f64) -> Result<Self> {
        if !(mass.is_finite() && mass >= 0.0) {
            return Err(QlmError::Config(format!("mass parameter must be finite and >= 0, got {mass}")));
        }
        let mass = match kind {
            MetricKind::Minkowski | MetricKind::AntiDeSitter => 0.0,
            _ => mass,
        };
        Ok(StaticMetric { kind, mass })
    }

    pub fn minkowski() -> Self {
        StaticMetric { kind: MetricKind::Minkowski, mass: 0.0 }
    }

    pub fn anti_de_sitter() -> Self {
        StaticMetric { kind: MetricKind::AntiDeSitter, mass: 0.0 }
    }

    pub fn schwarzschild(mass: f64) -> Self {
        StaticMetric { kind: MetricKind::Schwarzschild, mass }
    }

    pub fn ads_schwarzschild(mass: f64) -> Self {
        StaticMetric { kind: MetricKind::AdsSchwarzschild, mass }
    }

    pub fn name(&self) -> String {
        match self.kind {
            MetricKind::Minkowski | MetricKind::AntiDeSitter => self.kind.name().to_string(),
            _ => format!("{}(M={})", self.kind.name(), self.mass),
        }
    }

    pub fn warp(&self, r: f64) -> Warp {
        let m = self.mass;
        match self.kind {
            MetricKind::Minkowski => Warp { f2: 1.0, df2: 0.0, ddf2: 0.0 },
            MetricKind::AntiDeSitter => Warp { f2: 1.0 + r * r, df2: 2.0 * r, ddf2: 2.0 },
            MetricKind::Schwarzschild => {
                Warp { f2: 1.0 - 2.0 * m / r, df2: 2.0 * m / (r * r), ddf2: -4.0 * m / (r * r * r) }
            }
            MetricKind::AdsSchwarzschild => Warp {
                f2: 1.0 + r * r - 2.0 * m / r,
                df2: 2.0 * r + 2.0 * m / (r * r),
                ddf2: 2.0 - 4.0 * m / (r * r * r),
            },
        }
    }

    /// Largest root of `f^2`, or 0 when there is none.
    pub fn horizon(&self) -> f64 {
        match self.kind {
            MetricKind::Minkowski | MetricKind::AntiDeSitter => 0.0,
            MetricKind::Schwarzschild => 2.0 * self.mass,
            MetricKind::AdsSchwarzschild => {
                if self.mass == 0.0 {
                    return 0.0;
                }
                // r^3 + r - 2M is increasing with a single positive root in (0, 2M].
                let (mut lo, mut hi) = (0.0_f64, 2.0 * self.mass);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid * mid * mid + mid - 2.0 * self.mass > 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                    if hi - lo <= f64::EPSILON * hi {
                        break;
                    }
                }
                hi
            }
        }
    }

    /// Smallest admissible radius (exclusive).
    pub fn radial_bound(&self) -> f64 {
        let h = self.horizon();
        if h > 0.0 {
            h + HORIZON_MARGIN
        } else {
            0.0
        }
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        let bound = self.radial_bound();
        if r.is_finite() && r > bound {
            Ok(())
        } else {
            Err(QlmError::Domain { metric: self.name(), r, bound })
        }
    }

    pub fn is_flat(&self) -> bool {
        self.kind == MetricKind::Minkowski
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SpacetimePoint {
    pub fn new(t: f64, r: f64, theta: f64, phi: f64) -> Self {
        SpacetimePoint { t, r, theta, phi }
    }
}

fn check_point(metric: &StaticMetric, p: &SpacetimePoint) -> Result<()> {
    metric.check_radius(p.r)?;
    if !(p.theta > 0.0 && p.theta < std::f64::consts::PI) {
        return Err(QlmError::Pole { theta: p.theta });
    }
    Ok(())
}

/// Radial profile of a diagonal warped metric
/// `-N(r) dt^2 + dr^2/F(r) + r^2 dS^2`; each entry is `(value, d/dr, d2/dr2)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WarpedProfile {
    pub lapse2: [f64; 3],
    pub inv_grr: [f64; 3],
}

impl WarpedProfile {
    pub fn catalog(metric: &StaticMetric, r: f64) -> Self {
        let w = metric.warp(r);
        let p = [w.f2, w.df2, w.ddf2];
        WarpedProfile { lapse2: p, inv_grr: p }
    }

    /// The ultrastatic product `-dt^2 + g_slice`.
    pub fn product(metric: &StaticMetric, r: f64) -> Self {
        let w = metric.warp(r);
        WarpedProfile { lapse2: [1.0, 0.0, 0.0], inv_grr: [w.f2, w.df2, w.ddf2] }
    }
}

pub(crate) fn diag_metric(profile: &WarpedProfile, r: f64, theta: f64) -> Vec4 {
    let s = theta.sin();
    [-profile.lapse2[0], 1.0 / profile.inv_grr[0], r * r, r * r * s * s]
}

/// Christoffel symbols `G^a_{bc}` of the warped metric and their `r` and
/// `theta` derivatives.
pub(crate) fn warped_christoffel(
    profile: &WarpedProfile,
    r: f64,
    theta: f64,
) -> (Christoffel<4>, Christoffel<4>, Christoffel<4>) {
    let [n, dn, ddn] = profile.lapse2;
    let [f, df, ddf] = profile.inv_grr;
    let (s, c) = theta.sin_cos();
    let mut g = [[[0.0; 4]; 4]; 4];
    let mut gr = [[[0.0; 4]; 4]; 4];
    let mut gt = [[[0.0; 4]; 4]; 4];

    let mut set = |a: usize, b: usize, cc: usize, v: f64, vr: f64, vt: f64| {
        g[a][b][cc] = v;
        g[a][cc][b] = v;
        gr[a][b][cc] = vr;
        gr[a][cc][b] = vr;
        gt[a][b][cc] = vt;
        gt[a][cc][b] = vt;
    };

    set(T, T, R, dn / (2.0 * n), (ddn * n - dn * dn) / (2.0 * n * n), 0.0);
    set(R, T, T, f * dn / 2.0, (df * dn + f * ddn) / 2.0, 0.0);
    set(R, R, R, -df / (2.0 * f), -(ddf * f - df * df) / (2.0 * f * f), 0.0);
    set(R, TH, TH, -r * f, -(f + r * df), 0.0);
    set(R, PH, PH, -r * f * s * s, -(f + r * df) * s * s, -2.0 * r * f * s * c);
    set(TH, R, TH, 1.0 / r, -1.0 / (r * r), 0.0);
    set(TH, PH, PH, -s * c, 0.0, -(c * c - s * s));
    set(PH, R, PH, 1.0 / r, -1.0 / (r * r), 0.0);
    set(PH, TH, PH, c / s, 0.0, -1.0 / (s * s));
    (g, gr, gt)
}

/// Christoffel symbols of the slice metric `dr^2/F + r^2 dS^2` in
/// coordinates `(r, theta, phi)`, with `r` and `theta` derivatives.
fn slice_christoffel(inv_grr: [f64; 3], r: f64, theta: f64) -> (Christoffel<3>, Christoffel<3>, Christoffel<3>) {
    let [f, df, ddf] = inv_grr;
    let (s, c) = theta.sin_cos();
    let mut g = [[[0.0; 3]; 3]; 3];
    let mut gr = [[[0.0; 3]; 3]; 3];
    let mut gt = [[[0.0; 3]; 3]; 3];
    let mut set = |a: usize, b: usize, cc: usize, v: f64, vr: f64, vt: f64| {
        g[a][b][cc] = v;
        g[a][cc][b] = v;
        gr[a][b][cc] = vr;
        gr[a][cc][b] = vr;
        gt[a][b][cc] = vt;
        gt[a][cc][b] = vt;
    };
    set(0, 0, 0, -df / (2.0 * f), -(ddf * f - df * df) / (2.0 * f * f), 0.0);
    set(0, 1, 1, -r * f, -(f + r * df), 0.0);
    set(0, 2, 2, -r * f * s * s, -(f + r * df) * s * s, -2.0 * r * f * s * c);
    set(1, 0, 1, 1.0 / r, -1.0 / (r * r), 0.0);
    set(1, 2, 2, -s * c, 0.0, -(c * c - s * s));
    set(2, 0, 2, 1.0 / r, -1.0 / (r * r), 0.0);
    set(2, 1, 2, c / s, 0.0, -1.0 / (s * s));
    (g, gr, gt)
}

/// Lowered Riemann tensor from Christoffel symbols whose only coordinate
/// dependence is on the coordinates at indices `ir` and `ith`.
fn riemann_from_christoffel<const D: usize>(
    gdiag: &[f64; D],
    g: &Christoffel<D>,
    dg_r: &Christoffel<D>,
    dg_th: &Christoffel<D>,
    ir: usize,
    ith: usize,
) -> Tensor4<D> {
    let deriv = |mu: usize, a: usize, b: usize, c: usize| -> f64 {
        if mu == ir {
            dg_r[a][b][c]
        } else if mu == ith {
            dg_th[a][b][c]
        } else {
            0.0
        }
    };
    let mut out = [[[[0.0; D]; D]; D]; D];
    for rho in 0..D {
        for sig in 0..D {
            for mu in 0..D {
                for nu in 0..D {
                    let mut v = deriv(mu, rho, nu, sig) - deriv(nu, rho, mu, sig);
                    for lam in 0..D {
                        v += g[rho][mu][lam] * g[lam][nu][sig] - g[rho][nu][lam] * g[lam][mu][sig];
                    }
                    out[rho][sig][mu][nu] = gdiag[rho] * v;
                }
            }
        }
    }
    out
}

fn ricci_from_riemann<const D: usize>(gdiag: &[f64; D], riem: &Tensor4<D>) -> ([[f64; D]; D], f64) {
    let mut ric = [[0.0; D]; D];
    for b in 0..D {
        for d in 0..D {
            let mut v = 0.0;
            for a in 0..D {
                v += riem[a][b][a][d] / gdiag[a];
            }
            ric[b][d] = v;
        }
    }
    let scalar = (0..D).map(|a| ric[a][a] / gdiag[a]).sum();
    (ric, scalar)
}

/// Metric and inverse at a point.
pub fn metric_at(metric: &StaticMetric, p: &SpacetimePoint) -> Result<(Mat4, Mat4)> {
    check_point(metric, p)?;
    let d = diag_metric(&WarpedProfile::catalog(metric, p.r), p.r, p.theta);
    let mut g = [[0.0; 4]; 4];
    let mut gi = [[0.0; 4]; 4];
    for i in 0..4 {
        g[i][i] = d[i];
        gi[i][i] = 1.0 / d[i];
    }
    Ok((g, gi))
}

/// Diagonal of the metric at a point (no domain check).
pub(crate) fn metric_diag(metric: &StaticMetric, r: f64, theta: f64) -> Vec4 {
    diag_metric(&WarpedProfile::catalog(metric, r), r, theta)
}

pub fn christoffel_at(metric: &StaticMetric, p: &SpacetimePoint) -> Result<Christoffel<4>> {
    check_point(metric, p)?;
    Ok(warped_christoffel(&WarpedProfile::catalog(metric, p.r), p.r, p.theta).0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureAtPoint {
    pub riemann: Tensor4<4>,
    pub ricci: Mat4,
    pub scalar: f64,
    /// Riemann tensor of the `t = 0` slice in coordinates `(r, theta, phi)`.
    pub slice_riemann: Tensor4<3>,
}

impl CurvatureAtPoint {
    /// `R(u, v, w, z) = R_{abcd} u^a v^b w^c z^d`.
    pub fn contract(&self, u: &Vec4, v: &Vec4, w: &Vec4, z: &Vec4) -> f64 {
        contract4(&self.riemann, u, v, w, z)
    }

    pub fn kretschmann(&self, gdiag: &Vec4) -> f64 {
        let mut k = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let x = self.riemann[a][b][c][d];
                        k += x * x / (gdiag[a] * gdiag[b] * gdiag[c] * gdiag[d]);
                    }
                }
            }
        }
        k
    }
}

pub(crate) fn contract4(riem: &Tensor4<4>, u: &Vec4, v: &Vec4, w: &Vec4, z: &Vec4) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        if u[a] == 0.0 {
            continue;
        }
        for b in 0..4 {
            if v[b] == 0.0 {
                continue;
            }
            for c in 0..4 {
                if w[c] == 0.0 {
                    continue;
                }
                for d in 0..4 {
                    s += riem[a][b][c][d] * u[a] * v[b] * w[c] * z[d];
                }
            }
        }
    }
    s
}

pub(crate) fn riemann_profile(profile: &WarpedProfile, r: f64, theta: f64) -> Tensor4<4> {
    let gd = diag_metric(profile, r, theta);
    let (g, gr, gt) = warped_christoffel(profile, r, theta);
    riemann_from_christoffel::<4>(&gd, &g, &gr, &gt, R, TH)
}

/// Exact spacetime curvature from closed-form Christoffel symbols.
pub fn riemann_at(metric: &StaticMetric, p: &SpacetimePoint) -> Result<CurvatureAtPoint> {
    check_point(metric, p)?;
    let profile = WarpedProfile::catalog(metric, p.r);
    let gd = diag_metric(&profile, p.r, p.theta);
    let riemann = riemann_profile(&profile, p.r, p.theta);
    let (ricci, scalar) = ricci_from_riemann(&gd, &riemann);
    let slice = slice_curvature_at(metric, p.r, p.theta)?;
    Ok(CurvatureAtPoint { riemann, ricci, scalar, slice_riemann: slice.riemann })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SliceCurvature {
    pub riemann: Tensor4<3>,
    pub ricci: [[f64; 3]; 3],
    pub scalar: f64,
    /// Diagonal of the slice metric `(1/f^2, r^2, r^2 sin^2 theta)`.
    pub metric: [f64; 3],
}

/// Curvature of the slice metric `dr^2/f^2 + r^2 dS^2`.
pub fn slice_curvature_at(metric: &StaticMetric, r: f64, theta: f64) -> Result<SliceCurvature> {
    metric.check_radius(r)?;
    if !(theta > 0.0 && theta < std::f64::consts::PI) {
        return Err(QlmError::Pole { theta });
    }
    let w = metric.warp(r);
    let s = theta.sin();
    let gd = [1.0 / w.f2, r * r, r * r * s * s];
    let (g, gr, gt) = slice_christoffel([w.f2, w.df2, w.ddf2], r, theta);
    let riemann = riemann_from_christoffel::<3>(&gd, &g, &gr, &gt, 0, 1);
    let (ricci, scalar) = ricci_from_riemann(&gd, &riemann);
    Ok(SliceCurvature { riemann, ricci, scalar, metric: gd })
}

/// Curvature of the ultrastatic spacetime `-dt^2 + g_slice` built on the
/// slice of `metric`.
pub fn product_riemann_at(metric: &StaticMetric, p: &SpacetimePoint) -> Result<Tensor4<4>> {
    check_point(metric, p)?;
    Ok(riemann_profile(&WarpedProfile::product(metric, p.r), p.r, p.theta))
}

pub fn inner(gdiag: &Vec4, u: &Vec4, v: &Vec4) -> f64 {
    gdiag[0] * u[0] * v[0] + gdiag[1] * u[1] * v[1] + gdiag[2] * u[2] * v[2] + gdiag[3] * u[3] * v[3]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<StaticMetric> {
        vec![
            StaticMetric::minkowski(),
            StaticMetric::anti_de_sitter(),
            StaticMetric::schwarzschild(1.0),
            StaticMetric::ads_schwarzschild(1.0),
        ]
    }

    #[test]
    fn minkowski_metric_at_r2() {
        let p = SpacetimePoint::new(0.3, 2.0, 0.7, 1.0);
        let (g, gi) = metric_at(&StaticMetric::minkowski(), &p).unwrap();
        let s2 = 0.7f64.sin().powi(2);
        assert_eq!(g[0][0], -1.0);
        assert_eq!(g[1][1], 1.0);
        assert_eq!(g[2][2], 4.0);
        assert!((g[3][3] - 4.0 * s2).abs() < 1e-15);
        for i in 0..4 {
            assert!((g[i][i] * gi[i][i] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn schwarzschild_gtt_and_horizon_error() {
        let m = StaticMetric::schwarzschild(1.0);
        let (g, _) = metric_at(&m, &SpacetimePoint::new(0.0, 4.0, 1.0, 0.0)).unwrap();
        assert!((g[0][0] + 0.5).abs() < 1e-15);
        let err = metric_at(&m, &SpacetimePoint::new(0.0, 1.5, 1.0, 0.0)).unwrap_err();
        match err {
            QlmError::Domain { bound, .. } => assert!((bound - 2.0).abs() < 1e-5),
            e => panic!("unexpected {e:?}"),
        }
        assert!(m.check_radius(2.0 + 0.5e-6).is_err());
    }

    #[test]
    fn ads_schwarzschild_horizon_is_root() {
        let m = StaticMetric::ads_schwarzschild(1.0);
        let h = m.horizon();
        assert!((h * h * h + h - 2.0).abs() < 1e-12);
        assert!(m.warp(h + 1e-3).f2 > 0.0);
    }

    #[test]
    fn warp_derivatives_match_finite_differences() {
        for m in catalog() {
            for &r in &[2.5, 3.7, 9.0] {
                let h = 1e-4 * r;
                let w = m.warp(r);
                let fp = m.warp(r + h).f2;
                let fm = m.warp(r - h).f2;
                let d1 = (fp - fm) / (2.0 * h);
                let d2 = (fp - 2.0 * w.f2 + fm) / (h * h);
                assert!((d1 - w.df2).abs() <= 1e-8 * w.df2.abs().max(1.0));
                assert!((d2 - w.ddf2).abs() <= 1e-5 * w.ddf2.abs().max(1.0));
            }
        }
    }

    #[test]
    fn minkowski_is_flat() {
        let c = riemann_at(&StaticMetric::minkowski(), &SpacetimePoint::new(0.0, 3.0, 1.1, 0.2)).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    for d in 0..4 {
                        assert!(c.riemann[a][b][cc][d].abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn schwarzschild_kretschmann() {
        let m = StaticMetric::schwarzschild(1.3);
        let p = SpacetimePoint::new(0.0, 5.0, 0.9, 0.0);
        let c = riemann_at(&m, &p).unwrap();
        let gd = metric_diag(&m, p.r, p.theta);
        let k = c.kretschmann(&gd);
        let expected = 48.0 * 1.3f64.powi(2) / 5.0f64.powi(6);
        assert!((k - expected).abs() < 1e-12 * expected.max(1.0), "{k} vs {expected}");
    }

    #[test]
    fn ads_sectional_curvature_is_minus_one() {
        let m = StaticMetric::anti_de_sitter();
        let p = SpacetimePoint::new(0.0, 1.7, 1.2, 0.0);
        let c = riemann_at(&m, &p).unwrap();
        let gd = metric_diag(&m, p.r, p.theta);
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    let k = c.riemann[a][b][a][b] / (gd[a] * gd[b]);
                    assert!((k + 1.0).abs() < 1e-12, "plane {a}{b}: {k}");
                }
            }
        }
    }

    #[test]
    fn schwarzschild_slice_scalar_flat() {
        let s = slice_curvature_at(&StaticMetric::schwarzschild(1.0), 4.0, 1.0).unwrap();
        assert!(s.scalar.abs() < 1e-13);
        // radial Ricci of the time-symmetric slice is -2M/r^3
        let ric_nn = s.ricci[0][0] / s.metric[0];
        assert!((ric_nn + 2.0 / 64.0).abs() < 1e-13);
    }

    #[test]
    fn hyperbolic_slice_space_form() {
        let s = slice_curvature_at(&StaticMetric::anti_de_sitter(), 2.2, 0.8).unwrap();
        let g = s.metric;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let gik = if i == k { g[i] } else { 0.0 };
                        let gjl = if j == l { g[j] } else { 0.0 };
                        let gil = if i == l { g[i] } else { 0.0 };
                        let gjk = if j == k { g[j] } else { 0.0 };
                        let expect = -(gik * gjl - gil * gjk);
                        assert!((s.riemann[i][j][k][l] - expect).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
