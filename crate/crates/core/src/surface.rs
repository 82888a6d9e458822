//! Extrinsic and intrinsic geometry of axisymmetric spacelike 2-surfaces in a
//! catalog spacetime, in adapted normal frames.
//!
//! Sign conventions: `h_n(a, b) = <D_a n, X_b>`, so the outward unit normal of a
//! round sphere has `tr h3 = 2/R`. The mean curvature vector is
//! `H = -(tr h3) e3 + (tr h4) e4` (it points inward on round spheres), the
//! connection form is `alpha(.) = <D_(.) e3, e4>`, and `J = -(tr h4) e3 + (tr h3) e4`
//! is the future-directed reflection of `H` through the normal light cone.
//! Every quantity is axisymmetric, so it is computed once per grid ring.

use crate::chart::{ChartJet, SurfaceChart};
use crate::cky::PointFrame;
use crate::error::{QlmError, Result};
use crate::jet::Jet;
use crate::quadrature::{integrate_rings, Grid, ScalarField};
use crate::spacetime::{
    contract4, inner, metric_diag, riemann_profile, warped_christoffel, Christoffel, StaticMetric, Vec4, WarpedProfile,
    PH, T,
};
use serde::{Deserialize, Serialize};

/// Minimum eigenvalue of the induced metric accepted as spacelike.
pub const SPACELIKE_MIN: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameChoice {
    SliceAdapted,
    MeanCurvature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameKind {
    Canonical,
    MeanCurvature,
    Matched,
    Boosted,
}

/// Normal frame on one ring, with the `theta` derivatives of the coordinate
/// components of `e3` and `e4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRing {
    pub frame: PointFrame,
    pub de3: Vec4,
    pub de4: Vec4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    pub kind: FrameKind,
    pub dims: (usize, usize),
    pub rings: Vec<FrameRing>,
}

impl AdaptedFrame {
    /// Frame at a grid node (frames are constant along each ring in
    /// coordinate components).
    pub fn at_node(&self, node: usize) -> &PointFrame {
        &self.rings[node / self.dims.1].frame
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingGeometry {
    pub theta: f64,
    pub chart: ChartJet,
    pub gdiag: Vec4,
    /// `E = <X_theta, X_theta>` and its `theta` derivative.
    pub e_coef: [f64; 2],
    /// `G = <X_phi, X_phi>` and its `theta` derivative.
    pub g_coef: [f64; 2],
    /// Induced metric in `(theta, phi)` coordinates.
    pub sigma: [[f64; 2]; 2],
    /// Area element relative to the unit round sphere.
    pub area_element: f64,
    /// Second fundamental forms on the orthonormal tangents `e1, e2`.
    pub h3: [[f64; 2]; 2],
    pub h4: [[f64; 2]; 2],
    /// `alpha(e1), alpha(e2)`.
    pub alpha: [f64; 2],
    /// `alpha(X_theta)`.
    pub zeta_theta: f64,
    pub tr_h3: f64,
    pub tr_h4: f64,
    pub mean_curv_h: Vec4,
    pub dual_j: Vec4,
    pub gauss_k: f64,
}

impl RingGeometry {
    pub fn h_norm2(&self) -> f64 {
        self.tr_h3 * self.tr_h3 - self.tr_h4 * self.tr_h4
    }

    pub fn r(&self) -> f64 {
        self.chart.r[0]
    }

    pub fn det_h3(&self) -> f64 {
        det2(&self.h3)
    }

    pub fn det_h4(&self) -> f64 {
        det2(&self.h4)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGeometry {
    pub metric: StaticMetric,
    pub dims: (usize, usize),
    pub frame: AdaptedFrame,
    pub rings: Vec<RingGeometry>,
}

impl SurfaceGeometry {
    pub fn field(&self, grid: &Grid, f: impl Fn(&RingGeometry) -> f64) -> ScalarField {
        let v: Vec<f64> = self.rings.iter().map(f).collect();
        ScalarField::from_rings(grid, &v)
    }

    pub fn area_field(&self, grid: &Grid) -> ScalarField {
        self.field(grid, |g| g.area_element)
    }

    /// Surface integral of a per-ring quantity.
    pub fn integrate(&self, grid: &Grid, values: &[f64]) -> f64 {
        let area: Vec<f64> = self.rings.iter().map(|g| g.area_element).collect();
        integrate_rings(grid, values, &area)
    }

    pub fn integrate_with(&self, grid: &Grid, f: impl Fn(&RingGeometry) -> f64) -> f64 {
        let v: Vec<f64> = self.rings.iter().map(f).collect();
        self.integrate(grid, &v)
    }

    pub fn area(&self, grid: &Grid) -> f64 {
        self.integrate_with(grid, |_| 1.0)
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.dims != grid.dims() {
            return Err(QlmError::GridMismatch(format!(
                "geometry built on {:?}, grid is {:?}",
                self.dims,
                grid.dims()
            )));
        }
        Ok(())
    }

    /// Largest nodewise difference between the induced metrics of two
    /// parametrized surfaces.
    pub fn sigma_residual(&self, other: &SurfaceGeometry) -> f64 {
        self.rings
            .iter()
            .zip(&other.rings)
            .map(|(a, b)| {
                let de = (a.sigma[0][0] - b.sigma[0][0]).abs() / a.sigma[0][0].abs().max(1.0);
                let dg = (a.sigma[1][1] - b.sigma[1][1]).abs() / a.sigma[1][1].abs().max(1.0);
                de.max(dg)
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn det2(m: &[[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn gamma_apply(g: &Christoffel<4>, u: &Vec4, v: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for (mu, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for a in 0..4 {
            if u[a] == 0.0 {
                continue;
            }
            for b in 0..4 {
                s += g[mu][a][b] * u[a] * v[b];
            }
        }
        *o = s;
    }
    out
}

fn add(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn lin(ca: f64, a: &Vec4, cb: f64, b: &Vec4) -> Vec4 {
    [ca * a[0] + cb * b[0], ca * a[1] + cb * b[1], ca * a[2] + cb * b[2], ca * a[3] + cb * b[3]]
}

/// Jets (in `theta`) of `F(r)`, `E` and the chart quantities.
struct ChartJets {
    f: Jet,
    t1: Jet,
    r: Jet,
    r1: Jet,
    psi: Jet,
    psi1: Jet,
    e: Jet,
}

fn chart_jets(metric: &StaticMetric, c: &ChartJet) -> ChartJets {
    let w = metric.warp(c.r[0]);
    let r = Jet::new(c.r[0], c.r[1]);
    let f = r.chain(w.f2, w.df2);
    let t1 = Jet::new(c.t[1], c.t[2]);
    let r1 = Jet::new(c.r[1], c.r[2]);
    let psi = Jet::new(c.psi[0], c.psi[1]);
    let psi1 = Jet::new(c.psi[1], c.psi[2]);
    let e = f * t1 * t1 * -1.0 + r1 * r1 / f + r * r * psi1 * psi1;
    ChartJets { f, t1, r, r1, psi, psi1, e }
}

/// The canonical gauge on one ring: `e3` is the unit normal orthogonal to the
/// static Killing field, `e4` the future unit normal orthogonal to `e3`.
fn canonical_ring(metric: &StaticMetric, c: &ChartJet, node: usize, theta: f64) -> Result<FrameRing> {
    let j = chart_jets(metric, c);
    let g = (j.r * j.psi.sin()).powi(2);
    if j.e.v <= SPACELIKE_MIN || g.v <= SPACELIKE_MIN {
        return Err(QlmError::NotSpacelike { node, theta, min_eig: j.e.v.min(g.v) });
    }
    let n3 = [Jet::constant(0.0), j.f * j.psi1, (j.r1 / (j.r * j.r)) * -1.0, Jet::constant(0.0)];
    let norm3 = (j.f * j.psi1 * j.psi1 + j.r1 * j.r1 / (j.r * j.r)).sqrt();
    if !(norm3.v > 1e-12) {
        return Err(QlmError::Gauge { node, theta, detail: "degenerate projection along the Killing field".into() });
    }
    let k = j.f * j.t1 / j.e;
    let u = [Jet::constant(1.0) + k * j.t1, k * j.r1, k * j.psi1, Jet::constant(0.0)];
    let norm4 = (j.f + j.f * k * j.t1).sqrt();
    let e3j: [Jet; 4] = std::array::from_fn(|i| n3[i] / norm3);
    let e4j: [Jet; 4] = std::array::from_fn(|i| u[i] / norm4);
    let xt = [c.t[1], c.r[1], c.psi[1], 0.0];
    let se = j.e.v.sqrt();
    let e1 = xt.map(|x| x / se);
    let e2 = [0.0, 0.0, 0.0, 1.0 / g.v.sqrt()];
    Ok(FrameRing {
        frame: PointFrame { e: [e1, e2, e3j.map(|x| x.v), e4j.map(|x| x.v)] },
        de3: e3j.map(|x| x.d),
        de4: e4j.map(|x| x.d),
    })
}

/// Geometry of one ring in a given normal frame.
fn ring_geometry(metric: &StaticMetric, c: &ChartJet, theta: f64, fr: &FrameRing) -> RingGeometry {
    let (r, psi) = (c.r[0], c.psi[0]);
    let gd = metric_diag(metric, r, psi);
    let (gam, _, _) = warped_christoffel(&WarpedProfile::catalog(metric, r), r, psi);
    let j = chart_jets(metric, c);
    let xt = [c.t[1], c.r[1], c.psi[1], 0.0];
    let xp = [0.0, 0.0, 0.0, 1.0];
    let acc_tt = add(&[c.t[2], c.r[2], c.psi[2], 0.0], &gamma_apply(&gam, &xt, &xt));
    let acc_pp = gamma_apply(&gam, &xp, &xp);
    let [_, _, e3, e4] = &fr.frame.e;

    let s = j.r * j.psi.sin();
    let e_coef = [j.e.v, j.e.d];
    let g_coef = [s.v * s.v, 2.0 * s.v * s.d];
    let (ev, gv) = (e_coef[0], g_coef[0]);

    let sff =
        |n: &Vec4| -> [[f64; 2]; 2] { [[-inner(&gd, &acc_tt, n) / ev, 0.0], [0.0, -inner(&gd, &acc_pp, n) / gv]] };
    let h3 = sff(e3);
    let h4 = sff(e4);
    let zeta_theta = inner(&gd, &add(&fr.de3, &gamma_apply(&gam, &xt, e3)), e4);
    let tr_h3 = h3[0][0] + h3[1][1];
    let tr_h4 = h4[0][0] + h4[1][1];

    // Gauss curvature of E dtheta^2 + s^2 dphi^2
    let ds2 = c.r[2] * psi.sin() + 2.0 * c.r[1] * c.psi[1] * psi.cos() - r * psi.sin() * c.psi[1] * c.psi[1]
        + r * psi.cos() * c.psi[2];
    let gauss_k = -ds2 / (ev * s.v) + s.d * e_coef[1] / (2.0 * ev * ev * s.v);

    RingGeometry {
        theta,
        chart: *c,
        gdiag: gd,
        e_coef,
        g_coef,
        sigma: [[ev, 0.0], [0.0, gv]],
        area_element: (ev * gv).sqrt() / theta.sin(),
        h3,
        h4,
        alpha: [zeta_theta / ev.sqrt(), 0.0],
        zeta_theta,
        tr_h3,
        tr_h4,
        mean_curv_h: lin(-tr_h3, e3, tr_h4, e4),
        dual_j: lin(-tr_h4, e3, tr_h3, e4),
        gauss_k,
    }
}

fn assemble(metric: &StaticMetric, jets: &[ChartJet], grid: &Grid, frame: AdaptedFrame) -> SurfaceGeometry {
    let rings =
        jets.iter().zip(&grid.theta).zip(&frame.rings).map(|((c, &th), fr)| ring_geometry(metric, c, th, fr)).collect();
    SurfaceGeometry { metric: *metric, dims: grid.dims(), frame, rings }
}

fn chart_jets_checked(metric: &StaticMetric, chart: &SurfaceChart, grid: &Grid) -> Result<Vec<ChartJet>> {
    if chart.metric != *metric {
        return Err(QlmError::Config(format!(
            "chart belongs to {} but geometry requested in {}",
            chart.metric.name(),
            metric.name()
        )));
    }
    chart.jets(grid)
}

/// The canonical reference gauge `{e3, e4}` (equal to the slice-adapted frame
/// for charts lying in a `t = const` slice).
pub fn canonical_frame(
    metric: &StaticMetric,
    chart: &SurfaceChart,
    grid: &Grid,
) -> Result<(AdaptedFrame, SurfaceGeometry)> {
    let jets = chart_jets_checked(metric, chart, grid)?;
    let rings = jets
        .iter()
        .zip(&grid.theta)
        .enumerate()
        .map(|(i, (c, &th))| canonical_ring(metric, c, i * grid.n_phi, th))
        .collect::<Result<Vec<_>>>()?;
    let frame = AdaptedFrame { kind: FrameKind::Canonical, dims: grid.dims(), rings };
    let geom = assemble(metric, &jets, grid, frame.clone());
    Ok((frame, geom))
}

pub fn build_geometry(
    metric: &StaticMetric,
    chart: &SurfaceChart,
    grid: &Grid,
    choice: FrameChoice,
) -> Result<(AdaptedFrame, SurfaceGeometry)> {
    let (frame, geom) = canonical_frame(metric, chart, grid)?;
    match choice {
        FrameChoice::SliceAdapted => Ok((frame, geom)),
        FrameChoice::MeanCurvature => mean_curvature_frame(&geom, grid),
    }
}

/// Rapidity of the mean-curvature frame relative to the frame of `geom`,
/// per ring.
fn mean_curvature_rapidity(geom: &SurfaceGeometry, n_phi: usize) -> Result<Vec<f64>> {
    let mut worst: Option<(usize, f64)> = None;
    for (i, g) in geom.rings.iter().enumerate() {
        let h2 = g.h_norm2();
        if !(h2 > SPACELIKE_MIN && g.tr_h3 > 0.0) && worst.is_none_or(|(_, w)| h2 < w) {
            worst = Some((i, h2));
        }
    }
    if let Some((i, h2)) = worst {
        return Err(QlmError::Gauge {
            node: i * n_phi,
            theta: geom.rings[i].theta,
            detail: format!(
                "mean curvature vector is not outward spacelike: <H,H> = {h2:e}, tr h3 = {:e}",
                geom.rings[i].tr_h3
            ),
        });
    }
    Ok(geom.rings.iter().map(|g| -(g.tr_h4 / g.tr_h3).atanh()).collect())
}

/// Frame `e3 = -H/|H|`, `e4 = J/|H|`.
pub fn mean_curvature_frame(geom: &SurfaceGeometry, grid: &Grid) -> Result<(AdaptedFrame, SurfaceGeometry)> {
    let s = mean_curvature_rapidity(geom, grid.n_phi)?;
    let (mut frame, mut g) = boost(geom, grid, &s)?;
    frame.kind = FrameKind::MeanCurvature;
    g.frame.kind = FrameKind::MeanCurvature;
    Ok((frame, g))
}

/// Nodewise hyperbolic rotation `e3 -> cosh s e3 + sinh s e4`,
/// `e4 -> sinh s e3 + cosh s e4` of the frame of `geom` by per-ring
/// rapidities `s`, followed by recomputation of the geometry.
pub fn boost(geom: &SurfaceGeometry, grid: &Grid, s: &[f64]) -> Result<(AdaptedFrame, SurfaceGeometry)> {
    geom.check_grid(grid)?;
    if s.len() != grid.n_theta {
        return Err(QlmError::GridMismatch(format!("{} rapidities for {} rings", s.len(), grid.n_theta)));
    }
    let ds = grid.diff_theta(s);
    let rings = geom
        .frame
        .rings
        .iter()
        .zip(s.iter().zip(&ds))
        .map(|(fr, (&s, &ds))| {
            let (ch, sh) = (s.cosh(), s.sinh());
            let [e1, e2, e3, e4] = fr.frame.e;
            let n3 = lin(ch, &e3, sh, &e4);
            let n4 = lin(sh, &e3, ch, &e4);
            let d3 = add(&lin(ds, &n4, ch, &fr.de3), &lin(sh, &fr.de4, 0.0, &e4));
            let d4 = add(&lin(ds, &n3, sh, &fr.de3), &lin(ch, &fr.de4, 0.0, &e4));
            FrameRing { frame: PointFrame { e: [e1, e2, n3, n4] }, de3: d3, de4: d4 }
        })
        .collect();
    let frame = AdaptedFrame { kind: FrameKind::Boosted, dims: grid.dims(), rings };
    let jets: Vec<ChartJet> = geom.rings.iter().map(|g| g.chart).collect();
    let g = assemble(&geom.metric, &jets, grid, frame.clone());
    Ok((frame, g))
}

/// The unique frame with `<H, e4> = target`, expressed as a boost of the
/// frame of `geom`. Requires `H` spacelike; then every finite target is
/// attainable.
pub fn matched_frame_rings(
    geom: &SurfaceGeometry,
    grid: &Grid,
    target: &[f64],
) -> Result<(AdaptedFrame, SurfaceGeometry)> {
    let s0 = mean_curvature_rapidity(geom, grid.n_phi)?;
    if target.len() != grid.n_theta {
        return Err(QlmError::GridMismatch(format!("{} targets for {} rings", target.len(), grid.n_theta)));
    }
    let mut s = Vec::with_capacity(target.len());
    for (i, (g, (&tg, &s0))) in geom.rings.iter().zip(target.iter().zip(&s0)).enumerate() {
        if !tg.is_finite() {
            return Err(QlmError::Gauge {
                node: i * grid.n_phi,
                theta: g.theta,
                detail: format!("non-finite matching target {tg}"),
            });
        }
        // <H, e4(s)> = -|H| sinh(s - s0) in terms of the mean-curvature rapidity
        s.push((-tg / g.h_norm2().sqrt()).asinh() + s0);
    }
    let (mut frame, mut g) = boost(geom, grid, &s)?;
    frame.kind = FrameKind::Matched;
    g.frame.kind = FrameKind::Matched;
    Ok((frame, g))
}

/// `matched_frame_rings` for an axisymmetric target field.
pub fn matched_frame(
    geom: &SurfaceGeometry,
    grid: &Grid,
    target: &ScalarField,
) -> Result<(AdaptedFrame, SurfaceGeometry)> {
    if target.dims() != grid.dims() {
        return Err(QlmError::GridMismatch("target field does not live on the grid".into()));
    }
    let rings = axisymmetric_rings(grid, target)?;
    matched_frame_rings(geom, grid, &rings)
}

/// Per-ring values of a field that must be constant along each ring.
pub fn axisymmetric_rings(grid: &Grid, field: &ScalarField) -> Result<Vec<f64>> {
    let n = grid.n_phi;
    let mut out = Vec::with_capacity(grid.n_theta);
    for i in 0..grid.n_theta {
        let ring = &field.values[i * n..(i + 1) * n];
        let v = ring[0];
        if ring.iter().any(|w| (w - v).abs() > 1e-12 * v.abs().max(1.0)) {
            return Err(QlmError::GridMismatch(format!("field is not axisymmetric on ring {i}")));
        }
        out.push(v);
    }
    Ok(out)
}

/// `<H, e4>` of a geometry per ring.
pub fn h_dot_e4(geom: &SurfaceGeometry) -> Vec<f64> {
    geom.rings.iter().map(|g| -g.tr_h4).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussCodazzi {
    pub gauss: ScalarField,
    pub codazzi3: ScalarField,
    pub codazzi4: ScalarField,
}

impl GaussCodazzi {
    pub fn max(&self) -> f64 {
        self.gauss.max_abs().max(self.codazzi3.max_abs()).max(self.codazzi4.max_abs())
    }
}

/// Nodewise residuals of the Gauss equation `K = R_1212 + det h3 - det h4`
/// and of the Codazzi equations
/// `nabla_a h_bc - nabla_b h_ac = R_abcn + alpha_b h'_ac - alpha_a h'_bc`
/// for `(n, h') = (e3, h4)` and `(e4, h3)`, in orthonormal components.
pub fn gauss_codazzi_residual(geom: &SurfaceGeometry, grid: &Grid) -> Result<GaussCodazzi> {
    geom.check_grid(grid)?;
    let metric = &geom.metric;
    let h3pp: Vec<f64> = geom.rings.iter().map(|g| g.h3[1][1] * g.g_coef[0]).collect();
    let h4pp: Vec<f64> = geom.rings.iter().map(|g| g.h4[1][1] * g.g_coef[0]).collect();
    let d3 = grid.diff_theta(&h3pp);
    let d4 = grid.diff_theta(&h4pp);
    let mut gauss = Vec::new();
    let mut c3 = Vec::new();
    let mut c4 = Vec::new();
    for (i, g) in geom.rings.iter().enumerate() {
        let (r, psi) = (g.chart.r[0], g.chart.psi[0]);
        let riem = riemann_profile(&WarpedProfile::catalog(metric, r), r, psi);
        let [e1, e2, e3, e4] = &geom.frame.rings[i].frame.e;
        let r1212 = contract4(&riem, e1, e2, e1, e2);
        gauss.push((g.gauss_k - (r1212 + g.det_h3() - g.det_h4())).abs());

        let (ev, gv) = (g.e_coef[0], g.g_coef[0]);
        let xt = [g.chart.t[1], g.chart.r[1], g.chart.psi[1], 0.0];
        let xp = [0.0, 0.0, 0.0, 1.0];
        let gam_ppt = g.g_coef[1] / (2.0 * gv);
        let gam_tpp = -g.g_coef[1] / (2.0 * ev);
        let scale = ev.sqrt() * gv;
        let codazzi = |dh: f64, h: &[[f64; 2]; 2], other: &[[f64; 2]; 2], n: &Vec4| {
            let hpp = h[1][1] * gv;
            let htt = h[0][0] * ev;
            let lhs = dh - gam_ppt * hpp + gam_tpp * htt;
            let rhs = contract4(&riem, &xt, &xp, &xp, n) - g.zeta_theta * other[1][1] * gv;
            (lhs - rhs).abs() / scale
        };
        c3.push(codazzi(d3[i], &g.h3, &g.h4, e3));
        c4.push(codazzi(d4[i], &g.h4, &g.h3, e4));
    }
    Ok(GaussCodazzi {
        gauss: ScalarField::from_rings(grid, &gauss),
        codazzi3: ScalarField::from_rings(grid, &c3),
        codazzi4: ScalarField::from_rings(grid, &c4),
    })
}

/// Largest orthonormality defect of a frame together with the largest
/// tangency defect of `e3, e4` against the chart tangents.
pub fn frame_residual(geom: &SurfaceGeometry) -> f64 {
    let mut worst = 0.0f64;
    for (g, fr) in geom.rings.iter().zip(&geom.frame.rings) {
        worst = worst.max(crate::cky::frame_orthonormality_residual(&g.gdiag, &fr.frame));
        let xt = [g.chart.t[1], g.chart.r[1], g.chart.psi[1], 0.0];
        for n in &fr.frame.e[2..] {
            worst = worst.max(inner(&g.gdiag, &xt, n).abs() / g.e_coef[0].sqrt());
            worst = worst.max(n[PH].abs());
        }
        if fr.frame.e[3][T] <= 0.0 {
            worst = worst.max(f64::INFINITY);
        }
    }
    worst
}

/// `<K, e>` for the static Killing field `K = d/dt`.
pub fn killing_dot(g: &RingGeometry, e: &Vec4) -> f64 {
    g.gdiag[T] * e[T]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::CosSeries;
    use crate::quadrature::make_grid;

    fn sphere(m: StaticMetric, r: f64) -> SurfaceChart {
        SurfaceChart::coordinate_sphere(m, r).unwrap()
    }

    #[test]
    fn round_sphere_minkowski() {
        let grid = make_grid(16, 32).unwrap();
        let m = StaticMetric::minkowski();
        let (_, g) = build_geometry(&m, &sphere(m, 3.0), &grid, FrameChoice::SliceAdapted).unwrap();
        for r in &g.rings {
            assert!((r.tr_h3 - 2.0 / 3.0).abs() < 1e-14);
            assert!(r.tr_h4.abs() < 1e-14 && r.zeta_theta.abs() < 1e-14);
            assert!((r.gauss_k - 1.0 / 9.0).abs() < 1e-14);
        }
        assert!((g.area(&grid) - 36.0 * std::f64::consts::PI).abs() < 1e-10);
        assert!(frame_residual(&g) < 1e-12);
    }

    #[test]
    fn schwarzschild_and_ads_spheres() {
        let grid = make_grid(8, 16).unwrap();
        let m = StaticMetric::schwarzschild(1.0);
        let (_, g) = build_geometry(&m, &sphere(m, 5.0), &grid, FrameChoice::SliceAdapted).unwrap();
        let want = 0.4 * (1.0f64 - 0.4).sqrt();
        assert!(g.rings.iter().all(|r| (r.tr_h3 - want).abs() < 1e-14 && (r.gauss_k - 0.04).abs() < 1e-14));
        let a = StaticMetric::anti_de_sitter();
        let (_, g) = build_geometry(&a, &sphere(a, 2.0), &grid, FrameChoice::SliceAdapted).unwrap();
        assert!(g.rings.iter().all(|r| (r.tr_h3 - 5f64.sqrt()).abs() < 1e-14));
        let gc = gauss_codazzi_residual(&g, &grid).unwrap();
        assert!(gc.max() < 1e-12);
        assert!(g.rings.iter().all(|r| (r.gauss_k - (-1.0 + r.det_h3())).abs() < 1e-12));
    }

    #[test]
    fn mean_curvature_frame_of_graph() {
        let grid = make_grid(24, 16).unwrap();
        let m = StaticMetric::schwarzschild(1.0);
        let chart = SurfaceChart::graph(m, CosSeries(vec![6.0, 0.0, 0.4]), CosSeries(vec![0.0, 0.3])).unwrap();
        let (_, g) = build_geometry(&m, &chart, &grid, FrameChoice::MeanCurvature).unwrap();
        assert!(frame_residual(&g) < 1e-12);
        for r in &g.rings {
            assert!(r.tr_h4.abs() < 1e-13);
            let h = r.mean_curv_h;
            let j = r.dual_j;
            assert!(inner(&r.gdiag, &h, &j).abs() < 1e-13);
            assert!((inner(&r.gdiag, &j, &j) + inner(&r.gdiag, &h, &h)).abs() < 1e-13);
            assert!(j[T] > 0.0);
        }
    }

    #[test]
    fn matched_frame_reproduces_target() {
        let grid = make_grid(24, 16).unwrap();
        let m = StaticMetric::minkowski();
        let chart = SurfaceChart::graph(m, CosSeries(vec![2.0]), CosSeries(vec![0.0, 0.2])).unwrap();
        let (_, g) = canonical_frame(&m, &chart, &grid).unwrap();
        let target: Vec<f64> = g.rings.iter().map(|r| 0.1 * r.theta.cos()).collect();
        let (_, mg) = matched_frame_rings(&g, &grid, &target).unwrap();
        for (r, t) in mg.rings.iter().zip(&target) {
            assert!((-r.tr_h4 - t).abs() < 1e-12);
        }
        // fixed point: own <H, e4>
        let own = h_dot_e4(&g);
        let (f2, _) = matched_frame_rings(&g, &grid, &own).unwrap();
        for (a, b) in f2.rings.iter().zip(&g.frame.rings) {
            for k in 0..4 {
                for c in 0..4 {
                    assert!((a.frame.e[k][c] - b.frame.e[k][c]).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gauss_codazzi_on_schwarzschild_graph() {
        let m = StaticMetric::schwarzschild(1.0);
        let chart =
            SurfaceChart::graph(m, CosSeries(vec![6.0, 0.3, 0.5]), CosSeries(vec![0.0, 0.4, 0.0, 0.1])).unwrap();
        let mut prev = f64::INFINITY;
        for n in [16, 32, 64] {
            let grid = make_grid(n, 8).unwrap();
            for choice in [FrameChoice::SliceAdapted, FrameChoice::MeanCurvature] {
                let (_, g) = build_geometry(&m, &chart, &grid, choice).unwrap();
                let gc = gauss_codazzi_residual(&g, &grid).unwrap();
                assert!(gc.gauss.max_abs() < 1e-11, "{}", gc.gauss.max_abs());
                if choice == FrameChoice::SliceAdapted {
                    let c = gc.max();
                    assert!(c < prev.max(1e-9), "{n}: {c}");
                    prev = c;
                }
            }
        }
        assert!(prev < 1e-8, "{prev}");
    }

    #[test]
    fn boost_covariance() {
        let grid = make_grid(32, 8).unwrap();
        let m = StaticMetric::ads_schwarzschild(0.5);
        let chart = SurfaceChart::graph(m, CosSeries(vec![3.0, 0.0, 0.3]), CosSeries(vec![0.0, 0.2])).unwrap();
        let (_, g) = canonical_frame(&m, &chart, &grid).unwrap();
        let s: Vec<f64> = grid.x.iter().map(|x| 0.3 + 0.2 * x - 0.1 * x * x).collect();
        let ds = grid.diff_theta(&s);
        let (_, b) = boost(&g, &grid, &s).unwrap();
        assert!(frame_residual(&b) < 1e-12);
        for i in 0..grid.n_theta {
            let (c, sh) = (s[i].cosh(), s[i].sinh());
            let (a, r) = (&g.rings[i], &b.rings[i]);
            assert!((r.tr_h3 - (c * a.tr_h3 + sh * a.tr_h4)).abs() < 1e-12);
            assert!((r.tr_h4 - (sh * a.tr_h3 + c * a.tr_h4)).abs() < 1e-12);
            assert!((r.zeta_theta - (a.zeta_theta - ds[i])).abs() < 1e-12);
        }
    }
}
