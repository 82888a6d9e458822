//! Both sides of the (2,0) Minkowski formula and of the comparison
//! identities, integrated term by term.

use crate::cky::{contract_unchecked, QContractions};
use crate::error::{QlmError, Result};
use crate::quadrature::Grid;
use crate::spacetime::{contract4, riemann_profile, MetricKind, WarpedProfile};
use crate::surface::{killing_dot, RingGeometry, SurfaceGeometry};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

type Form2 = [[f64; 2]; 2];

/// Induced metrics of compared surfaces must agree to this level.
pub const SIGMA_TOLERANCE: f64 = 1e-8;
/// Largest accepted nodewise difference of the connection forms.
pub const ALPHA_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Integrals of the right-hand-side terms; they sum to `rhs`.
    pub terms: BTreeMap<String, f64>,
    /// Left-hand-side pieces and consistency measurements.
    pub diagnostics: BTreeMap<String, f64>,
    pub residual: f64,
    pub resolution: (usize, usize),
    /// Set when the ambient is flat and every curvature term vanishes identically.
    pub flat_reduction: bool,
}

impl IdentityReport {
    fn new(identity: &str, grid: &Grid, lhs_terms: &[(&str, f64)], terms: Vec<(&str, f64)>) -> Self {
        let lhs = lhs_terms.iter().map(|(_, v)| v).sum();
        let terms: BTreeMap<String, f64> = terms.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        let rhs = terms.values().sum();
        IdentityReport {
            identity: identity.to_string(),
            lhs,
            rhs,
            diagnostics: lhs_terms.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            terms,
            residual: (lhs - rhs).abs(),
            resolution: grid.dims(),
            flat_reduction: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Flat,
    #[serde(rename = "ads")]
    AdS,
    Schwarzschild,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Reference,
    Physical,
}

/// Ambient curvature projected on an adapted frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameCurvature {
    /// `R^{ab}_{a3}` for `b = 1, 2`.
    pub ric3: [f64; 2],
    /// `R^{ab}_{a4}`.
    pub ric4: [f64; 2],
    /// `R_{1243}`.
    pub r1243: f64,
    pub r1212: f64,
}

pub fn frame_curvature(geom: &SurfaceGeometry, ring: usize) -> FrameCurvature {
    let g = &geom.rings[ring];
    let (r, psi) = (g.chart.r[0], g.chart.psi[0]);
    let riem = riemann_profile(&WarpedProfile::catalog(&geom.metric, r), r, psi);
    let e = &geom.frame.rings[ring].frame.e;
    let mut out = FrameCurvature {
        r1243: contract4(&riem, &e[0], &e[1], &e[3], &e[2]),
        r1212: contract4(&riem, &e[0], &e[1], &e[0], &e[1]),
        ..Default::default()
    };
    for b in 0..2 {
        for a in 0..2 {
            out.ric3[b] += contract4(&riem, &e[a], &e[b], &e[a], &e[2]);
            out.ric4[b] += contract4(&riem, &e[a], &e[b], &e[a], &e[3]);
        }
    }
    out
}

fn q_of(geom: &SurfaceGeometry, ring: usize) -> QContractions {
    contract_unchecked(geom.rings[ring].r(), &geom.frame.rings[ring].frame)
}

fn dot2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> f64 {
    a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
}

fn matmul2(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// `<d/dt, e3>` and `<d/dt, e4>` on a ring.
fn killing_pair(geom: &SurfaceGeometry, ring: usize) -> (f64, f64) {
    let g = &geom.rings[ring];
    let e = &geom.frame.rings[ring].frame.e;
    (killing_dot(g, &e[2]), killing_dot(g, &e[3]))
}

struct Integrals<'a> {
    geom: &'a SurfaceGeometry,
    grid: &'a Grid,
}

impl Integrals<'_> {
    fn of(&self, f: impl Fn(usize, &RingGeometry) -> f64) -> f64 {
        let v: Vec<f64> = self.geom.rings.iter().enumerate().map(|(i, g)| f(i, g)).collect();
        self.geom.integrate(self.grid, &v)
    }
}

/// The (2,0) Minkowski formula
/// `-int <J, d/dt> = int 2(det h3 - det h4) Q34 + R^{ab}_{a3} Q_b4 - R^{ab}_{a4} Q_b3
///  + (R_{ab43} - (d alpha)_{ab}) Q_ab`.
pub fn minkowski_formula_20(geom: &SurfaceGeometry, grid: &Grid) -> Result<IdentityReport> {
    geom.check_grid(grid)?;
    let int = Integrals { geom, grid };
    let flat = geom.metric.is_flat();
    let curv: Vec<FrameCurvature> = (0..geom.rings.len())
        .map(|i| if flat { FrameCurvature::default() } else { frame_curvature(geom, i) })
        .collect();
    let q: Vec<QContractions> = (0..geom.rings.len()).map(|i| q_of(geom, i)).collect();

    let lhs_h3 = int.of(|i, g| -killing_pair(geom, i).1 * g.tr_h3);
    let lhs_h4 = int.of(|i, g| killing_pair(geom, i).0 * g.tr_h4);
    let det3 = int.of(|i, g| 2.0 * g.det_h3() * q[i].q34);
    let det4 = int.of(|i, g| -2.0 * g.det_h4() * q[i].q34);
    let curvature = int.of(|i, _| {
        let c = &curv[i];
        (0..2).map(|b| c.ric3[b] * q[i].qb4[b] - c.ric4[b] * q[i].qb3[b]).sum()
    });
    // alpha = zeta(theta) dtheta with zeta independent of phi, so d alpha = 0
    let normal = int.of(|i, _| 2.0 * curv[i].r1243 * q[i].qab[0][1]);

    let mut rep = IdentityReport::new(
        "minkowski-formula-20",
        grid,
        &[("lhs_h3_term", lhs_h3), ("lhs_h4_term", lhs_h4)],
        vec![
            ("det_h3_term", det3),
            ("det_h4_term", det4),
            ("curvature_term", curvature),
            ("normal_curvature_term", normal),
        ],
    );
    rep.flat_reduction = flat;
    Ok(rep)
}

fn check_pair(physical: &SurfaceGeometry, reference: &SurfaceGeometry, grid: &Grid) -> Result<(f64, f64)> {
    physical.check_grid(grid)?;
    reference.check_grid(grid)?;
    let sig = physical.sigma_residual(reference);
    if !(sig <= SIGMA_TOLERANCE) {
        return Err(QlmError::MetricMismatch { residual: sig, tolerance: SIGMA_TOLERANCE });
    }
    let alpha = alpha_matching_residual(physical, reference);
    if !(alpha <= ALPHA_TOLERANCE) {
        return Err(QlmError::GaugeMismatch { residual: alpha, tolerance: ALPHA_TOLERANCE });
    }
    Ok((sig, alpha))
}

/// Largest nodewise difference of `alpha(e1)` between two geometries.
pub fn alpha_matching_residual(a: &SurfaceGeometry, b: &SurfaceGeometry) -> f64 {
    a.rings.iter().zip(&b.rings).map(|(x, y)| (x.alpha[0] - y.alpha[0]).abs()).fold(0.0, f64::max)
}

fn check_variant(variant: Variant, reference: &SurfaceGeometry) -> Result<()> {
    let want = match variant {
        Variant::Flat => MetricKind::Minkowski,
        Variant::AdS => MetricKind::AntiDeSitter,
        Variant::Schwarzschild => MetricKind::Schwarzschild,
    };
    if reference.metric.kind != want {
        return Err(QlmError::Config(format!(
            "variant {variant:?} needs a {} reference, got {}",
            want.name(),
            reference.metric.name()
        )));
    }
    Ok(())
}

/// Comparison identity between a physical surface (primed) and its
/// isometric image in a reference spacetime (unprimed, carrying `Q`).
pub fn comparison_identity(
    physical: &SurfaceGeometry,
    reference: &SurfaceGeometry,
    variant: Variant,
    grid: &Grid,
) -> Result<IdentityReport> {
    check_variant(variant, reference)?;
    let (sig, alpha) = check_pair(physical, reference, grid)?;
    let int = Integrals { geom: reference, grid };
    let n = reference.rings.len();
    let q: Vec<QContractions> = (0..n).map(|i| q_of(reference, i)).collect();
    let cp: Vec<FrameCurvature> = (0..n).map(|i| frame_curvature(physical, i)).collect();
    let cr: Vec<FrameCurvature> = (0..n).map(|i| frame_curvature(reference, i)).collect();
    let p = &physical.rings;

    let lhs_h3 = int.of(|i, g| -killing_pair(reference, i).1 * (g.tr_h3 - p[i].tr_h3));
    let lhs_h4 = int.of(|i, g| killing_pair(reference, i).0 * (g.tr_h4 - p[i].tr_h4));
    let det_trace = int.of(|i, g| {
        let h = &p[i];
        (2.0 * g.det_h3() - 2.0 * g.det_h4() - g.tr_h3 * h.tr_h3 + dot2(&g.h3, &h.h3) + g.tr_h4 * h.tr_h4
            - dot2(&g.h4, &h.h4))
            * q[i].q34
    });
    let curv_block = |c: &dyn Fn(usize) -> FrameCurvature| {
        int.of(|i, _| {
            let c = c(i);
            (0..2).map(|b| c.ric4[b] * q[i].qb3[b] - c.ric3[b] * q[i].qb4[b]).sum()
        })
    };
    let physical_curv = curv_block(&|i| cp[i]);
    let reference_curv = curv_block(&|i| cr[i]);
    let curvature = match variant {
        Variant::Schwarzschild => physical_curv - reference_curv,
        Variant::Flat | Variant::AdS => physical_curv,
    };
    let qab = int.of(|i, g| {
        let h = &p[i];
        let a = matmul2(&g.h3, &g.h4);
        let b = matmul2(&g.h4, &g.h3);
        let c = matmul2(&h.h3, &g.h4);
        let d = matmul2(&h.h4, &g.h3);
        let mut s = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                s += ((a[x][y] - b[x][y]) - (c[x][y] - d[x][y])) * q[i].qab[x][y];
            }
        }
        s
    });
    let name = match variant {
        Variant::Flat => "comparison-flat",
        Variant::AdS => "comparison-ads",
        Variant::Schwarzschild => "comparison-schwarzschild",
    };
    let mut rep = IdentityReport::new(
        name,
        grid,
        &[("lhs_h3_term", lhs_h3), ("lhs_h4_term", lhs_h4)],
        vec![("det_trace_block", det_trace), ("curvature_block", curvature), ("qab_block", qab)],
    );
    rep.diagnostics.insert("alpha_matching_residual".into(), alpha);
    rep.diagnostics.insert("sigma_residual".into(), sig);
    rep.diagnostics.insert("reference_curvature_block".into(), reference_curv);
    rep.flat_reduction = physical.metric.is_flat() && reference.metric.is_flat();
    Ok(rep)
}

/// Integral over the surface of `nabla_a V^a` for the axisymmetric vector
/// field with orthonormal component `v1` along `e1`, evaluated spectrally
/// as `int d/dx (sqrt(G) v1) dx` in `x = cos theta`.
fn divergence_integral(geom: &SurfaceGeometry, grid: &Grid, v1: &[f64]) -> f64 {
    let u: Vec<f64> = geom.rings.iter().zip(v1).map(|(g, v)| g.g_coef[0].sqrt() * v).collect();
    let du = grid.diff_x(&u);
    2.0 * std::f64::consts::PI
        * crate::quadrature::pairwise_sum(&du.iter().zip(&grid.wx).map(|(d, w)| d * w).collect::<Vec<_>>())
}

/// One of the two integrated divergence identities whose difference is the
/// comparison identity, together with the integral of the underlying
/// divergence (which must vanish on a closed surface).
pub fn divergence_split_report(
    side: Side,
    physical: &SurfaceGeometry,
    reference: &SurfaceGeometry,
    variant: Variant,
    grid: &Grid,
) -> Result<IdentityReport> {
    check_variant(variant, reference)?;
    let (_, alpha) = check_pair(physical, reference, grid)?;
    let n = reference.rings.len();
    let q: Vec<QContractions> = (0..n).map(|i| q_of(reference, i)).collect();
    let p = &physical.rings;
    let int = Integrals { geom: reference, grid };
    let mut rep = match side {
        Side::Reference => {
            let mut rep = minkowski_formula_20(reference, grid)?;
            rep.identity = "divergence-reference".into();
            rep
        }
        Side::Physical => {
            let cp: Vec<FrameCurvature> = (0..n).map(|i| frame_curvature(physical, i)).collect();
            let lhs_h3 = int.of(|i, _| -killing_pair(reference, i).1 * p[i].tr_h3);
            let lhs_h4 = int.of(|i, _| killing_pair(reference, i).0 * p[i].tr_h4);
            let trace = int.of(|i, g| {
                let h = &p[i];
                (g.tr_h3 * h.tr_h3 - dot2(&g.h3, &h.h3) - g.tr_h4 * h.tr_h4 + dot2(&g.h4, &h.h4)) * q[i].q34
            });
            let curvature = int.of(|i, _| {
                let c = &cp[i];
                (0..2).map(|b| c.ric3[b] * q[i].qb4[b] - c.ric4[b] * q[i].qb3[b]).sum()
            });
            let qab = int.of(|i, g| {
                let h = &p[i];
                let a = matmul2(&g.h3, &h.h4);
                let b = matmul2(&g.h4, &h.h3);
                let mut s = 0.0;
                for x in 0..2 {
                    for y in 0..2 {
                        s += q[i].qab[x][y] * (a[y][x] - b[y][x]);
                    }
                }
                s
            });
            IdentityReport::new(
                "divergence-physical",
                grid,
                &[("lhs_h3_term", lhs_h3), ("lhs_h4_term", lhs_h4)],
                vec![("trace_block", trace), ("curvature_term", curvature), ("qab_block", qab)],
            )
        }
    };
    let (h3, h4): (Vec<Form2>, Vec<Form2>) = match side {
        Side::Reference => reference.rings.iter().map(|g| (g.h3, g.h4)).unzip(),
        Side::Physical => p.iter().map(|g| (g.h3, g.h4)).unzip(),
    };
    // V^1 = (tr h3 - h3_11) Q_14 - (tr h4 - h4_11) Q_13 - h3_12 Q_24 + h4_12 Q_23
    let v1: Vec<f64> = (0..n)
        .map(|i| {
            h3[i][1][1] * q[i].qb4[0] - h4[i][1][1] * q[i].qb3[0] - h3[i][0][1] * q[i].qb4[1]
                + h4[i][0][1] * q[i].qb3[1]
        })
        .collect();
    rep.diagnostics.insert("divergence_integral".into(), divergence_integral(reference, grid, &v1));
    rep.diagnostics.insert("alpha_matching_residual".into(), alpha);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{CosSeries, SurfaceChart};
    use crate::quadrature::make_grid;
    use crate::spacetime::StaticMetric;
    use crate::surface::{build_geometry, FrameChoice};
    use std::f64::consts::PI;

    fn geom(m: StaticMetric, chart: &SurfaceChart, grid: &Grid) -> SurfaceGeometry {
        build_geometry(&m, chart, grid, FrameChoice::SliceAdapted).unwrap().1
    }

    #[test]
    fn round_sphere_formula() {
        let grid = make_grid(16, 16).unwrap();
        let m = StaticMetric::minkowski();
        let g = geom(m, &SurfaceChart::coordinate_sphere(m, 2.0).unwrap(), &grid);
        let rep = minkowski_formula_20(&g, &grid).unwrap();
        assert!((rep.lhs - 16.0 * PI).abs() < 1e-10 && rep.residual < 1e-10);
        assert!(rep.flat_reduction);
    }

    #[test]
    fn graphs_in_curved_spacetimes() {
        for m in [StaticMetric::minkowski(), StaticMetric::schwarzschild(1.0), StaticMetric::ads_schwarzschild(1.0)] {
            let chart = SurfaceChart::graph(m, CosSeries(vec![5.0, 0.2, 0.4]), CosSeries(vec![0.0, 0.3, 0.1])).unwrap();
            let mut prev = f64::INFINITY;
            for n in [8, 16, 32] {
                let grid = make_grid(n, 8).unwrap();
                let rep = minkowski_formula_20(&geom(m, &chart, &grid), &grid).unwrap();
                assert!(rep.residual < prev.max(1e-9), "{m:?} {n} {}", rep.residual);
                prev = rep.residual;
                if !m.is_flat() && n == 32 {
                    assert!(rep.terms["curvature_term"].abs() > 1e-3);
                }
            }
            assert!(prev < 1e-8, "{m:?} {prev}");
        }
    }

    #[test]
    fn schwarzschild_vs_flat_reference() {
        let grid = make_grid(16, 16).unwrap();
        let s = StaticMetric::schwarzschild(1.0);
        let m = StaticMetric::minkowski();
        let pg = geom(s, &SurfaceChart::coordinate_sphere(s, 5.0).unwrap(), &grid);
        let rg = geom(m, &SurfaceChart::coordinate_sphere(m, 5.0).unwrap(), &grid);
        let rep = comparison_identity(&pg, &rg, Variant::Flat, &grid).unwrap();
        assert!(rep.residual < 1e-10, "{rep:?}");
        let want = 8.0 * PI * 5.0 * (1.0 - 0.6f64.sqrt());
        assert!((rep.lhs - want).abs() < 1e-10);
        for side in [Side::Reference, Side::Physical] {
            let d = divergence_split_report(side, &pg, &rg, Variant::Flat, &grid).unwrap();
            assert!(d.residual < 1e-10 && d.diagnostics["divergence_integral"].abs() < 1e-10);
        }
        assert!(comparison_identity(&pg, &rg, Variant::AdS, &grid).is_err());
        let other = geom(m, &SurfaceChart::coordinate_sphere(m, 5.1).unwrap(), &grid);
        assert!(matches!(comparison_identity(&pg, &other, Variant::Flat, &grid), Err(QlmError::MetricMismatch { .. })));
    }
}
