//! Isometric embedding of axisymmetric 2-sphere metrics as surfaces of
//! revolution in the static slices of the reference spacetimes, and the
//! graph lift into Minkowski space.
//!
//! The generator is written in ambient spherical coordinates
//! `(r(theta), psi(theta))`. With area radius `rho = sqrt(G) = r sin psi` the
//! metric `dr^2/F + r^2 dpsi^2` yields a first-order ODE for `psi`, integrated
//! by RK4 from the equator `psi(pi/2) = pi/2`.

use crate::chart::{ChartJet, CosSeries, SampledChart, SurfaceChart};
use crate::error::{QlmError, Result};
use crate::jet::Jet;
use crate::quadrature::Grid;
use crate::spacetime::StaticMetric;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Target RK4 step in `theta`.
const RK4_STEP: f64 = 2e-3;
/// Radicand values in `[-RADICAND_SLACK, 0)` are treated as roundoff.
const RADICAND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "mass")]
pub enum Ambient {
    Euclidean3,
    Hyperbolic3,
    SchwarzschildSlice(f64),
}

impl Ambient {
    pub fn metric(self) -> StaticMetric {
        match self {
            Ambient::Euclidean3 => StaticMetric::minkowski(),
            Ambient::Hyperbolic3 => StaticMetric::anti_de_sitter(),
            Ambient::SchwarzschildSlice(m) => StaticMetric::schwarzschild(m),
        }
    }
}

/// `E dtheta^2 + G dphi^2` given by a closed-form chart, optionally shifted
/// by `dtau (x) dtau`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymMetric2 {
    pub chart: SurfaceChart,
    pub shift: CosSeries,
}

/// `E, E'` and `G, G', G''` at one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricCoefs {
    pub e: [f64; 2],
    pub g: [f64; 3],
}

impl AxisymMetric2 {
    pub fn induced(chart: &SurfaceChart) -> Result<Self> {
        if chart.jet_at(FRAC_PI_2).is_none() {
            return Err(QlmError::Config("induced metric needs a closed-form chart".into()));
        }
        Ok(AxisymMetric2 { chart: chart.clone(), shift: CosSeries::zero() })
    }

    /// Round metric of area radius `radius`.
    pub fn round(radius: f64) -> Result<Self> {
        Self::induced(&SurfaceChart::coordinate_sphere(StaticMetric::minkowski(), radius)?)
    }

    /// `sigma + dtau (x) dtau`, replacing any previous shift.
    pub fn shifted(&self, tau: &CosSeries) -> Self {
        AxisymMetric2 { chart: self.chart.clone(), shift: tau.clone() }
    }

    pub fn eval(&self, theta: f64) -> MetricCoefs {
        let j = self.chart.jet_at(theta).expect("closed-form chart");
        let w = self.chart.metric.warp(j.r[0]);
        let r = Jet::new(j.r[0], j.r[1]);
        let f = r.chain(w.f2, w.df2);
        let t1 = Jet::new(j.t[1], j.t[2]);
        let r1 = Jet::new(j.r[1], j.r[2]);
        let tau = self.shift.eval(theta);
        let tau1 = Jet::new(tau[1], tau[2]);
        let e = f * t1 * t1 * -1.0 + r1 * r1 / f + r * r + tau1 * tau1;
        let (s, c) = theta.sin_cos();
        let (rv, rd, rdd) = (j.r[0], j.r[1], j.r[2]);
        let g = [
            rv * rv * s * s,
            2.0 * rv * rd * s * s + 2.0 * rv * rv * s * c,
            2.0 * rd * rd * s * s + 2.0 * rv * rdd * s * s + 8.0 * rv * rd * s * c + 2.0 * rv * rv * (c * c - s * s),
        ];
        MetricCoefs { e: [e.v, e.d], g }
    }

    fn equatorially_symmetric(&self, grid: &Grid) -> bool {
        grid.theta.iter().all(|&th| {
            let a = self.eval(th);
            let b = self.eval(std::f64::consts::PI - th);
            (a.e[0] - b.e[0]).abs() <= 1e-12 * a.e[0].abs()
                && (a.g[0] - b.g[0]).abs() <= 1e-12 * a.g[0].abs().max(1e-300)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSurface {
    pub ambient: Ambient,
    /// Chart of the embedded surface in the ambient static spacetime.
    pub chart: SurfaceChart,
    /// Largest nodewise relative deviation of the induced metric from the
    /// input metric.
    pub metric_residual: f64,
    /// Step-halving estimate of the integration error in `psi`.
    pub richardson_error: f64,
}

struct Generator {
    psi: Jet,
    r: Jet,
    radicand: f64,
}

/// `psi' = p` at `(theta, psi)`; with `psi` carrying `p` as its derivative the
/// result also carries `p'` and `r'`.
fn slope(ambient: Ambient, c: &MetricCoefs, psi: Jet) -> Result<(Jet, Generator)> {
    let metric = ambient.metric();
    let e = Jet::new(c.e[0], c.e[1]);
    let rho = c.g[0].sqrt();
    let drho = c.g[1] / (2.0 * rho);
    let ddrho = (0.5 * c.g[2] - drho * drho) / rho;
    let rho = Jet::new(rho, drho);
    let drho = Jet::new(drho, ddrho);
    let (s, co) = (psi.sin(), psi.cos());
    let r = rho / s;
    metric.check_radius(r.v)?;
    let w = metric.warp(r.v);
    let f = r.chain(w.f2, w.df2);
    let q = co * co + f * s * s;
    let rad = e * q - drho * drho;
    let radicand = rad.v;
    let rad = if rad.v < 0.0 { Jet::constant(0.0) } else { rad };
    let p = (drho * co + s * f.sqrt() * rad.sqrt()) / (r * q);
    Ok((p, Generator { psi, r, radicand }))
}

fn rk4_segment(ambient: Ambient, sigma: &AxisymMetric2, th0: f64, th1: f64, psi0: f64, n: usize) -> Result<f64> {
    let h = (th1 - th0) / n as f64;
    let f = |th: f64, psi: f64| -> Result<f64> {
        let c = sigma.eval(th);
        Ok(slope(ambient, &c, Jet::constant(psi))?.0.v)
    };
    let mut psi = psi0;
    for k in 0..n {
        let th = th0 + k as f64 * h;
        let k1 = f(th, psi)?;
        let k2 = f(th + 0.5 * h, psi + 0.5 * h * k1)?;
        let k3 = f(th + 0.5 * h, psi + 0.5 * h * k2)?;
        let k4 = f(th + h, psi + h * k3)?;
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    Ok(psi)
}

/// `psi` at every ring, marching outward from the equator.
fn integrate_psi(ambient: Ambient, sigma: &AxisymMetric2, grid: &Grid, step: f64) -> Result<Vec<f64>> {
    let mut psi = vec![0.0; grid.n_theta];
    let split = grid.theta.partition_point(|&t| t < FRAC_PI_2);
    let mut march = |idx: &mut dyn Iterator<Item = usize>| -> Result<()> {
        let (mut th, mut v) = (FRAC_PI_2, FRAC_PI_2);
        for i in idx {
            let target = grid.theta[i];
            let n = ((target - th).abs() / step).ceil().max(1.0) as usize;
            v = rk4_segment(ambient, sigma, th, target, v, n)?;
            th = target;
            psi[i] = v;
        }
        Ok(())
    };
    march(&mut (split..grid.n_theta))?;
    march(&mut (0..split).rev())?;
    Ok(psi)
}

pub fn embed_axisym(sigma: &AxisymMetric2, ambient: Ambient, grid: &Grid) -> Result<EmbeddedSurface> {
    embed_with_time(sigma, ambient, grid, None)
}

/// Embed `sigma` into Minkowski space as a graph `t = tau` over the surface
/// of revolution realizing `sigma + dtau (x) dtau`.
pub fn embed_graph_r31(sigma: &AxisymMetric2, tau: &CosSeries, grid: &Grid) -> Result<EmbeddedSurface> {
    embed_with_time(&sigma.shifted(tau), Ambient::Euclidean3, grid, Some(tau))
}

fn embed_with_time(
    sigma: &AxisymMetric2,
    ambient: Ambient,
    grid: &Grid,
    tau: Option<&CosSeries>,
) -> Result<EmbeddedSurface> {
    if let Ambient::SchwarzschildSlice(m) = ambient {
        if !(m.is_finite() && m >= 0.0) {
            return Err(QlmError::Config(format!("slice mass must be finite and >= 0, got {m}")));
        }
    }
    if ambient != Ambient::Euclidean3 && !sigma.equatorially_symmetric(grid) {
        return Err(QlmError::Embedding {
            from: 0.0,
            to: std::f64::consts::PI,
            detail: "only equatorially symmetric metrics are embedded outside Euclidean space".into(),
        });
    }
    // first check embeddability on the nodes and a fine sample
    let probe = |psi_at: &dyn Fn(f64) -> Option<f64>| -> Result<()> {
        let mut bad: Option<(f64, f64, f64)> = None;
        for &th in &grid.theta {
            let Some(psi) = psi_at(th) else { continue };
            let (_, gen) = slope(ambient, &sigma.eval(th), Jet::constant(psi))?;
            if gen.radicand < -RADICAND_SLACK {
                let (lo, hi, worst) = bad.unwrap_or((th, th, 0.0));
                bad = Some((lo.min(th), hi.max(th), worst.min(gen.radicand)));
            }
        }
        if let Some((lo, hi, worst)) = bad {
            return Err(QlmError::Embedding {
                from: lo,
                to: hi,
                detail: format!("metric is not rotationally embeddable: radicand {worst:e}"),
            });
        }
        Ok(())
    };
    let coarse = integrate_psi(ambient, sigma, grid, RK4_STEP).map_err(|e| remap_domain(e, grid))?;
    probe(&|th| grid.theta.iter().position(|&t| t == th).map(|i| coarse[i]))?;
    let fine = integrate_psi(ambient, sigma, grid, RK4_STEP / 2.0)?;
    let richardson_error = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if !(richardson_error < 1e-8) {
        return Err(QlmError::Embedding {
            from: 0.0,
            to: std::f64::consts::PI,
            detail: format!("generator integration did not converge (step-halving change {richardson_error:e})"),
        });
    }

    let metric = ambient.metric();
    let mut jets = Vec::with_capacity(grid.n_theta);
    let mut residual = 0.0f64;
    for (&th, &psi) in grid.theta.iter().zip(&fine) {
        let c = sigma.eval(th);
        let (p, _) = slope(ambient, &c, Jet::constant(psi))?;
        let (p, gen) = slope(ambient, &c, Jet::new(psi, p.v))?;
        let (r, psi_j) = (gen.r, gen.psi);
        // r' along the generator, then differentiate once more
        let s = psi_j.sin();
        let co = psi_j.cos();
        let rho = c.g[0].sqrt();
        let drho = c.g[1] / (2.0 * rho);
        let ddrho = (0.5 * c.g[2] - drho * drho) / rho;
        let r1 = (Jet::new(drho, ddrho) - r * co * p) / s;
        let t = tau.map(|t| t.eval(th)).unwrap_or([0.0; 3]);
        let jet = ChartJet { t, r: [r.v, r.d, r1.d], psi: [psi, p.v, p.d] };
        let f = metric.warp(r.v).f2;
        let e_emb = -t[1] * t[1] + r.d * r.d / f + r.v * r.v * p.v * p.v;
        let e_target = c.e[0] - tau.map(|_| t[1] * t[1]).unwrap_or(0.0);
        let g_emb = (r.v * s.v).powi(2);
        residual = residual
            .max((e_emb - e_target).abs() / e_target.abs().max(1.0))
            .max((g_emb - c.g[0]).abs() / c.g[0].abs().max(1.0));
        jets.push(jet);
    }
    let chart = SurfaceChart::sampled(metric, SampledChart { theta: grid.theta.clone(), jets });
    Ok(EmbeddedSurface { ambient, chart, metric_residual: residual, richardson_error })
}

fn remap_domain(e: QlmError, _grid: &Grid) -> QlmError {
    match e {
        QlmError::Domain { r, bound, metric } => QlmError::Embedding {
            from: 0.0,
            to: std::f64::consts::PI,
            detail: format!("generator leaves the domain of {metric}: r = {r} <= {bound}"),
        },
        other => other,
    }
}
