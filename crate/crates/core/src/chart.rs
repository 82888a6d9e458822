//! Axisymmetric surface charts `theta -> (t(theta), r(theta), psi(theta), phi)`
//! with first and second `theta` derivatives.

use crate::error::{QlmError, Result};
use crate::quadrature::Grid;
use crate::spacetime::StaticMetric;
use serde::{Deserialize, Serialize};

/// Truncated series `sum_k a_k cos^k theta`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CosSeries(pub Vec<f64>);

impl CosSeries {
    pub fn constant(v: f64) -> Self {
        CosSeries(vec![v])
    }

    pub fn zero() -> Self {
        CosSeries(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| *a == 0.0)
    }

    /// Value and first two `theta` derivatives.
    pub fn eval(&self, theta: f64) -> [f64; 3] {
        let (s, x) = theta.sin_cos();
        let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
        for &a in self.0.iter().rev() {
            ddp = ddp * x + 2.0 * dp;
            dp = dp * x + p;
            p = p * x + a;
        }
        [p, -s * dp, -x * dp + s * s * ddp]
    }
}

/// Chart data at one polar angle: `(value, d/dtheta, d2/dtheta2)` of `t`,
/// `r` and the ambient polar angle `psi`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ChartJet {
    pub t: [f64; 3],
    pub r: [f64; 3],
    pub psi: [f64; 3],
}

/// Chart data tabulated on the rings of a grid (output of the embedding
/// solvers).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledChart {
    pub theta: Vec<f64>,
    pub jets: Vec<ChartJet>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChartKind {
    CoordinateSphere {
        radius: f64,
    },
    /// `r = r(theta)`, `t = t(theta)`, `psi = theta`.
    AxisymmetricGraph {
        r: CosSeries,
        t: CosSeries,
    },
    Sampled(SampledChart),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceChart {
    pub kind: ChartKind,
    pub metric: StaticMetric,
}

impl SurfaceChart {
    pub fn coordinate_sphere(metric: StaticMetric, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(QlmError::Config(format!("sphere radius must be positive and finite, got {radius}")));
        }
        metric.check_radius(radius)?;
        Ok(SurfaceChart { kind: ChartKind::CoordinateSphere { radius }, metric })
    }

    pub fn graph(metric: StaticMetric, r: CosSeries, t: CosSeries) -> Result<Self> {
        if r.0.is_empty() {
            return Err(QlmError::Config("graph chart needs at least one r coefficient".into()));
        }
        if r.0.iter().chain(&t.0).any(|a| !a.is_finite()) {
            return Err(QlmError::Config("chart coefficients must be finite".into()));
        }
        let chart = SurfaceChart { kind: ChartKind::AxisymmetricGraph { r, t }, metric };
        // probe the radial range densely, endpoints included
        for k in 0..=512 {
            let th = std::f64::consts::PI * k as f64 / 512.0;
            let j = chart.jet_at(th).expect("closed-form chart");
            metric.check_radius(j.r[0])?;
        }
        Ok(chart)
    }

    pub fn sampled(metric: StaticMetric, data: SampledChart) -> Self {
        SurfaceChart { kind: ChartKind::Sampled(data), metric }
    }

    /// Closed-form chart data at any angle; `None` for sampled charts.
    pub fn jet_at(&self, theta: f64) -> Option<ChartJet> {
        match &self.kind {
            ChartKind::CoordinateSphere { radius } => {
                Some(ChartJet { t: [0.0; 3], r: [*radius, 0.0, 0.0], psi: [theta, 1.0, 0.0] })
            }
            ChartKind::AxisymmetricGraph { r, t } => {
                Some(ChartJet { t: t.eval(theta), r: r.eval(theta), psi: [theta, 1.0, 0.0] })
            }
            ChartKind::Sampled(_) => None,
        }
    }

    /// Chart data on the rings of `grid`.
    pub fn jets(&self, grid: &Grid) -> Result<Vec<ChartJet>> {
        let jets = match &self.kind {
            ChartKind::Sampled(s) => {
                let same = s.theta.len() == grid.n_theta
                    && s.theta.iter().zip(&grid.theta).all(|(a, b)| (a - b).abs() <= 1e-14);
                if !same {
                    return Err(QlmError::GridMismatch(format!(
                        "sampled chart has {} rings, grid has {}",
                        s.theta.len(),
                        grid.n_theta
                    )));
                }
                s.jets.clone()
            }
            _ => grid.theta.iter().map(|&th| self.jet_at(th).expect("closed-form chart")).collect(),
        };
        for j in &jets {
            self.metric.check_radius(j.r[0])?;
        }
        Ok(jets)
    }

    pub fn is_time_symmetric(&self) -> bool {
        match &self.kind {
            ChartKind::CoordinateSphere { .. } => true,
            ChartKind::AxisymmetricGraph { t, .. } => t.is_zero(),
            ChartKind::Sampled(s) => s.jets.iter().all(|j| j.t == [0.0; 3]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_series_derivatives() {
        let s = CosSeries(vec![1.0, 0.5, -0.3, 0.2]);
        let f = |th: f64| {
            let x = th.cos();
            1.0 + 0.5 * x - 0.3 * x * x + 0.2 * x * x * x
        };
        let th = 0.7;
        let h = 1e-4;
        let v = s.eval(th);
        assert!((v[0] - f(th)).abs() < 1e-15);
        assert!((v[1] - (f(th + h) - f(th - h)) / (2.0 * h)).abs() < 1e-8);
        assert!((v[2] - (f(th + h) - 2.0 * f(th) + f(th - h)) / (h * h)).abs() < 1e-6);
    }

    #[test]
    fn chart_domain_is_checked() {
        let m = StaticMetric::schwarzschild(1.0);
        assert!(SurfaceChart::coordinate_sphere(m, 1.5).is_err());
        assert!(SurfaceChart::graph(m, CosSeries(vec![3.0, 1.2]), CosSeries::zero()).is_err());
        assert!(SurfaceChart::graph(m, CosSeries(vec![3.0, 0.5]), CosSeries::zero()).is_ok());
        assert!(SurfaceChart::coordinate_sphere(StaticMetric::minkowski(), -1.0).is_err());
    }
}
