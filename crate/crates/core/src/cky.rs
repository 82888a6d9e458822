//! The conformal Killing-Yano 2-form `Q = r dr ^ dt` of the catalog metrics.

use crate::error::{QlmError, Result};
use crate::spacetime::{christoffel_at, inner, metric_diag, Mat4, SpacetimePoint, StaticMetric, Vec4, R, T};
use serde::{Deserialize, Serialize};

/// Dimension parameter `n` of the CKY equation in a 3+1 spacetime.
const CKY_N: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CkyForm {
    /// Coordinate components `Q_{ab}`; only `Q_{rt} = -Q_{tr} = r` is nonzero.
    pub components: Mat4,
    pub metric: StaticMetric,
    pub point: SpacetimePoint,
}

impl CkyForm {
    pub fn eval(&self, u: &Vec4, v: &Vec4) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.components[a][b] * u[a] * v[b];
            }
        }
        s
    }
}

/// Components of `Q` on an adapted frame. Tangent indices refer to the
/// orthonormal tangents `e1, e2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QContractions {
    pub q34: f64,
    pub qb3: [f64; 2],
    pub qb4: [f64; 2],
    pub qab: [[f64; 2]; 2],
}

/// Frame `{e1, e2, e3, e4}` at one point in coordinate components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointFrame {
    pub e: [Vec4; 4],
}

/// Evaluate `r dr ^ dt` on two vectors without building the form.
pub(crate) fn q_eval(r: f64, u: &Vec4, v: &Vec4) -> f64 {
    r * (u[R] * v[T] - u[T] * v[R])
}

pub fn q_at(metric: &StaticMetric, p: &SpacetimePoint) -> Result<CkyForm> {
    metric.check_radius(p.r)?;
    let mut q = [[0.0; 4]; 4];
    q[R][T] = p.r;
    q[T][R] = -p.r;
    Ok(CkyForm { components: q, metric: *metric, point: *p })
}

/// `(D_m Q)_{ab}` for all index triples.
fn covariant_derivative(metric: &StaticMetric, p: &SpacetimePoint) -> Result<[[[f64; 4]; 4]; 4]> {
    let form = q_at(metric, p)?;
    let q = form.components;
    let gam = christoffel_at(metric, p)?;
    let mut dq = [[[0.0; 4]; 4]; 4];
    for m in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                // only d_r Q_{rt} = 1, d_r Q_{tr} = -1 survive
                let mut v = if m == R && a == R && b == T {
                    1.0
                } else if m == R && a == T && b == R {
                    -1.0
                } else {
                    0.0
                };
                for l in 0..4 {
                    v -= gam[l][m][a] * q[l][b] + gam[l][m][b] * q[a][l];
                }
                dq[m][a][b] = v;
            }
        }
    }
    Ok(dq)
}

/// `xi^b = D_a Q^{ab}`.
pub fn div_q(metric: &StaticMetric, p: &SpacetimePoint) -> Result<Vec4> {
    let dq = covariant_derivative(metric, p)?;
    let gd = metric_diag(metric, p.r, p.theta);
    let mut xi = [0.0; 4];
    for (b, x) in xi.iter_mut().enumerate() {
        let mut s = 0.0;
        for a in 0..4 {
            s += dq[a][a][b] / gd[a];
        }
        *x = s / gd[b];
    }
    Ok(xi)
}

/// Both sides of the CKY equation evaluated on `(x, y, z)`.
pub fn cky_sides(metric: &StaticMetric, p: &SpacetimePoint, x: &Vec4, y: &Vec4, z: &Vec4) -> Result<(f64, f64)> {
    let dq = covariant_derivative(metric, p)?;
    let xi = div_q(metric, p)?;
    let gd = metric_diag(metric, p.r, p.theta);
    let dq_on = |u: &Vec4, v: &Vec4, w: &Vec4| {
        let mut s = 0.0;
        for m in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    s += dq[m][a][b] * u[m] * v[a] * w[b];
                }
            }
        }
        s
    };
    let lhs = dq_on(x, y, z) + dq_on(y, x, z);
    let rhs = (2.0 * inner(&gd, x, y) * inner(&gd, &xi, z)
        - inner(&gd, x, z) * inner(&gd, &xi, y)
        - inner(&gd, y, z) * inner(&gd, &xi, x))
        / CKY_N;
    Ok((lhs, rhs))
}

pub fn cky_residual(metric: &StaticMetric, p: &SpacetimePoint, x: &Vec4, y: &Vec4, z: &Vec4) -> Result<f64> {
    let (l, r) = cky_sides(metric, p, x, y, z)?;
    Ok((l - r).abs())
}

/// Largest deviation of `<e_i, e_j>` from `diag(1, 1, 1, -1)`.
pub fn frame_orthonormality_residual(gd: &Vec4, frame: &PointFrame) -> f64 {
    let sig = [1.0, 1.0, 1.0, -1.0];
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let target = if i == j { sig[i] } else { 0.0 };
            worst = worst.max((inner(gd, &frame.e[i], &frame.e[j]) - target).abs());
        }
    }
    worst
}

pub fn contract_q(form: &CkyForm, frame: &PointFrame) -> Result<QContractions> {
    let gd = metric_diag(&form.metric, form.point.r, form.point.theta);
    let res = frame_orthonormality_residual(&gd, frame);
    if res > 1e-8 {
        return Err(QlmError::Contract(format!("frame orthonormality residual {res:e} exceeds 1e-8")));
    }
    Ok(contract_unchecked(form.point.r, frame))
}

pub(crate) fn contract_unchecked(r: f64, frame: &PointFrame) -> QContractions {
    let [e1, e2, e3, e4] = &frame.e;
    let tang = [e1, e2];
    let mut out = QContractions { q34: q_eval(r, e3, e4), ..Default::default() };
    for b in 0..2 {
        out.qb3[b] = q_eval(r, tang[b], e3);
        out.qb4[b] = q_eval(r, tang[b], e4);
        for a in 0..2 {
            out.qab[a][b] = q_eval(r, tang[a], tang[b]);
        }
    }
    out
}
