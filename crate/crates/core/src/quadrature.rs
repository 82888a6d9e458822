//! Gauss-Legendre (in `cos theta`) by trapezoid (in `phi`) grids on the
//! sphere parameter domain, surface integration and spectral differentiation.

use crate::error::{QlmError, Result};
use std::f64::consts::PI;

pub const DEFAULT_N_THETA: usize = 64;
pub const DEFAULT_N_PHI: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub theta: f64,
    pub phi: f64,
    /// Quadrature weight against the unit round-sphere area element.
    pub weight: f64,
    pub ring: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n_theta: usize,
    pub n_phi: usize,
    /// Polar angles of the rings, increasing.
    pub theta: Vec<f64>,
    /// `cos theta` of the rings (decreasing).
    pub x: Vec<f64>,
    /// Gauss-Legendre weights of the rings.
    pub wx: Vec<f64>,
    pub nodes: Vec<Node>,
    diff_x: Vec<f64>,
}

/// Gauss-Legendre nodes and weights on [-1, 1], nodes increasing.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

pub fn make_grid(n_theta: usize, n_phi: usize) -> Result<Grid> {
    if n_theta < 4 || n_phi < 8 {
        return Err(QlmError::Config(format!(
            "grid too small: n_theta = {n_theta} (need >= 4), n_phi = {n_phi} (need >= 8)"
        )));
    }
    let (xs, ws) = gauss_legendre(n_theta);
    // rings ordered by increasing theta, i.e. decreasing x
    let x: Vec<f64> = xs.iter().rev().copied().collect();
    let wx: Vec<f64> = ws.iter().rev().copied().collect();
    let theta: Vec<f64> = x.iter().map(|v| v.acos()).collect();
    let dphi = 2.0 * PI / n_phi as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    for (ring, (&th, &w)) in theta.iter().zip(&wx).enumerate() {
        for j in 0..n_phi {
            nodes.push(Node { theta: th, phi: j as f64 * dphi, weight: w * dphi, ring });
        }
    }
    let diff_x = collocation_matrix(&x, &wx);
    Ok(Grid { n_theta, n_phi, theta, x, wx, nodes, diff_x })
}

/// Polynomial collocation differentiation matrix on Gauss-Legendre nodes
/// (barycentric form).
fn collocation_matrix(x: &[f64], w: &[f64]) -> Vec<f64> {
    let n = x.len();
    // barycentric weights for Gauss points, up to a common factor; x is
    // sorted (decreasing) so the sign alternates.
    let lam: Vec<f64> = (0..n)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            s * ((1.0 - x[j] * x[j]) * w[j]).sqrt()
        })
        .collect();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (lam[j] / lam[i]) / (x[i] - x[j]);
                d[i * n + j] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    d
}

impl Grid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_phi as f64
    }

    /// `d f / d x` of ring samples, exact for polynomials in `x` of degree
    /// below `n_theta`.
    pub fn diff_x(&self, ring_values: &[f64]) -> Vec<f64> {
        let n = self.n_theta;
        assert_eq!(ring_values.len(), n);
        (0..n)
            .map(|i| pairwise_sum(&(0..n).map(|j| self.diff_x[i * n + j] * ring_values[j]).collect::<Vec<_>>()))
            .collect()
    }

    /// `d f / d theta` of an axisymmetric function that is smooth in `cos theta`.
    pub fn diff_theta(&self, ring_values: &[f64]) -> Vec<f64> {
        self.diff_x(ring_values).iter().zip(&self.theta).map(|(d, th)| -th.sin() * d).collect()
    }

    /// Trigonometric-interpolant derivative in `phi` of samples on one ring.
    pub fn diff_phi(&self, ring: &[f64]) -> Vec<f64> {
        let n = self.n_phi;
        assert_eq!(ring.len(), n);
        let half = n / 2;
        let mut out = vec![0.0; n];
        for k in 1..=half {
            if 2 * k == n {
                // Nyquist mode has no well-defined derivative; drop it
                continue;
            }
            let (mut a, mut b) = (0.0, 0.0);
            for (j, v) in ring.iter().enumerate() {
                let arg = k as f64 * self.phi(j);
                a += v * arg.cos();
                b += v * arg.sin();
            }
            a *= 2.0 / n as f64;
            b *= 2.0 / n as f64;
            for (j, o) in out.iter_mut().enumerate() {
                let arg = k as f64 * self.phi(j);
                *o += k as f64 * (b * arg.cos() - a * arg.sin());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub values: Vec<f64>,
    dims: (usize, usize),
}

impl ScalarField {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(QlmError::GridMismatch(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(ScalarField { values, dims: grid.dims() })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(&Node) -> f64) -> Self {
        ScalarField { values: grid.nodes.iter().map(f).collect(), dims: grid.dims() }
    }

    /// Broadcast per-ring values of an axisymmetric quantity to every node.
    pub fn from_rings(grid: &Grid, rings: &[f64]) -> Self {
        assert_eq!(rings.len(), grid.n_theta);
        ScalarField { values: grid.nodes.iter().map(|n| rings[n.ring]).collect(), dims: grid.dims() }
    }

    pub fn constant(grid: &Grid, v: f64) -> Self {
        ScalarField { values: vec![v; grid.len()], dims: grid.dims() }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Pairwise (cascade) summation in index order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}

/// `sum_i field_i * area_i * w_i`, where `area` is the surface area element
/// relative to the unit round sphere.
pub fn integrate(grid: &Grid, field: &ScalarField, area_element: &ScalarField) -> Result<f64> {
    if field.dims != grid.dims() || area_element.dims != grid.dims() {
        return Err(QlmError::GridMismatch(format!(
            "field dims {:?} / area dims {:?} do not match grid {:?}",
            field.dims,
            area_element.dims,
            grid.dims()
        )));
    }
    let terms: Vec<f64> = grid
        .nodes
        .iter()
        .zip(field.values.iter().zip(&area_element.values))
        .map(|(n, (f, a))| f * a * n.weight)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Integral of an axisymmetric quantity given per ring.
pub(crate) fn integrate_rings(grid: &Grid, values: &[f64], area: &[f64]) -> f64 {
    let dphi = 2.0 * PI / grid.n_phi as f64;
    let ring_sums: Vec<f64> = (0..grid.n_theta).map(|i| values[i] * area[i] * grid.wx[i]).collect();
    // each ring contributes n_phi equal terms
    pairwise_sum(&ring_sums) * dphi * grid.n_phi as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_four_pi() {
        let g = make_grid(16, 32).unwrap();
        assert_eq!(g.len(), 512);
        let s = pairwise_sum(&g.nodes.iter().map(|n| n.weight).collect::<Vec<_>>());
        assert!((s - 4.0 * PI).abs() < 1e-12);
        assert!(g.nodes.iter().all(|n| n.theta > 0.0 && n.theta < PI && n.weight > 0.0));
    }

    #[test]
    fn minimal_and_too_small_grids() {
        assert!(make_grid(4, 8).is_ok());
        assert!(matches!(make_grid(2, 8), Err(QlmError::Config(_))));
        assert!(matches!(make_grid(4, 6), Err(QlmError::Config(_))));
    }

    #[test]
    fn round_sphere_area_and_odd_moment() {
        let g = make_grid(16, 32).unwrap();
        let r = 2.5;
        let area = ScalarField::constant(&g, r * r);
        let one = ScalarField::constant(&g, 1.0);
        assert!((integrate(&g, &one, &area).unwrap() - 4.0 * PI * r * r).abs() < 1e-10);
        let c = ScalarField::from_fn(&g, |n| n.theta.cos());
        let unit = ScalarField::constant(&g, 1.0);
        assert!(integrate(&g, &c, &unit).unwrap().abs() < 1e-12);
    }

    #[test]
    fn exact_for_low_degree_harmonics() {
        let g = make_grid(8, 16).unwrap();
        let unit = ScalarField::constant(&g, 1.0);
        // cos^14 theta integrates to 4 pi / 15
        let f = ScalarField::from_fn(&g, |n| n.theta.cos().powi(14));
        assert!((integrate(&g, &f, &unit).unwrap() - 4.0 * PI / 15.0).abs() < 1e-13);
        // sin^2 theta cos^2 phi integrates to 4 pi / 3
        let f = ScalarField::from_fn(&g, |n| (n.theta.sin() * n.phi.cos()).powi(2));
        assert!((integrate(&g, &f, &unit).unwrap() - 4.0 * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn spectral_convergence_on_exp_cos() {
        // integral of exp(cos theta) over the unit sphere is 2 pi (e - 1/e)
        let exact = 2.0 * PI * (1f64.exp() - (-1f64).exp());
        let err = |n: usize| {
            let g = make_grid(n, 2 * n).unwrap();
            let f = ScalarField::from_fn(&g, |p| p.theta.cos().exp());
            (integrate(&g, &f, &ScalarField::constant(&g, 1.0)).unwrap() - exact).abs()
        };
        let (e4, e8) = (err(4), err(8));
        assert!(e8 < e4 / 10.0 || e8 < 1e-14, "{e4} {e8}");
    }

    #[test]
    fn mismatched_field_rejected() {
        let g = make_grid(8, 16).unwrap();
        let h = make_grid(16, 16).unwrap();
        let f = ScalarField::constant(&h, 1.0);
        assert!(matches!(integrate(&g, &f, &ScalarField::constant(&g, 1.0)), Err(QlmError::GridMismatch(_))));
        assert!(ScalarField::new(&g, vec![0.0; 3]).is_err());
    }

    #[test]
    fn collocation_derivatives() {
        let g = make_grid(24, 8).unwrap();
        let f: Vec<f64> = g.x.iter().map(|x| x.powi(5) - 2.0 * x).collect();
        let df = g.diff_x(&f);
        for (x, d) in g.x.iter().zip(&df) {
            assert!((d - (5.0 * x.powi(4) - 2.0)).abs() < 1e-11);
        }
        let h: Vec<f64> = g.theta.iter().map(|t| (0.5 * t.cos()).exp()).collect();
        let dh = g.diff_theta(&h);
        for (t, d) in g.theta.iter().zip(&dh) {
            let exact = -0.5 * t.sin() * (0.5 * t.cos()).exp();
            assert!((d - exact).abs() < 1e-12);
        }
        let ring: Vec<f64> = (0..8).map(|j| (2.0 * g.phi(j)).sin()).collect();
        let dr = g.diff_phi(&ring);
        for (j, d) in dr.iter().enumerate() {
            assert!((d - 2.0 * (2.0 * g.phi(j)).cos()).abs() < 1e-12);
        }
    }
}
