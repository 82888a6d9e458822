//! Run configuration: TOML with fixed sections; unknown keys are rejected.

use crate::chart::{CosSeries, SurfaceChart};
use crate::embed::Ambient;
use crate::error::{QlmError, Result};
use crate::quadrature::{DEFAULT_N_PHI, DEFAULT_N_THETA};
use crate::spacetime::{MetricKind, StaticMetric};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spacetime: SpacetimeSection,
    #[serde(default)]
    pub surface: SurfaceSection,
    #[serde(default)]
    pub reference: Option<ReferenceSection>,
    #[serde(default)]
    pub resolution: Resolution,
    #[serde(default)]
    pub limits: Option<LimitsSection>,
    #[serde(default)]
    pub cky: CkySection,
    #[serde(default)]
    pub convergence: Option<ConvergenceSection>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacetimeSection {
    pub kind: MetricKind,
    #[serde(default)]
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    #[default]
    CoordinateSphere,
    Graph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSection {
    #[serde(default)]
    pub kind: SurfaceKind,
    #[serde(default)]
    pub radius: Option<f64>,
    /// Coefficients of `r(theta) = sum a_k cos^k theta`.
    #[serde(default)]
    pub r_coeffs: Vec<f64>,
    /// Coefficients of `t(theta) = sum b_k cos^k theta`.
    #[serde(default)]
    pub t_coeffs: Vec<f64>,
}

impl Default for SurfaceSection {
    fn default() -> Self {
        SurfaceSection { kind: SurfaceKind::CoordinateSphere, radius: Some(4.0), r_coeffs: vec![], t_coeffs: vec![] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceKind {
    Euclidean3,
    Hyperbolic3,
    SchwarzschildSlice,
    /// Graph lift into Minkowski space with the time function of the
    /// physical chart.
    MinkowskiGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSection {
    pub kind: ReferenceKind,
    #[serde(default)]
    pub mass: f64,
}

impl ReferenceSection {
    pub fn ambient(&self) -> Ambient {
        match self.kind {
            ReferenceKind::Euclidean3 | ReferenceKind::MinkowskiGraph => Ambient::Euclidean3,
            ReferenceKind::Hyperbolic3 => Ambient::Hyperbolic3,
            ReferenceKind::SchwarzschildSlice => Ambient::SchwarzschildSlice(self.mass),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { n_theta: DEFAULT_N_THETA, n_phi: DEFAULT_N_PHI }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSection {
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CkySection {
    pub points: usize,
    pub triples: usize,
    pub seed: u64,
}

impl Default for CkySection {
    fn default() -> Self {
        CkySection { points: 100, triples: 100, seed: 20240917 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConvergenceTarget {
    MinkowskiFormula,
    Comparison,
    GaussCodazzi,
    CurvatureForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    pub identity: ConvergenceTarget,
    #[serde(default = "default_levels")]
    pub levels: Vec<usize>,
}

fn default_levels() -> Vec<usize> {
    vec![16, 32, 64]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub cky: f64,
    pub identity: f64,
    pub identical: f64,
    pub divergence: f64,
    pub lemma_abs: f64,
    pub lemma_rel: f64,
    pub mass_rel: f64,
    pub ads: f64,
    pub wang_yau_forms: f64,
    pub gauss_codazzi: f64,
    pub gauss_bonnet: f64,
    pub bound_slack: f64,
    pub adm_ratio_rel: f64,
    pub adm_mass_rel: f64,
    pub hyperbolic_mass_rel: f64,
    pub hyperbolic_final: f64,
    pub flat_rows: f64,
    pub convergence_factor: f64,
    pub rounding_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            cky: 1e-10,
            identity: 1e-7,
            identical: 1e-10,
            divergence: 1e-8,
            lemma_abs: 1e-7,
            lemma_rel: 1e-5,
            mass_rel: 1e-7,
            ads: 1e-7,
            wang_yau_forms: 1e-8,
            gauss_codazzi: 1e-6,
            gauss_bonnet: 1e-6,
            bound_slack: -1e-8,
            adm_ratio_rel: 0.3,
            adm_mass_rel: 0.06,
            hyperbolic_mass_rel: 0.05,
            hyperbolic_final: 0.05,
            flat_rows: 1e-9,
            convergence_factor: 10.0,
            rounding_floor: 1e-12,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| QlmError::Config(e.to_string().trim_end().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| QlmError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn metric(&self) -> Result<StaticMetric> {
        StaticMetric::new(self.spacetime.kind, self.spacetime.mass)
    }

    pub fn chart(&self) -> Result<SurfaceChart> {
        let m = self.metric()?;
        let s = &self.surface;
        match s.kind {
            SurfaceKind::CoordinateSphere => {
                let r = s
                    .radius
                    .ok_or_else(|| QlmError::Config("surface.radius is required for coordinate-sphere".into()))?;
                if !s.r_coeffs.is_empty() || !s.t_coeffs.is_empty() {
                    return Err(QlmError::Config(
                        "surface.r_coeffs/t_coeffs are only valid for kind = \"graph\"".into(),
                    ));
                }
                SurfaceChart::coordinate_sphere(m, r)
            }
            SurfaceKind::Graph => {
                if s.radius.is_some() {
                    return Err(QlmError::Config(
                        "surface.radius is only valid for kind = \"coordinate-sphere\"".into(),
                    ));
                }
                SurfaceChart::graph(m, CosSeries(s.r_coeffs.clone()), CosSeries(s.t_coeffs.clone()))
            }
        }
    }

    pub fn reference(&self) -> Result<ReferenceSection> {
        self.reference.ok_or_else(|| QlmError::Config("this command needs a [reference] section".into()))
    }

    pub fn radii(&self) -> Result<Vec<f64>> {
        self.limits
            .as_ref()
            .map(|l| l.radii.clone())
            .ok_or_else(|| QlmError::Config("this command needs [limits] radii".into()))
    }

    fn validate(&self) -> Result<()> {
        self.metric()?;
        if let Some(r) = self.reference {
            if !(r.mass.is_finite() && r.mass >= 0.0) {
                return Err(QlmError::Config(format!("reference.mass must be finite and >= 0, got {}", r.mass)));
            }
        }
        crate::quadrature::make_grid(self.resolution.n_theta, self.resolution.n_phi)?;
        if let Some(c) = &self.convergence {
            if c.levels.len() < 2 || c.levels.windows(2).any(|w| w[1] <= w[0]) || c.levels[0] < 4 {
                return Err(QlmError::Config(
                    "convergence.levels must hold at least two increasing values >= 4".into(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_and_defaults() {
        let c = RunConfig::parse("[spacetime]\nkind = \"schwarzschild\"\nmass = 1.0\n").unwrap();
        assert_eq!(c.resolution, Resolution { n_theta: 64, n_phi: 128 });
        assert_eq!(c.tolerances.identity, 1e-7);
        assert!(c.chart().is_ok());
    }

    #[test]
    fn unknown_key_names_key_and_line() {
        let e =
            RunConfig::parse("[spacetime]\nkind = \"minkowski\"\n\n[surface]\nradius = 2.0\nbogus = 1\n").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("bogus") && msg.contains("line 6"), "{msg}");
    }

    #[test]
    fn bad_values_rejected() {
        assert!(RunConfig::parse("[spacetime]\nkind = \"kerr\"\n").is_err());
        assert!(RunConfig::parse("[spacetime]\nkind = \"minkowski\"\n[resolution]\nn_theta = 2\nn_phi = 8\n").is_err());
        assert!(RunConfig::parse("[spacetime]\nkind = \"schwarzschild\"\nmass = -1.0\n").is_err());
    }
}
