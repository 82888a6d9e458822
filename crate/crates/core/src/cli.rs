//! Batch driver: `qlmass <command> --config <path> [--out <dir>]`.
//!
//! Exit codes: 0 when every check passes, 2 when a check fails, 1 on a
//! configuration, domain or hypothesis error (no report is written then).

use crate::chart::{ChartKind, SurfaceChart};
use crate::cky::{cky_residual, div_q};
use crate::config::{ConvergenceTarget, ReferenceKind, ReferenceSection, RunConfig};
use crate::embed::Ambient;
use crate::error::{QlmError, Result};
use crate::identities::{comparison_identity, divergence_split_report, minkowski_formula_20, Side, Variant};
use crate::qlm::{
    adm_limit_table, ads_static_energy, curvature_bound, graph_reference, hyperbolic_limit_table, isometric_reference,
    liu_yau_curvature_form, liu_yau_mass, schwarzschild_reference_energy, wang_yau_energy, LimitRow,
};
use crate::quadrature::{make_grid, Grid};
use crate::spacetime::{metric_diag, MetricKind, SpacetimePoint, StaticMetric};
use crate::surface::{build_geometry, canonical_frame, gauss_codazzi_residual, FrameChoice, SurfaceGeometry};
use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyCky,
    VerifyMinkowskiFormula,
    VerifyComparison,
    VerifyGaussCodazzi,
    MassLiuYau,
    MassWangYau,
    MassAds,
    MassSchReference,
    BoundCheck,
    LimitAdm,
    LimitHyperbolic,
    Convergence,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

#[derive(Debug, Parser)]
#[command(name = "qlmass", version, about = "Quasi-local mass and conformal Killing-Yano identity verification")]
struct Args {
    command: Command,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    /// `"<= x"` or `">= x"`.
    pub requirement: String,
}

impl Check {
    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Check { name: name.into(), passed: value <= limit, value, requirement: format!("<= {limit:e}") }
    }

    fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Check { name: name.into(), passed: value >= limit, value, requirement: format!(">= {limit:e}") }
    }

    fn holds(name: &str, ok: bool) -> Self {
        Check { name: name.into(), passed: ok, value: if ok { 1.0 } else { 0.0 }, requirement: "holds".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
    pub table: Option<Table>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: RunConfig,
    pub results: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub wall_time_seconds: f64,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn grid_of(cfg: &RunConfig) -> Result<Grid> {
    make_grid(cfg.resolution.n_theta, cfg.resolution.n_phi)
}

fn physical(cfg: &RunConfig, grid: &Grid) -> Result<(StaticMetric, SurfaceChart, SurfaceGeometry)> {
    let m = cfg.metric()?;
    let chart = cfg.chart()?;
    let g = canonical_frame(&m, &chart, grid)?.1;
    Ok((m, chart, g))
}

fn reference_geometry(r: &ReferenceSection, chart: &SurfaceChart, grid: &Grid) -> Result<(Variant, SurfaceGeometry)> {
    let variant = match r.kind {
        ReferenceKind::Euclidean3 | ReferenceKind::MinkowskiGraph => Variant::Flat,
        ReferenceKind::Hyperbolic3 => Variant::AdS,
        ReferenceKind::SchwarzschildSlice => Variant::Schwarzschild,
    };
    let g = match r.kind {
        ReferenceKind::MinkowskiGraph => graph_reference(chart, grid)?,
        _ => isometric_reference(chart, r.ambient(), grid)?,
    };
    Ok((variant, g))
}

fn sphere_radius(chart: &SurfaceChart) -> Option<f64> {
    match chart.kind {
        ChartKind::CoordinateSphere { radius } => Some(radius),
        _ => None,
    }
}

/// Execute one command without touching the filesystem.
pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    let tol = &cfg.tolerances;
    match command {
        Command::VerifyCky => verify_cky(cfg),
        Command::VerifyMinkowskiFormula => {
            let grid = grid_of(cfg)?;
            let (_, _, g) = physical(cfg, &grid)?;
            let rep = minkowski_formula_20(&g, &grid)?;
            let mut checks = vec![Check::at_most("minkowski_formula_residual", rep.residual, tol.identity)];
            if rep.flat_reduction {
                checks.push(Check::at_most("flat_curvature_terms", rep.terms["curvature_term"].abs(), 1e-12));
            }
            Ok(Outcome { results: to_value(&rep), checks, table: None })
        }
        Command::VerifyComparison => {
            let grid = grid_of(cfg)?;
            let (m, chart, p) = physical(cfg, &grid)?;
            let (variant, r) = reference_geometry(&cfg.reference()?, &chart, &grid)?;
            let rep = comparison_identity(&p, &r, variant, &grid)?;
            let limit = if m == r.metric { tol.identical } else { tol.identity };
            let mut checks = vec![Check::at_most("comparison_residual", rep.residual, limit)];
            let mut splits = serde_json::Map::new();
            for side in [Side::Reference, Side::Physical] {
                let d = divergence_split_report(side, &p, &r, variant, &grid)?;
                let key = if side == Side::Reference { "reference" } else { "physical" };
                checks.push(Check::at_most(
                    &format!("divergence_integral_{key}"),
                    d.diagnostics["divergence_integral"].abs(),
                    tol.divergence,
                ));
                checks.push(Check::at_most(&format!("divergence_identity_{key}"), d.residual, tol.identity));
                splits.insert(key.into(), to_value(&d));
            }
            if variant == Variant::AdS {
                checks.push(Check::at_most(
                    "ads_reference_curvature",
                    rep.diagnostics["reference_curvature_block"].abs(),
                    tol.identical,
                ));
            }
            Ok(Outcome { results: json!({ "identity": rep, "divergence_split": splits }), checks, table: None })
        }
        Command::VerifyGaussCodazzi => {
            let grid = grid_of(cfg)?;
            let m = cfg.metric()?;
            let chart = cfg.chart()?;
            let mut checks = Vec::new();
            let mut res = serde_json::Map::new();
            for choice in [FrameChoice::SliceAdapted, FrameChoice::MeanCurvature] {
                let key = if choice == FrameChoice::SliceAdapted { "slice_adapted" } else { "mean_curvature" };
                let (_, g) = build_geometry(&m, &chart, &grid, choice)?;
                let gc = gauss_codazzi_residual(&g, &grid)?;
                let gb = g.integrate_with(&grid, |r| r.gauss_k);
                checks.push(Check::at_most(&format!("gauss_codazzi_{key}"), gc.max(), tol.gauss_codazzi));
                checks.push(Check::at_most(
                    &format!("gauss_bonnet_{key}"),
                    (gb - 4.0 * std::f64::consts::PI).abs(),
                    tol.gauss_bonnet,
                ));
                res.insert(
                    key.into(),
                    json!({
                        "gauss_max": gc.gauss.max_abs(),
                        "codazzi3_max": gc.codazzi3.max_abs(),
                        "codazzi4_max": gc.codazzi4.max_abs(),
                        "gauss_bonnet_integral": gb,
                    }),
                );
            }
            Ok(Outcome { results: Value::Object(res), checks, table: None })
        }
        Command::MassLiuYau => {
            let grid = grid_of(cfg)?;
            let (m, chart, p) = physical(cfg, &grid)?;
            let r = isometric_reference(&chart, Ambient::Euclidean3, &grid)?;
            let ly = liu_yau_mass(&p, &r, &grid)?;
            let cf = liu_yau_curvature_form(&p, &r, &grid)?;
            let diff = (ly.value - cf.value).abs();
            let mut checks = vec![Check::at_most(
                "liu_yau_curvature_form_equality",
                diff,
                tol.lemma_abs.max(tol.lemma_rel * ly.value.abs()),
            )];
            let oracle = match (m.kind, sphere_radius(&chart)) {
                (MetricKind::Schwarzschild | MetricKind::Minkowski, Some(rad)) => {
                    let o = rad * (1.0 - (1.0 - 2.0 * m.mass / rad).sqrt());
                    checks.push(Check::at_most("closed_form_oracle", relative(ly.value, o), tol.mass_rel));
                    Some(o)
                }
                _ => None,
            };
            Ok(Outcome {
                results: json!({ "liu_yau": ly, "curvature_form": cf, "oracle": oracle }),
                checks,
                table: None,
            })
        }
        Command::MassWangYau => {
            let grid = grid_of(cfg)?;
            let (m, chart, p) = physical(cfg, &grid)?;
            let r = graph_reference(&chart, &grid)?;
            let wy = wang_yau_energy(&p, &r, &grid)?;
            let mut checks = Vec::new();
            if let Some(d) = wy.diagnostics.get("form_difference") {
                checks.push(Check::at_most("mixed_form_agreement", *d, tol.wang_yau_forms));
            }
            let oracle = match (m.kind, sphere_radius(&chart)) {
                (MetricKind::Schwarzschild | MetricKind::Minkowski, Some(rad)) => {
                    let o = rad * (1.0 - (1.0 - 2.0 * m.mass / rad).sqrt());
                    checks.push(Check::at_most("closed_form_oracle", relative(wy.value, o), tol.mass_rel));
                    Some(o)
                }
                _ => None,
            };
            Ok(Outcome { results: json!({ "wang_yau": wy, "oracle": oracle }), checks, table: None })
        }
        Command::MassAds => {
            let grid = grid_of(cfg)?;
            let (m, chart, p) = physical(cfg, &grid)?;
            let r = isometric_reference(&chart, Ambient::Hyperbolic3, &grid)?;
            let rep = ads_static_energy(&p, &r, &grid)?;
            let mut checks =
                vec![Check::at_most("curvature_vs_mixed_form", rep.diagnostics["form_difference"], tol.ads)];
            let oracle = match (m.kind, sphere_radius(&chart)) {
                (MetricKind::AntiDeSitter | MetricKind::AdsSchwarzschild, Some(rad)) => {
                    let v = (1.0 + rad * rad).sqrt();
                    let o = rad * v * (v - (1.0 + rad * rad - 2.0 * m.mass / rad).sqrt());
                    checks.push(Check::at_most("closed_form_oracle", (rep.value - o).abs(), tol.ads));
                    Some(o)
                }
                _ => None,
            };
            Ok(Outcome { results: json!({ "ads_energy": rep, "oracle": oracle }), checks, table: None })
        }
        Command::MassSchReference => {
            let grid = grid_of(cfg)?;
            let (m, chart, p) = physical(cfg, &grid)?;
            let rs = cfg.reference()?;
            if rs.kind != ReferenceKind::SchwarzschildSlice {
                return Err(QlmError::Config(
                    "mass-sch-reference needs reference.kind = \"schwarzschild-slice\"".into(),
                ));
            }
            let (_, r) = reference_geometry(&rs, &chart, &grid)?;
            let rep = schwarzschild_reference_energy(&p, &r, &grid)?;
            let limit = if m == r.metric { tol.identical } else { tol.identity };
            let mut checks = vec![Check::at_most("lhs_rhs_agreement", rep.diagnostics["form_difference"], limit)];
            if m == r.metric {
                checks.push(Check::at_most("identical_energy", rep.value.abs(), tol.identical));
            }
            Ok(Outcome { results: to_value(&rep), checks, table: None })
        }
        Command::BoundCheck => {
            let grid = grid_of(cfg)?;
            let (_, chart, p) = physical(cfg, &grid)?;
            let r = isometric_reference(&chart, Ambient::Euclidean3, &grid)?;
            let b = curvature_bound(&p, &r, &grid)?;
            let checks = vec![Check::at_least("bound_slack", b.slack, tol.bound_slack)];
            Ok(Outcome { results: to_value(&b), checks, table: None })
        }
        Command::LimitAdm | Command::LimitHyperbolic => limit_command(command, cfg),
        Command::Convergence => convergence(cfg),
    }
}

fn relative(v: f64, o: f64) -> f64 {
    if o == 0.0 {
        v.abs()
    } else {
        ((v - o) / o).abs()
    }
}

fn verify_cky(cfg: &RunConfig) -> Result<Outcome> {
    let m = cfg.metric()?;
    let c = cfg.cky;
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let lo = m.radial_bound() + 0.05;
    let (mut worst, mut worst_div) = (0.0f64, 0.0f64);
    for _ in 0..c.points {
        let p = SpacetimePoint::new(
            rng.gen_range(-5.0..5.0),
            lo + rng.gen_range(0.0..20.0),
            rng.gen_range(0.05..std::f64::consts::PI - 0.05),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let d = div_q(&m, &p)?;
        let want = [-3.0, 0.0, 0.0, 0.0];
        worst_div = worst_div.max(d.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        // components in [-1, 1] with respect to the static orthonormal frame
        let gd = metric_diag(&m, p.r, p.theta);
        for _ in 0..c.triples {
            let mut v = || -> [f64; 4] { std::array::from_fn(|a| rng.gen_range(-1.0..1.0) / gd[a].abs().sqrt()) };
            let (x, y, z) = (v(), v(), v());
            worst = worst.max(cky_residual(&m, &p, &x, &y, &z)?);
        }
    }
    let checks = vec![
        Check::at_most("cky_residual", worst, cfg.tolerances.cky),
        Check::at_most("divergence_minus_3_dt", worst_div, cfg.tolerances.cky),
    ];
    Ok(Outcome {
        results: json!({
            "metric": m.name(),
            "points": c.points,
            "triples_per_point": c.triples,
            "seed": c.seed,
            "max_residual": worst,
            "max_divergence_error": worst_div,
        }),
        checks,
        table: None,
    })
}

fn limit_command(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    let grid = grid_of(cfg)?;
    let m = cfg.metric()?;
    let radii = cfg.radii()?;
    let tol = &cfg.tolerances;
    let rows: Vec<LimitRow> = if command == Command::LimitAdm {
        adm_limit_table(&m, &radii, &grid)?
    } else {
        hyperbolic_limit_table(&m, &radii, &grid)?
    };
    let ratios: Vec<f64> = rows.windows(2).map(|w| w[1].integrand_value / w[0].integrand_value).collect();
    let mut checks = Vec::new();
    let last = rows.last().expect("non-empty radii");
    if m.mass == 0.0 {
        let worst = rows.iter().map(|r| r.integrand_value.abs().max(r.mass_estimate.abs())).fold(0.0, f64::max);
        checks.push(Check::at_most("reference_rows_vanish", worst, tol.flat_rows));
    } else if command == Command::LimitAdm {
        for (i, q) in ratios.iter().enumerate() {
            checks.push(Check::at_most(&format!("decay_ratio_{i}"), (q - 0.5).abs() / 0.5, tol.adm_ratio_rel));
        }
        checks.push(Check::at_most(
            "mass_estimate_at_largest_radius",
            relative(last.mass_estimate, m.mass),
            tol.adm_mass_rel,
        ));
    } else {
        let monotone = rows.windows(2).all(|w| w[1].integrand_value.abs() < w[0].integrand_value.abs());
        checks.push(Check::holds("monotone_decay", monotone));
        checks.push(Check::at_most(
            "integrand_at_largest_radius",
            last.integrand_value.abs() / m.mass,
            tol.hyperbolic_final,
        ));
        checks.push(Check::at_most(
            "mass_estimate_at_largest_radius",
            relative(last.mass_estimate, m.mass),
            tol.hyperbolic_mass_rel,
        ));
    }
    let table = Table {
        header: vec!["radius".into(), "integrand_value".into(), "mass_estimate".into()],
        rows: rows.iter().map(|r| vec![r.radius, r.integrand_value, r.mass_estimate]).collect(),
    };
    Ok(Outcome { results: json!({ "rows": rows, "decay_ratios": ratios }), checks, table: Some(table) })
}

/// Residual of the configured identity on one grid.
fn convergence_residual(cfg: &RunConfig, target: ConvergenceTarget, grid: &Grid) -> Result<f64> {
    match target {
        ConvergenceTarget::MinkowskiFormula => {
            let (_, _, g) = physical(cfg, grid)?;
            Ok(minkowski_formula_20(&g, grid)?.residual)
        }
        ConvergenceTarget::Comparison => {
            let (_, chart, p) = physical(cfg, grid)?;
            let (variant, r) = reference_geometry(&cfg.reference()?, &chart, grid)?;
            Ok(comparison_identity(&p, &r, variant, grid)?.residual)
        }
        ConvergenceTarget::GaussCodazzi => {
            let (_, _, g) = physical(cfg, grid)?;
            Ok(gauss_codazzi_residual(&g, grid)?.max())
        }
        ConvergenceTarget::CurvatureForm => {
            let (_, chart, p) = physical(cfg, grid)?;
            let r = isometric_reference(&chart, Ambient::Euclidean3, grid)?;
            Ok((liu_yau_mass(&p, &r, grid)?.value - liu_yau_curvature_form(&p, &r, grid)?.value).abs())
        }
    }
}

fn convergence(cfg: &RunConfig) -> Result<Outcome> {
    let conv =
        cfg.convergence.clone().ok_or_else(|| QlmError::Config("convergence needs a [convergence] section".into()))?;
    let tol = &cfg.tolerances;
    let mut rows = Vec::new();
    for &n in &conv.levels {
        let grid = make_grid(n, cfg.resolution.n_phi)?;
        rows.push((n, cfg.resolution.n_phi, convergence_residual(cfg, conv.identity, &grid)?));
    }
    let floor = tol.rounding_floor;
    let mut checks = Vec::new();
    let mut orders = Vec::new();
    for (i, w) in rows.windows(2).enumerate() {
        let (a, b) = (w[0].2, w[1].2);
        let at_floor = b <= floor;
        orders.push(if a > 0.0 && b > 0.0 {
            (a / b).log2() / ((w[1].0 as f64) / (w[0].0 as f64)).log2()
        } else {
            f64::NAN
        });
        checks.push(Check::holds(&format!("monotone_{i}"), b <= a || (at_floor && a <= floor)));
        let factor = if b > 0.0 { a / b } else { f64::INFINITY };
        checks.push(Check {
            name: format!("decay_factor_{i}"),
            passed: factor >= tol.convergence_factor || at_floor,
            value: factor,
            requirement: format!(">= {} or residual <= {floor:e}", tol.convergence_factor),
        });
    }
    let table = Table {
        header: vec!["n_theta".into(), "n_phi".into(), "residual".into()],
        rows: rows.iter().map(|(a, b, c)| vec![*a as f64, *b as f64, *c]).collect(),
    };
    let results = json!({
        "identity": conv.identity,
        "rows": rows.iter().map(|(a, b, c)| json!({"n_theta": a, "n_phi": b, "residual": c})).collect::<Vec<_>>(),
        "observed_order": orders.iter().map(|o| if o.is_finite() { json!(o) } else { Value::Null }).collect::<Vec<_>>(),
        "rounding_floor": floor,
    });
    Ok(Outcome { results, checks, table: Some(table) })
}

fn write_outputs(dir: &Path, command: Command, report: &Report, table: Option<&Table>) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let name = command.name();
    let mut text = serde_json::to_string_pretty(report).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(dir.join(format!("{name}.json")), text)?;
    if let Some(t) = table {
        let mut w = csv::Writer::from_path(dir.join(format!("{name}.csv")))?;
        w.write_record(&t.header)?;
        for row in &t.rows {
            w.write_record(row.iter().map(|v| serde_json::to_string(v).unwrap_or_else(|_| "NaN".into())))?;
        }
        w.flush()?;
    }
    Ok(())
}

/// Parse arguments, run, write the report, return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let cfg = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let outcome = match execute(args.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let passed = outcome.passed();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: args.command.name(),
        config: cfg,
        results: outcome.results,
        checks: outcome.checks,
        passed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    if let Err(e) = write_outputs(&args.out, args.command, &report, outcome.table.as_ref()) {
        eprintln!("error: cannot write report to {}: {e}", args.out.display());
        return 1;
    }
    for c in &report.checks {
        println!("{} {} = {:e} (required {})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.requirement);
    }
    println!("{}: {}", report.command, if passed { "pass" } else { "fail" });
    if passed {
        0
    } else {
        2
    }
}
