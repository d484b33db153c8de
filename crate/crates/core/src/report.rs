//! Batch runs over sampled points and their serialized reports.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::conformal::{
    bach, classify, cotton_york, deform, lce_residual, schouten, weyl, weyl_divergence_check, ConformalClassification,
    ConformalFactor, Thresholds,
};
use crate::connection::chern_coefficients;
use crate::curvature::{bianchi_residual, curvature_bundle, einstein_k, einstein_residual, schur_gradient};
use crate::error::{GeometryError, Result};
use crate::jet::DiffConfig;
use crate::metric::{cartan_tensor, eval_f, fundamental_tensor, mean_cartan_norm, MetricSpec};
use crate::sampling::Sampler;
use crate::tensor::BundlePoint;
use crate::warped::{
    block_residual, warped_connection_residual, fiber_check, verify_cylinder_case, CylinderReport, CylinderRun, OdeKind, WarpedInput,
    S_STAR_ZERO,
};

pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Tensors,
    CheckEinstein,
    Conformal,
    Warp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub cartan: f64,
    pub einstein: f64,
    pub cotton: f64,
    pub bach: f64,
    pub lce: f64,
    pub factor: f64,
    pub bianchi: f64,
    pub schur: f64,
    pub two_path: f64,
    pub weyl: f64,
    pub weyl_divergence: f64,
    pub block: f64,
    pub homogeneity: f64,
    pub connection: f64,
    pub cylinder: f64,
    pub fiber_einstein: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let t = Thresholds::default();
        Tolerances {
            cartan: t.cartan,
            einstein: t.einstein,
            cotton: t.cotton,
            bach: t.bach,
            lce: t.lce,
            factor: t.factor,
            bianchi: 1e-4,
            schur: 1e-5,
            two_path: 1e-4,
            weyl: 1e-6,
            weyl_divergence: 1e-3,
            block: 1e-9,
            homogeneity: 1e-10,
            connection: 1e-6,
            cylinder: 1e-4,
            fiber_einstein: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn thresholds(&self) -> Thresholds {
        Thresholds {
            cartan: self.cartan,
            einstein: self.einstein,
            cotton: self.cotton,
            bach: self.bach,
            lce: self.lce,
            factor: self.factor,
        }
    }

    pub fn keys() -> Vec<String> {
        match serde_json::to_value(Tolerances::default()) {
            Ok(Value::Object(m)) => m.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }

    /// Set one tolerance by name; `-` and `_` are interchangeable.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let key = key.replace('-', "_");
        if !(value.is_finite() && value >= 0.0) {
            return Err(GeometryError::Config(format!("tolerance `{key}` must be a finite nonnegative number")));
        }
        let mut v = serde_json::to_value(*self).map_err(|e| GeometryError::Config(e.to_string()))?;
        match v.get_mut(&key) {
            Some(slot) => *slot = Value::from(value),
            None => {
                return Err(GeometryError::Config(format!(
                    "unknown tolerance `{key}`; known: {}",
                    Tolerances::keys().join(", ")
                )))
            }
        }
        *self = serde_json::from_value(v).map_err(|e| GeometryError::Config(e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricInput {
    Spec(MetricSpec),
    Warped(WarpedInput),
}

impl MetricInput {
    pub fn metric(&self) -> Result<MetricSpec> {
        match self {
            MetricInput::Spec(s) => Ok(s.clone()),
            MetricInput::Warped(w) => w.metric(),
        }
    }

    /// Dispatch on the top-level keys so errors name the intended shape.
    pub fn from_value(v: Value) -> Result<MetricInput> {
        let cfg = |shape: &str, e: serde_json::Error| GeometryError::Config(format!("{shape}: {e}"));
        let has = |k: &str| v.get(k).is_some();
        if has("family") {
            serde_json::from_value(v).map(MetricInput::Spec).map_err(|e| cfg("metric", e))
        } else if has("cylinder") || has("warp") || has("base") {
            serde_json::from_value(v).map(MetricInput::Warped).map_err(|e| cfg("warped metric", e))
        } else {
            Err(GeometryError::Config(
                "metric must have `family`, `cylinder`, or `base`/`fiber`/`warp`".into(),
            ))
        }
    }
}

/// Conformal input: one factor, a list, or a cylinder case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConformalInput {
    Factors(Vec<ConformalFactor>),
    Factor(ConformalFactor),
    Case(CaseInput),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseInput {
    pub family: OdeKind,
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
}

impl ConformalInput {
    pub fn from_value(v: Value) -> Result<ConformalInput> {
        let shape = if v.is_array() {
            "factor list"
        } else if v.get("family").is_some() {
            "cylinder case"
        } else {
            "conformal factor"
        };
        let out = match shape {
            "factor list" => serde_json::from_value(v).map(ConformalInput::Factors),
            "cylinder case" => serde_json::from_value(v).map(ConformalInput::Case),
            _ => serde_json::from_value(v).map(ConformalInput::Factor),
        };
        out.map_err(|e| GeometryError::Config(format!("{shape}: {e}")))
    }

    pub fn factors(&self) -> Vec<ConformalFactor> {
        match self {
            ConformalInput::Factors(v) => v.clone(),
            ConformalInput::Factor(f) => vec![f.clone()],
            ConformalInput::Case(_) => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSource {
    Sample(Sampler),
    Explicit(Vec<BundlePoint>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub metric: MetricInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conformal: Option<ConformalInput>,
    pub points: PointSource,
    pub diff: DiffConfig,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn new(command: Command, metric: MetricInput) -> RunConfig {
        RunConfig {
            command,
            metric,
            conformal: None,
            points: PointSource::Sample(Sampler::new(5, 0)),
            diff: DiffConfig::default(),
            tolerances: Tolerances::default(),
        }
    }

    pub fn points(&self, spec: &MetricSpec) -> Result<Vec<BundlePoint>> {
        match &self.points {
            PointSource::Sample(s) => s.sample(spec),
            PointSource::Explicit(v) => {
                if v.is_empty() {
                    return Err(GeometryError::Config("explicit point list is empty".into()));
                }
                for (i, p) in v.iter().enumerate() {
                    if p.dim() != spec.dim() {
                        return Err(GeometryError::Dimension(format!(
                            "point {i} has dimension {}, metric has {}",
                            p.dim(),
                            spec.dim()
                        )));
                    }
                    spec.check_point(p)
                        .map_err(|e| GeometryError::Config(format!("point {i}: {e}")))?;
                }
                Ok(v.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineInfo {
    pub name: String,
    pub version: String,
    pub jet_order: usize,
    pub fd_step: f64,
    pub fd_scheme: crate::jet::FdScheme,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn at_most(name: &str, value: f64, tolerance: f64) -> Check {
        Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
            note: None,
        }
    }

    fn with_note(mut self, note: &str) -> Check {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorPoint {
    pub lce_residual: Vec<f64>,
    pub lce_residual_norm: f64,
    /// Trace-free Ricci of `e^u F`.
    pub direct_norm: f64,
    pub agree: bool,
}

/// Values at one point. Tensors are flat, row-major over their slots.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: usize,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    pub f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<f64>>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub cartan: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_cartan_norm: Option<f64>,
    #[serde(rename = "G", skip_serializing_if = "Option::is_none")]
    pub spray: Option<Vec<f64>>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub nonlinear: Option<Vec<f64>>,
    #[serde(rename = "Gamma", skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Vec<f64>>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ric_h: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scal_h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_free_ricci: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ricci_scalar_az: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ric_asymmetry: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub einstein_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schur_gradient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bianchi: Option<f64>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub schouten: Option<Vec<f64>>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    pub weyl: Option<Vec<f64>>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub cotton: Option<Vec<f64>>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub bach: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weyl_divergence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<FactorPoint>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homogeneity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_connection: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_connection: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_curvature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EinsteinSummary {
    pub r_einstein: bool,
    pub ricci_flat: bool,
    pub ricci_constant: bool,
    pub scal_mean: f64,
    pub scal_spread: f64,
    pub max_einstein_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub command: Command,
    pub engine: EngineInfo,
    pub dim: usize,
    pub metric: MetricInput,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conformal: Option<ConformalInput>,
    pub points_source: PointSource,
    pub tolerances: Tolerances,
    pub points: Vec<PointRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub einstein: Option<EinsteinSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ConformalClassification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cylinder: Option<CylinderReport>,
    pub checks: Vec<Check>,
    pub pass: bool,
    /// Seconds since the Unix epoch; the only field that varies between runs.
    pub generated_at: String,
}

impl GeometryReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| GeometryError::Config(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// One row per point; nested fields are joined with `.`, arrays by index.
    pub fn to_csv(&self) -> Result<String> {
        let err = |e: String| GeometryError::Config(format!("csv: {e}"));
        let rows = self
            .points
            .iter()
            .map(|p| {
                let mut out = Vec::new();
                flatten("", &serde_json::to_value(p).map_err(|e| err(e.to_string()))?, &mut out);
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut header = Vec::new();
        let mut seen = BTreeSet::new();
        for row in &rows {
            for (k, _) in row {
                if seen.insert(k.clone()) {
                    header.push(k.clone());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).map_err(|e| err(e.to_string()))?;
        for row in &rows {
            let rec = header.iter().map(|h| {
                row.iter()
                    .find(|(k, _)| k == h)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_default()
            });
            w.write_record(rec).map_err(|e| err(e.to_string()))?;
        }
        String::from_utf8(w.into_inner().map_err(|e| err(e.to_string()))?).map_err(|e| err(e.to_string()))
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn timestamp() -> String {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs().to_string())
        .unwrap_or_default()
}

fn max_of(records: &[PointRecord], f: impl Fn(&PointRecord) -> Option<f64>) -> f64 {
    records.iter().filter_map(f).fold(0.0, f64::max)
}

fn per_point<F>(points: &[BundlePoint], f: F) -> Result<Vec<PointRecord>>
where
    F: Fn(&BundlePoint, PointRecord) -> Result<PointRecord> + Sync + Send,
{
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let rec = PointRecord {
                index: i,
                x: p.x().to_vec(),
                y: p.y().to_vec(),
                ..PointRecord::default()
            };
            f(p, rec).map_err(|e| GeometryError::Config(format!("point {i}: {e}")))
        })
        .collect()
}

fn finish(
    cfg: &RunConfig,
    spec: &MetricSpec,
    points: Vec<PointRecord>,
    checks: Vec<Check>,
) -> GeometryReport {
    GeometryReport {
        command: cfg.command,
        engine: EngineInfo {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            jet_order: cfg.diff.jet_order,
            fd_step: cfg.diff.fd_step,
            fd_scheme: cfg.diff.fd_scheme,
        },
        dim: spec.dim(),
        metric: cfg.metric.clone(),
        conformal: cfg.conformal.clone(),
        points_source: cfg.points.clone(),
        tolerances: cfg.tolerances,
        pass: checks.iter().all(|c| c.pass),
        points,
        einstein: None,
        classification: None,
        cylinder: None,
        checks,
        generated_at: timestamp(),
    }
}

/// Every curvature quantity at each point.
pub fn cmd_tensors(cfg: &RunConfig) -> Result<GeometryReport> {
    cfg.diff.validate()?;
    let spec = cfg.metric.metric()?;
    let n = spec.dim();
    let d = &cfg.diff;
    let pts = cfg.points(&spec)?;
    let records = per_point(&pts, |p, mut r| {
        let ft = fundamental_tensor(&spec, p, d)?;
        r.f = Some(ft.f_value);
        r.g = Some(ft.g.into_components());
        r.cartan = Some(cartan_tensor(&spec, p, d)?.into_components());
        r.mean_cartan_norm = Some(mean_cartan_norm(&spec, p, d)?);
        let c = chern_coefficients(&spec, p, d)?;
        r.spray = Some(c.spray);
        r.nonlinear = Some(c.nonlinear);
        r.gamma = Some(c.gamma);
        let b = curvature_bundle(&spec, p, d)?;
        r.einstein_residual = Some(b.e.max_abs());
        r.r = Some(b.r.into_components());
        r.ric_h = Some(b.ric.into_components());
        r.scal_h = Some(b.scal);
        r.trace_free_ricci = Some(b.e.into_components());
        r.ricci_scalar_az = Some(b.ricci_scalar_az);
        r.ric_asymmetry = Some(b.ric_asymmetry);
        r.bianchi = Some(bianchi_residual(&spec, p, d)?);
        if n >= 3 {
            r.schouten = Some(schouten(&spec, p, d)?.into_components());
            r.weyl = Some(weyl(&spec, p, d)?.into_components());
            r.cotton = Some(cotton_york(&spec, p, d)?.into_components());
        }
        if n == 4 {
            r.bach = Some(bach(&spec, p, d)?.into_components());
            r.weyl_divergence = Some(weyl_divergence_check(&spec, p, d)?);
        }
        Ok(r)
    })?;
    let t = &cfg.tolerances;
    let mut checks = vec![Check::at_most("bianchi", max_of(&records, |r| r.bianchi), t.bianchi)];
    if n == 3 {
        let w = max_of(&records, |r| r.weyl.as_ref().map(|w| w.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
        checks.push(Check::at_most("weyl_dim3", w, t.weyl));
    }
    if n == 4 {
        checks.push(Check::at_most(
            "weyl_divergence",
            max_of(&records, |r| r.weyl_divergence),
            t.weyl_divergence,
        ));
    }
    Ok(finish(cfg, &spec, records, checks))
}

/// R-Einstein test with the Schur gradient when `n >= 3`.
pub fn cmd_check_einstein(cfg: &RunConfig) -> Result<GeometryReport> {
    cfg.diff.validate()?;
    let spec = cfg.metric.metric()?;
    let n = spec.dim();
    let d = &cfg.diff;
    let t = &cfg.tolerances;
    let pts = cfg.points(&spec)?;
    let mut records = per_point(&pts, |p, mut r| {
        let b = curvature_bundle(&spec, p, d)?;
        r.scal_h = Some(b.scal);
        r.einstein_residual = Some(b.e.max_abs());
        r.ric_h = Some(b.ric.into_components());
        if n >= 2 {
            r.k = Some(einstein_k(&spec, p, d)?);
        }
        Ok(r)
    })?;
    let e = max_of(&records, |r| r.einstein_residual);
    let ric = max_of(&records, |r| r.ric_h.as_ref().map(|v| v.iter().fold(0.0f64, |m, x| m.max(x.abs()))));
    let scals: Vec<f64> = records.iter().filter_map(|r| r.scal_h).collect();
    let scal_mean = scals.iter().sum::<f64>() / scals.len() as f64;
    let scal_spread = scals.iter().fold(0.0f64, |m, s| m.max((s - scal_mean).abs()));
    let r_einstein = e <= t.einstein;
    let mut checks = vec![Check::at_most("einstein", e, t.einstein)];
    if n >= 3 && r_einstein {
        let grads = pts
            .par_iter()
            .map(|p| schur_gradient(&spec, p, d))
            .collect::<Result<Vec<_>>>()?;
        for (r, g) in records.iter_mut().zip(&grads) {
            r.schur_gradient = Some(*g);
        }
        checks.push(Check::at_most("schur", grads.iter().fold(0.0, |m: f64, g| m.max(*g)), t.schur));
    }
    let mut report = finish(cfg, &spec, records, checks);
    report.einstein = Some(EinsteinSummary {
        r_einstein,
        ricci_flat: ric <= t.einstein,
        ricci_constant: r_einstein && scal_spread <= t.schur.max(t.einstein),
        scal_mean,
        scal_spread,
        max_einstein_residual: e,
    });
    Ok(report)
}

/// Conformal residuals for each factor, the two-path comparison, and the
/// dimension-specific classification.
pub fn cmd_conformal(cfg: &RunConfig) -> Result<GeometryReport> {
    cfg.diff.validate()?;
    let factors = cfg.conformal.as_ref().map(|c| c.factors()).unwrap_or_default();
    if factors.is_empty() {
        return Err(GeometryError::Config("conformal needs a factor file (--conformal)".into()));
    }
    let spec = cfg.metric.metric()?;
    for f in &factors {
        f.validate(spec.dim())?;
    }
    let d = &cfg.diff;
    let t = &cfg.tolerances;
    let deformed = factors.iter().map(|u| deform(&spec, u)).collect::<Result<Vec<_>>>()?;
    let pts = cfg.points(&spec)?;
    let records = per_point(&pts, |p, mut r| {
        r.einstein_residual = Some(einstein_residual(&spec, p, d)?);
        r.mean_cartan_norm = Some(mean_cartan_norm(&spec, p, d)?);
        let fp = factors
            .iter()
            .zip(&deformed)
            .map(|(u, du)| {
                let l = lce_residual(&spec, u, p, d)?;
                let residual_norm = l.max_abs();
                let direct_norm = einstein_residual(du, p, d)?;
                Ok(FactorPoint {
                    lce_residual: l.into_components(),
                    lce_residual_norm: residual_norm,
                    direct_norm,
                    agree: (residual_norm <= t.two_path) == (direct_norm <= t.two_path),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        r.factors = Some(fp);
        Ok(r)
    })?;
    let class = classify(&spec, &factors, &pts, d, &t.thresholds())?;
    let mut checks = Vec::new();
    for (i, _) in factors.iter().enumerate() {
        let fp = |r: &PointRecord| r.factors.as_ref().map(|v| v[i].clone());
        let disagree = records.iter().filter_map(fp).filter(|f| !f.agree).count();
        checks.push(Check {
            name: format!("two_path.{i}"),
            value: disagree as f64,
            tolerance: 0.0,
            pass: disagree == 0,
            note: Some("points where the two paths disagree".into()),
        });
        checks.push(Check::at_most(
            &format!("lce.{i}"),
            class.factors[i].max_lce_residual,
            t.factor * t.lce,
        ));
    }
    let mut report = finish(cfg, &spec, records, checks);
    report.classification = Some(class);
    Ok(report)
}

fn default_case(s_star: f64) -> (OdeKind, Vec<f64>) {
    if s_star > S_STAR_ZERO {
        (OdeKind::Cosh, vec![0.0])
    } else if s_star < -S_STAR_ZERO {
        (OdeKind::Cos, vec![1.0, 0.0])
    } else {
        (OdeKind::Linear, vec![1.0, 2.0])
    }
}

/// Block structure and connection identities of a warped product; on a
/// cylinder also the conformal case matching the fiber's curvature sign.
pub fn cmd_warp(cfg: &RunConfig) -> Result<GeometryReport> {
    cfg.diff.validate()?;
    let spec = cfg.metric.metric()?;
    if spec.family_name() != "warped" {
        return Err(GeometryError::Config("warp needs a warped or cylinder metric".into()));
    }
    let d = &cfg.diff;
    let t = &cfg.tolerances;
    let pts = cfg.points(&spec)?;
    let records = per_point(&pts, |p, mut r| {
        r.block_residual = Some(block_residual(&spec, p, d)?.max());
        let f1 = eval_f(&spec, p)?;
        r.f = Some(f1);
        r.homogeneity = Some((eval_f(&spec, &p.scaled_fiber(2.0)?)? - 2.0 * f1).abs());
        let c = warped_connection_residual(&spec, p, d)?;
        r.base_connection = Some(c.base_block);
        r.mixed_connection = Some(c.mixed_block);
        r.mixed_curvature = Some(c.curvature_mixed);
        Ok(r)
    })?;
    let mut checks = vec![
        Check::at_most("block", max_of(&records, |r| r.block_residual), t.block),
        Check::at_most("homogeneity", max_of(&records, |r| r.homogeneity), t.homogeneity),
        Check::at_most("base_connection", max_of(&records, |r| r.base_connection), t.connection),
        Check::at_most("mixed_connection", max_of(&records, |r| r.mixed_connection), t.connection),
    ];
    if spec.is_riemannian() {
        checks.push(Check::at_most(
            "mixed_curvature",
            max_of(&records, |r| r.mixed_curvature),
            t.connection,
        ));
    }
    let mut case_report = None;
    let cylinder = match &cfg.metric {
        MetricInput::Warped(w) => w.cylinder().cloned(),
        MetricInput::Spec(_) => None,
    };
    if let Some(cyl) = cylinder.filter(|c| c.dim() >= 3) {
        let (grid, seed) = match &cfg.points {
            PointSource::Sample(s) => (s.count, s.seed),
            PointSource::Explicit(v) => (v.len(), 0),
        };
        let mut run = CylinderRun {
            grid,
            seed,
            tolerance: t.cylinder,
            fiber_tolerance: t.fiber_einstein,
            ..CylinderRun::default()
        };
        let (family, params) = match &cfg.conformal {
            Some(ConformalInput::Case(c)) => {
                if let Some(w) = c.window {
                    run.window = w;
                }
                (c.family, c.params.clone())
            }
            Some(_) => return Err(GeometryError::Config("warp takes a cylinder case, not factors".into())),
            None => {
                let (_, s_star) = fiber_check(&cyl, &run, d)?;
                default_case(s_star)
            }
        };
        let rep = verify_cylinder_case(&cyl, family, &params, &run, d)?;
        checks.push(match rep.pass {
            Some(ok) => Check {
                name: "cylinder_case".into(),
                value: rep.max_einstein_residual.max(rep.max_mixed_lce),
                tolerance: t.cylinder,
                pass: ok,
                note: None,
            },
            None => Check::at_most("fiber_einstein", rep.fiber.max_einstein_residual, t.fiber_einstein)
                .with_note("fiber is not R-Einstein with constant scalar curvature; no verdict"),
        });
        case_report = Some(rep);
    }
    let mut report = finish(cfg, &spec, records, checks);
    report.cylinder = case_report;
    Ok(report)
}

pub fn run(cfg: &RunConfig) -> Result<GeometryReport> {
    match cfg.command {
        Command::Tensors => cmd_tensors(cfg),
        Command::CheckEinstein => cmd_check_einstein(cfg),
        Command::Conformal => cmd_conformal(cfg),
        Command::Warp => cmd_warp(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(n: usize) -> MetricInput {
        MetricInput::Spec(MetricSpec::round_sphere(n, 1.0).unwrap())
    }

    #[test]
    fn tolerance_keys() {
        let mut t = Tolerances::default();
        t.set("two-path", 1e-3).unwrap();
        assert_eq!(t.two_path, 1e-3);
        assert!(t.set("nope", 1.0).is_err());
        assert!(t.set("lce", f64::NAN).is_err());
    }

    #[test]
    fn sphere_scal_column() {
        let r = cmd_tensors(&RunConfig::new(Command::Tensors, sphere(2))).unwrap();
        assert!(r.pass);
        assert!(r.points.iter().all(|p| (p.scal_h.unwrap() - 2.0).abs() < 1e-6));
    }

    #[test]
    fn einstein_labels() {
        let r = cmd_check_einstein(&RunConfig::new(Command::CheckEinstein, sphere(3))).unwrap();
        let e = r.einstein.unwrap();
        assert!(r.pass && e.r_einstein && e.ricci_constant && !e.ricci_flat);
    }

    #[test]
    fn conformal_needs_factor() {
        let e = cmd_conformal(&RunConfig::new(Command::Conformal, sphere(3)));
        assert!(matches!(e, Err(GeometryError::Config(_))));
    }

    #[test]
    fn csv_has_one_row_per_point() {
        let r = cmd_check_einstein(&RunConfig::new(Command::CheckEinstein, sphere(2))).unwrap();
        let csv = r.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.lines().next().unwrap().starts_with("index,x.0,x.1,y.0,y.1"));
    }

    #[test]
    fn metric_input_shapes() {
        let v = serde_json::json!({"cylinder": {"fiber": {"family": "euclidean", "dim": 2}}});
        assert!(matches!(MetricInput::from_value(v).unwrap(), MetricInput::Warped(_)));
        let e = MetricInput::from_value(serde_json::json!({"family": "randers", "dim": 2, "params": {}}));
        assert!(e.unwrap_err().to_string().contains("randers"));
    }
}
