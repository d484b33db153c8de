use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bach, cotton_york, lce_residual, ConformalFactor};
use crate::curvature::einstein_residual;
use crate::error::Result;
use crate::jet::DiffConfig;
use crate::metric::{mean_cartan_norm, MetricSpec};
use crate::tensor::BundlePoint;

/// Per-statistic tolerances. A statistic vanishes when its maximum over the
/// sample is below `factor` times its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    pub cartan: f64,
    pub einstein: f64,
    pub cotton: f64,
    pub bach: f64,
    pub lce: f64,
    pub factor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            cartan: 1e-9,
            einstein: 1e-6,
            cotton: 1e-5,
            bach: 1e-4,
            lce: 1e-5,
            factor: 10.0,
        }
    }
}

impl Thresholds {
    pub fn vanishes(&self, value: f64, tol: f64) -> bool {
        value <= self.factor * tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "constant_factor_and_R_Einstein")]
    ConstantFactorAndREinstein,
    #[serde(rename = "riemannian")]
    Riemannian,
    #[serde(rename = "not_conformally_einstein")]
    NotConformallyEinstein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorResidual {
    pub factor: ConformalFactor,
    pub max_lce_residual: f64,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformalClassification {
    pub dim: usize,
    /// Dimension 2 only.
    pub verdict: Option<Verdict>,
    /// Dimension 3 only.
    pub cotton_vanishes: Option<bool>,
    /// Dimension 4 only.
    pub bach_vanishes: Option<bool>,
    pub max_mean_cartan_norm: f64,
    pub max_einstein_residual: f64,
    pub max_cotton: Option<f64>,
    pub max_bach: Option<f64>,
    pub factors: Vec<FactorResidual>,
    pub thresholds: Thresholds,
}

fn max_over<F>(points: &[BundlePoint], f: F) -> Result<f64>
where
    F: Fn(&BundlePoint) -> Result<f64> + Sync + Send,
{
    let v = points.par_iter().map(f).collect::<Result<Vec<_>>>()?;
    Ok(v.into_iter().fold(0.0, f64::max))
}

/// Verdicts from residuals over `points`: dimension 2 by the
/// Cartan/Einstein dichotomy, 3 by Cotton-York, 4 by Bach. Other dimensions
/// get raw statistics only.
pub fn classify(
    spec: &MetricSpec,
    factors: &[ConformalFactor],
    points: &[BundlePoint],
    cfg: &DiffConfig,
    th: &Thresholds,
) -> Result<ConformalClassification> {
    let n = spec.dim();
    let cartan = max_over(points, |p| mean_cartan_norm(spec, p, cfg))?;
    let einstein = max_over(points, |p| einstein_residual(spec, p, cfg))?;
    let verdict = (n == 2).then(|| {
        if th.vanishes(einstein, th.einstein) {
            Verdict::ConstantFactorAndREinstein
        } else if th.vanishes(cartan, th.cartan) {
            Verdict::Riemannian
        } else {
            Verdict::NotConformallyEinstein
        }
    });
    let max_cotton = if n == 3 {
        Some(max_over(points, |p| Ok(cotton_york(spec, p, cfg)?.max_abs()))?)
    } else {
        None
    };
    let max_bach = if n == 4 {
        Some(max_over(points, |p| Ok(bach(spec, p, cfg)?.max_abs()))?)
    } else {
        None
    };
    let factors = factors
        .iter()
        .map(|u| {
            let m = max_over(points, |p| Ok(lce_residual(spec, u, p, cfg)?.max_abs()))?;
            Ok(FactorResidual {
                factor: u.clone(),
                max_lce_residual: m,
                vanishes: th.vanishes(m, th.lce),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConformalClassification {
        dim: n,
        verdict,
        cotton_vanishes: max_cotton.map(|c| th.vanishes(c, th.cotton)),
        bach_vanishes: max_bach.map(|b| th.vanishes(b, th.bach)),
        max_mean_cartan_norm: cartan,
        max_einstein_residual: einstein,
        max_cotton,
        max_bach,
        factors,
        thresholds: *th,
    })
}
