//! Conformal deformations `e^u F`, the conformally R-Einstein residual, and
//! the conformal tensor hierarchy.

mod classify;
mod factor;
mod tensors;

use serde::{Deserialize, Serialize};

use crate::curvature::{einstein_residual, CurvatureJets};
use crate::error::Result;
use crate::jet::DiffConfig;
use crate::metric::{Family, MetricSpec};
use crate::tensor::{BundlePoint, Signature, TensorValue};

pub use classify::{classify, ConformalClassification, FactorResidual, Thresholds, Verdict};
pub use factor::{ConformalFactor, FactorKind};
pub use tensors::{
    bach, cotton_york, cotton_york_fd, cotton_york_jets, schouten, schouten_jets, weyl, weyl_divergence_check,
};

/// The metric `e^u F`.
pub fn deform(spec: &MetricSpec, u: &ConformalFactor) -> Result<MetricSpec> {
    MetricSpec::new(
        spec.dim(),
        Family::Conformal {
            base: Box::new(spec.clone()),
            factor: u.clone(),
        },
    )
}

/// `u` and its horizontal Hessian `H_ij = d_i d_j u - Gamma^m_ij d_m u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDerivatives {
    pub u: f64,
    pub grad: Vec<f64>,
    pub hess_h: Vec<f64>,
}

/// `B^i_j = (1/2F) d_r u d(F^2 g^ir - 2 y^i y^r)/dy^j`, stored at `i * n + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BMap {
    pub components: Vec<f64>,
}

struct LceParts {
    e: Vec<f64>,
    g: Vec<f64>,
    g_inv: Vec<f64>,
    f: f64,
    /// `d(F^2 g^rs - 2 y^r y^s)/dy^q` at `(r * n + s) * n + q`.
    d: Vec<f64>,
    /// `I_s = g^kl A_skl`.
    mean_cartan: Vec<f64>,
    du: FactorDerivatives,
}

fn lce_parts(spec: &MetricSpec, u: &ConformalFactor, p: &BundlePoint, cfg: &DiffConfig) -> Result<LceParts> {
    let n = p.dim();
    u.validate(n)?;
    let cj = CurvatureJets::compute(spec, p, 4, cfg)?;
    let ch = &cj.chern;
    let b = cj.bundle();
    let val = |v: &[crate::jet::Jet]| v.iter().map(|j| j.value()).collect::<Vec<_>>();
    let g = val(&ch.g);
    let g_inv = val(&ch.g_inv);
    let f = ch.energy.value().sqrt();

    let mut d = vec![0.0; n * n * n];
    for r in 0..n {
        for s in 0..n {
            let h = &(&ch.energy * &ch.g_inv[r * n + s]) - &(&ch.y[r] * &ch.y[s]).scale(2.0);
            for q in 0..n {
                d[(r * n + s) * n + q] = h.derivative(n + q)?.value();
            }
        }
    }
    let mut mean_cartan = vec![0.0; n];
    for (s, out) in mean_cartan.iter_mut().enumerate() {
        for k in 0..n {
            for l in 0..n {
                let a = 0.5 * f * ch.g[s * n + k].derivative(n + l)?.value();
                *out += g_inv[k * n + l] * a;
            }
        }
    }

    let (uv, grad, hess) = u.derivatives(p.x())?;
    let mut hess_h = hess;
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                hess_h[i * n + j] -= ch.gamma_at(m, i, j).value() * grad[m];
            }
        }
    }
    Ok(LceParts {
        e: b.e.into_components(),
        g,
        g_inv,
        f,
        d,
        mean_cartan,
        du: FactorDerivatives { u: uv, grad, hess_h },
    })
}

pub fn factor_derivatives(
    spec: &MetricSpec,
    u: &ConformalFactor,
    p: &BundlePoint,
    cfg: &DiffConfig,
) -> Result<FactorDerivatives> {
    let n = p.dim();
    let (uv, grad, mut hess) = u.derivatives(p.x())?;
    let conn = crate::connection::chern_coefficients(spec, p, cfg)?;
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                hess[i * n + j] -= conn.gamma(m, i, j) * grad[m];
            }
        }
    }
    Ok(FactorDerivatives {
        u: uv,
        grad,
        hess_h: hess,
    })
}

pub fn b_map(spec: &MetricSpec, u: &ConformalFactor, p: &BundlePoint, cfg: &DiffConfig) -> Result<BMap> {
    let parts = lce_parts(spec, u, p, cfg)?;
    let n = p.dim();
    let mut components = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let s: f64 = (0..n).map(|r| parts.du.grad[r] * parts.d[(i * n + r) * n + j]).sum();
            components[i * n + j] = s / (2.0 * parts.f);
        }
    }
    Ok(BMap { components })
}

/// Left side of the conformally R-Einstein equation for `e^u F`:
///
/// `E - (n-2)(H - du du) + (n-2)/n (tr H - |du|^2) g
///  + (n-1)/(2nF) d_r u d^q u d(F^2 g^rs - 2 y^r y^s)/dy^q I_s g`.
pub fn lce_residual(spec: &MetricSpec, u: &ConformalFactor, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    let n = p.dim();
    let nf = n as f64;
    let c = lce_parts(spec, u, p, cfg)?;
    let du = &c.du.grad;
    let h = &c.du.hess_h;
    let mut trace_h = 0.0;
    let mut du2 = 0.0;
    let mut du_up = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            trace_h += c.g_inv[i * n + j] * h[i * n + j];
            du2 += c.g_inv[i * n + j] * du[i] * du[j];
            du_up[i] += c.g_inv[i * n + j] * du[j];
        }
    }
    let mut third = 0.0;
    for r in 0..n {
        for q in 0..n {
            for s in 0..n {
                third += du[r] * du_up[q] * c.d[(r * n + s) * n + q] * c.mean_cartan[s];
            }
        }
    }
    third *= (nf - 1.0) / (2.0 * nf * c.f);
    let out = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            c.e[k] - (nf - 2.0) * (h[k] - du[i] * du[j]) + (nf - 2.0) / nf * (trace_h - du2) * c.g[k] + third * c.g[k]
        })
        .collect();
    TensorValue::from_components(Signature::new(1, 1, 0), p, out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPathPoint {
    pub residual_norm: f64,
    pub direct_norm: f64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPathReport {
    pub threshold: f64,
    pub points: Vec<TwoPathPoint>,
    pub all_agree: bool,
}

/// Compare the residual with the trace-free Ricci of `e^u F` computed
/// directly; both are classified zero/nonzero against `threshold`.
pub fn direct_vs_residual_check(
    spec: &MetricSpec,
    u: &ConformalFactor,
    points: &[BundlePoint],
    cfg: &DiffConfig,
    threshold: f64,
) -> Result<TwoPathReport> {
    let deformed = deform(spec, u)?;
    let points = points
        .iter()
        .map(|p| {
            let residual_norm = lce_residual(spec, u, p, cfg)?.max_abs();
            let direct_norm = einstein_residual(&deformed, p, cfg)?;
            Ok(TwoPathPoint {
                residual_norm,
                direct_norm,
                agree: (residual_norm <= threshold) == (direct_norm <= threshold),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoPathReport {
        threshold,
        all_agree: points.iter().all(|p| p.agree),
        points,
    })
}
