//! hh-curvature of the Chern connection and its traces.
//!
//! Component convention: `R_lijk = g(phi(d_k, d_j) e_l, e_i) = g_im R^m_lkj`,
//! where `R^i_jkl = d_k Gamma^i_jl - d_l Gamma^i_jk + Gamma^i_km Gamma^m_jl -
//! Gamma^i_lm Gamma^m_jk` and `d_k` is the horizontal frame. Then
//! `Ric_ij = g^kl R_ikjl = R^l_ilj`, positive on round spheres.

use serde::{Deserialize, Serialize};

use crate::connection::{chern_coefficients, ChernJets};
use crate::error::{GeometryError, Result};
use crate::jet::{outer_fd, DiffConfig, Jet};
use crate::metric::MetricSpec;
use crate::tensor::{increment, BundlePoint, Signature, SlotKind, TensorValue};

/// Curvature jets: order `K - 4` for expansion order `K`.
#[derive(Debug, Clone)]
pub struct CurvatureJets {
    pub chern: ChernJets,
    /// `R_lijk` at `((l * n + i) * n + j) * n + k`.
    pub r: Vec<Jet>,
    /// `Ric_ij` at `i * n + j`.
    pub ric: Vec<Jet>,
    pub scal: Jet,
}

impl CurvatureJets {
    pub fn compute(spec: &MetricSpec, p: &BundlePoint, order: usize, cfg: &DiffConfig) -> Result<CurvatureJets> {
        if order < 4 {
            return Err(GeometryError::Capability {
                requested: 4,
                available: order,
            });
        }
        let ch = ChernJets::compute(spec, p, order, cfg)?;
        let n = ch.n;
        let idx4 = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;

        // dgam[idx4(i, j, l, k)] = delta_k Gamma^i_jl
        let mut dgam = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for k in 0..n {
                        dgam.push(ch.delta(ch.gamma_at(i, j, l), k)?);
                    }
                }
            }
        }
        let mut up = Vec::with_capacity(n.pow(4));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = &dgam[idx4(i, j, l, k)] - &dgam[idx4(i, j, k, l)];
                        for m in 0..n {
                            acc = &acc + &(ch.gamma_at(i, k, m) * ch.gamma_at(m, j, l));
                            acc = &acc - &(ch.gamma_at(i, l, m) * ch.gamma_at(m, j, k));
                        }
                        up.push(acc);
                    }
                }
            }
        }

        let mut r = Vec::with_capacity(n.pow(4));
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let mut acc = &ch.g[i * n] * &up[idx4(0, l, k, j)];
                        for m in 1..n {
                            acc = &acc + &(&ch.g[i * n + m] * &up[idx4(m, l, k, j)]);
                        }
                        r.push(acc);
                    }
                }
            }
        }

        // Ric_ij = R^l_ilj
        let mut ric = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = up[idx4(0, i, 0, j)].clone();
                for l in 1..n {
                    acc = &acc + &up[idx4(l, i, l, j)];
                }
                ric.push(acc);
            }
        }
        let mut scal = &ch.g_inv[0] * &ric[0];
        for k in 1..n * n {
            scal = &scal + &(&ch.g_inv[k] * &ric[k]);
        }
        Ok(CurvatureJets { chern: ch, r, ric, scal })
    }

    pub fn n(&self) -> usize {
        self.chern.n
    }

    pub fn bundle(&self) -> CurvatureBundle {
        let n = self.n();
        let p = &self.chern.point;
        let g = |i: usize, j: usize| self.chern.g[i * n + j].value();
        let ric = |i: usize, j: usize| self.ric[i * n + j].value();
        let scal = self.scal.value();
        let f = self.chern.energy.value().sqrt();
        let l: Vec<f64> = p.y().iter().map(|v| v / f).collect();
        let mut az = 0.0;
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                az += l[i] * l[j] * ric(i, j);
                asym = asym.max((ric(i, j) - ric(j, i)).abs());
            }
        }
        CurvatureBundle {
            r: TensorValue::from_components(Signature::new(2, 2, 0), p, self.r.iter().map(Jet::value).collect())
                .expect("curvature has n^4 components"),
            ric: TensorValue::from_fn(Signature::new(1, 1, 0), p, |ix| ric(ix[0], ix[1])),
            scal,
            e: TensorValue::from_fn(Signature::new(1, 1, 0), p, |ix| {
                ric(ix[0], ix[1]) - scal / n as f64 * g(ix[0], ix[1])
            }),
            ricci_scalar_az: az,
            ric_asymmetry: asym,
            base: p.clone(),
        }
    }
}

/// Curvature values at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureBundle {
    #[serde(rename = "R")]
    pub r: TensorValue,
    #[serde(rename = "ric_h")]
    pub ric: TensorValue,
    #[serde(rename = "scal_h")]
    pub scal: f64,
    #[serde(rename = "trace_free_ricci")]
    pub e: TensorValue,
    pub ricci_scalar_az: f64,
    /// `max |Ric_ij - Ric_ji|`; Ric is never symmetrized.
    pub ric_asymmetry: f64,
    pub base: BundlePoint,
}

pub fn curvature_bundle(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<CurvatureBundle> {
    Ok(CurvatureJets::compute(spec, p, 4, cfg)?.bundle())
}

pub fn hh_curvature(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    Ok(curvature_bundle(spec, p, cfg)?.r)
}

pub fn ricci_h(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    Ok(curvature_bundle(spec, p, cfg)?.ric)
}

pub fn scal_h(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    Ok(curvature_bundle(spec, p, cfg)?.scal)
}

pub fn trace_free_ricci(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    Ok(curvature_bundle(spec, p, cfg)?.e)
}

pub fn akbar_zadeh_ric(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    Ok(curvature_bundle(spec, p, cfg)?.ricci_scalar_az)
}

/// `k = Ric_AZ / (n - 1)`.
pub fn einstein_k(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    let n = p.dim();
    if n < 2 {
        return Err(GeometryError::Dimension("k is undefined in dimension 1".into()));
    }
    Ok(akbar_zadeh_ric(spec, p, cfg)? / (n - 1) as f64)
}

/// `max |Ric - Scal/n g|`.
pub fn einstein_residual(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    Ok(curvature_bundle(spec, p, cfg)?.e.max_abs())
}

/// Horizontal covariant derivatives of a tensor field in every direction:
/// entry `k` is `nabla_k T`, computed from outer finite differences.
pub fn covariant_gradient<F>(spec: &MetricSpec, p: &BundlePoint, field: F, cfg: &DiffConfig) -> Result<Vec<TensorValue>>
where
    F: Fn(&BundlePoint) -> Result<TensorValue>,
{
    let n = p.dim();
    let t = field(p)?;
    let conn = chern_coefficients(spec, p, cfg)?;
    let d: Vec<TensorValue> = (0..2 * n).map(|c| outer_fd(&field, p, c, cfg)).collect::<Result<_>>()?;
    (0..n)
        .map(|k| {
            let mut delta = d[k].clone();
            for m in 0..n {
                delta = delta.sub(&d[n + m].scale(conn.n(m, k)))?;
            }
            Ok(connection_terms(&t, delta, k, |a, b, c| conn.gamma(a, b, c)))
        })
        .collect()
}

/// Adds the connection terms of `nabla_k` to a frame derivative `delta_k T`.
pub(crate) fn connection_terms(
    t: &TensorValue,
    mut out: TensorValue,
    k: usize,
    gamma: impl Fn(usize, usize, usize) -> f64,
) -> TensorValue {
    let n = t.dim();
    let kinds = t.signature().slots();
    let rank = kinds.len();
    let mut idx = vec![0usize; rank];
    let mut moved = vec![0usize; rank];
    for _ in 0..t.components().len() {
        let mut acc = out.get(&idx);
        for (s, kind) in kinds.iter().enumerate() {
            moved.copy_from_slice(&idx);
            for m in 0..n {
                moved[s] = m;
                match kind {
                    SlotKind::Upper => acc += gamma(idx[s], m, k) * t.get(&moved),
                    _ => acc -= gamma(m, idx[s], k) * t.get(&moved),
                }
            }
        }
        out.set(&idx, acc);
        increment(&mut idx, n);
    }
    out
}

/// `nabla_k T` in one horizontal direction.
pub fn horizontal_covariant_derivative<F>(
    spec: &MetricSpec,
    p: &BundlePoint,
    field: F,
    k: usize,
    cfg: &DiffConfig,
) -> Result<TensorValue>
where
    F: Fn(&BundlePoint) -> Result<TensorValue>,
{
    let n = p.dim();
    if k >= n {
        return Err(GeometryError::Dimension(format!("direction {k} out of range for dimension {n}")));
    }
    let t = field(p)?;
    let conn = chern_coefficients(spec, p, cfg)?;
    let mut delta = outer_fd(&field, p, k, cfg)?;
    for m in 0..n {
        let dy = outer_fd(&field, p, n + m, cfg)?;
        delta = delta.sub(&dy.scale(conn.n(m, k)))?;
    }
    Ok(connection_terms(&t, delta, k, |a, b, c| conn.gamma(a, b, c)))
}

/// `max |nabla_s R_lijk + nabla_j R_liks + nabla_k R_lisj|`.
pub fn bianchi_residual(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    let n = p.dim();
    let grad = covariant_gradient(spec, p, |q| hh_curvature(spec, q, cfg), cfg)?;
    let mut worst = 0.0f64;
    let mut idx = [0usize; 5];
    for _ in 0..n.pow(5) {
        let [l, i, j, k, s] = idx;
        let sum = grad[s].get(&[l, i, j, k]) + grad[j].get(&[l, i, k, s]) + grad[k].get(&[l, i, s, j]);
        worst = worst.max(sum.abs());
        increment(&mut idx, n);
    }
    Ok(worst)
}

/// `max_k |nabla_k Scal|`.
pub fn schur_gradient(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    let grad = covariant_gradient(spec, p, |q| Ok(TensorValue::scalar(q, scal_h(spec, q, cfg)?)), cfg)?;
    Ok(grad.iter().fold(0.0f64, |m, t| m.max(t.max_abs())))
}
