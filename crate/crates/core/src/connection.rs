//! Geodesic spray, nonlinear connection and Chern connection coefficients.
//!
//! Jet variables are the bundle coordinates: `x^k` is variable `k`, `y^k`
//! is variable `n + k`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::jet::{lift, seed_indices, DiffConfig, Jet, Seed};
use crate::metric::fundamental::spd_inverse;
use crate::metric::MetricSpec;
use crate::tensor::BundlePoint;

/// Largest allowed `|N^i_j - Gamma^i_jk y^k|`.
pub const CONSISTENCY_TOL: f64 = 1e-6;

/// Jets of every connection quantity at one point.
///
/// With expansion order `K`: `g`, `g_inv` and the spray carry order `K - 2`;
/// `N` and `Gamma` carry order `K - 3`.
#[derive(Debug, Clone)]
pub struct ChernJets {
    pub n: usize,
    pub order: usize,
    pub point: BundlePoint,
    pub y: Vec<Jet>,
    pub energy: Jet,
    /// `g_ij` at `i * n + j`.
    pub g: Vec<Jet>,
    pub g_inv: Vec<Jet>,
    pub spray: Vec<Jet>,
    /// `N^i_j` at `i * n + j`.
    pub nonlinear: Vec<Jet>,
    /// `Gamma^i_jk` at `(i * n + j) * n + k`.
    pub gamma: Vec<Jet>,
}

fn jet_matmul(a: &[Jet], b: &[Jet], n: usize) -> Vec<Jet> {
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = &a[i * n] * &b[j];
            for k in 1..n {
                acc = &acc + &(&a[i * n + k] * &b[k * n + j]);
            }
            out.push(acc);
        }
    }
    out
}

/// Inverse of a jet matrix by the terminating Neumann series around its
/// constant part.
pub(crate) fn jet_inverse(m: &[Jet], n: usize) -> Result<Vec<Jet>> {
    let values = DMatrix::from_fn(n, n, |i, j| m[i * n + j].value());
    let inv0 = spd_inverse(&values)?;
    let proto = &m[0];
    let c: Vec<Jet> = (0..n * n)
        .map(|k| proto.lift_constant(inv0[(k / n, k % n)]))
        .collect();
    // -C (M - M0), nilpotent
    let d: Vec<Jet> = m.iter().map(|j| j.add_scalar(-j.value())).collect();
    let step: Vec<Jet> = jet_matmul(&c, &d, n).iter().map(|j| -j).collect();
    let mut term = c.clone();
    let mut acc = c;
    for _ in 0..proto.order() {
        term = jet_matmul(&step, &term, n);
        acc = acc.iter().zip(&term).map(|(a, t)| a + t).collect();
    }
    Ok(acc)
}

impl ChernJets {
    /// Expand everything to order `order` (at least 3).
    pub fn compute(spec: &MetricSpec, p: &BundlePoint, order: usize, cfg: &DiffConfig) -> Result<ChernJets> {
        if order < 3 {
            return Err(GeometryError::Capability {
                requested: 3,
                available: order,
            });
        }
        spec.check_point(p)?;
        let n = p.dim();
        let (x, y) = lift(p, &seed_indices(n, Seed::Both), order, cfg)?;
        let energy = spec.energy(&x, &y)?;
        let xv = |k: usize| k;
        let yv = |k: usize| n + k;

        let dy: Vec<Jet> = (0..n).map(|l| energy.derivative(yv(l))).collect::<Result<_>>()?;
        let mut g = vec![energy.lift_constant(0.0).truncate(order - 2); n * n];
        for i in 0..n {
            for j in i..n {
                let v = dy[i].derivative(yv(j))?.scale(0.5);
                g[i * n + j] = v.clone();
                g[j * n + i] = v;
            }
        }
        let g_inv = jet_inverse(&g, n)?;

        // 4 G^i = g^il (d2E/dx^k dy^l y^k - dE/dx^l)
        let dx: Vec<Jet> = (0..n).map(|l| energy.derivative(xv(l))).collect::<Result<_>>()?;
        let mut w = Vec::with_capacity(n);
        for l in 0..n {
            let mut acc = -&dx[l];
            for k in 0..n {
                acc = &acc + &(&dy[l].derivative(xv(k))? * &y[k]);
            }
            w.push(acc);
        }
        let spray: Vec<Jet> = (0..n)
            .map(|i| {
                let mut acc = &g_inv[i * n] * &w[0];
                for l in 1..n {
                    acc = &acc + &(&g_inv[i * n + l] * &w[l]);
                }
                acc.scale(0.25)
            })
            .collect();

        let mut nonlinear = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                nonlinear.push(spray[i].derivative(yv(j))?);
            }
        }

        let mut out = ChernJets {
            n,
            order,
            point: p.clone(),
            y,
            energy,
            g,
            g_inv,
            spray,
            nonlinear,
            gamma: Vec::new(),
        };

        // dg[(j*n+l)*n+k] = delta_k g_jl
        let mut dg = Vec::with_capacity(n * n * n);
        for j in 0..n {
            for l in 0..n {
                for k in 0..n {
                    dg.push(out.delta(&out.g[j * n + l], k)?);
                }
            }
        }
        let dgi = |j: usize, l: usize, k: usize| &dg[(j * n + l) * n + k];
        let mut lowered = Vec::with_capacity(n * n * n);
        for l in 0..n {
            for j in 0..n {
                for k in 0..n {
                    lowered.push((&(dgi(j, l, k) + dgi(l, k, j)) - dgi(j, k, l)).scale(0.5));
                }
            }
        }
        let mut gamma = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut acc = &out.g_inv[i * n] * &lowered[j * n + k];
                    for l in 1..n {
                        acc = &acc + &(&out.g_inv[i * n + l] * &lowered[(l * n + j) * n + k]);
                    }
                    gamma.push(acc);
                }
            }
        }
        out.gamma = gamma;

        let scale = out.nonlinear.iter().fold(1.0f64, |m, j| m.max(j.value().abs()));
        let residual = out.consistency_residual();
        if !(residual <= CONSISTENCY_TOL * scale) {
            return Err(GeometryError::Consistency {
                what: "N = Gamma y",
                residual,
            });
        }
        Ok(out)
    }

    /// `delta_k f = df/dx^k - N^m_k df/dy^m`.
    pub fn delta(&self, f: &Jet, k: usize) -> Result<Jet> {
        let n = self.n;
        let mut acc = f.derivative(k)?;
        for m in 0..n {
            acc = &acc - &(&self.nonlinear[m * n + k] * &f.derivative(n + m)?);
        }
        Ok(acc)
    }

    pub fn gamma_at(&self, i: usize, j: usize, k: usize) -> &Jet {
        &self.gamma[(i * self.n + j) * self.n + k]
    }

    /// `max |N^i_j - Gamma^i_jk y^k|` at the expansion point.
    pub fn consistency_residual(&self) -> f64 {
        let n = self.n;
        let y = self.point.y();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let contracted: f64 = (0..n).map(|k| self.gamma_at(i, j, k).value() * y[k]).sum();
                worst = worst.max((self.nonlinear[i * n + j].value() - contracted).abs());
            }
        }
        worst
    }

    pub fn values(&self) -> ConnectionData {
        ConnectionData {
            spray: self.spray.iter().map(Jet::value).collect(),
            nonlinear: self.nonlinear.iter().map(Jet::value).collect(),
            gamma: self.gamma.iter().map(Jet::value).collect(),
            base: self.point.clone(),
        }
    }
}

/// Connection values at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionData {
    #[serde(rename = "G")]
    pub spray: Vec<f64>,
    /// `N^i_j` at `i * n + j`.
    #[serde(rename = "N")]
    pub nonlinear: Vec<f64>,
    /// `Gamma^i_jk` at `(i * n + j) * n + k`.
    #[serde(rename = "Gamma")]
    pub gamma: Vec<f64>,
    pub base: BundlePoint,
}

impl ConnectionData {
    pub fn dim(&self) -> usize {
        self.spray.len()
    }

    pub fn n(&self, i: usize, j: usize) -> f64 {
        self.nonlinear[i * self.dim() + j]
    }

    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.gamma[(i * n + j) * n + k]
    }
}

/// `G^i` at `p`.
pub fn spray(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<Vec<f64>> {
    Ok(chern_coefficients(spec, p, cfg)?.spray)
}

pub fn chern_coefficients(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<ConnectionData> {
    Ok(ChernJets::compute(spec, p, 3, cfg)?.values())
}

/// `delta_k` of a field given on jets of `(x, y)`; one value per component.
pub fn delta_derivative<F>(spec: &MetricSpec, p: &BundlePoint, field: F, k: usize, cfg: &DiffConfig) -> Result<Vec<f64>>
where
    F: Fn(&[Jet], &[Jet]) -> Result<Vec<Jet>>,
{
    let n = p.dim();
    if k >= n {
        return Err(GeometryError::Dimension(format!("direction {k} out of range for dimension {n}")));
    }
    let cj = ChernJets::compute(spec, p, 3, cfg)?;
    let (x, y) = lift(p, &seed_indices(n, Seed::Both), 3, cfg)?;
    field(&x, &y)?
        .iter()
        .map(|f| cj.delta(f, k).map(|d| d.value()))
        .collect()
}
