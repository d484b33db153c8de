//! Independent classical-Riemannian oracle: Christoffel symbols, Riemann,
//! Ricci and scalar curvature from a hand-written metric matrix `g(x)` and
//! finite differences of `g` only.

#![allow(dead_code)]

use nalgebra::DMatrix;

pub type MetricFn = fn(&[f64]) -> DMatrix<f64>;

const H: f64 = 1e-3;

fn shifted(x: &[f64], k: usize, d: f64) -> Vec<f64> {
    let mut v = x.to_vec();
    v[k] += d;
    v
}

fn d1<F: Fn(&[f64]) -> DMatrix<f64>>(f: &F, x: &[f64], k: usize, h: f64) -> DMatrix<f64> {
    (f(&shifted(x, k, -2.0 * h)) - f(&shifted(x, k, 2.0 * h))
        + (f(&shifted(x, k, h)) - f(&shifted(x, k, -h))) * 8.0)
        / (12.0 * h)
}

pub struct Classical {
    pub n: usize,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `gamma[i][j][k] = Gamma^i_jk`
    pub gamma: Vec<Vec<Vec<f64>>>,
    /// `riemann[i][j][k][l] = R^i_jkl = d_k Gamma^i_jl - d_l Gamma^i_jk + ..`
    pub riemann: Vec<Vec<Vec<Vec<f64>>>>,
    pub ricci: DMatrix<f64>,
    pub scal: f64,
}

fn christoffel(g: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Vec<Vec<Vec<f64>>> {
    let n = g.nrows();
    let gi = g.clone().try_inverse().expect("oracle metric singular");
    let mut out = vec![vec![vec![0.0; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j][k] = 0.5
                    * (0..n)
                        .map(|l| gi[(i, l)] * (dg[j][(l, k)] + dg[k][(l, j)] - dg[l][(j, k)]))
                        .sum::<f64>();
            }
        }
    }
    out
}

pub fn classical(metric: MetricFn, x: &[f64]) -> Classical {
    let n = x.len();
    let g = metric(x);
    let g_inv = g.clone().try_inverse().unwrap();
    let dg_at = |y: &[f64]| (0..n).map(|k| d1(&metric, y, k, H)).collect::<Vec<_>>();
    let gamma_at = |y: &[f64]| christoffel(&metric(y), &dg_at(y));
    let gamma = gamma_at(x);
    // d_m Gamma^i_jk by differencing the oracle Christoffels
    let mut dgamma = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for m in 0..n {
        let h = 2.0 * H;
        let at = |d: f64| gamma_at(&shifted(x, m, d));
        let (a, b, c, e) = (at(-2.0 * h), at(-h), at(h), at(2.0 * h));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    dgamma[m][i][j][k] = (a[i][j][k] - e[i][j][k] + 8.0 * (c[i][j][k] - b[i][j][k])) / (12.0 * h);
                }
            }
        }
    }
    let mut riemann = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = dgamma[k][i][j][l] - dgamma[l][i][j][k];
                    for m in 0..n {
                        v += gamma[i][k][m] * gamma[m][j][l] - gamma[i][l][m] * gamma[m][j][k];
                    }
                    riemann[i][j][k][l] = v;
                }
            }
        }
    }
    let ricci = DMatrix::from_fn(n, n, |i, j| (0..n).map(|l| riemann[l][i][l][j]).sum());
    let scal = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| g_inv[(i, j)] * ricci[(i, j)]).sum();
    Classical {
        n,
        g,
        g_inv,
        gamma,
        riemann,
        ricci,
        scal,
    }
}

impl Classical {
    /// Lowered component in the engine's slot order: `g_im R^m_lkj`.
    pub fn lowered(&self, l: usize, i: usize, j: usize, k: usize) -> f64 {
        (0..self.n).map(|m| self.g[(i, m)] * self.riemann[m][l][k][j]).sum()
    }
}

pub fn sphere_metric(r: f64) -> impl Fn(&[f64]) -> DMatrix<f64> {
    move |x: &[f64]| {
        let n = x.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i != j {
                return 0.0;
            }
            (0..i).fold(r * r, |w, a| w * x[a].sin().powi(2))
        })
    }
}

pub fn unit_sphere(x: &[f64]) -> DMatrix<f64> {
    sphere_metric(1.0)(x)
}

pub fn sphere_radius_2(x: &[f64]) -> DMatrix<f64> {
    sphere_metric(2.0)(x)
}

pub fn hyperbolic(x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    DMatrix::identity(n, n) / x[n - 1].powi(2)
}

/// Same matrix as `zoo::quadratic_2d`, written out by hand.
pub fn quadratic_2(x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[2.0 + x[0] * x[0], 0.3 * x[1], 0.3 * x[1], 1.0 + x[1] * x[1]])
}

/// Same matrix as `zoo::quadratic_3d`.
pub fn quadratic_3(x: &[f64]) -> DMatrix<f64> {
    let d = |v: f64| 1.5 + 0.5 * v * v;
    DMatrix::from_row_slice(
        3,
        3,
        &[
            d(x[1]), 0.2 * x[2], 0.0,
            0.2 * x[2], d(x[2]), -0.1 * x[0],
            0.0, -0.1 * x[0], d(x[0]),
        ],
    )
}

/// Max deviation of the engine's connection and curvature from the oracle.
pub fn compare(
    spec: &finsler::metric::MetricSpec,
    metric: MetricFn,
    p: &finsler::tensor::BundlePoint,
) -> f64 {
    use finsler::connection::chern_coefficients;
    use finsler::curvature::curvature_bundle;
    let cfg = finsler::jet::DiffConfig::default();
    let o = classical(metric, p.x());
    let n = o.n;
    let c = chern_coefficients(spec, p, &cfg).unwrap();
    let b = curvature_bundle(spec, p, &cfg).unwrap();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((c.gamma(i, j, k) - o.gamma[i][j][k]).abs());
                for l in 0..n {
                    worst = worst.max((b.r.get(&[l, i, j, k]) - o.lowered(l, i, j, k)).abs());
                }
            }
            worst = worst.max((b.ric.get(&[i, j]) - o.ricci[(i, j)]).abs());
        }
    }
    worst.max((b.scal - o.scal).abs())
}
