//! Fundamental and Cartan tensors against finite differences of hand-written
//! `F^2`, and horizontal constancy of `F` by an independent difference sweep.

use finsler::connection::chern_coefficients;
use finsler::jet::DiffConfig;
use finsler::metric::{cartan_tensor, eval_f, fundamental_tensor, MetricSpec};
use finsler::sampling::Sampler;
use finsler::tensor::BundlePoint;
use finsler::zoo;

type Energy = fn(&[f64], &[f64]) -> f64;

fn norm(y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn randers_2(x: &[f64], y: &[f64]) -> f64 {
    (norm(y) + 0.2 * x[1] * y[0] - 0.2 * x[0] * y[1]).powi(2)
}

fn randers_3(x: &[f64], y: &[f64]) -> f64 {
    (norm(y) + 0.2 * x[1] * y[0] - 0.2 * x[0] * y[1] + 0.1 * y[2]).powi(2)
}

fn randers_sphere_2(x: &[f64], y: &[f64]) -> f64 {
    let a = (y[0] * y[0] + x[0].sin().powi(2) * y[1] * y[1]).sqrt();
    (a + 0.2 * y[0] + 0.1 * y[1]).powi(2)
}

fn minkowski(_x: &[f64], y: &[f64]) -> f64 {
    y.iter().map(|v| v * v).sum::<f64>() + 0.5 * y.iter().map(|v| v.powi(4)).sum::<f64>().sqrt()
}

fn d_y<F: Fn(&[f64]) -> f64>(f: &F, y: &[f64], k: usize, h: f64) -> f64 {
    let at = |d: f64| {
        let mut v = y.to_vec();
        v[k] += d;
        f(&v)
    };
    (at(-2.0 * h) - at(2.0 * h) + 8.0 * (at(h) - at(-h))) / (12.0 * h)
}

fn hessian(e: Energy, x: &[f64], y: &[f64], i: usize, j: usize) -> f64 {
    let inner = |v: &[f64]| d_y(&|w: &[f64]| e(x, w), v, j, 1e-3);
    0.5 * d_y(&inner, y, i, 1e-3)
}

fn cases() -> Vec<(&'static str, MetricSpec, Energy)> {
    vec![
        ("randers_2", zoo::randers_2d(), randers_2 as Energy),
        ("randers_3", zoo::randers_3d(), randers_3),
        ("randers_sphere_2", zoo::randers_sphere_2d(), randers_sphere_2),
        ("minkowski_2", zoo::by_name("minkowski_2").unwrap(), minkowski),
        ("minkowski_3", zoo::by_name("minkowski_3").unwrap(), minkowski),
    ]
}

#[test]
fn fundamental_tensor_matches_hessian() {
    let cfg = DiffConfig::default();
    for (name, spec, e) in cases() {
        for p in Sampler::new(5, 21).sample(&spec).unwrap() {
            let ft = fundamental_tensor(&spec, &p, &cfg).unwrap();
            assert!((ft.f_value - e(p.x(), p.y()).sqrt()).abs() < 1e-12, "{name}: F");
            let n = p.dim();
            for i in 0..n {
                for j in 0..n {
                    let want = hessian(e, p.x(), p.y(), i, j);
                    let got = ft.g.get(&[i, j]);
                    assert!((got - want).abs() < 1e-7, "{name} g[{i}{j}] {got} vs {want}");
                }
            }
        }
    }
}

#[test]
fn cartan_matches_third_derivative() {
    let cfg = DiffConfig::default();
    for (name, spec, e) in cases() {
        for p in Sampler::new(3, 22).sample(&spec).unwrap() {
            let a = cartan_tensor(&spec, &p, &cfg).unwrap();
            let f = e(p.x(), p.y()).sqrt();
            let n = p.dim();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let gij = |w: &[f64]| hessian(e, p.x(), w, i, j);
                        let want = 0.5 * f * d_y(&gij, p.y(), k, 1e-2);
                        let got = a.get(&[i, j, k]);
                        assert!((got - want).abs() < 1e-5, "{name} A[{i}{j}{k}] {got} vs {want}");
                    }
                }
            }
        }
    }
}

/// `dF/dx^k - N^m_k dF/dy^m` with both partials of `F` taken by differences.
fn delta_f(spec: &MetricSpec, p: &BundlePoint) -> f64 {
    let cfg = DiffConfig::default();
    let n = p.dim();
    let conn = chern_coefficients(spec, p, &cfg).unwrap();
    let f = |x: &[f64], y: &[f64]| eval_f(spec, &BundlePoint::new(x.to_vec(), y.to_vec()).unwrap()).unwrap();
    let h = 1e-4;
    let fy: Vec<f64> = (0..n).map(|m| d_y(&|w: &[f64]| f(p.x(), w), p.y(), m, h)).collect();
    (0..n)
        .map(|k| {
            let fx = d_y(&|v: &[f64]| f(v, p.y()), p.x(), k, h);
            let corr: f64 = (0..n).map(|m| conn.n(m, k) * fy[m]).sum();
            (fx - corr).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn f_is_horizontally_constant_on_the_catalogue() {
    for z in zoo::all() {
        for p in Sampler::new(50, 5).sample(&z.spec).unwrap() {
            let r = delta_f(&z.spec, &p);
            assert!(r < 1e-8, "{}: delta F = {r:e} at {:?}", z.name, p.x());
        }
    }
}
