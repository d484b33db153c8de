//! The plain cyclic sum of `nabla R` closes only for Berwald-type metrics; in
//! general the Chern connection needs the `P . R` correction below.

use finsler::curvature::{bianchi_residual, covariant_gradient, CurvatureJets};
use finsler::error::Result;
use finsler::jet::DiffConfig;
use finsler::metric::{MetricSpec, Poly};
use finsler::tensor::{BundlePoint, Signature, TensorValue};
use finsler::zoo;

fn pt(x: &[f64], y: &[f64]) -> BundlePoint {
    BundlePoint::new(x.to_vec(), y.to_vec()).unwrap()
}

/// `T[j,k,l,i] = R^i_jkl`.
fn raised(spec: &MetricSpec, q: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    let n = q.dim();
    let cj = CurvatureJets::compute(spec, q, 4, cfg)?;
    Ok(TensorValue::from_fn(Signature::new(0, 3, 1), q, |ix| {
        let (j, k, l, i) = (ix[0], ix[1], ix[2], ix[3]);
        (0..n)
            .map(|m| cj.chern.g_inv[i * n + m].value() * cj.r[((j * n + m) * n + l) * n + k].value())
            .sum()
    }))
}

/// `(plain cyclic sum, cyclic sum minus P.R)`.
fn residuals(spec: &MetricSpec, p: &BundlePoint) -> (f64, f64) {
    let cfg = DiffConfig::default();
    let n = p.dim();
    let grad = covariant_gradient(spec, p, |q| raised(spec, q, &cfg), &cfg).unwrap();
    let r = raised(spec, p, &cfg).unwrap();
    let cj = CurvatureJets::compute(spec, p, 4, &cfg).unwrap();
    let f = cj.chern.energy.value().sqrt();
    let l: Vec<f64> = p.y().iter().map(|v| v / f).collect();
    let pp = |i: usize, j: usize, k: usize, s: usize| -f * cj.chern.gamma_at(i, j, k).derivative(n + s).unwrap().value();
    let rf = |u: usize, k: usize, s: usize| (0..n).map(|j| l[j] * r.get(&[j, k, s, u])).sum::<f64>();
    let (mut plain, mut fixed) = (0.0f64, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for s in 0..n {
                    for m in 0..n {
                        let cyc = grad[m].get(&[j, k, s, i]) + grad[k].get(&[j, s, m, i]) + grad[s].get(&[j, m, k, i]);
                        let corr: f64 = (0..n)
                            .map(|u| pp(i, j, k, u) * rf(u, s, m) + pp(i, j, s, u) * rf(u, m, k) + pp(i, j, m, u) * rf(u, k, s))
                            .sum();
                        plain = plain.max(cyc.abs());
                        fixed = fixed.max((cyc - corr).abs());
                    }
                }
            }
        }
    }
    (plain, fixed)
}

fn randers_over_sphere() -> MetricSpec {
    MetricSpec::randers(
        MetricSpec::round_sphere(3, 1.0).unwrap(),
        vec![Poly::monomial(0.2, 1, 1), Poly::constant(0.1), Poly::monomial(-0.1, 0, 1)],
    )
    .unwrap()
}

#[test]
fn corrected_identity_closes_for_non_berwald_randers() {
    let cases = [
        (randers_over_sphere(), pt(&[1.0, 1.2, 0.2], &[0.5, -0.3, 0.4])),
        (zoo::randers_3d(), pt(&[0.3, -0.2, 0.1], &[0.6, 0.2, -0.5])),
    ];
    for (spec, p) in cases {
        let (plain, fixed) = residuals(&spec, &p);
        assert!(plain > 1e-3, "plain cyclic sum unexpectedly small: {plain:e}");
        assert!(fixed < 1e-8, "corrected sum {fixed:e}");
    }
}

#[test]
fn plain_identity_holds_for_berwald_and_riemannian() {
    let cfg = DiffConfig::default();
    for spec in [zoo::berwald_randers_3d(), MetricSpec::round_sphere(3, 1.0).unwrap(), zoo::quadratic_3d()] {
        let p = pt(&[0.4, 1.1, 0.3], &[0.5, -0.3, 0.4]);
        assert!(bianchi_residual(&spec, &p, &cfg).unwrap() < 1e-8);
        let (plain, fixed) = residuals(&spec, &p);
        assert!(plain < 1e-8 && fixed < 1e-8);
    }
}
