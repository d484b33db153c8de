//! Schouten, Weyl, Cotton-York and Bach tensors of the horizontal curvature.

use crate::curvature::{covariant_gradient, CurvatureJets};
use crate::error::{GeometryError, Result};
use crate::jet::{DiffConfig, Jet};
use crate::metric::MetricSpec;
use crate::tensor::{increment, BundlePoint, Signature, TensorValue};

fn need_dim3(n: usize, what: &str) -> Result<()> {
    if n < 3 {
        return Err(GeometryError::Dimension(format!("{what} needs dimension >= 3, got {n}")));
    }
    Ok(())
}

/// `S_ij` as jets of order `K - 4`.
pub fn schouten_jets(cj: &CurvatureJets) -> Result<Vec<Jet>> {
    let n = cj.n();
    need_dim3(n, "Schouten tensor")?;
    let c = 1.0 / (2.0 * (n as f64 - 1.0));
    Ok((0..n * n)
        .map(|k| (&cj.ric[k] - &(&cj.scal * &cj.chern.g[k]).scale(c)).scale(1.0 / (n as f64 - 2.0)))
        .collect())
}

fn schouten_from(cj: &CurvatureJets) -> Result<TensorValue> {
    let s = schouten_jets(cj)?;
    TensorValue::from_components(Signature::new(1, 1, 0), &cj.chern.point, s.iter().map(Jet::value).collect())
}

fn weyl_from(cj: &CurvatureJets, s: &TensorValue) -> TensorValue {
    let n = cj.n();
    let g = |i: usize, j: usize| cj.chern.g[i * n + j].value();
    let sv = |i: usize, j: usize| s.get(&[i, j]);
    TensorValue::from_fn(Signature::new(2, 2, 0), &cj.chern.point, |ix| {
        let [l, i, j, k] = [ix[0], ix[1], ix[2], ix[3]];
        cj.r[((l * n + i) * n + j) * n + k].value() - g(l, j) * sv(i, k) - g(i, k) * sv(l, j)
            + g(l, k) * sv(i, j)
            + g(i, j) * sv(l, k)
    })
}

/// `S = (Ric - Scal/(2(n-1)) g) / (n-2)`.
pub fn schouten(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    need_dim3(p.dim(), "Schouten tensor")?;
    schouten_from(&CurvatureJets::compute(spec, p, 4, cfg)?)
}

/// `W_lijk = R_lijk - g_lj S_ik - g_ik S_lj + g_lk S_ij + g_ij S_lk`.
pub fn weyl(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    need_dim3(p.dim(), "Weyl tensor")?;
    let cj = CurvatureJets::compute(spec, p, 4, cfg)?;
    let s = schouten_from(&cj)?;
    Ok(weyl_from(&cj, &s))
}

/// `C_ijk = nabla_j S_ik - nabla_k S_ij`.
///
/// Uses jets when the configured order allows one more derivative of the
/// curvature (`jet_order >= 5`), outer finite differences otherwise.
pub fn cotton_york(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    need_dim3(p.dim(), "Cotton-York tensor")?;
    if cfg.jet_order >= 5 {
        cotton_york_jets(spec, p, cfg)
    } else {
        cotton_york_fd(spec, p, cfg)
    }
}

fn cotton_from_gradient(p: &BundlePoint, grad: &[TensorValue]) -> TensorValue {
    TensorValue::from_fn(Signature::new(1, 2, 0), p, |ix| {
        let [i, j, k] = [ix[0], ix[1], ix[2]];
        grad[j].get(&[i, k]) - grad[k].get(&[i, j])
    })
}

pub fn cotton_york_fd(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    need_dim3(p.dim(), "Cotton-York tensor")?;
    let grad = covariant_gradient(spec, p, |q| schouten(spec, q, cfg), cfg)?;
    Ok(cotton_from_gradient(p, &grad))
}

/// Cotton-York from order-5 jets: no finite differences.
pub fn cotton_york_jets(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    let n = p.dim();
    need_dim3(n, "Cotton-York tensor")?;
    let cj = CurvatureJets::compute(spec, p, 5, cfg)?;
    let s = schouten_jets(&cj)?;
    let sv = TensorValue::from_components(Signature::new(1, 1, 0), p, s.iter().map(Jet::value).collect())?;
    let gamma = |a: usize, b: usize, c: usize| cj.chern.gamma_at(a, b, c).value();
    let grad = (0..n)
        .map(|k| {
            let delta = s
                .iter()
                .map(|sij| cj.chern.delta(sij, k).map(|d| d.value()))
                .collect::<Result<Vec<_>>>()?;
            let delta = TensorValue::from_components(sv.signature(), p, delta)?;
            Ok(crate::curvature::connection_terms(&sv, delta, k, gamma))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(cotton_from_gradient(p, &grad))
}

/// `B_ij = g^ks nabla_s C_ijk + S^lk W_likj`.
pub fn bach(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    let n = p.dim();
    need_dim3(n, "Bach tensor")?;
    let cj = CurvatureJets::compute(spec, p, 4, cfg)?;
    let s = schouten_from(&cj)?;
    let w = weyl_from(&cj, &s);
    let gi = |a: usize, b: usize| cj.chern.g_inv[a * n + b].value();
    let grad = covariant_gradient(spec, p, |q| cotton_york(spec, q, cfg), cfg)?;
    let mut s_up = vec![0.0; n * n];
    for l in 0..n {
        for k in 0..n {
            let mut acc = 0.0;
            for a in 0..n {
                for b in 0..n {
                    acc += gi(l, a) * s.get(&[a, b]) * gi(b, k);
                }
            }
            s_up[l * n + k] = acc;
        }
    }
    Ok(TensorValue::from_fn(Signature::new(1, 1, 0), p, |ix| {
        let [i, j] = [ix[0], ix[1]];
        let mut acc = 0.0;
        for k in 0..n {
            for s_ in 0..n {
                acc += gi(k, s_) * grad[s_].get(&[i, j, k]);
            }
            for l in 0..n {
                acc += s_up[l * n + k] * w.get(&[l, i, k, j]);
            }
        }
        acc
    }))
}

/// `max |g^ls nabla_s W_lijk - (n-3) C_ijk|`.
pub fn weyl_divergence_check(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    let n = p.dim();
    need_dim3(n, "Weyl divergence")?;
    let grad = covariant_gradient(spec, p, |q| weyl(spec, q, cfg), cfg)?;
    let c = cotton_york(spec, p, cfg)?;
    let cj = crate::connection::ChernJets::compute(spec, p, 3, cfg)?;
    let gi = |a: usize, b: usize| cj.g_inv[a * n + b].value();
    let mut worst = 0.0f64;
    let mut idx = [0usize; 3];
    for _ in 0..n.pow(3) {
        let [i, j, k] = idx;
        let mut div = 0.0;
        for l in 0..n {
            for s in 0..n {
                div += gi(l, s) * grad[s].get(&[l, i, j, k]);
            }
        }
        worst = worst.max((div - (n as f64 - 3.0) * c.get(&[i, j, k])).abs());
        increment(&mut idx, n);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::outer_fd;

    fn pt(x: &[f64], y: &[f64]) -> BundlePoint {
        BundlePoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn sphere_schouten_is_half_metric() {
        let s = MetricSpec::round_sphere(3, 1.0).unwrap();
        let p = pt(&[1.0, 1.2, 0.1], &[0.3, 0.2, -0.6]);
        let cfg = DiffConfig::default();
        let sch = schouten(&s, &p, &cfg).unwrap();
        let g = crate::metric::fundamental_tensor(&s, &p, &cfg).unwrap().g;
        for (a, b) in sch.components().iter().zip(g.components()) {
            assert!((a - 0.5 * b).abs() < 1e-10);
        }
        assert!(weyl(&s, &p, &cfg).unwrap().max_abs() < 1e-10);
        assert!(cotton_york(&s, &p, &cfg).unwrap().max_abs() < 1e-6);
    }

    #[test]
    fn schouten_derivative_paths_agree() {
        let s = MetricSpec::round_sphere(3, 1.0).unwrap();
        let p = pt(&[1.0, 1.2, 0.1], &[0.3, 0.2, -0.6]);
        let cfg = DiffConfig { jet_order: 5, ..DiffConfig::default() };
        let cj = CurvatureJets::compute(&s, &p, 5, &cfg).unwrap();
        let jets = schouten_jets(&cj).unwrap();
        let fd = outer_fd(|q| schouten(&s, q, &cfg), &p, 0, &cfg).unwrap();
        for (j, f) in jets.iter().zip(fd.components()) {
            assert!((j.partial_wrt(&[0]).unwrap() - f).abs() < 1e-6);
        }
    }

    #[test]
    fn cotton_paths_agree_on_randers() {
        let s = MetricSpec::randers(
            MetricSpec::euclidean(3),
            vec![
                crate::metric::Poly::monomial(0.2, 1, 1),
                crate::metric::Poly::monomial(-0.2, 0, 1),
                crate::metric::Poly::constant(0.0),
            ],
        )
        .unwrap();
        let p = pt(&[0.3, 0.2, 0.1], &[0.5, -0.3, 0.4]);
        let cfg = DiffConfig { jet_order: 5, ..DiffConfig::default() };
        let a = cotton_york_jets(&s, &p, &cfg).unwrap();
        let b = cotton_york_fd(&s, &p, &cfg).unwrap();
        assert!(a.max_abs() > 1e-3);
        assert!(a.sub(&b).unwrap().max_abs() < 1e-6);
    }

    #[test]
    fn low_dimension_rejected() {
        let s = MetricSpec::euclidean(2);
        assert!(matches!(
            weyl(&s, &pt(&[0.0, 0.0], &[1.0, 0.0]), &DiffConfig::default()),
            Err(GeometryError::Dimension(_))
        ));
    }
}
