use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::MetricSpec;
use crate::error::{GeometryError, Result};
use crate::jet::{lift, seed_indices, DiffConfig, Jet, Seed};
use crate::tensor::{BundlePoint, Signature, TensorValue};

/// `g_ij`, `g^ij`, `F` and `l^i = y^i / F` at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FundamentalTensor {
    pub g: TensorValue,
    pub g_inv: TensorValue,
    #[serde(rename = "F")]
    pub f_value: f64,
    pub l: Vec<f64>,
}

fn fiber_energy(spec: &MetricSpec, p: &BundlePoint, order: usize, cfg: &DiffConfig) -> Result<Jet> {
    spec.check_point(p)?;
    let (x, y) = lift(p, &seed_indices(p.dim(), Seed::Fiber), order, cfg)?;
    spec.energy(&x, &y)
}

/// Inverse of a symmetric positive definite matrix, or the offending eigenvalue.
pub(crate) fn spd_inverse(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(g.clone());
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(GeometryError::NotPositiveDefinite { eigenvalue: min });
    }
    let inv_diag = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| 1.0 / v));
    let inv = &eig.eigenvectors * inv_diag * eig.eigenvectors.transpose();
    Ok((&inv + inv.transpose()) * 0.5)
}

pub fn fundamental_tensor(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<FundamentalTensor> {
    let n = p.dim();
    let e = fiber_energy(spec, p, 2, cfg)?;
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = 0.5 * e.partial_wrt(&[i, j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    let inv = spd_inverse(&g)?;
    let f2 = e.value();
    if !(f2 > 0.0) {
        return Err(GeometryError::InvalidMetric(format!("F^2 = {f2} is not positive")));
    }
    let f = f2.sqrt();
    Ok(FundamentalTensor {
        g: TensorValue::from_fn(Signature::new(2, 0, 0), p, |ix| g[(ix[0], ix[1])]),
        g_inv: TensorValue::from_fn(Signature::new(0, 0, 2), p, |ix| inv[(ix[0], ix[1])]),
        f_value: f,
        l: p.y().iter().map(|v| v / f).collect(),
    })
}

/// `A_ijk = (F/2) dg_ij/dy^k`.
pub fn cartan_tensor(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<TensorValue> {
    let e = fiber_energy(spec, p, 3, cfg)?;
    let f = e.value().sqrt();
    let mut out = TensorValue::zeros(Signature::new(3, 0, 0), p);
    let n = p.dim();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let v = 0.25 * f * e.partial_wrt(&[i, j, k])?;
                for perm in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
                    out.set(&perm, v);
                }
            }
        }
    }
    Ok(out)
}

/// `I_i = g^jk A_ijk`.
pub fn mean_cartan(ft: &FundamentalTensor, a: &TensorValue) -> Vec<f64> {
    let n = ft.l.len();
    (0..n)
        .map(|i| {
            let mut s = 0.0;
            for j in 0..n {
                for k in 0..n {
                    s += ft.g_inv.get(&[j, k]) * a.get(&[i, j, k]);
                }
            }
            s
        })
        .collect()
}

/// `|I|_g`; zero exactly for Riemannian metrics.
pub fn mean_cartan_norm(spec: &MetricSpec, p: &BundlePoint, cfg: &DiffConfig) -> Result<f64> {
    let ft = fundamental_tensor(spec, p, cfg)?;
    let a = cartan_tensor(spec, p, cfg)?;
    let i = mean_cartan(&ft, &a);
    let n = i.len();
    let mut s = 0.0;
    for a in 0..n {
        for b in 0..n {
            s += ft.g_inv.get(&[a, b]) * i[a] * i[b];
        }
    }
    Ok(s.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{MinkowskiKind, Poly};

    fn pt(x: &[f64], y: &[f64]) -> BundlePoint {
        BundlePoint::new(x.to_vec(), y.to_vec()).unwrap()
    }

    fn cfg() -> DiffConfig {
        DiffConfig::default()
    }

    #[test]
    fn euclidean_identity() {
        let ft = fundamental_tensor(&MetricSpec::euclidean(3), &pt(&[0.1, 0.2, 0.3], &[1.0, -2.0, 0.5]), &cfg()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ft.g.get(&[i, j]), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn quadratic_metric_is_its_matrix() {
        let m = vec![
            vec![Poly::constant(2.0).plus(Poly::monomial(1.0, 1, 2)), Poly::constant(0.3)],
            vec![Poly::constant(0.3), Poly::constant(1.0)],
        ];
        let s = MetricSpec::quadratic(m).unwrap();
        let p = pt(&[0.4, 0.5], &[0.3, 0.9]);
        let ft = fundamental_tensor(&s, &p, &cfg()).unwrap();
        assert!((ft.g.get(&[0, 0]) - 2.25).abs() < 1e-14);
        assert!((ft.g.get(&[0, 1]) - 0.3).abs() < 1e-14);
        assert!(cartan_tensor(&s, &p, &cfg()).unwrap().max_abs() < 1e-14);
        assert!(mean_cartan_norm(&s, &p, &cfg()).unwrap() < 1e-10);
    }

    #[test]
    fn quartic_degenerates_on_axes() {
        let s = MetricSpec::minkowski(2, MinkowskiKind::Quartic, 0.0).unwrap();
        assert!(matches!(
            fundamental_tensor(&s, &pt(&[0.0, 0.0], &[1.0, 0.0]), &cfg()),
            Err(GeometryError::NotPositiveDefinite { .. })
        ));
        assert!(mean_cartan_norm(&s, &pt(&[0.0, 0.0], &[1.0, 0.6]), &cfg()).unwrap() > 1e-3);
    }

    #[test]
    fn randers_mean_cartan_positive() {
        let s = MetricSpec::randers(MetricSpec::euclidean(2), vec![Poly::constant(0.5), Poly::constant(0.0)]).unwrap();
        assert!(mean_cartan_norm(&s, &pt(&[0.0, 0.0], &[1.0, 0.2]), &cfg()).unwrap() > 1e-3);
    }

    #[test]
    fn cartan_needs_third_order() {
        let s = MetricSpec::euclidean(2);
        let c = DiffConfig { jet_order: 2, ..cfg() };
        assert!(matches!(
            cartan_tensor(&s, &pt(&[0.0, 0.0], &[1.0, 0.0]), &c),
            Err(GeometryError::Capability { requested: 3, available: 2 })
        ));
    }
}
