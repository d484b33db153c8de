//! A fixed catalogue of test metrics.

use crate::metric::{MetricSpec, MinkowskiKind, Poly};
use crate::warped::{build_warped, WarpFunction};

#[derive(Debug, Clone)]
pub struct ZooMetric {
    pub name: &'static str,
    pub spec: MetricSpec,
}

fn entry(name: &'static str, spec: MetricSpec) -> ZooMetric {
    ZooMetric { name, spec }
}

fn c(v: f64) -> Poly {
    Poly::constant(v)
}

fn mono(coeff: f64, var: usize, power: u32) -> Poly {
    Poly::monomial(coeff, var, power)
}

/// `2 + x^2` style diagonal plus a small coupling.
pub fn quadratic_2d() -> MetricSpec {
    let a = c(2.0).plus(mono(1.0, 0, 2));
    let d = c(1.0).plus(mono(1.0, 1, 2));
    MetricSpec::quadratic(vec![vec![a, mono(0.3, 1, 1)], vec![mono(0.3, 1, 1), d]]).unwrap()
}

pub fn quadratic_3d() -> MetricSpec {
    let diag = |v: usize| c(1.5).plus(mono(0.5, v, 2));
    MetricSpec::quadratic(vec![
        vec![diag(1), mono(0.2, 2, 1), c(0.0)],
        vec![mono(0.2, 2, 1), diag(2), mono(-0.1, 0, 1)],
        vec![c(0.0), mono(-0.1, 0, 1), diag(0)],
    ])
    .unwrap()
}

/// `1 + x^2` on the line.
pub fn line_quadratic() -> MetricSpec {
    MetricSpec::quadratic(vec![vec![c(1.0).plus(mono(1.0, 0, 2))]]).unwrap()
}

pub fn line_randers() -> MetricSpec {
    MetricSpec::randers(MetricSpec::euclidean(1), vec![mono(0.3, 0, 1)]).unwrap()
}

/// Rotational 1-form over the plane; not of Berwald type.
pub fn randers_2d() -> MetricSpec {
    MetricSpec::randers(MetricSpec::euclidean(2), vec![mono(0.2, 1, 1), mono(-0.2, 0, 1)]).unwrap()
}

pub fn randers_3d() -> MetricSpec {
    MetricSpec::randers(
        MetricSpec::euclidean(3),
        vec![mono(0.2, 1, 1), mono(-0.2, 0, 1), c(0.1)],
    )
    .unwrap()
}

/// Randers over the round sphere with a constant 1-form in the chart.
pub fn randers_sphere_2d() -> MetricSpec {
    MetricSpec::randers(MetricSpec::round_sphere(2, 1.0).unwrap(), vec![c(0.2), c(0.1)]).unwrap()
}

/// `R x S^2` with `b = 0.3 dt`, a parallel 1-form: Berwald type.
pub fn berwald_randers_3d() -> MetricSpec {
    let alpha = build_warped(
        MetricSpec::euclidean(1),
        MetricSpec::round_sphere(2, 1.0).unwrap(),
        WarpFunction::one(),
    )
    .unwrap();
    MetricSpec::randers(alpha, vec![c(0.3), c(0.0), c(0.0)]).unwrap()
}

pub fn sphere_product() -> MetricSpec {
    build_warped(
        MetricSpec::round_sphere(2, 1.0).unwrap(),
        MetricSpec::round_sphere(2, 2.0).unwrap(),
        WarpFunction::one(),
    )
    .unwrap()
}

/// Every catalogue metric.
pub fn all() -> Vec<ZooMetric> {
    let mut v = vec![
        entry("euclidean_1", MetricSpec::euclidean(1)),
        entry("line_quadratic", line_quadratic()),
        entry("line_randers", line_randers()),
    ];
    for n in 2..=4 {
        v.push(entry(["", "", "euclidean_2", "euclidean_3", "euclidean_4"][n], MetricSpec::euclidean(n)));
        v.push(entry(
            ["", "", "sphere_2", "sphere_3", "sphere_4"][n],
            MetricSpec::round_sphere(n, 1.0).unwrap(),
        ));
        v.push(entry(
            ["", "", "hyperbolic_2", "hyperbolic_3", "hyperbolic_4"][n],
            MetricSpec::hyperbolic(n, 1.0).unwrap(),
        ));
    }
    v.extend([
        entry("sphere_2_radius_2", MetricSpec::round_sphere(2, 2.0).unwrap()),
        entry("quadratic_2", quadratic_2d()),
        entry("quadratic_3", quadratic_3d()),
        entry("randers_2", randers_2d()),
        entry("randers_sphere_2", randers_sphere_2d()),
        entry("randers_3", randers_3d()),
        entry("berwald_randers_3", berwald_randers_3d()),
        entry(
            "minkowski_2",
            MetricSpec::minkowski(2, MinkowskiKind::QuarticPerturbed, 0.5).unwrap(),
        ),
        entry(
            "minkowski_3",
            MetricSpec::minkowski(3, MinkowskiKind::QuarticPerturbed, 0.5).unwrap(),
        ),
        entry("sphere_product_1_2", sphere_product()),
    ]);
    v
}

pub fn by_name(name: &str) -> Option<MetricSpec> {
    all().into_iter().find(|z| z.name == name).map(|z| z.spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::DiffConfig;
    use crate::metric::fundamental_tensor;
    use crate::sampling::Sampler;

    #[test]
    fn catalogue_is_valid_on_samples() {
        let cfg = DiffConfig::default();
        for z in all() {
            for p in Sampler::new(3, 11).sample(&z.spec).unwrap() {
                fundamental_tensor(&z.spec, &p, &cfg).unwrap_or_else(|e| panic!("{}: {e}", z.name));
            }
        }
    }

    #[test]
    fn names_unique() {
        let names: std::collections::BTreeSet<_> = all().iter().map(|z| z.name).collect();
        assert_eq!(names.len(), all().len());
        assert!(by_name("randers_3").is_some());
    }
}
