mod common;

use common::{compare, hyperbolic, quadratic_2, quadratic_3, sphere_radius_2, unit_sphere, MetricFn};
use finsler::metric::MetricSpec;
use finsler::sampling::Sampler;
use finsler::zoo;

fn cases() -> Vec<(&'static str, MetricSpec, MetricFn)> {
    vec![
        ("sphere_2", MetricSpec::round_sphere(2, 1.0).unwrap(), unit_sphere as MetricFn),
        ("sphere_3_radius_2", MetricSpec::round_sphere(3, 2.0).unwrap(), sphere_radius_2),
        ("hyperbolic_3", MetricSpec::hyperbolic(3, 1.0).unwrap(), hyperbolic),
        ("quadratic_2", zoo::quadratic_2d(), quadratic_2),
        ("quadratic_3", zoo::quadratic_3d(), quadratic_3),
    ]
}

#[test]
fn engine_matches_classical_formulas() {
    for (name, spec, g) in cases() {
        for p in Sampler::new(4, 3).sample(&spec).unwrap() {
            let d = compare(&spec, g, &p);
            assert!(d < 1e-7, "{name} at {:?}: deviation {d:e}", p.x());
        }
    }
}

#[test]
fn oracle_sees_constant_curvature() {
    let p = [1.1, 0.7, 0.3];
    let o = common::classical(unit_sphere, &p);
    assert!((o.scal - 6.0).abs() < 1e-7);
    let o = common::classical(hyperbolic, &[0.2, 0.1, 1.3]);
    assert!((o.scal + 6.0).abs() < 1e-7);
}
