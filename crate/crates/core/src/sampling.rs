//! Deterministic sampling of bundle points inside a chart box.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::metric::{Family, MetricSpec};
use crate::tensor::{inf_norm, BundlePoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampler {
    pub count: usize,
    pub seed: u64,
    /// Defaults to the metric's own chart box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_box: Option<Vec<(f64, f64)>>,
    #[serde(default = "default_min_fiber")]
    pub min_fiber_norm: f64,
}

fn default_min_fiber() -> f64 {
    0.1
}

impl Sampler {
    pub fn new(count: usize, seed: u64) -> Sampler {
        Sampler {
            count,
            seed,
            chart_box: None,
            min_fiber_norm: default_min_fiber(),
        }
    }

    pub fn sample(&self, spec: &MetricSpec) -> Result<Vec<BundlePoint>> {
        sample_points(spec, self)
    }
}

/// Index ranges of `y` that must each stay away from zero.
fn fiber_blocks(spec: &MetricSpec, offset: usize, out: &mut Vec<(usize, usize)>) {
    match spec.family() {
        Family::Warped { base, fiber, .. } => {
            fiber_blocks(base, offset, out);
            fiber_blocks(fiber, offset + base.dim(), out);
        }
        Family::Conformal { base, .. } => fiber_blocks(base, offset, out),
        Family::Randers { alpha, .. } => fiber_blocks(alpha, offset, out),
        _ => out.push((offset, spec.dim())),
    }
}

pub fn sample_points(spec: &MetricSpec, s: &Sampler) -> Result<Vec<BundlePoint>> {
    if s.count == 0 {
        return Err(GeometryError::Config("point count must be at least 1".into()));
    }
    let n = spec.dim();
    let bx = s.chart_box.clone().unwrap_or_else(|| spec.chart_box());
    if bx.len() != n || bx.iter().any(|(a, b)| !(a <= b)) {
        return Err(GeometryError::Config(format!("chart box must have {n} intervals lo <= hi")));
    }
    let mut blocks = Vec::new();
    fiber_blocks(spec, 0, &mut blocks);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut out = Vec::with_capacity(s.count);
    let mut rejected = 0usize;
    while out.len() < s.count {
        let x: Vec<f64> = bx
            .iter()
            .map(|&(a, b)| if a == b { a } else { rng.gen_range(a..b) })
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let ok_blocks = blocks
            .iter()
            .all(|&(o, len)| inf_norm(&y[o..o + len]) >= s.min_fiber_norm);
        let point = BundlePoint::new(x, y).ok().filter(|p| ok_blocks && spec.check_point(p).is_ok());
        match point {
            Some(p) => out.push(p),
            None => {
                rejected += 1;
                if rejected > 1000 * s.count {
                    return Err(GeometryError::Config(
                        "could not sample valid points in the chart box".into(),
                    ));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_samples_repeat() {
        let s = MetricSpec::round_sphere(3, 1.0).unwrap();
        let a = Sampler::new(5, 7).sample(&s).unwrap();
        let b = Sampler::new(5, 7).sample(&s).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, Sampler::new(5, 8).sample(&s).unwrap());
        assert!(a.iter().all(|p| p.x()[0] > 0.5 && p.x()[0] < 2.5));
    }

    #[test]
    fn fiber_norm_floor() {
        let s = MetricSpec::euclidean(2);
        for p in Sampler::new(50, 1).sample(&s).unwrap() {
            assert!(inf_norm(p.y()) >= 0.1);
        }
    }
}
