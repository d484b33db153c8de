//! R-Einstein residual and the Schur gradient over sampled points.

use finsler::curvature::{einstein_residual, schur_gradient};
use finsler::jet::DiffConfig;
use finsler::sampling::Sampler;
use finsler::zoo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    for name in ["sphere_3", "hyperbolic_3", "minkowski_3", "sphere_product_1_2", "randers_3"] {
        let s = zoo::by_name(name).ok_or("missing zoo metric")?;
        let pts = Sampler::new(4, 1).sample(&s)?;
        let mut e = 0.0f64;
        for p in &pts {
            e = e.max(einstein_residual(&s, p, &cfg)?);
        }
        let schur = if e < 1e-7 {
            let mut g = 0.0f64;
            for p in &pts {
                g = g.max(schur_gradient(&s, p, &cfg)?);
            }
            format!("{g:.1e}")
        } else {
            "-".into()
        };
        println!("{name:20} max|E| = {e:.3e}   max|grad Scal| = {schur}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
