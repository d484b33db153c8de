//! hh-curvature, horizontal Ricci and scalar curvature on model spaces and a
//! Randers metric.

use finsler::curvature::{bianchi_residual, curvature_bundle, einstein_k};
use finsler::jet::DiffConfig;
use finsler::metric::MetricSpec;
use finsler::sampling::Sampler;
use finsler::zoo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    for m in 2..=4 {
        let s = MetricSpec::round_sphere(m, 1.0)?;
        let p = &Sampler::new(1, 3).sample(&s)?[0];
        let b = curvature_bundle(&s, p, &cfg)?;
        println!("S^{m}: Scal = {:.10} (m(m-1) = {}), k = {:.10}", b.scal, m * (m - 1), einstein_k(&s, p, &cfg)?);
    }
    let h = MetricSpec::hyperbolic(3, 1.0)?;
    let p = &Sampler::new(1, 3).sample(&h)?[0];
    println!("H^3: k = {:.10}", einstein_k(&h, p, &cfg)?);

    let r = zoo::randers_2d();
    let p = &Sampler::new(1, 5).sample(&r)?[0];
    let b = curvature_bundle(&r, p, &cfg)?;
    println!(
        "randers: Scal = {:.6}, |E| = {:.3e}, Ric asymmetry = {:.1e}, Bianchi = {:.1e}",
        b.scal,
        b.e.max_abs(),
        b.ric_asymmetry,
        bianchi_residual(&r, p, &cfg)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
