//! Schouten, Weyl, Cotton-York and Bach tensors.

use finsler::conformal::{bach, cotton_york, deform, schouten, weyl, weyl_divergence_check, ConformalFactor, FactorKind};
use finsler::jet::DiffConfig;
use finsler::metric::MetricSpec;
use finsler::tensor::BundlePoint;
use finsler::zoo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    let s3 = MetricSpec::round_sphere(3, 1.0)?;
    let p = BundlePoint::new(vec![1.0, 1.2, 0.1], vec![0.3, 0.2, -0.6])?;
    println!("S^3: S_00 = {:.10} (g_00 / 2), |W| = {:.1e}, |C| = {:.1e}",
        schouten(&s3, &p, &cfg)?.get(&[0, 0]),
        weyl(&s3, &p, &cfg)?.max_abs(),
        cotton_york(&s3, &p, &cfg)?.max_abs());

    let prod = zoo::sphere_product();
    let q = BundlePoint::new(vec![1.0, 0.2, 1.3, -0.4], vec![0.5, 0.3, -0.4, 0.6])?;
    println!("S^2 x S^2(2): |W| = {:.3}, div W - C = {:.1e}, |B| = {:.3}",
        weyl(&prod, &q, &cfg)?.max_abs(),
        weyl_divergence_check(&prod, &q, &cfg)?,
        bach(&prod, &q, &cfg)?.max_abs());

    // a conformally flat metric: Bach vanishes; jets of order 5 skip one finite-difference layer
    let flat = deform(&MetricSpec::euclidean(4), &ConformalFactor::new(FactorKind::Affine, vec![0.0, 0.2, -0.1, 0.1, 0.3]))?;
    let cfg5 = DiffConfig { jet_order: 5, ..cfg };
    let r = BundlePoint::new(vec![0.1, 0.2, -0.3, 0.4], vec![0.6, -0.2, 0.3, 0.5])?;
    println!("e^u E^4: |B| = {:.1e}", bach(&flat, &r, &cfg5)?.max_abs());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
