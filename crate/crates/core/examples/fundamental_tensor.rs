//! Fundamental and Cartan tensors of a Randers metric, and the Riemannian case
//! where the Cartan tensor vanishes.

use finsler::jet::DiffConfig;
use finsler::metric::{cartan_tensor, fundamental_tensor, mean_cartan_norm, MetricSpec, Poly};
use finsler::tensor::BundlePoint;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    let randers = MetricSpec::randers(
        MetricSpec::euclidean(2),
        vec![Poly::monomial(0.2, 1, 1), Poly::monomial(-0.2, 0, 1)],
    )?;
    let p = BundlePoint::new(vec![0.5, -0.3], vec![0.8, 0.6])?;

    let ft = fundamental_tensor(&randers, &p, &cfg)?;
    println!("F = {:.10}", ft.f_value);
    println!("g = {:?}", ft.g.components());
    println!("l = {:?}", ft.l);
    let a = cartan_tensor(&randers, &p, &cfg)?;
    println!("max |A| = {:.3e}, |I| = {:.3e}", a.max_abs(), mean_cartan_norm(&randers, &p, &cfg)?);

    // A(y, ., .) = 0 by homogeneity
    let n = 2;
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in 0..n {
            let s: f64 = (0..n).map(|i| p.y()[i] * a.get(&[i, j, k])).sum();
            worst = worst.max(s.abs());
        }
    }
    println!("max |y^i A_ijk| = {worst:.1e}");

    let sphere = MetricSpec::round_sphere(2, 1.0)?;
    let q = BundlePoint::new(vec![1.0, 0.3], vec![0.2, 0.9])?;
    println!("sphere: max |A| = {:.1e}", cartan_tensor(&sphere, &q, &cfg)?.max_abs());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
