//! Geodesic spray, nonlinear connection and Chern Christoffel symbols.

use finsler::connection::{chern_coefficients, delta_derivative};
use finsler::jet::DiffConfig;
use finsler::metric::MetricSpec;
use finsler::tensor::BundlePoint;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    let s2 = MetricSpec::round_sphere(2, 1.0)?;
    let (th, ph) = (1.1, 0.4);
    let p = BundlePoint::new(vec![th, ph], vec![0.3, -0.7])?;
    let c = chern_coefficients(&s2, &p, &cfg)?;

    // round sphere ds^2 = dth^2 + sin^2 th dph^2
    let want = [(0, 1, 1, -th.sin() * th.cos()), (1, 0, 1, th.cos() / th.sin())];
    for (i, j, k, v) in want {
        println!("Gamma^{i}_{j}{k} = {:+.12}  (closed form {v:+.12})", c.gamma(i, j, k));
    }
    println!("G = {:?}", c.spray);
    println!("N = {:?}", c.nonlinear);

    // F is constant along horizontal directions
    let d = delta_derivative(&s2, &p, |x, y| {
        let s = x[0].sin();
        Ok(vec![(&(&y[0] * &y[0]) + &(&(&s * &s) * &(&y[1] * &y[1]))).sqrt()?])
    }, 0, &cfg)?;
    println!("delta_th F = {:.1e}", d[0]);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
