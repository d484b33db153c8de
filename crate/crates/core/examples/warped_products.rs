//! Warped products: block structure of g and the connection identities.

use finsler::jet::DiffConfig;
use finsler::metric::{eval_f, MetricSpec};
use finsler::tensor::BundlePoint;
use finsler::warped::{block_residual, build_warped, warped_connection_residual, WarpFunction, WarpKind};
use finsler::zoo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    let w = build_warped(
        MetricSpec::euclidean(1),
        zoo::randers_2d(),
        WarpFunction::new(WarpKind::Cosh, vec![1.0, 0.8, 0.1]),
    )?;
    let p = BundlePoint::new(vec![0.3, 0.1, -0.2], vec![0.5, 0.4, -0.3])?;
    let b = block_residual(&w, &p, &cfg)?;
    println!("cosh-warped Randers: off-diagonal {:.1e}, blocks {:.1e} / {:.1e}", b.off_diagonal, b.base_block, b.fiber_block);
    let c = warped_connection_residual(&w, &p, &cfg)?;
    println!("  base Gamma {:.1e}, mixed Gamma {:.1e}", c.base_block, c.mixed_block);
    println!("  F(2y) - 2F(y) = {:.1e}", eval_f(&w, &p.scaled_fiber(2.0)?)? - 2.0 * eval_f(&w, &p)?);

    match eval_f(&w, &BundlePoint::new(vec![0.3, 0.1, -0.2], vec![0.0, 0.4, -0.3])?) {
        Err(e) => println!("  y1 = 0: {e}"),
        Ok(v) => println!("  y1 = 0 unexpectedly gave {v}"),
    }

    let riem = build_warped(
        MetricSpec::euclidean(2),
        MetricSpec::round_sphere(2, 1.0)?,
        WarpFunction::new(WarpKind::Affine, vec![2.0, 0.3, -0.2]),
    )?;
    let q = BundlePoint::new(vec![0.1, 0.4, 1.1, 0.3], vec![0.5, -0.2, 0.3, 0.6])?;
    println!("Riemannian warp: R(base, base, fiber, base) = {:.1e}", warped_connection_residual(&riem, &q, &cfg)?.curvature_mixed);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
