//! The conformally R-Einstein residual, its check against the deformed
//! metric, and the dimension-2 classification.

use finsler::conformal::{classify, direct_vs_residual_check, lce_residual, ConformalFactor, FactorKind, Thresholds};
use finsler::jet::DiffConfig;
use finsler::metric::{MetricSpec, Poly};
use finsler::sampling::Sampler;
use finsler::zoo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    let s3 = MetricSpec::round_sphere(3, 1.0)?;
    let u = ConformalFactor::new(FactorKind::Affine, vec![0.0, 0.3, 0.1, -0.2]);
    let pts = Sampler::new(3, 2).sample(&s3)?;
    println!("S^3 + affine u: |L| = {:.4}", lce_residual(&s3, &u, &pts[0], &cfg)?.max_abs());
    let two = direct_vs_residual_check(&s3, &u, &pts, &cfg, 1e-4)?;
    for p in &two.points {
        println!("  residual {:.6e}  direct {:.6e}", p.residual_norm, p.direct_norm);
    }

    let th = Thresholds::default();
    let poly = ConformalFactor::polynomial(Poly::monomial(0.3, 0, 2).plus(Poly::monomial(0.1, 1, 1)));
    for (name, spec) in [
        ("quadratic_2", zoo::quadratic_2d()),
        ("minkowski_2", zoo::by_name("minkowski_2").ok_or("zoo")?),
        ("randers_2", zoo::randers_2d()),
    ] {
        let pts = Sampler::new(4, 9).sample(&spec)?;
        let c = classify(&spec, &[poly.clone()], &pts, &cfg, &th)?;
        println!(
            "{name:12} verdict {:?}, max|E| {:.1e}, max|I| {:.1e}, poly-u residual {:.1e}",
            c.verdict.ok_or("2D")?,
            c.max_einstein_residual,
            c.max_mean_cartan_norm,
            c.factors[0].max_lce_residual
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
