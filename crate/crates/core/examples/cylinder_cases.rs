//! Conformal factors that make a cylinder `R x M2` R-Einstein, one per sign
//! of the fiber's scalar curvature.

use finsler::conformal::{deform, ConformalFactor, FactorKind};
use finsler::curvature::einstein_residual;
use finsler::jet::DiffConfig;
use finsler::metric::MetricSpec;
use finsler::tensor::BundlePoint;
use finsler::warped::{verify_cylinder_case, CylinderRun, CylinderSpec, OdeKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = DiffConfig::default();
    let run = CylinderRun::default();
    let cases = [
        (MetricSpec::euclidean(2), OdeKind::Linear, vec![2.0, 3.0]),
        (MetricSpec::round_sphere(2, 1.0)?, OdeKind::Cosh, vec![0.0]),
        (MetricSpec::hyperbolic(2, 1.0)?, OdeKind::Cos, vec![1.0, 0.0]),
    ];
    for (fiber, family, params) in cases {
        let name = fiber.family_name();
        let r = verify_cylinder_case(&CylinderSpec { fiber }, family, &params, &run, &cfg)?;
        println!(
            "{name:20} s* = {:+.6}  {family:?}  max|E~| = {:.1e}  ode = {:.1e}  pass = {:?}",
            r.s_star, r.max_einstein_residual, r.max_phi_residual, r.pass
        );
    }

    // e^u = t + 2 taken literally is not a solution; e^u = 1 / (t + 2) is
    let flat = CylinderSpec { fiber: MetricSpec::euclidean(2) }.metric()?;
    let p = BundlePoint::new(vec![0.3, 0.1, 0.2], vec![0.5, 0.4, -0.3])?;
    for (label, kind) in [("e^u = t + 2", FactorKind::Log), ("e^u = 1/(t + 2)", FactorKind::LogLinear)] {
        let d = deform(&flat, &ConformalFactor::new(kind, vec![1.0, 2.0]))?;
        println!("{label:16} |E~| = {:.3e}", einstein_residual(&d, &p, &cfg)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
