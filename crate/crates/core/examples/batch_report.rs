//! A seeded batch run, serialized as JSON and CSV.

use finsler::report::{cmd_check_einstein, Command, MetricInput, PointSource, RunConfig};
use finsler::sampling::Sampler;
use finsler::zoo;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = RunConfig::new(Command::CheckEinstein, MetricInput::Spec(zoo::by_name("hyperbolic_3").ok_or("zoo")?));
    cfg.points = PointSource::Sample(Sampler::new(4, 42));
    cfg.tolerances.set("einstein", 1e-7)?;

    let a = cmd_check_einstein(&cfg)?;
    let b = cmd_check_einstein(&cfg)?;
    let strip = |r: &finsler::report::GeometryReport| {
        let mut r = r.clone();
        r.generated_at.clear();
        r.to_json()
    };
    println!("pass = {}, einstein = {:?}", a.pass, a.einstein);
    println!("repeat run identical: {}", strip(&a)? == strip(&b)?);
    let csv = a.to_csv()?;
    println!("{}", csv.lines().next().unwrap_or_default());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
