//! Truncated Taylor jets: exact mixed partials of `exp(x sin y) / (1 + x^2)`.
//!
//! ```text
//! cargo run --example taylor_jets
//! ```

use finsler::jet::Jet;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (x0, y0) = (0.4, 1.1);
    let x = Jet::variable(2, 3, 0, x0);
    let y = Jet::variable(2, 3, 1, y0);
    let f = (&x * &y.sin()).exp().div(&(&x * &x).add_scalar(1.0))?;

    // d/dx at fixed y, against a hand derivative
    let e = (x0 * y0.sin()).exp();
    let d = 1.0 + x0 * x0;
    let want_x = e * y0.sin() / d - e * 2.0 * x0 / (d * d);
    let got_x = f.partial_wrt(&[0])?;
    println!("df/dx     jet {got_x:.15}  closed form {want_x:.15}");
    assert!((got_x - want_x).abs() < 1e-13);

    let fxy = f.partial_wrt(&[0, 1])?;
    let fxxy = f.partial_wrt(&[0, 0, 1])?;
    println!("d2f/dxdy  {fxy:.12}");
    println!("d3f/dx2dy {fxxy:.12}");

    // truncation drops everything past the requested order
    let lin = f.truncate(1);
    println!("order-1 truncation keeps {} coefficients", lin.coeffs().len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
