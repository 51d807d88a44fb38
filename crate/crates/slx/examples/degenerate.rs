//! A chosen point becomes a double eigenvalue when the parameter equals M0 there.

use slx::Context;
use slx::problem::catalog;
use slx::spectra::{BoundaryParameter, degenerate_parameter, multiplicity};

fn main() -> slx::Result<()> {
    let ctx = Context::new(catalog::free());
    for lambda in [0.25, 2.3, 7.0] {
        let d = degenerate_parameter(&ctx, lambda)?;
        let theta = d.theta.expect("lambda is not an eigenvalue of L0");
        let p = BoundaryParameter::matrix(theta)?;
        let t = |i, j| theta[(i, j)].re;
        println!(
            "lambda {lambda}: theta = [[{:.6}, {:.6}], [{:.6}, {:.6}]], multiplicity {}",
            t(0, 0),
            t(0, 1),
            t(1, 0),
            t(1, 1),
            multiplicity(&ctx, &p, lambda)?
        );
        let mut bumped = theta;
        bumped[(0, 0)] += 1e-3;
        println!("  theta11 + 1e-3: multiplicity {}", multiplicity(&ctx, &BoundaryParameter::matrix(bumped)?, lambda)?);
    }
    Ok(())
}
