//! Coupled conditions: discriminant against 2 cos(alpha), periodic and antiperiodic spectra.

use std::f64::consts::PI;

use slx::Context;
use slx::problem::catalog;
use slx::spectra::{BoundaryParameter, CoupledBC, discriminant, eigenvalues};

fn main() -> slx::Result<()> {
    let ctx = Context::new(catalog::free());
    let id = [[1.0, 0.0], [0.0, 1.0]];
    for lambda in [0.0, 1.0, 2.5, 9.0] {
        println!("D(I, {lambda}) = {:+.10}   2cos(pi sqrt) = {:+.10}", discriminant(&ctx, &id, lambda)?, 2.0 * (PI * f64::sqrt(lambda)).cos());
    }
    for (name, alpha) in [("periodic", 0.0), ("antiperiodic", PI), ("quasi-periodic pi/3", PI / 3.0)] {
        let p = BoundaryParameter::coupled(&CoupledBC::new(alpha, id)?)?;
        let ev: Vec<(f64, usize)> = eigenvalues(&ctx, &p, -1.0, 30.0)?.iter().map(|e| (e.lambda, e.multiplicity)).collect();
        println!("{name}: {ev:.8?}");
    }
    Ok(())
}
