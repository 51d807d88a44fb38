//! A relation with a one-dimensional multivalued part and the matrix that shares a given eigenvalue.

use slx::Context;
use slx::linalg::{Vec2, r};
use slx::problem::catalog;
use slx::spectra::{BoundaryParameter, Relation, eigenvalues, multiplicity, relation_to_matrix};

fn main() -> slx::Result<()> {
    let ctx = Context::new(catalog::legendre());
    let rel = Relation::mul_one(Vec2::new(r(1.0), r(0.5)), 0.8);
    let p = BoundaryParameter::relation(rel.clone());
    for e in eigenvalues(&ctx, &p, -2.0, 25.0)? {
        match relation_to_matrix(&ctx, &rel, e.lambda) {
            Ok(red) => println!(
                "{:>12.8}: {:?} via {}, multiplicity there {}",
                e.lambda,
                red.case,
                red.via.label(),
                multiplicity(&ctx, &red.parameter, e.lambda)?
            ),
            Err(err) => println!("{:>12.8}: {err}", e.lambda),
        }
    }
    Ok(())
}
