//! Eigenvalues and multiplicities of a few self-adjoint extensions of the Legendre operator.

use slx::Context;
use slx::linalg::{c, mat, r, real_mat};
use slx::problem::catalog;
use slx::spectra::{BoundaryParameter, eigenvalues};

fn main() -> slx::Result<()> {
    let ctx = Context::new(catalog::legendre());
    let params = [
        ("theta = 0 (Friedrichs)", BoundaryParameter::linf()),
        ("theta = diag(1, -1)", BoundaryParameter::matrix(real_mat(1.0, 0.0, 0.0, -1.0))?),
        ("complex coupling", BoundaryParameter::matrix(mat(r(0.5), c(1.0, 1.0), c(1.0, -1.0), r(2.0)))?),
        ("vartheta = I", BoundaryParameter::vartheta(real_mat(1.0, 0.0, 0.0, 1.0))?),
    ];
    for (name, p) in &params {
        println!("{name}");
        for e in eigenvalues(&ctx, p, -5.0, 25.0)? {
            println!("  {:>14.9}  x{}  {}", e.lambda, e.multiplicity, e.via.label());
        }
    }
    Ok(())
}
