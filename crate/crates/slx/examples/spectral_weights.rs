//! Point masses of the spectral measures and eigenvectors in the spectral representation.

use slx::Context;
use slx::linalg::real_mat;
use slx::problem::catalog;
use slx::specrep::{eigenvector_rep, point_mass_l0, point_mass_theta};
use slx::spectra::{BoundaryParameter, eigenvalues};

fn main() -> slx::Result<()> {
    let ctx = Context::new(catalog::free());
    for n in 0..4 {
        let lambda = (n * n) as f64;
        let pm = point_mass_l0(&ctx, lambda)?;
        let v = eigenvector_rep(&ctx, &real_mat(0.0, 0.0, 0.0, 0.0), lambda)?;
        let e = v.coefficients[0];
        println!("L0 at {lambda}: trace {:.9}, rank {}, {:?}, eigenvector ({:.4}, {:.4})", pm.trace, pm.rank, pm.method, e[0].re, e[1].re);
    }
    let vartheta = real_mat(0.5, 0.2, 0.2, -0.3);
    for e in eigenvalues(&ctx, &BoundaryParameter::vartheta(vartheta)?, -5.0, 10.0)? {
        let pm = point_mass_theta(&ctx, &vartheta, e.lambda)?;
        println!("vartheta at {:.8}: trace {:.6}, rank {}, error {:.1e}", e.lambda, pm.trace, pm.rank, pm.error_estimate);
    }
    Ok(())
}
