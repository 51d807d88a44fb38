//! Shooting eigenvalues against the finite-difference model.

use slx::Context;
use slx::linalg::real_mat;
use slx::oracle::compare;
use slx::problem::catalog;
use slx::spectra::BoundaryParameter;

fn main() -> slx::Result<()> {
    for (name, theta) in [("free", real_mat(1.0, 0.5, 0.5, -1.0)), ("legendre", real_mat(0.0, 0.0, 0.0, 0.0))] {
        let ctx = Context::new(catalog::by_name(name).expect("built-in"));
        let cmp = compare(&ctx, &BoundaryParameter::matrix(theta)?, 0.0, 25.0, 4000, None)?;
        println!("{name}: {} eigenvalues, max gap {:.2e}, tolerance {:.1e}, passed {}", cmp.rows.len(), cmp.max_gap(), cmp.tolerance, cmp.passed());
    }
    Ok(())
}
