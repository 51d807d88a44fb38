//! Eigenvalue curves of the family vartheta~ + t vartheta and a disjoint partner.

use slx::Context;
use slx::linalg::real_mat;
use slx::lines::{LineFamily, disjoint_pair, t_diag, t_roots};
use slx::problem::catalog;
use slx::spectra::BoundaryParameter;

fn main() -> slx::Result<()> {
    let ctx = Context::new(catalog::free());
    println!("t_diag(1, 1, 1/4) = {:?}", t_diag(&ctx, 1.0, 1.0, 0.25)?);
    let family = LineFamily::new(real_mat(0.3, 0.1, 0.1, -0.2), real_mat(1.0, 0.4, 0.4, 2.0))?;
    for k in 0..8 {
        let lambda = 0.1 + 0.7 * k as f64;
        match t_roots(&ctx, &family, lambda) {
            Ok(s) => println!("lambda {lambda:.2}: t = {:.6?} ({:?})", s.roots, s.case),
            Err(e) => println!("lambda {lambda:.2}: {e}"),
        }
    }
    let pair = disjoint_pair(&ctx, &BoundaryParameter::linf(), 0.0, 20.0)?;
    println!("disjoint from Dirichlet on [0, 20]: t = {}, separation {:.3}, spectrum {:.6?}", pair.t, pair.separation, pair.spectrum);
    Ok(())
}
