//! Weyl functions of the two distinguished extensions and of a matrix parameter.

use slx::Context;
use slx::linalg::{c, eigh, hermitian_part, real_mat};
use slx::problem::catalog;
use slx::weyl::{inverse_identity_defect, m0, m_inf, m_theta};

fn main() -> slx::Result<()> {
    let ctx = Context::new(catalog::legendre());
    for z in [c(0.7, 0.0), c(3.3, 0.0), c(1.0, 0.1), c(-2.0, 1.0)] {
        let a = m0(&ctx, z)?.matrix;
        let b = m_inf(&ctx, z)?.matrix;
        let im = (a - a.adjoint()) / c(0.0, 2.0);
        let (ev, _) = eigh(&hermitian_part(&im));
        println!("lambda {z}: M0[0,1] = {:.6}, |Minf M0 + I| = {:.1e}, min eig Im M0 = {:.3e}", a[(0, 1)], inverse_identity_defect(&a, &b), ev[0]);
    }
    let theta = real_mat(1.0, 0.5, 0.5, -1.0);
    let m = m_theta(&ctx, &theta, c(1.0, 1.0))?.matrix;
    println!("(theta - M0)^-1 at 1+i: [[{:.6}, {:.6}], [{:.6}, {:.6}]]", m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    Ok(())
}
