//! Boundary data of the fundamental system and a trajectory dump.

use slx::linalg::{c, r};
use slx::odecore::{IntegratorConfig, fundamental_at_b, green_identity_residual, trajectory, trajectory_csv};
use slx::problem::catalog;

fn main() -> slx::Result<()> {
    let problem = catalog::legendre();
    let cfg = IntegratorConfig::default();
    for lambda in [r(0.0), r(2.0), r(5.0), c(1.0, 0.5)] {
        let bd = fundamental_at_b(&problem, lambda, &cfg)?;
        println!(
            "lambda {lambda}: u10 {:.6}, u11 {:.6}, u20 {:.6}, u21 {:.6}, wronskian drift {:.1e}",
            bd.u10, bd.u11, bd.u20, bd.u21, bd.wronskian_drift
        );
    }
    println!("Green identity residual at 1+0.5i: {:.2e}", green_identity_residual(&problem, c(1.0, 0.5), &cfg)?);
    let rows = trajectory(&catalog::free(), r(4.0), &cfg)?;
    let csv = trajectory_csv(&rows);
    for line in csv.lines().take(4) {
        println!("{line}");
    }
    println!("... {} rows", rows.len());
    Ok(())
}
