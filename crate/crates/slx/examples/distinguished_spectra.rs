//! Spectra of L0 and of the Friedrichs extension Linf.

use slx::Context;
use slx::problem::catalog;
use slx::spectra::{eigenvalues_l0, eigenvalues_linf};

fn main() -> slx::Result<()> {
    for (name, hi) in [("free", 20.0), ("legendre", 31.0), ("bessel:0.25", 40.0)] {
        let ctx = Context::new(catalog::by_name(name).expect("built-in"));
        let l0: Vec<f64> = eigenvalues_l0(&ctx, -1.0, hi)?.iter().map(|e| e.lambda).collect();
        let linf: Vec<f64> = eigenvalues_linf(&ctx, -1.0, hi)?.iter().map(|e| e.lambda).collect();
        println!("{name}\n  L0   {l0:.8?}\n  Linf {linf:.8?}");
    }
    Ok(())
}
