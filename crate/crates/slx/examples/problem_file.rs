//! Builds a problem from a JSON description with explicit expressions.

use slx::problem::file;
use slx::spectra::eigenvalues_linf;
use slx::Context;

const SPEC: &str = r#"{
  "name": "shifted",
  "interval": [0, 3.141592653589793],
  "coefficients": { "p": "1", "q": "-2", "w": "1" },
  "frames": {
    "a": { "u": "x", "v": "-1" },
    "b": { "u": "x - 3.141592653589793", "v": "-1" }
  },
  "K": -2
}"#;

fn main() -> slx::Result<()> {
    let problem = file::parse(SPEC)?;
    let ctx = Context::new(problem);
    // q = -2 shifts the Dirichlet spectrum n^2 down by 2.
    for e in eigenvalues_linf(&ctx, -3.0, 15.0)? {
        println!("{:.10}", e.lambda);
    }
    Ok(())
}
