//! Endpoint classification and frame checks for the built-in problems.

use slx::problem::{catalog, classify::ClassifyConfig, validation_report};

fn main() {
    for name in ["free", "legendre", "bessel:0.25"] {
        let problem = catalog::by_name(name).expect("built-in");
        let report = validation_report(&problem, &ClassifyConfig::default());
        println!("{name}: a {:?}, b {:?}, deficiency {:?}", report.class_a, report.class_b, report.deficiency_indices);
        for check in &report.checks {
            println!("  {:<30} {:?}  {:.2e}", check.name, check.status, check.residual);
        }
    }
}
