//! A subset of the acceptance suite rendered as text.

use mobius_sift::acceptance::{run_criteria, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_criteria(&RunConfig::default(), &[3, 4, 9])?;
    print!("{}", report.to_text());
    Ok(())
}
