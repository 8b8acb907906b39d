// Falsifying conical and monotonicity claims by sampling.

use conical::algorithms::FnMap;
use conical::operators::{CertKind, OperatorSpec};
use conical::oracle::{sample_conical_check, sample_monotonicity_check, SampleBox, DEFAULT_TOL};
use conical::{Result, Vector};

pub fn run_example() -> Result<()> {
    let region = SampleBox::cube(3, 10.0);
    let neg = FnMap(|x: &Vector| Ok(-x));
    for theta in [1.0, 0.99] {
        let r = sample_conical_check(&neg, theta, &region, 10_000, DEFAULT_TOL, 1)?;
        println!("-Id with theta = {theta}: {:?}, worst slack {:.3e}", r.verdict, r.worst_slack);
        if let Some((x, y)) = &r.witness {
            println!("  witness x = {:?}", x.as_slice());
            println!("  witness y = {:?}", y.as_slice());
        }
    }

    let a = OperatorSpec::scaled_identity(2.0)?;
    for alpha in [0.5, 0.55] {
        let r = sample_monotonicity_check(&a, alpha, CertKind::Comonotone, &region, 10_000, DEFAULT_TOL, 1)?;
        println!("2·Id as {alpha}-comonotone: {:?}", r.verdict);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
