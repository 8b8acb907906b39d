// Relaxed proximal point on a comonotone operator that is not monotone.

use conical::algorithms::{AlgorithmInstance, KmOptions, StepSequence};
use conical::operators::OperatorSpec;
use conical::{Result, Vector};

pub fn run_example() -> Result<()> {
    let x0 = Vector::new(vec![1.0])?;
    for kappa in [0.25, 0.5, 0.9, 1.0] {
        // J_{4A} = −Id here, so the map is (1 − 2κ)Id.
        let inst = AlgorithmInstance::build_rpp(OperatorSpec::scaled_identity(-0.5)?, 4.0, kappa)?;
        let opts = KmOptions {
            max_iter: 200,
            solution: Some(Vector::zeros(1)),
            ..KmOptions::default()
        };
        let trace = inst.run(&x0, StepSequence::constant(1.0), &opts)?;
        println!(
            "kappa = {kappa}: kappa* = {}, {} after {} iterations, residual {:.3e}",
            inst.kappa_star(),
            trace.status.as_str(),
            trace.iterations(),
            trace.final_residual()
        );
        for w in inst.warnings() {
            println!("  warning: {w}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
