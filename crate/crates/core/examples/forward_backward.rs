// Relaxed forward-backward with step sizes past the classical 2β limit.

use conical::algorithms::{kappa_star_rfb, AlgorithmInstance, KmOptions, StepSequence};
use conical::linalg::Matrix;
use conical::operators::{FunctionSpec, OperatorSpec};
use conical::oracle::rate_check;
use conical::{Result, Vector};

pub fn run_example() -> Result<()> {
    // min ‖x‖₁ + ½‖x − c‖², solved by soft-thresholding c.
    let c = Vector::new(vec![3.0, -2.0, 0.4])?;
    let solution = Vector::new(vec![2.0, -1.0, 0.0])?;
    let x0 = Vector::new(vec![-4.0, 5.0, 1.0])?;
    for gamma in [0.5, 1.9, 2.5, 3.5] {
        let (ks, _) = kappa_star_rfb(0.0, 1.0, gamma)?;
        let a = OperatorSpec::subdifferential(FunctionSpec::l1(1.0)?)?;
        let b = OperatorSpec::grad_quadratic(Matrix::identity(3), -&c)?;
        let inst = AlgorithmInstance::build_rfb(a, b, gamma, 0.8 * ks)?;
        let opts = KmOptions {
            max_iter: 10_000,
            tol: 0.0,
            solution: Some(solution.clone()),
            ..KmOptions::default()
        };
        let trace = inst.run(&x0, StepSequence::constant(1.0), &opts)?;
        let last = trace.records.iter().rev().find_map(|r| r.dist_to_solution).unwrap_or(f64::NAN);
        let rate = rate_check(&trace, 0)?;
        println!(
            "gamma = {gamma}: kappa* = {ks:.3}, dist to solution {last:.2e}, rate check {}",
            if rate.pass { "passes" } else { "fails" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
