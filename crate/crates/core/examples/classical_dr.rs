// Classical Douglas–Rachford as the α = β = 0 case of the adaptive method.

use conical::algorithms::{AlgorithmInstance, KmOptions, StepSequence};
use conical::operators::FunctionSpec;
use conical::oracle::{sample_conical_check, SampleBox, DEFAULT_TOL};
use conical::{Result, Vector};

pub fn run_example() -> Result<()> {
    let f = FunctionSpec::l1(1.0)?;
    let inst = AlgorithmInstance::convex_min_instance(f.clone(), f, 1.0, 1.0, 0.5)?;
    println!(
        "lambda = {:?}, mu = {:?}, kappa* = {}, theta = {}",
        inst.lambda(),
        inst.mu(),
        inst.kappa_star(),
        inst.theta()
    );
    let x0 = Vector::new(vec![3.0, -2.0, 0.7])?;
    let trace = inst.run(&x0, StepSequence::constant(1.0), &KmOptions::default())?;
    println!("{} in {} iterations, shadow {:?}", trace.status.as_str(), trace.iterations(), trace.final_shadow);

    let report = sample_conical_check(&inst, inst.theta(), &SampleBox::cube(3, 10.0), 10_000, DEFAULT_TOL, 0)?;
    println!("sampled theta = {}: {:?}, worst slack {:.2e}", inst.theta(), report.verdict, report.worst_slack);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
