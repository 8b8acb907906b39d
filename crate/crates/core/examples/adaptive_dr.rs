// Adaptive Douglas–Rachford on a weakly convex plus strongly convex sum,
// in both operator orders.

use conical::algorithms::{suggest_params, AlgorithmInstance, KmOptions, Regime, StepSequence};
use conical::linalg::Matrix;
use conical::operators::FunctionSpec;
use conical::oracle::{grid_argmin, GridConfig};
use conical::{Result, Vector};

pub fn run_example() -> Result<()> {
    // f = |x| − x²/4 (α = −1/2), g = (x − 1)² (β = 2).
    let f = FunctionSpec::weakly_convex_l1(1.0, 0.5)?;
    let g = FunctionSpec::quadratic(Matrix::diag(&[2.0]), Vector::new(vec![-2.0])?)?;
    let target = grid_argmin(&f, &g, 1, &GridConfig::default())?;
    println!("grid argmin of f + g: {:.8}", target[0]);

    let (gamma, delta) = suggest_params(Regime::Monotone, -0.5, 2.0)?;
    let probe = AlgorithmInstance::convex_min_instance(f.clone(), g.clone(), gamma, delta, 1.0)?;
    let kappa = 0.8 * probe.kappa_star();
    println!("gamma = {gamma:.4}, delta = {delta:.4}, kappa* = {:.4}", probe.kappa_star());

    let x0 = Vector::new(vec![5.0])?;
    let mut limits = Vec::new();
    for swap in [false, true] {
        let mut inst = AlgorithmInstance::convex_min_instance(f.clone(), g.clone(), gamma, delta, kappa)?;
        if swap {
            inst = inst.swapped()?;
        }
        let trace = inst.run(&x0, StepSequence::constant(1.0), &KmOptions::default())?;
        let shadow = trace.final_shadow.clone().expect("converged runs have a shadow");
        println!(
            "{}: {} in {} iterations, shadow {:.8}",
            inst.solution_map(),
            trace.status.as_str(),
            trace.iterations(),
            shadow[0]
        );
        limits.push(shadow);
    }
    println!("shadow limits differ by {:.1e}", limits[0].distance(&limits[1]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
