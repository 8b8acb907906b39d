// Feasible (γ, δ) regions for adaptive Douglas–Rachford.

use conical::algorithms::{gamma0, suggest_params, validate_params, Regime};
use conical::Result;

pub fn run_example() -> Result<()> {
    let (alpha, beta) = (-0.5, 2.0);
    println!("gamma0({alpha}, {beta}) = {:.6}", gamma0(alpha, beta));
    for regime in [Regime::Comonotone, Regime::Monotone] {
        let (g, d) = suggest_params(regime, alpha, beta)?;
        let r = validate_params(regime, alpha, beta, g, d)?;
        println!(
            "{regime:?}: gamma = {g:.4}, delta = {d:.4} -> {:?}, delta in [{:.4}, {:.4}], kappa* = {:?}",
            r.verdict, r.delta_interval.0, r.delta_interval.1, r.kappa_star
        );
    }
    // Equal steps with α = β = 0: the only admissible δ is γ.
    for delta in [1.0, 1.1] {
        let r = validate_params(Regime::Comonotone, 0.0, 0.0, 1.0, delta)?;
        println!("alpha = beta = 0, gamma = 1, delta = {delta}: {:?} {}", r.verdict, r.reason.unwrap_or_default());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
