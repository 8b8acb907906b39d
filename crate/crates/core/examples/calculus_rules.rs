// Conical constants under relaxation, averaging and composition.

use conical::calculus::{compose2, compose_many, convex_combination, relax};
use conical::oracle::find_admissible_order;
use conical::Result;

pub fn run_example() -> Result<()> {
    // A firmly nonexpansive map relaxed by λ = 1.5.
    let relaxed = relax(0.5, 1.5)?;
    println!("relax(1/2, 3/2) = {relaxed}");
    assert_eq!(relaxed, 0.75);

    let avg = convex_combination(&[0.2, 0.8], &[0.5, 0.5])?;
    println!("convex combination of 0.2 and 0.8 = {avg}");

    // Two conical maps, one of them expansive-looking (θ > 1).
    let t = compose2(0.5, 1.2)?;
    println!("compose2(0.5, 1.2) = {t:.6}");

    let chain = compose_many(&[0.2, 0.2, 1.5])?;
    println!("compose_many([0.2, 0.2, 1.5]) = {:.6}", chain.theta);
    assert!((chain.theta - 5.0 / 3.0).abs() < 1e-12);

    match compose_many(&[1.5, 1.5]) {
        Ok(c) => println!("unexpected certificate {c:?}"),
        Err(e) => println!("compose_many([1.5, 1.5]): {e}"),
    }
    let order = find_admissible_order(&[1.5, 0.25, 0.3])?;
    println!("admissible order for [1.5, 0.25, 0.3]: {order:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
