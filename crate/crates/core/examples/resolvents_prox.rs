// Resolvents of generalized monotone operators and the prox catalog,
// checked against the brute-force prox.

use conical::operators::{FunctionSpec, OperatorSpec};
use conical::oracle::{brute_prox, GridConfig};
use conical::resolvents::{cert_resolvent_comonotone, prox, reflected_resolvent, resolvent};
use conical::{Result, Vector};

pub fn run_example() -> Result<()> {
    // A = −0.5·Id is not monotone but is (−2)-comonotone; γ = 4 > 2 keeps J single-valued.
    let a = OperatorSpec::scaled_identity(-0.5)?;
    let x = Vector::new(vec![2.0])?;
    println!("J_4A(2) = {:?}", resolvent(&a, 4.0, &x)?.as_slice());
    let cert = cert_resolvent_comonotone(-2.0, 4.0, 1.0)?;
    println!("J_4A is conically {}-averaged", cert.theta);

    let box_ = OperatorSpec::subdifferential(FunctionSpec::box_indicator(
        Vector::new(vec![-1.0, -1.0])?,
        Vector::new(vec![1.0, 1.0])?,
    )?)?;
    let y = Vector::new(vec![3.0, 0.25])?;
    println!("reflection through the box: {:?}", reflected_resolvent(&box_, 1.0, &y)?.as_slice());

    let cfg = GridConfig::default();
    let catalog = [
        FunctionSpec::l1(1.0)?,
        FunctionSpec::weakly_convex_l1(1.0, 0.5)?,
        FunctionSpec::box_indicator(Vector::new(vec![0.0, 0.0])?, Vector::new(vec![1.0, 2.0])?)?,
    ];
    let z = Vector::new(vec![3.0, -0.4])?;
    for f in &catalog {
        let closed = prox(f, 1.0, &z)?;
        let brute = brute_prox(f, 1.0, &z, &cfg)?;
        println!("{f:?}: prox = {:?}, |prox - grid| = {:.1e}", closed.as_slice(), closed.distance(&brute));
        assert!(closed.distance(&brute) < 1e-6);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
