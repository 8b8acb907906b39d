// Building a problem from JSON and sweeping κ across its threshold, as the
// `sweep` subcommand does.

use conical::cli::commands::{sweep_rows, Overrides, SWEEP_HEADER};
use conical::cli::ProblemSpec;
use conical::Result;

const SPEC: &str = r#"{
    "dimension": 1,
    "algorithm": "rpp",
    "a": {"type": "scaled_identity", "a": -0.5},
    "gamma": 4.0,
    "kappa": 0.5,
    "x0": [1.0],
    "max_iter": 500,
    "sweep": {"kappa": [0.25, 0.5, 0.9, 1.0, 1.1]}
}"#;

pub fn run_example() -> Result<()> {
    let spec = ProblemSpec::from_json(SPEC)?;
    let rows = sweep_rows(&spec, &Overrides { jobs: Some(2), ..Overrides::default() })?;
    println!("{SWEEP_HEADER}");
    for r in &rows {
        println!("{}", r.to_csv());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
