//! Command-line front end: `validate`, `run`, `sweep`, `certify` and `oracle`.
//!
//! Exit codes: 0 ok, 1 parse or I/O error, 2 infeasible parameters,
//! 3 diverged run, 4 certification failure.

pub mod commands;
pub mod spec;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
pub use commands::{
    cmd_certify, cmd_oracle, cmd_run, cmd_sweep, cmd_validate, exit_code, Overrides, EXIT_CERT_FAIL,
    EXIT_DIVERGED, EXIT_INFEASIBLE, EXIT_OK, EXIT_PARSE,
};
pub use spec::{CertifySpec, OracleSpec, ProblemSpec};

#[derive(Parser, Debug)]
#[command(name = "conical", version, about = "Conically averaged splitting algorithms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the parameter hypotheses and print κ* with its diagnostics.
    Validate(Flags),
    /// Run the iteration and write the trace CSV.
    Run(Flags),
    /// Validate and run every cell of the problem file's sweep grid.
    Sweep(Flags),
    /// Sample a claimed conical constant or monotonicity certificate.
    Certify(Flags),
    /// Query the brute-force prox, the closed-form zeros or the order search.
    Oracle(Flags),
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// JSON spec file.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for sampling and for random starting points.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Run configurations outside the convergence guarantee.
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads for sweeps (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl Flags {
    fn overrides(&self) -> Overrides {
        Overrides {
            seed: self.seed,
            force: self.force,
            max_iter: self.max_iter,
            tol: self.tol,
            jobs: self.jobs,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Validate(f) => cmd_validate(&ProblemSpec::from_json(&read(&f.spec)?)?, out),
        Command::Run(f) => {
            let spec = ProblemSpec::from_json(&read(&f.spec)?)?;
            cmd_run(&spec, f.out.as_deref(), &f.overrides(), out, err)
        }
        Command::Sweep(f) => {
            let spec = ProblemSpec::from_json(&read(&f.spec)?)?;
            cmd_sweep(&spec, f.out.as_deref(), &f.overrides(), out)
        }
        Command::Certify(f) => cmd_certify(&CertifySpec::from_json(&read(&f.spec)?)?, &f.overrides(), out),
        Command::Oracle(f) => cmd_oracle(&OracleSpec::from_json(&read(&f.spec)?)?, out),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
