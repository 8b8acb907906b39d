use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::spec::{AlgorithmName, Cell, CertifySpec, Kappa, OracleSpec, ProblemSpec, Target};
use crate::algorithms::{
    validate_params, AlgorithmInstance, FixedPointMap, IterationTrace, KmOptions, ParamReport, Regime,
    RfbCase, Status,
};
use crate::calculus::compose_many;
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::linalg::Matrix;
use crate::operators::{CertKind, OperatorSpec};
use crate::oracle::{
    analytic_zero, brute_prox, find_admissible_order, sample_conical_check, sample_monotonicity_check,
    zero_witness, AnalyticZero, GridConfig, SampleBox, SampleReport,
};
use crate::resolvents::{cert_forward_step, cert_resolvent_comonotone, prox, Resolvent};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_CERT_FAIL: i32 = 4;

/// Exit code for an error that aborts a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parameter(_)
        | Error::Infeasible(_)
        | Error::NotCovered(_)
        | Error::ChainViolation { .. }
        | Error::StepSequence(_)
        | Error::Singular => EXIT_INFEASIBLE,
        _ => EXIT_PARSE,
    }
}

/// Command-line overrides shared by the subcommands.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub force: bool,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub jobs: Option<usize>,
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

fn fmt_vec(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|&x| fmt(x)).collect();
    format!("[{}]", parts.join(","))
}

fn print_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
pub struct ValidateReport {
    pub algorithm: AlgorithmName,
    pub feasible: bool,
    pub guaranteed: bool,
    pub gamma: f64,
    pub delta: Option<f64>,
    pub kappa: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub kappa_star: Option<f64>,
    pub theta: Option<f64>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub rfb_case: Option<RfbCase>,
    pub params: Option<ParamReport>,
    pub reason: Option<String>,
    pub warnings: Vec<String>,
}

fn regime_of(alg: AlgorithmName) -> Option<Regime> {
    match alg {
        AlgorithmName::AdrComonotone => Some(Regime::Comonotone),
        AlgorithmName::AdrMonotone => Some(Regime::Monotone),
        _ => None,
    }
}

/// The (γ, δ) diagnostics for an aDR spec, computed from the operator
/// certificates directly so they are available when the build fails.
fn adr_diagnostics(spec: &ProblemSpec, cell: Cell) -> Option<ParamReport> {
    let regime = regime_of(spec.algorithm)?;
    let kind = match regime {
        Regime::Comonotone => CertKind::Comonotone,
        Regime::Monotone => CertKind::Monotone,
    };
    let alpha = spec.a.cert(kind)?.alpha;
    let beta = spec.b.as_ref()?.cert(kind)?.alpha;
    validate_params(regime, alpha, beta, cell.gamma, cell.delta?).ok()
}

pub fn validate_report(spec: &ProblemSpec, cell: Cell) -> ValidateReport {
    let mut r = ValidateReport {
        algorithm: spec.algorithm,
        feasible: false,
        guaranteed: false,
        gamma: cell.gamma,
        delta: cell.delta,
        kappa: match cell.kappa {
            Kappa::Absolute(k) => Some(k),
            Kappa::Relative(_) => None,
        },
        alpha: None,
        beta: None,
        kappa_star: None,
        theta: None,
        lambda: None,
        mu: None,
        rfb_case: None,
        params: adr_diagnostics(spec, cell),
        reason: None,
        warnings: vec![],
    };
    match spec.instance(cell) {
        Ok(inst) => {
            r.feasible = true;
            r.guaranteed = inst.guaranteed();
            r.kappa = Some(inst.kappa());
            r.alpha = Some(inst.alpha());
            r.beta = inst.beta();
            r.kappa_star = Some(inst.kappa_star());
            r.theta = Some(inst.theta());
            r.lambda = inst.lambda();
            r.mu = inst.mu();
            r.rfb_case = inst.rfb_case();
            r.params = inst.param_report().cloned().or(r.params);
            r.warnings = inst.warnings().to_vec();
        }
        Err(e) => r.reason = Some(e.to_string()),
    }
    r
}

/// Prints the parameter report; exit 0 when the theorem applies with κ < κ*.
pub fn cmd_validate(spec: &ProblemSpec, out: &mut dyn Write) -> Result<i32> {
    let r = validate_report(spec, spec.base_cell());
    print_json(out, &r)?;
    Ok(if r.feasible && r.guaranteed { EXIT_OK } else { EXIT_INFEASIBLE })
}

/// Solution and fixed-point references for the diagnostics columns.
pub fn references(spec: &ProblemSpec, inst: &AlgorithmInstance) -> (Option<Vector>, Option<Vector>, Vec<String>) {
    let mut notes = Vec::new();
    let z = match &spec.solution {
        Some(z) => Some(z.clone()),
        None => match analytic_zero(&spec.a, spec.b.as_ref(), spec.dimension) {
            Ok(AnalyticZero::Known(z)) => Some(z),
            Ok(AnalyticZero::Unknown(why)) => {
                notes.push(format!("no reference solution: {why}"));
                None
            }
            Err(e) => {
                notes.push(format!("no reference solution: {e}"));
                None
            }
        },
    };
    let Some(z) = z else {
        return (None, None, notes);
    };
    let a = match &spec.b {
        None => Ok(Vector::zeros(z.dim())),
        Some(b) => zero_witness(&spec.a, b, &z),
    };
    let reference = match a.and_then(|a| inst.fixed_point_from_zero(&z, &a)) {
        Ok(x) => Some(x),
        Err(e) => {
            notes.push(format!("no fixed-point reference: {e}"));
            None
        }
    };
    (Some(z), reference, notes)
}

pub fn km_options(spec: &ProblemSpec, ov: &Overrides) -> KmOptions {
    KmOptions {
        max_iter: ov.max_iter.unwrap_or(spec.max_iter),
        tol: ov.tol.unwrap_or(spec.tol),
        force: ov.force,
        ..KmOptions::default()
    }
}

/// Writes `n,residual,fejer_gap,dist_to_solution,rate_stat`.
pub fn write_trace_csv(trace: &IterationTrace, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "n,residual,fejer_gap,dist_to_solution,rate_stat")?;
    for r in &trace.records {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            fmt(r.residual),
            fmt_opt(r.fejer_gap),
            fmt_opt(r.dist_to_solution),
            fmt(r.rate_stat)
        )?;
    }
    Ok(())
}

/// Runs the problem, writes the trace CSV to `out_path` and a summary line to `out`.
pub fn cmd_run(
    spec: &ProblemSpec,
    out_path: Option<&Path>,
    ov: &Overrides,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let inst = spec.instance(spec.base_cell())?;
    if !inst.guaranteed() && !ov.force {
        return Err(Error::Infeasible(format!(
            "kappa = {} >= kappa* = {}; pass --force to run anyway",
            inst.kappa(),
            inst.kappa_star()
        )));
    }
    let x0 = spec.x0.realize(spec.dimension, ov.seed)?;
    let mut file = out_path.map(create).transpose()?;
    let (solution, reference, notes) = references(spec, &inst);
    let opts = KmOptions {
        solution,
        reference,
        ..km_options(spec, ov)
    };
    let trace = inst.run(&x0, spec.steps(), &opts)?;
    if let Some(f) = file.as_mut() {
        write_trace_csv(&trace, f)?;
        f.flush()?;
    }
    for w in notes.iter().chain(&trace.warnings) {
        writeln!(err, "warning: {w}")?;
    }
    let shadow = trace
        .final_shadow
        .as_ref()
        .map(fmt_vec)
        .unwrap_or_else(|| "none".into());
    writeln!(
        out,
        "status={} iterations={} final_residual={} shadow={}",
        trace.status.as_str(),
        trace.iterations(),
        fmt(trace.final_residual()),
        shadow
    )?;
    Ok(if trace.status == Status::Diverged { EXIT_DIVERGED } else { EXIT_OK })
}

/// One row of the sweep summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub delta: Option<f64>,
    pub kappa: Option<f64>,
    pub feasible: bool,
    pub guaranteed: bool,
    pub kappa_star: Option<f64>,
    pub status: String,
    pub iterations: Option<usize>,
    pub final_residual: Option<f64>,
}

pub const SWEEP_HEADER: &str =
    "gamma,delta,kappa,feasible,guaranteed,kappa_star,status,iterations,final_residual";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            fmt(self.gamma),
            fmt_opt(self.delta),
            fmt_opt(self.kappa),
            self.feasible,
            self.guaranteed,
            fmt_opt(self.kappa_star),
            self.status,
            self.iterations.map(|n| n.to_string()).unwrap_or_default(),
            fmt_opt(self.final_residual)
        )
    }
}

/// Validates and runs one cell. Feasible cells always run; cells with
/// κ ≥ κ* run with forced steps and are marked not guaranteed.
pub fn sweep_cell(spec: &ProblemSpec, cell: Cell, x0: &Vector, ov: &Overrides) -> SweepRow {
    let mut row = SweepRow {
        gamma: cell.gamma,
        delta: cell.delta,
        kappa: match cell.kappa {
            Kappa::Absolute(k) => Some(k),
            Kappa::Relative(_) => None,
        },
        feasible: false,
        guaranteed: false,
        kappa_star: None,
        status: "infeasible".into(),
        iterations: None,
        final_residual: None,
    };
    let inst = match spec.instance(cell) {
        Ok(i) => i,
        Err(_) => return row,
    };
    row.feasible = true;
    row.guaranteed = inst.guaranteed();
    row.kappa = Some(inst.kappa());
    row.kappa_star = Some(inst.kappa_star());
    let opts = KmOptions {
        force: true,
        ..km_options(spec, ov)
    };
    match inst.run(x0, spec.steps(), &opts) {
        Ok(t) => {
            row.status = t.status.as_str().into();
            row.iterations = Some(t.iterations());
            row.final_residual = Some(t.final_residual());
        }
        Err(_) => row.status = "error".into(),
    }
    row
}

/// Runs every grid cell on a pool of `--jobs` threads; rows come out in grid order.
pub fn sweep_rows(spec: &ProblemSpec, ov: &Overrides) -> Result<Vec<SweepRow>> {
    let cells = spec.grid()?;
    let x0 = spec.x0.realize(spec.dimension, ov.seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ov.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    Ok(pool.install(|| cells.par_iter().map(|&c| sweep_cell(spec, c, &x0, ov)).collect()))
}

pub fn cmd_sweep(spec: &ProblemSpec, out_path: Option<&Path>, ov: &Overrides, out: &mut dyn Write) -> Result<i32> {
    let rows = sweep_rows(spec, ov)?;
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    for r in &rows {
        text.push_str(&r.to_csv());
        text.push('\n');
    }
    match out_path {
        Some(p) => {
            let mut f = create(p)?;
            f.write_all(text.as_bytes())?;
            f.flush()?;
            let feasible = rows.iter().filter(|r| r.feasible).count();
            writeln!(out, "cells={} feasible={} written={}", rows.len(), feasible, p.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Maps that `certify` can sample.
pub enum CertMap {
    Linear(Matrix),
    Relaxed(Resolvent, f64),
    Forward(OperatorSpec, f64),
    Chain(Vec<CertMap>),
    Algorithm(Box<AlgorithmInstance>),
}

impl FixedPointMap for CertMap {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        match self {
            CertMap::Linear(m) => m.mul_vec(x),
            CertMap::Relaxed(j, lambda) => j.apply_relaxed(*lambda, x),
            CertMap::Forward(b, gamma) => Ok(x.lincomb(1.0, &b.evaluate(x)?, -gamma)),
            CertMap::Chain(maps) => maps.iter().try_fold(x.clone(), |y, m| m.apply(&y)),
            CertMap::Algorithm(inst) => inst.apply(x),
        }
    }
}

fn comonotone_alpha(op: &OperatorSpec) -> Option<f64> {
    op.cert(CertKind::Comonotone).map(|c| c.alpha)
}

/// The sampled map and its certified constant, when the calculus provides one.
pub fn build_target(target: &Target, dim: usize) -> Result<(CertMap, Option<f64>)> {
    let probe = Vector::zeros(dim);
    Ok(match target {
        Target::Linear { m } => {
            probe.check_dim(m.dim())?;
            (CertMap::Linear(m.clone()), None)
        }
        Target::Resolvent { operator, gamma, lambda } => {
            operator.check_dim(&probe)?;
            let theta = comonotone_alpha(operator)
                .and_then(|a| cert_resolvent_comonotone(a, *gamma, *lambda).ok())
                .map(|c| c.theta);
            (CertMap::Relaxed(Resolvent::new(operator, *gamma)?, *lambda), theta)
        }
        Target::ForwardStep { operator, gamma } => {
            operator.check_dim(&probe)?;
            if !operator.is_evaluable() {
                return Err(Error::NotEvaluable("forward step needs a pointwise-evaluable operator"));
            }
            let theta = comonotone_alpha(operator)
                .and_then(|b| cert_forward_step(b, *gamma).ok())
                .map(|c| c.theta);
            (CertMap::Forward(operator.clone(), *gamma), theta)
        }
        Target::Compose { maps } => {
            if maps.is_empty() {
                return Err(Error::Parse("compose needs at least one map".into()));
            }
            let mut built = Vec::with_capacity(maps.len());
            let mut thetas = Some(Vec::with_capacity(maps.len()));
            for t in maps {
                let (m, th) = build_target(t, dim)?;
                built.push(m);
                thetas = thetas.zip(th).map(|(mut v, th)| {
                    v.push(th);
                    v
                });
            }
            let theta = thetas.and_then(|v| compose_many(&v).ok()).map(|c| c.theta);
            (CertMap::Chain(built), theta)
        }
        Target::Algorithm { problem } => {
            problem.validate()?;
            probe.check_dim(problem.dimension)?;
            let inst = problem.instance(problem.base_cell())?;
            let theta = inst.theta();
            (CertMap::Algorithm(Box::new(inst)), Some(theta))
        }
        Target::Monotonicity { .. } => {
            return Err(Error::Parse("monotonicity targets are not maps".into()));
        }
    })
}

#[derive(Debug, Serialize)]
pub struct CertifyOutput {
    pub check: &'static str,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub report: SampleReport,
}

pub fn certify(spec: &CertifySpec, seed: u64) -> Result<CertifyOutput> {
    let region = SampleBox::cube(spec.dimension, spec.radius);
    if let Target::Monotonicity { operator, kind, alpha } = &spec.target {
        operator.check_dim(&Vector::zeros(spec.dimension))?;
        let alpha = match alpha {
            Some(a) => *a,
            None => operator
                .cert(*kind)
                .map(|c| c.alpha)
                .ok_or_else(|| Error::Parameter(format!("operator has no {kind:?} certificate; give alpha")))?,
        };
        let report = sample_monotonicity_check(operator, alpha, *kind, &region, spec.samples, spec.tol, seed)?;
        return Ok(CertifyOutput {
            check: "monotonicity",
            theta: None,
            alpha: Some(alpha),
            report,
        });
    }
    let (map, certified) = build_target(&spec.target, spec.dimension)?;
    let theta = spec
        .theta
        .or(certified)
        .ok_or_else(|| Error::Parameter("no certified theta for this target; give theta".into()))?;
    let report = sample_conical_check(&map, theta, &region, spec.samples, spec.tol, seed)?;
    Ok(CertifyOutput {
        check: "conical",
        theta: Some(theta),
        alpha: None,
        report,
    })
}

/// Samples the claim; exit 0 on pass, 4 on a falsifying witness.
pub fn cmd_certify(spec: &CertifySpec, ov: &Overrides, out: &mut dyn Write) -> Result<i32> {
    let c = certify(spec, ov.seed.unwrap_or(0))?;
    print_json(out, &c)?;
    Ok(if c.report.passed() { EXIT_OK } else { EXIT_CERT_FAIL })
}

#[derive(Debug, Serialize)]
#[serde(tag = "query", rename_all = "snake_case")]
pub enum OracleOutput {
    BruteProx { z: Vector, closed_form: Vector, distance: f64 },
    AnalyticZero { zero: AnalyticZero },
    AdmissibleOrder { order: Option<Vec<usize>> },
}

pub fn oracle_query(spec: &OracleSpec) -> Result<OracleOutput> {
    Ok(match spec {
        OracleSpec::BruteProx { function, gamma, x, radius, points } => {
            let d = GridConfig::default();
            let cfg = GridConfig {
                radius: radius.unwrap_or(d.radius),
                points: points.unwrap_or(d.points),
                ..d
            };
            let z = brute_prox(function, *gamma, x, &cfg)?;
            let closed_form = prox(function, *gamma, x)?;
            let distance = z.distance(&closed_form);
            OracleOutput::BruteProx { z, closed_form, distance }
        }
        OracleSpec::AnalyticZero { dimension, a, b } => OracleOutput::AnalyticZero {
            zero: analytic_zero(a, b.as_ref(), *dimension)?,
        },
        OracleSpec::AdmissibleOrder { thetas } => OracleOutput::AdmissibleOrder {
            order: find_admissible_order(thetas)?,
        },
    })
}

pub fn cmd_oracle(spec: &OracleSpec, out: &mut dyn Write) -> Result<i32> {
    print_json(out, &oracle_query(spec)?)?;
    Ok(EXIT_OK)
}
