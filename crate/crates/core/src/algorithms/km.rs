//! Krasnosel'skiĭ–Mann iteration `x_{n+1} = (1−λₙ)xₙ + λₙTxₙ` with per-step
//! diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Vector;

/// Defaults for tolerance and iteration cap.
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Iterates whose norm exceeds this are treated as divergent.
pub const DIVERGENCE_NORM: f64 = 1e12;

/// A single-valued map with full domain, plus the point a fixed point is
/// mapped to for reading off a solution.
pub trait FixedPointMap: Sync {
    fn apply(&self, x: &Vector) -> Result<Vector>;

    fn shadow(&self, x: &Vector) -> Result<Vector> {
        Ok(x.clone())
    }
}

/// Wraps a closure as a [`FixedPointMap`] with identity shadow.
pub struct FnMap<F>(pub F);

impl<F> FixedPointMap for FnMap<F>
where
    F: Fn(&Vector) -> Result<Vector> + Sync,
{
    fn apply(&self, x: &Vector) -> Result<Vector> {
        (self.0)(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepSequence {
    /// `λₙ ≡ λ`
    Constant { lambda: f64 },
    /// `λₙ = (1/θ)(1 − c/(n+1))` with `c ∈ (0, 1]`.
    HarmonicTail { c: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    /// `Σ λₙ(1 − θλₙ) = ∞` holds.
    Admissible,
    /// Steps lie in `[0, 1/θ]` but the divergent-sum condition fails.
    Boundary,
    /// Some step leaves `[0, 1/θ]`.
    Inadmissible,
}

impl StepSequence {
    pub fn constant(lambda: f64) -> Self {
        StepSequence::Constant { lambda }
    }

    pub fn lambda(&self, n: usize, theta: f64) -> f64 {
        match *self {
            StepSequence::Constant { lambda } => lambda,
            StepSequence::HarmonicTail { c } => (1.0 - c / (n as f64 + 1.0)) / theta,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, StepSequence::Constant { .. })
    }

    /// Classifies the sequence against the conical constant θ of the map.
    pub fn admissibility(&self, theta: f64) -> Result<Admissibility> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::StepSequence(format!("theta must be > 0 (got {theta})")));
        }
        match *self {
            StepSequence::Constant { lambda } => {
                if !lambda.is_finite() || lambda < 0.0 {
                    return Err(Error::StepSequence(format!("lambda must be >= 0 (got {lambda})")));
                }
                let prod = lambda * (1.0 - theta * lambda);
                Ok(if prod > 0.0 {
                    Admissibility::Admissible
                } else if lambda == 0.0 || (theta * lambda - 1.0).abs() <= 1e-12 {
                    Admissibility::Boundary
                } else {
                    Admissibility::Inadmissible
                })
            }
            StepSequence::HarmonicTail { c } => {
                if c > 0.0 && c <= 1.0 {
                    Ok(Admissibility::Admissible)
                } else {
                    Err(Error::StepSequence(format!("harmonic tail needs c in (0, 1] (got {c})")))
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct KmOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// A true fixed point of the map, for Fejér gaps.
    pub reference: Option<Vector>,
    /// The solution the shadow sequence should approach.
    pub solution: Option<Vector>,
    /// Keep `xₙ` every `stride` iterations; 0 keeps none.
    pub snapshot_stride: usize,
    /// Run steps outside `[0, 1/θ]` instead of rejecting them.
    pub force: bool,
}

impl Default for KmOptions {
    fn default() -> Self {
        KmOptions {
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
            reference: None,
            solution: None,
            snapshot_stride: 0,
            force: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    pub n: usize,
    pub residual: f64,
    pub fejer_gap: Option<f64>,
    pub dist_to_solution: Option<f64>,
    /// `√n · rₙ`
    pub rate_stat: f64,
    pub x_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<Vector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIter,
    Diverged,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIter => "max_iter",
            Status::Diverged => "diverged",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IterationTrace {
    pub records: Vec<TraceRecord>,
    pub status: Status,
    pub steps: StepSequence,
    pub tol: f64,
    pub final_x: Vector,
    pub final_shadow: Option<Vector>,
    pub warnings: Vec<String>,
}

impl IterationTrace {
    /// Index of the last recorded iterate.
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.n)
    }

    pub fn final_residual(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.residual)
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.residual).collect()
    }
}

/// Runs the iteration from `x0` until the residual `‖xₙ − Txₙ‖` drops to
/// `tol`, the iteration cap is hit, or the iterates blow up.
pub fn km_run(
    map: &dyn FixedPointMap,
    theta: f64,
    x0: &Vector,
    steps: StepSequence,
    opts: &KmOptions,
) -> Result<IterationTrace> {
    let mut warnings = Vec::new();
    match steps.admissibility(theta)? {
        Admissibility::Admissible => {}
        Admissibility::Boundary => warnings.push(format!(
            "step sequence on the boundary for theta = {theta}: convergence not guaranteed"
        )),
        Admissibility::Inadmissible if opts.force => warnings.push(format!(
            "step sequence outside [0, 1/theta] for theta = {theta}, run forced"
        )),
        Admissibility::Inadmissible => {
            return Err(Error::StepSequence(format!(
                "steps must lie in [0, 1/theta] = [0, {}] (got {steps:?})",
                1.0 / theta
            )))
        }
    }
    if let Some(r) = &opts.reference {
        r.check_dim(x0.dim())?;
    }
    if let Some(s) = &opts.solution {
        s.check_dim(x0.dim())?;
    }

    let mut records = Vec::new();
    let mut x = x0.clone();
    let mut n = 0usize;
    let status = loop {
        let tx = map.apply(&x)?;
        let residual = x.distance(&tx);
        let dist_to_solution = match &opts.solution {
            Some(s) => Some(map.shadow(&x)?.distance(s)),
            None => None,
        };
        let snapshot = (opts.snapshot_stride > 0 && n % opts.snapshot_stride == 0).then(|| x.clone());
        records.push(TraceRecord {
            n,
            residual,
            fejer_gap: None,
            dist_to_solution,
            rate_stat: (n as f64).sqrt() * residual,
            x_norm: x.norm(),
            snapshot,
        });
        if !residual.is_finite() {
            break Status::Diverged;
        }
        if residual <= opts.tol {
            break Status::Converged;
        }
        if n >= opts.max_iter {
            break Status::MaxIter;
        }
        let lambda = steps.lambda(n, theta);
        let next = x.lincomb(1.0 - lambda, &tx, lambda);
        if let Some(r) = &opts.reference {
            records.last_mut().unwrap().fejer_gap = Some(next.distance(r) - x.distance(r));
        }
        x = next;
        n += 1;
        if !x.is_finite() || x.norm() > DIVERGENCE_NORM {
            records.push(TraceRecord {
                n,
                residual: f64::NAN,
                fejer_gap: None,
                dist_to_solution: None,
                rate_stat: f64::NAN,
                x_norm: x.norm(),
                snapshot: None,
            });
            break Status::Diverged;
        }
    };
    let final_shadow = if status == Status::Diverged {
        None
    } else {
        Some(map.shadow(&x)?)
    };
    Ok(IterationTrace {
        records,
        status,
        steps,
        tol: opts.tol,
        final_x: x,
        final_shadow,
        warnings,
    })
}
