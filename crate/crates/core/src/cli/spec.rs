//! JSON problem descriptions read by the command-line front end.
//!
//! Every struct rejects unknown keys so a misspelled Greek parameter fails
//! loudly instead of falling back to a default.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::{AlgorithmInstance, Regime, StepSequence};
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::linalg::Matrix;
use crate::operators::{CertKind, FunctionSpec, OperatorSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmName {
    Rpp,
    Rfb,
    AdrComonotone,
    AdrMonotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomX0 {
    pub seed: u64,
    pub scale: f64,
}

/// Starting point: explicit coordinates or `{"random": {"seed": S, "scale": R}}`,
/// uniform in `[−R, R]ⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum X0Spec {
    Explicit(Vector),
    Random { random: RandomX0 },
}

impl Default for X0Spec {
    fn default() -> Self {
        X0Spec::Random {
            random: RandomX0 { seed: 0, scale: 1.0 },
        }
    }
}

impl X0Spec {
    pub fn realize(&self, dim: usize, seed_override: Option<u64>) -> Result<Vector> {
        match self {
            X0Spec::Explicit(v) => {
                v.check_dim(dim)?;
                Ok(v.clone())
            }
            X0Spec::Random { random } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed_override.unwrap_or(random.seed));
                let r = random.scale;
                Vector::new(
                    (0..dim)
                        .map(|_| if r > 0.0 { rng.random_range(-r..r) } else { 0.0 })
                        .collect(),
                )
            }
        }
    }
}

/// A sweep axis: an explicit list, or `count` evenly spaced points from
/// `from` to `to` inclusive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Range(Linspace),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Linspace {
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Axis::List(v) => v.clone(),
            Axis::Range(Linspace { from, to, count }) => match count {
                0 => vec![],
                1 => vec![*from],
                n => (0..*n)
                    .map(|i| from + (to - from) * i as f64 / (*n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepGrid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Axis>,
    /// κ as a multiple of each cell's κ*.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_rel: Option<Axis>,
}

/// One point of a sweep grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub gamma: f64,
    pub delta: Option<f64>,
    pub kappa: Kappa,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kappa {
    Absolute(f64),
    Relative(f64),
}

fn default_tol() -> f64 {
    crate::algorithms::km::DEFAULT_TOL
}

fn default_max_iter() -> usize {
    10_000
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub dimension: usize,
    pub algorithm: AlgorithmName,
    pub a: OperatorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<OperatorSpec>,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// κ given as a multiple of κ*.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_rel: Option<f64>,
    /// Constant KM step; shorthand for `steps: {"kind": "constant", ...}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<StepSequence>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub swap: bool,
    #[serde(default)]
    pub x0: X0Spec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Overrides the computed zero of `A + B` used for `dist_to_solution`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepGrid>,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parse(format!("{name} must be finite")))
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProblemSpec = parse_json(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs serialize")
    }

    /// Structural checks; parameter hypotheses are left to the algorithms.
    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::Parse("dimension must be >= 1".into()));
        }
        let probe = Vector::zeros(self.dimension);
        self.a.check_dim(&probe)?;
        if let Some(b) = &self.b {
            b.check_dim(&probe)?;
        }
        let needs_b = self.algorithm != AlgorithmName::Rpp;
        if needs_b != self.b.is_some() {
            return Err(Error::Parse(format!(
                "algorithm {:?} {} operator b",
                self.algorithm,
                if needs_b { "requires" } else { "does not take" }
            )));
        }
        let adr = matches!(self.algorithm, AlgorithmName::AdrComonotone | AlgorithmName::AdrMonotone);
        if adr != self.delta.is_some() {
            return Err(Error::Parse(format!(
                "delta is {} for algorithm {:?}",
                if adr { "required" } else { "not used" },
                self.algorithm
            )));
        }
        if self.swap && !adr {
            return Err(Error::Parse("swap applies to adaptive DR only".into()));
        }
        finite("gamma", self.gamma)?;
        for (name, v) in [
            ("delta", self.delta),
            ("kappa", self.kappa),
            ("kappa_rel", self.kappa_rel),
            ("lambda_step", self.lambda_step),
        ] {
            if let Some(v) = v {
                finite(name, v)?;
            }
        }
        finite("tol", self.tol)?;
        if self.lambda_step.is_some() && self.steps.is_some() {
            return Err(Error::Parse("give either lambda_step or steps, not both".into()));
        }
        let sweeps_kappa = self
            .sweep
            .as_ref()
            .is_some_and(|g| g.kappa.is_some() || g.kappa_rel.is_some());
        match (self.kappa, self.kappa_rel) {
            (Some(_), Some(_)) => return Err(Error::Parse("give either kappa or kappa_rel, not both".into())),
            (None, None) if !sweeps_kappa => {
                return Err(Error::Parse("one of kappa or kappa_rel is required".into()))
            }
            _ => {}
        }
        if let X0Spec::Explicit(v) = &self.x0 {
            v.check_dim(self.dimension)?;
        }
        if let X0Spec::Random { random } = &self.x0 {
            if !(random.scale.is_finite() && random.scale >= 0.0) {
                return Err(Error::Parse("x0.random.scale must be finite and >= 0".into()));
            }
        }
        if let Some(s) = &self.solution {
            s.check_dim(self.dimension)?;
        }
        if let Some(g) = &self.sweep {
            if g.kappa.is_some() && g.kappa_rel.is_some() {
                return Err(Error::Parse("sweep over kappa or kappa_rel, not both".into()));
            }
            for axis in [&g.gamma, &g.delta, &g.kappa, &g.kappa_rel].into_iter().flatten() {
                for v in axis.values() {
                    finite("sweep value", v)?;
                }
            }
        }
        Ok(())
    }

    pub fn steps(&self) -> StepSequence {
        match (self.steps, self.lambda_step) {
            (Some(s), _) => s,
            (None, Some(l)) => StepSequence::constant(l),
            (None, None) => StepSequence::constant(1.0),
        }
    }

    /// The cell described by the top-level parameters.
    pub fn base_cell(&self) -> Cell {
        Cell {
            gamma: self.gamma,
            delta: self.delta,
            kappa: match (self.kappa, self.kappa_rel) {
                (Some(k), _) => Kappa::Absolute(k),
                (None, Some(r)) => Kappa::Relative(r),
                (None, None) => Kappa::Relative(0.5),
            },
        }
    }

    /// Grid cells in row-major order: γ outermost, then δ, then κ.
    pub fn grid(&self) -> Result<Vec<Cell>> {
        let g = self
            .sweep
            .as_ref()
            .ok_or_else(|| Error::Parse("spec has no sweep grid".into()))?;
        let base = self.base_cell();
        let gammas = g.gamma.as_ref().map_or(vec![base.gamma], Axis::values);
        let deltas: Vec<Option<f64>> = match &g.delta {
            Some(a) => a.values().into_iter().map(Some).collect(),
            None => vec![base.delta],
        };
        let kappas: Vec<Kappa> = match (&g.kappa, &g.kappa_rel) {
            (Some(a), _) => a.values().into_iter().map(Kappa::Absolute).collect(),
            (None, Some(a)) => a.values().into_iter().map(Kappa::Relative).collect(),
            (None, None) => vec![base.kappa],
        };
        let swept = [&g.gamma, &g.delta, &g.kappa, &g.kappa_rel];
        if swept.iter().all(|a| a.is_none()) || gammas.is_empty() || deltas.is_empty() || kappas.is_empty() {
            return Err(Error::Parse("sweep grid is empty".into()));
        }
        let mut cells = Vec::with_capacity(gammas.len() * deltas.len() * kappas.len());
        for &gamma in &gammas {
            for &delta in &deltas {
                for &kappa in &kappas {
                    cells.push(Cell { gamma, delta, kappa });
                }
            }
        }
        Ok(cells)
    }

    /// Builds the certified algorithm for one cell. A relative κ is resolved
    /// against the κ* of that cell.
    pub fn instance(&self, cell: Cell) -> Result<AlgorithmInstance> {
        let build = |kappa: f64| -> Result<AlgorithmInstance> {
            let a = self.a.clone();
            let b = || self.b.clone().expect("validated");
            let inst = match self.algorithm {
                AlgorithmName::Rpp => AlgorithmInstance::build_rpp(a, cell.gamma, kappa)?,
                AlgorithmName::Rfb => AlgorithmInstance::build_rfb(a, b(), cell.gamma, kappa)?,
                AlgorithmName::AdrComonotone | AlgorithmName::AdrMonotone => {
                    let regime = if self.algorithm == AlgorithmName::AdrMonotone {
                        Regime::Monotone
                    } else {
                        Regime::Comonotone
                    };
                    let delta = cell
                        .delta
                        .ok_or_else(|| Error::Parse("delta is required for adaptive DR".into()))?;
                    AlgorithmInstance::build_adr(a, b(), cell.gamma, delta, kappa, regime)?
                }
            };
            if self.swap {
                inst.swapped()
            } else {
                Ok(inst)
            }
        };
        match cell.kappa {
            Kappa::Absolute(k) => build(k),
            Kappa::Relative(r) => {
                let ks = build(1.0)?.kappa_star();
                build(r * ks)
            }
        }
    }
}

fn default_samples() -> usize {
    10_000
}

fn default_radius() -> f64 {
    10.0
}

fn default_sample_tol() -> f64 {
    crate::oracle::DEFAULT_TOL
}

fn one() -> f64 {
    1.0
}

/// What `certify` samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    /// `x ↦ Mx`
    Linear { m: Matrix },
    /// `(1−λ)Id + λJ_{γA}`
    Resolvent {
        operator: OperatorSpec,
        gamma: f64,
        #[serde(default = "one")]
        lambda: f64,
    },
    /// `Id − γB`
    ForwardStep { operator: OperatorSpec, gamma: f64 },
    /// The maps applied in list order.
    Compose { maps: Vec<Target> },
    /// The full iteration map of a problem.
    Algorithm { problem: Box<ProblemSpec> },
    /// The monotonicity inequality of an operator itself.
    Monotonicity {
        operator: OperatorSpec,
        kind: CertKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySpec {
    pub dimension: usize,
    pub target: Target,
    /// Claimed constant; defaults to the certified one when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Pairs are drawn from `[−radius, radius]ⁿ`.
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default = "default_sample_tol")]
    pub tol: f64,
}

impl CertifySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: CertifySpec = parse_json(text)?;
        if spec.dimension == 0 {
            return Err(Error::Parse("dimension must be >= 1".into()));
        }
        if let Some(t) = spec.theta {
            finite("theta", t)?;
        }
        finite("radius", spec.radius)?;
        finite("tol", spec.tol)?;
        Ok(spec)
    }
}

/// Direct queries of the brute-force oracles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    BruteProx {
        function: FunctionSpec,
        gamma: f64,
        x: Vector,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<usize>,
    },
    AnalyticZero {
        dimension: usize,
        a: OperatorSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<OperatorSpec>,
    },
    AdmissibleOrder { thetas: Vec<f64> },
}

impl OracleSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        parse_json(text)
    }
}
