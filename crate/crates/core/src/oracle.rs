//! Independent brute-force checks: sampling falsifiers for the certified
//! inequalities, grid minimizers, closed-form zeros, and trace diagnostics.
//!
//! Sampling is split into fixed batches, each with its own ChaCha stream
//! derived from `(seed, batch)`, so reports do not depend on thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::km::{FixedPointMap, IterationTrace};
use crate::calculus::compose_many;
use crate::error::{Error, Result};
use crate::hilbert::{dot, Vector};
use crate::linalg::Matrix;
use crate::operators::{CertKind, FunctionSpec, OperatorSpec, OperatorVariant};
use crate::resolvents::{check_prox_params, Prox};

const BATCH: usize = 1024;

/// Default slack tolerance (relative to the compared squared norms).
pub const DEFAULT_TOL: f64 = 1e-9;

/// Axis-aligned sampling region.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleBox {
    lo: Vector,
    hi: Vector,
}

impl SampleBox {
    pub fn new(lo: Vector, hi: Vector) -> Result<Self> {
        hi.check_dim(lo.dim())?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
            return Err(Error::Parameter("sampling box requires lo <= hi".into()));
        }
        Ok(SampleBox { lo, hi })
    }

    /// `[−r, r]ⁿ`
    pub fn cube(dim: usize, r: f64) -> Self {
        SampleBox {
            lo: Vector::filled(dim, -r),
            hi: Vector::filled(dim, r),
        }
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vector {
        Vector::from_raw(
            self.lo
                .iter()
                .zip(self.hi.iter())
                .map(|(&l, &h)| if l == h { l } else { rng.random_range(l..h) })
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleReport {
    /// Samples actually evaluated (points outside a function's domain are skipped).
    pub n_samples: usize,
    /// Minimum of `slack / scale` over the samples.
    pub worst_slack: f64,
    /// The sampled pair attaining the worst slack, present iff the check failed.
    pub witness: Option<(Vector, Vector)>,
    pub verdict: Verdict,
    /// Worst slack of the second, equivalent form of the inequality (when there is one).
    pub alt_worst_slack: f64,
    /// Whether both forms give the same verdict.
    pub forms_agree: bool,
}

impl SampleReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

struct Sample {
    slack: f64,
    alt: f64,
    x: Vector,
    y: Vector,
}

struct Worst {
    count: usize,
    alt: f64,
    best: Option<(f64, usize, Vector, Vector)>,
}

impl Worst {
    fn empty() -> Self {
        Worst {
            count: 0,
            alt: f64::INFINITY,
            best: None,
        }
    }

    fn merge(self, other: Worst) -> Worst {
        let best = match (self.best, other.best) {
            (None, b) | (b, None) => b,
            (Some(a), Some(b)) => {
                if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        };
        Worst {
            count: self.count + other.count,
            alt: self.alt.min(other.alt),
            best,
        }
    }
}

/// Runs `n` samples in parallel batches and reduces to the worst one.
fn sample_worst<F>(n: usize, seed: u64, eval: F) -> Result<Worst>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<Sample>> + Sync,
{
    let batches = n.div_ceil(BATCH);
    let parts: Vec<Result<Worst>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let mut w = Worst::empty();
            let len = BATCH.min(n - b * BATCH);
            for i in 0..len {
                let Some(s) = eval(&mut rng)? else { continue };
                w.count += 1;
                w.alt = w.alt.min(s.alt);
                let idx = b * BATCH + i;
                if w.best.as_ref().is_none_or(|(v, _, _, _)| s.slack < *v) {
                    w.best = Some((s.slack, idx, s.x, s.y));
                }
            }
            Ok(w)
        })
        .collect();
    let mut total = Worst::empty();
    for p in parts {
        total = total.merge(p?);
    }
    Ok(total)
}

fn report(w: Worst, tol: f64) -> SampleReport {
    let (worst, witness) = match w.best {
        Some((s, _, x, y)) => (s, Some((x, y))),
        None => (f64::INFINITY, None),
    };
    let fail = worst < -tol;
    let alt_fail = w.alt < -tol;
    SampleReport {
        n_samples: w.count,
        worst_slack: worst,
        witness: if fail { witness } else { None },
        verdict: if fail { Verdict::Fail } else { Verdict::Pass },
        alt_worst_slack: w.alt,
        forms_agree: fail == alt_fail,
    }
}

/// Slack of both equivalent forms of conical θ-averagedness for one pair,
/// each divided by `1 + max` of the squared norms involved:
///
/// * `‖x−y‖² − ((1−θ)/θ)‖(Id−T)x − (Id−T)y‖² − ‖Tx−Ty‖²`
/// * `(2(1−θ)⟨x−y, Tx−Ty⟩ − ‖Tx−Ty‖² − (1−2θ)‖x−y‖²) / θ`
pub fn conical_slack(theta: f64, x: &Vector, y: &Vector, tx: &Vector, ty: &Vector) -> (f64, f64) {
    let d = x - y;
    let dt = tx - ty;
    let dr = &d - &dt;
    let (nd, nt, nr) = (d.norm_sq(), dt.norm_sq(), dr.norm_sq());
    let c = (1.0 - theta) / theta;
    let scale = 1.0 + nd.max(nt).max(c.abs() * nr);
    let s3 = nd - c * nr - nt;
    let s4 = (2.0 * (1.0 - theta) * dot(&d, &dt) - nt - (1.0 - 2.0 * theta) * nd) / theta;
    (s3 / scale, s4 / scale)
}

/// Samples `n` pairs uniformly in `region` and checks that `T` is conically
/// θ-averaged on each of them.
pub fn sample_conical_check(
    map: &dyn FixedPointMap,
    theta: f64,
    region: &SampleBox,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<SampleReport> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::Parameter(format!("theta must be > 0 (got {theta})")));
    }
    let w = sample_worst(n, seed, |rng| {
        let x = region.sample(rng);
        let y = region.sample(rng);
        let tx = map.apply(&x)?;
        let ty = map.apply(&y)?;
        let (slack, alt) = conical_slack(theta, &x, &y, &tx, &ty);
        Ok(Some(Sample { slack, alt, x, y }))
    })?;
    Ok(report(w, tol))
}

/// Step used to generate graph pairs of a subdifferential through its prox.
fn graph_step(alpha: f64) -> f64 {
    if alpha < 0.0 {
        0.5 / alpha.abs()
    } else {
        1.0
    }
}

/// Checks `⟨x−y, u−v⟩ ≥ α‖x−y‖²` (monotone) or `≥ α‖u−v‖²` (comonotone)
/// on sampled graph pairs. Subdifferentials are sampled through
/// `a = prox(x)`, `u = (x − a)/γ ∈ ∂f(a)`.
pub fn sample_monotonicity_check(
    op: &OperatorSpec,
    alpha: f64,
    kind: CertKind,
    region: &SampleBox,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<SampleReport> {
    let graph = |x: Vector| -> Result<(Vector, Vector)> {
        match op.variant() {
            OperatorVariant::Subdifferential { function } => {
                let g = graph_step(function.alpha_convex());
                let a = Prox::new(function, g)?.apply(&x)?;
                let u = x.lincomb(1.0 / g, &a, -1.0 / g);
                Ok((a, u))
            }
            _ => {
                let u = op.evaluate(&x)?;
                Ok((x, u))
            }
        }
    };
    let w = sample_worst(n, seed, |rng| {
        let x0 = region.sample(rng);
        let y0 = region.sample(rng);
        let (a, u) = graph(x0.clone())?;
        let (b, v) = graph(y0.clone())?;
        let d = &a - &b;
        let du = &u - &v;
        let (nd, nu) = (d.norm_sq(), du.norm_sq());
        let rhs = match kind {
            CertKind::Monotone => alpha * nd,
            CertKind::Comonotone => alpha * nu,
        };
        let slack = (dot(&d, &du) - rhs) / (1.0 + nd + nu);
        Ok(Some(Sample {
            slack,
            alt: slack,
            x: x0,
            y: y0,
        }))
    })?;
    Ok(report(w, tol))
}

/// Checks `f((1−κ)x+κy) + (α/2)κ(1−κ)‖x−y‖² ≤ (1−κ)f(x) + κf(y)` on sampled
/// triples; pairs outside the domain are skipped.
pub fn sample_alpha_convexity_check(
    f: &FunctionSpec,
    alpha: f64,
    region: &SampleBox,
    n: usize,
    tol: f64,
    seed: u64,
) -> Result<SampleReport> {
    let w = sample_worst(n, seed, |rng| {
        let x = region.sample(rng);
        let y = region.sample(rng);
        let k: f64 = rng.random_range(0.0..1.0);
        let (fx, fy) = (f.value(&x)?, f.value(&y)?);
        if !(fx.is_finite() && fy.is_finite()) {
            return Ok(None);
        }
        let m = x.lincomb(1.0 - k, &y, k);
        let d2 = x.distance(&y).powi(2);
        let slack = (1.0 - k) * fx + k * fy - f.value(&m)? - 0.5 * alpha * k * (1.0 - k) * d2;
        let slack = slack / (1.0 + fx.abs() + fy.abs() + d2);
        Ok(Some(Sample {
            slack,
            alt: slack,
            x,
            y,
        }))
    })?;
    Ok(report(w, tol))
}

/// Applies the nonexpansive factor `N = (1 − 1/θ)Id + (1/θ)T` implied by a
/// conical θ certificate of `T`.
pub fn nonexpansive_factor(map: &dyn FixedPointMap, theta: f64, x: &Vector) -> Result<Vector> {
    let tx = map.apply(x)?;
    Ok(x.lincomb(1.0 - 1.0 / theta, &tx, 1.0 / theta))
}

/// Resolution of the one-dimensional grid minimizer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridConfig {
    pub radius: f64,
    pub points: usize,
    /// Final bracket width of the golden-section refinement.
    pub width: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            radius: 10.0,
            points: 10_000,
            width: 1e-8,
        }
    }
}

/// Minimizes `phi` over `[center − r, center + r]`: coarse grid, then golden
/// section on the cell pair around the best grid point. A minimizer on the
/// edge of the grid triggers one ten-fold widening, then an error.
pub fn minimize_1d(phi: &dyn Fn(f64) -> f64, center: f64, cfg: &GridConfig) -> Result<f64> {
    if cfg.points < 3 || !(cfg.radius > 0.0) {
        return Err(Error::Parameter("grid needs at least 3 points and a positive radius".into()));
    }
    let mut radius = cfg.radius;
    for attempt in 0..2 {
        let lo = center - radius;
        let h = 2.0 * radius / (cfg.points - 1) as f64;
        let mut best = (f64::INFINITY, usize::MAX);
        for k in 0..cfg.points {
            let v = phi(lo + h * k as f64);
            if v < best.0 {
                best = (v, k);
            }
        }
        let (fbest, k) = best;
        if !fbest.is_finite() || k == 0 || k == cfg.points - 1 {
            if attempt == 0 {
                radius *= 10.0;
                continue;
            }
            return Err(Error::Oracle(format!(
                "grid minimum on the boundary of [{}, {}]",
                lo,
                lo + 2.0 * radius
            )));
        }
        let zbest = lo + h * k as f64;
        let (mut a, mut b) = (zbest - h, zbest + h);
        let r = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (phi(c), phi(d));
        while b - a > cfg.width {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = phi(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = phi(d);
            }
        }
        let mid = 0.5 * (a + b);
        let cands = [(phi(mid), mid), (fc, c), (fd, d), (fbest, zbest)];
        let (_, z) = cands
            .iter()
            .copied()
            .fold((f64::INFINITY, zbest), |acc, p| if p.0 < acc.0 { p } else { acc });
        return Ok(z);
    }
    unreachable!()
}

fn require_separable(f: &FunctionSpec) -> Result<()> {
    if f.is_separable() {
        Ok(())
    } else {
        Err(Error::Oracle("grid oracles need a separable function".into()))
    }
}

/// Componentwise grid + golden-section minimization of
/// `f(z) + (1/(2γ))‖z − x‖²`.
pub fn brute_prox(f: &FunctionSpec, gamma: f64, x: &Vector, cfg: &GridConfig) -> Result<Vector> {
    require_separable(f)?;
    check_prox_params(f, gamma)?;
    if let Some(n) = f.fixed_dim() {
        x.check_dim(n)?;
    }
    let mut out = Vec::with_capacity(x.dim());
    for i in 0..x.dim() {
        let xi = x[i];
        let phi = |z: f64| f.component_value(i, z) + (z - xi) * (z - xi) / (2.0 * gamma);
        out.push(minimize_1d(&phi, xi, cfg)?);
    }
    Vector::new(out)
}

/// Componentwise grid minimization of `f + g` around the origin.
pub fn grid_argmin(f: &FunctionSpec, g: &FunctionSpec, dim: usize, cfg: &GridConfig) -> Result<Vector> {
    require_separable(f)?;
    require_separable(g)?;
    let mut out = Vec::with_capacity(dim);
    for i in 0..dim {
        let phi = |z: f64| f.component_value(i, z) + g.component_value(i, z);
        out.push(minimize_1d(&phi, 0.0, cfg)?);
    }
    Vector::new(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum AnalyticZero {
    Known(Vector),
    Unknown(String),
}

impl AnalyticZero {
    pub fn known(&self) -> Option<&Vector> {
        match self {
            AnalyticZero::Known(v) => Some(v),
            AnalyticZero::Unknown(_) => None,
        }
    }
}

/// `x ↦ Mx + c` when the operator is linear.
fn linear_parts(op: &OperatorSpec, dim: usize) -> Option<(Matrix, Vector)> {
    match op.variant() {
        OperatorVariant::Affine { m, b } => Some((m.clone(), b.clone())),
        OperatorVariant::ScaledIdentity { a } => {
            Some((Matrix::identity(dim).scaled(*a), Vector::zeros(dim)))
        }
        OperatorVariant::GradQuadratic { q, c } => Some((q.clone(), c.clone())),
        OperatorVariant::Subdifferential {
            function: FunctionSpec::Quadratic { q, b },
        } => Some((q.clone(), b.clone())),
        OperatorVariant::Subdifferential { .. } => None,
    }
}

/// The operator as the subdifferential of a separable function, if it is one.
fn as_separable_function(op: &OperatorSpec, dim: usize) -> Option<FunctionSpec> {
    match op.variant() {
        OperatorVariant::Subdifferential { function } => {
            function.is_separable().then(|| function.clone())
        }
        _ => {
            let (m, c) = linear_parts(op, dim)?;
            m.is_diagonal().then(|| FunctionSpec::Quadratic { q: m, b: c })
        }
    }
}

fn soft(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

/// Minimizer of `f_i(z) + q z²/2 + c z`, when strictly convex and closed form.
fn exact_1d(f: &FunctionSpec, i: usize, q: f64, c: f64) -> Option<f64> {
    match f {
        FunctionSpec::L1 { w } => (q > 0.0).then(|| soft(-c, *w) / q),
        FunctionSpec::WeaklyConvexL1 { w, rho } => (q - rho > 0.0).then(|| soft(-c, *w) / (q - rho)),
        FunctionSpec::BoxIndicator { lo, hi } => (q > 0.0).then(|| (-c / q).clamp(lo[i], hi[i])),
        FunctionSpec::Quadratic { q: qf, b } => {
            let s = q + qf.get(i, i);
            (s > 0.0).then(|| -(c + b[i]) / s)
        }
    }
}

fn exact_sum(f: &FunctionSpec, quad: &FunctionSpec, dim: usize) -> Option<Vector> {
    let FunctionSpec::Quadratic { q, b } = quad else {
        return None;
    };
    let z = (0..dim)
        .map(|i| exact_1d(f, i, q.get(i, i), b[i]))
        .collect::<Option<Vec<f64>>>()?;
    Vector::new(z).ok()
}

/// A zero of `A` (or of `A + B`) when it can be computed exactly or by a
/// reliable grid search; otherwise `Unknown` with a reason.
pub fn analytic_zero(a: &OperatorSpec, b: Option<&OperatorSpec>, dim: usize) -> Result<AnalyticZero> {
    analytic_zero_with(a, b, dim, &GridConfig::default())
}

pub fn analytic_zero_with(
    a: &OperatorSpec,
    b: Option<&OperatorSpec>,
    dim: usize,
    cfg: &GridConfig,
) -> Result<AnalyticZero> {
    if dim == 0 {
        return Err(Error::EmptyVector);
    }
    let probe = Vector::zeros(dim);
    a.check_dim(&probe)?;
    if let Some(b) = b {
        b.check_dim(&probe)?;
    }
    let unknown = |why: &str| Ok(AnalyticZero::Unknown(why.to_string()));

    let la = linear_parts(a, dim);
    let lb = b.map(|b| linear_parts(b, dim));
    match (&la, &lb) {
        (Some((ma, ca)), None) => return solve_linear(ma.clone(), ca.clone()),
        (Some((ma, ca)), Some(Some((mb, cb)))) => return solve_linear(ma.add(mb), ca + cb),
        _ => {}
    }

    let Some(fa) = as_separable_function(a, dim) else {
        return unknown("operator is not a separable subdifferential");
    };
    let Some(b) = b else {
        return match fa {
            FunctionSpec::L1 { w } if w > 0.0 => Ok(AnalyticZero::Known(Vector::zeros(dim))),
            _ => unknown("zero set of a lone subdifferential is not a single point"),
        };
    };
    let Some(fb) = as_separable_function(b, dim) else {
        return unknown("operator is not separable");
    };
    let exact = match (&fa, &fb) {
        (_, FunctionSpec::Quadratic { .. }) => exact_sum(&fa, &fb, dim),
        (FunctionSpec::Quadratic { .. }, _) => exact_sum(&fb, &fa, dim),
        (FunctionSpec::L1 { w: w1 }, FunctionSpec::L1 { w: w2 }) if w1 + w2 > 0.0 => {
            Some(Vector::zeros(dim))
        }
        _ => None,
    };
    if let Some(z) = exact {
        return Ok(AnalyticZero::Known(z));
    }
    if fa.alpha_convex() + fb.alpha_convex() > 0.0 {
        return Ok(AnalyticZero::Known(grid_argmin(&fa, &fb, dim, cfg)?));
    }
    unknown("sum is not strongly convex; no unique zero is certified")
}

fn solve_linear(m: Matrix, c: Vector) -> Result<AnalyticZero> {
    match m.solve(&-&c) {
        Ok(z) => Ok(AnalyticZero::Known(z)),
        Err(Error::Singular) => Ok(AnalyticZero::Unknown("singular stationarity system".into())),
        Err(e) => Err(e),
    }
}

/// Coordinates of `∂̂f(z)`, or of the point value for single-valued operators.
fn value_interval(op: &OperatorSpec, z: &Vector, i: usize) -> Result<(f64, f64)> {
    match op.variant() {
        OperatorVariant::Subdifferential { function } => Ok(function.subgradient_interval(z, i)),
        _ => {
            let v = op.evaluate(z)?[i];
            Ok((v, v))
        }
    }
}

/// A point `a ∈ Az` with `−a ∈ Bz`, for a zero `z` of `A + B`.
pub fn zero_witness(a: &OperatorSpec, b: &OperatorSpec, z: &Vector) -> Result<Vector> {
    const SLACK: f64 = 1e-9;
    let mut out = Vec::with_capacity(z.dim());
    for i in 0..z.dim() {
        let (alo, ahi) = value_interval(a, z, i)?;
        let (blo, bhi) = value_interval(b, z, i)?;
        let lo = alo.max(-bhi);
        let hi = ahi.min(-blo);
        if lo > hi + SLACK * (1.0 + lo.abs()) {
            return Err(Error::Oracle(format!(
                "z is not a zero of A + B at coordinate {i}: [{alo}, {ahi}] and [{}, {}] are disjoint",
                -bhi, -blo
            )));
        }
        let pick = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi.max(lo)),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => 0.0,
        };
        out.push(pick);
    }
    Vector::new(out)
}

/// Outcome of the asymptotic-regularity diagnostic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateReport {
    /// Residuals are nonincreasing after the burn-in.
    pub monotone_after_burn_in: bool,
    /// `(n, min_{1≤m≤n} √m·r_m)` at the checkpoints the trace covers.
    pub checkpoints: Vec<(usize, f64)>,
    /// The trace reached a residual at rounding level.
    pub reached_floor: bool,
    pub pass: bool,
}

pub const RATE_CHECKPOINTS: [usize; 3] = [100, 1_000, 10_000];

/// Residual below which only rounding is left.
fn residual_floor(x_norm: f64) -> f64 {
    8.0 * f64::EPSILON * x_norm.max(1.0)
}

/// Checks that `min_{m≤n} √m·r_m` strictly decreases across the checkpoints.
///
/// A residual at rounding level counts as zero. Once the statistic is zero it
/// stays zero, which counts as a pass: there is nothing left to decrease.
pub fn rate_check(trace: &IterationTrace, burn_in: usize) -> Result<RateReport> {
    let recs: Vec<_> = trace.records.iter().filter(|r| r.residual.is_finite()).collect();
    if recs.len() < 2 {
        return Err(Error::Oracle("trace too short for a rate check".into()));
    }
    let floored: Vec<f64> = recs
        .iter()
        .map(|r| if r.residual <= residual_floor(r.x_norm) { 0.0 } else { r.residual })
        .collect();
    let last = recs.last().unwrap().n;
    let reached_floor = *floored.last().unwrap() == 0.0;

    let mut monotone = true;
    for w in recs.windows(2).zip(floored.windows(2)) {
        let ((r0, _), f) = ((w.0[0], w.0[1]), w.1);
        if r0.n >= burn_in && f[1] > f[0] * (1.0 + 1e-12) {
            monotone = false;
        }
    }

    let mut checkpoints = Vec::new();
    for &cp in &RATE_CHECKPOINTS {
        if cp > last && !reached_floor {
            break;
        }
        let s = recs
            .iter()
            .zip(&floored)
            .filter(|(r, _)| r.n >= 1 && r.n <= cp)
            .map(|(r, f)| (r.n as f64).sqrt() * f)
            .fold(f64::INFINITY, f64::min);
        checkpoints.push((cp, s));
    }
    if checkpoints.len() < 2 {
        return Err(Error::Oracle(format!(
            "trace too short for a rate check: {} iterations, checkpoints {:?}",
            last, RATE_CHECKPOINTS
        )));
    }
    let pass = checkpoints
        .windows(2)
        .all(|w| w[1].1 < w[0].1 || w[0].1 == 0.0);
    Ok(RateReport {
        monotone_after_burn_in: monotone,
        checkpoints,
        reached_floor,
        pass,
    })
}

/// Largest chain handled by [`find_admissible_order`].
pub const MAX_ORDER_SEARCH: usize = 8;

/// Brute-force search for an order of the constants in which the composition
/// chain condition holds at every position. Returns the permutation.
pub fn find_admissible_order(thetas: &[f64]) -> Result<Option<Vec<usize>>> {
    if thetas.len() > MAX_ORDER_SEARCH {
        return Err(Error::Parameter(format!(
            "order search supports at most {MAX_ORDER_SEARCH} operators (got {})",
            thetas.len()
        )));
    }
    if thetas.iter().any(|&t| t == 1.0) {
        return Err(Error::Parameter("order search requires every theta != 1".into()));
    }
    let mut perm: Vec<usize> = (0..thetas.len()).collect();
    loop {
        let ordered: Vec<f64> = perm.iter().map(|&i| thetas[i]).collect();
        match compose_many(&ordered) {
            Ok(_) => return Ok(Some(perm)),
            Err(Error::ChainViolation { .. }) => {}
            Err(e) => return Err(e),
        }
        if !next_permutation(&mut perm) {
            return Ok(None);
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
