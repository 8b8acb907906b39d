//! Resolvents `J_{γA} = (Id + γA)⁻¹`, their relaxations and reflections,
//! proximity operators, and the conical constants they inherit from the
//! monotonicity of `A`.
//!
//! Every resolvent here is closed form: linear variants go through a dense
//! LU solve, subdifferentials through the prox catalog.

use crate::calculus::{ConicalCert, ScaledConicalCert};
use crate::error::{Error, Result};
use crate::hilbert::{dot, Vector};
use crate::linalg::{Lu, Matrix};
use crate::operators::{CertKind, FunctionSpec, OperatorSpec, OperatorVariant};

/// Distance of `1 − γρ` from zero below which a weakly convex prox is flagged.
pub const PROX_BOUNDARY_WARN: f64 = 1e-6;

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be > 0 (got {v})")))
    }
}

/// Checks that some certificate of `op` makes `J_{γA}` single-valued with
/// full domain: `1+γα > 0` for α-monotone, `γ+α > 0` for α-comonotone.
pub fn check_resolvent_params(op: &OperatorSpec, gamma: f64) -> Result<()> {
    positive("gamma", gamma)?;
    let mut failed = Vec::new();
    for c in op.certs() {
        match c.kind {
            CertKind::Monotone => {
                if 1.0 + gamma * c.alpha > 0.0 {
                    return Ok(());
                }
                failed.push(format!("1 + gamma*alpha > 0 fails for monotone alpha = {}", c.alpha));
            }
            CertKind::Comonotone => {
                if gamma + c.alpha > 0.0 {
                    return Ok(());
                }
                failed.push(format!("gamma + alpha > 0 fails for comonotone alpha = {}", c.alpha));
            }
        }
    }
    Err(Error::Parameter(format!(
        "resolvent with gamma = {gamma}: {}",
        failed.join("; ")
    )))
}

/// `1 + γα > 0` for the proximity operator of an α-convex function.
pub fn check_prox_params(f: &FunctionSpec, gamma: f64) -> Result<()> {
    positive("gamma", gamma)?;
    let alpha = f.alpha_convex();
    if 1.0 + gamma * alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "prox requires 1 + gamma*alpha > 0 (gamma = {gamma}, alpha = {alpha})"
        )))
    }
}

/// Warning text when a weakly convex prox sits numerically close to the edge
/// of its admissible range.
pub fn prox_warning(f: &FunctionSpec, gamma: f64) -> Option<String> {
    match f {
        FunctionSpec::WeaklyConvexL1 { rho, .. } => {
            let margin = 1.0 - gamma * rho;
            (margin > 0.0 && margin < PROX_BOUNDARY_WARN).then(|| {
                format!("prox near its admissible boundary: 1 - gamma*rho = {margin:e}")
            })
        }
        _ => None,
    }
}

fn soft(v: f64, t: f64) -> f64 {
    v.signum() * (v.abs() - t).max(0.0)
}

/// `argmin_z f(z) + (1/(2γ))‖z − x‖²`.
pub fn prox(f: &FunctionSpec, gamma: f64, x: &Vector) -> Result<Vector> {
    Prox::new(f, gamma)?.apply(x)
}

/// A prox with its parameter checks done and any factorization cached.
#[derive(Clone, Debug)]
pub struct Prox {
    f: FunctionSpec,
    gamma: f64,
    lu: Option<Lu>,
}

impl Prox {
    pub fn new(f: &FunctionSpec, gamma: f64) -> Result<Self> {
        check_prox_params(f, gamma)?;
        let lu = match f {
            FunctionSpec::Quadratic { q, .. } => Some(q.shifted_identity(gamma).lu()?),
            _ => None,
        };
        Ok(Prox {
            f: f.clone(),
            gamma,
            lu,
        })
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        let g = self.gamma;
        Ok(match (&self.f, &self.lu) {
            (FunctionSpec::Quadratic { b, .. }, Some(lu)) => {
                x.check_dim(b.dim())?;
                lu.solve(&x.lincomb(1.0, b, -g))
            }
            (FunctionSpec::L1 { w }, _) => x.map(|v| soft(v, g * w)),
            (FunctionSpec::WeaklyConvexL1 { w, rho }, _) => {
                let d = 1.0 - g * rho;
                x.map(|v| soft(v, g * w) / d)
            }
            (FunctionSpec::BoxIndicator { lo, hi }, _) => {
                x.check_dim(lo.dim())?;
                Vector::from_raw(
                    x.iter()
                        .zip(lo.iter().zip(hi.iter()))
                        .map(|(v, (l, h))| v.clamp(*l, *h))
                        .collect(),
                )
            }
            (FunctionSpec::Quadratic { .. }, None) => unreachable!("factorized in new"),
        })
    }

    pub fn warning(&self) -> Option<String> {
        prox_warning(&self.f, self.gamma)
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Linear { lu: Lu, shift: Vector },
    Scalar(f64),
    Prox(Prox),
}

/// `J_{γA}` with preconditions checked once and the linear solve factorized.
#[derive(Clone, Debug)]
pub struct Resolvent {
    gamma: f64,
    kind: Kind,
}

impl Resolvent {
    pub fn new(op: &OperatorSpec, gamma: f64) -> Result<Self> {
        check_resolvent_params(op, gamma)?;
        let kind = match op.variant() {
            OperatorVariant::Affine { m, b } => Kind::Linear {
                lu: m.shifted_identity(gamma).lu()?,
                shift: b.scale(gamma),
            },
            OperatorVariant::GradQuadratic { q, c } => Kind::Linear {
                lu: q.shifted_identity(gamma).lu()?,
                shift: c.scale(gamma),
            },
            OperatorVariant::ScaledIdentity { a } => {
                let d = 1.0 + gamma * a;
                if d == 0.0 {
                    return Err(Error::Singular);
                }
                Kind::Scalar(1.0 / d)
            }
            OperatorVariant::Subdifferential { function } => Kind::Prox(Prox::new(function, gamma)?),
        };
        Ok(Resolvent { gamma, kind })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        match &self.kind {
            Kind::Linear { lu, shift } => {
                x.check_dim(shift.dim())?;
                Ok(lu.solve(&(x - shift)))
            }
            Kind::Scalar(s) => Ok(x.scale(*s)),
            Kind::Prox(p) => p.apply(x),
        }
    }

    /// `(1−λ)x + λJ(x)`
    pub fn apply_relaxed(&self, lambda: f64, x: &Vector) -> Result<Vector> {
        let j = self.apply(x)?;
        Ok(x.lincomb(1.0 - lambda, &j, lambda))
    }

    pub fn warning(&self) -> Option<String> {
        match &self.kind {
            Kind::Prox(p) => p.warning(),
            _ => None,
        }
    }
}

/// `J_{γA}(x)`.
pub fn resolvent(op: &OperatorSpec, gamma: f64, x: &Vector) -> Result<Vector> {
    op.check_dim(x)?;
    Resolvent::new(op, gamma)?.apply(x)
}

/// `(1−λ)x + λJ_{γA}(x)`.
pub fn relaxed_resolvent(op: &OperatorSpec, gamma: f64, lambda: f64, x: &Vector) -> Result<Vector> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::Parameter(format!("lambda must be >= 0 (got {lambda})")));
    }
    op.check_dim(x)?;
    Resolvent::new(op, gamma)?.apply_relaxed(lambda, x)
}

/// `2J_{γA}(x) − x`.
pub fn reflected_resolvent(op: &OperatorSpec, gamma: f64, x: &Vector) -> Result<Vector> {
    relaxed_resolvent(op, gamma, 2.0, x)
}

/// For α-comonotone `A` with `γ+α > 0`, `(1−λ)Id + λJ_{γA}` is conically
/// `λγ/(2(γ+α))`-averaged.
pub fn cert_resolvent_comonotone(alpha: f64, gamma: f64, lambda: f64) -> Result<ConicalCert> {
    positive("gamma", gamma)?;
    positive("lambda", lambda)?;
    if !(gamma + alpha > 0.0) {
        return Err(Error::Parameter(format!(
            "gamma + alpha > 0 fails (gamma = {gamma}, alpha = {alpha})"
        )));
    }
    ConicalCert::new(lambda * gamma / (2.0 * (gamma + alpha)))
}

/// For α-monotone `A` with `1+γα > 0` and `λ > 1`, `(1/(1−λ))·R` is conically
/// `λ/(2(λ−1)(1+γα))`-averaged, where `R = (1−λ)Id + λJ_{γA}`.
pub fn cert_resolvent_monotone(alpha: f64, gamma: f64, lambda: f64) -> Result<ScaledConicalCert> {
    positive("gamma", gamma)?;
    if !(lambda.is_finite() && lambda > 1.0) {
        return Err(Error::Parameter(format!("lambda > 1 fails (lambda = {lambda})")));
    }
    let s = 1.0 + gamma * alpha;
    if !(s > 0.0) {
        return Err(Error::Parameter(format!(
            "1 + gamma*alpha > 0 fails (gamma = {gamma}, alpha = {alpha})"
        )));
    }
    ScaledConicalCert::new(1.0 / (1.0 - lambda), lambda / (2.0 * (lambda - 1.0) * s))
}

/// `Id − γB` is conically `γ/(2β)`-averaged for β-cocoercive `B`.
pub fn cert_forward_step(beta: f64, gamma: f64) -> Result<ConicalCert> {
    positive("beta", beta)?;
    positive("gamma", gamma)?;
    ConicalCert::new(gamma / (2.0 * beta))
}

/// `(γ+2α)⟨x−y, a−b⟩ − α‖x−y‖² − (γ+α)‖a−b‖²` for `a = J_{γA}x`, `b = J_{γA}y`;
/// nonnegative whenever `A` is α-comonotone.
pub fn comonotone_graph_inequality(
    alpha: f64,
    gamma: f64,
    x: &Vector,
    y: &Vector,
    a: &Vector,
    b: &Vector,
) -> Result<f64> {
    y.check_dim(x.dim())?;
    a.check_dim(x.dim())?;
    b.check_dim(x.dim())?;
    let dx = x - y;
    let da = a - b;
    Ok((gamma + 2.0 * alpha) * dot(&dx, &da) - alpha * dx.norm_sq() - (gamma + alpha) * da.norm_sq())
}

/// `I + γM`, exposed for callers assembling their own linear resolvents.
pub fn resolvent_matrix(m: &Matrix, gamma: f64) -> Matrix {
    m.shifted_identity(gamma)
}
