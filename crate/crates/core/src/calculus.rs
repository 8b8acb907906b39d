//! Algebra of conical-averagedness constants.
//!
//! `T` is conically θ-averaged when `T = (1−θ)Id + θN` for some nonexpansive
//! `N`. Only the constant θ is tracked; `N` is never built.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for weight sums and feasibility comparisons.
pub const FEAS_TOL: f64 = 1e-12;

/// Positive constant θ: nonexpansive at 1, averaged below 1, strictly conical above.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicalCert {
    pub theta: f64,
}

impl ConicalCert {
    pub fn new(theta: f64) -> Result<Self> {
        positive("theta", theta)?;
        Ok(ConicalCert { theta })
    }
}

/// Claims that `ω·T` is conically θ-averaged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledConicalCert {
    pub omega: f64,
    pub theta: f64,
}

impl ScaledConicalCert {
    pub fn new(omega: f64, theta: f64) -> Result<Self> {
        if !omega.is_finite() || omega == 0.0 {
            return Err(Error::Parameter(format!("omega must be nonzero (got {omega})")));
        }
        positive("theta", theta)?;
        Ok(ScaledConicalCert { omega, theta })
    }
}

/// Result of composing many operators. With `nonexpansive_only` set the
/// constant is exactly 1 and nothing sharper is claimed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionCert {
    pub theta: f64,
    pub nonexpansive_only: bool,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be > 0 (got {v})")))
    }
}

fn is_one(t: f64) -> bool {
    (t - 1.0).abs() <= FEAS_TOL
}

/// `(1−λ)Id + λT` is conically λθ-averaged.
pub fn relax(theta: f64, lambda: f64) -> Result<f64> {
    positive("theta", theta)?;
    positive("lambda", lambda)?;
    Ok(lambda * theta)
}

/// `Σ ωᵢTᵢ` is conically `Σ ωᵢθᵢ`-averaged.
pub fn convex_combination(thetas: &[f64], weights: &[f64]) -> Result<f64> {
    if thetas.is_empty() {
        return Err(Error::Parameter("convex combination needs at least one operator".into()));
    }
    if thetas.len() != weights.len() {
        return Err(Error::Parameter(format!(
            "{} constants but {} weights",
            thetas.len(),
            weights.len()
        )));
    }
    for (&t, &w) in thetas.iter().zip(weights) {
        positive("theta", t)?;
        positive("weight", w)?;
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > FEAS_TOL {
        return Err(Error::Parameter(format!("weights must sum to 1 (got {total})")));
    }
    Ok(thetas.iter().zip(weights).map(|(t, w)| t * w).sum())
}

/// Constant of `T₁T₂` (equivalently `T₂T₁`).
pub fn compose2(theta1: f64, theta2: f64) -> Result<f64> {
    positive("theta1", theta1)?;
    positive("theta2", theta2)?;
    if is_one(theta1) && is_one(theta2) {
        return Ok(1.0);
    }
    let prod = theta1 * theta2;
    if prod >= 1.0 - FEAS_TOL {
        return Err(Error::NotCovered(format!(
            "composition with theta1*theta2 = {prod} >= 1 has no certificate"
        )));
    }
    if is_one(theta1) || is_one(theta2) {
        return Ok(1.0);
    }
    // Same value as (θ₁+θ₂−2θ₁θ₂)/(1−θ₁θ₂), written so the side of 1 is exact.
    Ok(1.0 - (1.0 - theta1) * (1.0 - theta2) / (1.0 - prod))
}

/// `ω₁ω₂T₁T₂` and `ω₁ω₂T₂T₁` share the composed constant.
pub fn compose_scaled(c1: ScaledConicalCert, c2: ScaledConicalCert) -> Result<ScaledConicalCert> {
    let theta = compose2(c1.theta, c2.theta)?;
    ScaledConicalCert::new(c1.omega * c2.omega, theta)
}

/// Constant of `T₁T₂⋯T_m` in the given order.
///
/// Constants equal to 1 are only allowed when no constant exceeds 1, and then
/// only nonexpansiveness is returned. Otherwise each `θ_k` must stay below
/// `1 + 1/Σ_{i<k} θᵢ/(1−θᵢ)`.
pub fn compose_many(thetas: &[f64]) -> Result<CompositionCert> {
    if thetas.len() < 2 {
        return Err(Error::Parameter("composition needs at least two operators".into()));
    }
    for &t in thetas {
        positive("theta", t)?;
    }
    let any_one = thetas.iter().any(|&t| is_one(t));
    let any_above = thetas.iter().any(|&t| t > 1.0 + FEAS_TOL);
    if any_one {
        if any_above {
            return Err(Error::NotCovered(
                "composition mixing nonexpansive and strictly conical operators".into(),
            ));
        }
        return Ok(CompositionCert {
            theta: 1.0,
            nonexpansive_only: true,
        });
    }
    let mut sum = thetas[0] / (1.0 - thetas[0]);
    for (i, &t) in thetas.iter().enumerate().skip(1) {
        let bound = 1.0 + 1.0 / sum;
        if t >= bound - FEAS_TOL {
            return Err(Error::ChainViolation {
                k: i + 1,
                theta: t,
                bound,
            });
        }
        sum += t / (1.0 - t);
    }
    Ok(CompositionCert {
        theta: sum / (sum + 1.0),
        nonexpansive_only: false,
    })
}

/// `Id − λT` is conically λ/2-averaged when `T` is firmly nonexpansive.
pub fn firmly_nonexpansive_shift(lambda: f64) -> Result<f64> {
    positive("lambda", lambda)?;
    Ok(lambda / 2.0)
}
