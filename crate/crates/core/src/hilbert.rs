//! Points of the working space ℝⁿ and the two polarization-type identities
//! that the averagedness calculus rests on.
//!
//! For all real `σ, τ` and vectors `s, t`:
//!
//! ```text
//! ‖σs + τt‖² = σ(σ+τ)‖s‖² + τ(σ+τ)‖t‖² − στ‖s − t‖²
//! σ‖s‖² + τ‖t‖² = (1/(σ+τ))‖σs + τt‖² + (στ/(σ+τ))‖s − t‖²      (σ+τ ≠ 0)
//! ```
//!
//! Both are exposed as residual functions so they can be checked numerically.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in ℝⁿ with `n ≥ 1` and finite entries at construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(i) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Vector(entries))
    }

    /// Builds a vector without the finiteness check. Iterates of an expanding
    /// map may overflow; the caller is responsible for detecting that.
    pub(crate) fn from_raw(entries: Vec<f64>) -> Self {
        debug_assert!(!entries.is_empty());
        Vector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Vector(vec![0.0; dim])
    }

    pub fn filled(dim: usize, value: f64) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Vector(vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            });
        }
        Ok(())
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|v| c * v).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector(self.0.iter().map(|&v| f(v)).collect())
    }

    /// `a·self + b·other`, the workhorse of every relaxation step.
    pub fn lincomb(&self, a: f64, other: &Vector, b: f64) -> Vector {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    pub fn distance(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        Vector::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:e}")?;
        }
        write!(f, "]")
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.lincomb(1.0, rhs, 1.0)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.lincomb(1.0, rhs, -1.0)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

fn same_dim(a: &Vector, b: &Vector) -> Result<()> {
    b.check_dim(a.dim())
}

/// Euclidean inner product.
pub fn inner(a: &Vector, b: &Vector) -> Result<f64> {
    same_dim(a, b)?;
    Ok(dot(a, b))
}

/// Inner product for callers that already know the dimensions agree.
pub(crate) fn dot(a: &Vector, b: &Vector) -> f64 {
    a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum()
}

/// Absolute residual of `‖σs+τt‖² = σ(σ+τ)‖s‖² + τ(σ+τ)‖t‖² − στ‖s−t‖²`.
pub fn identity_residual(sigma: f64, tau: f64, s: &Vector, t: &Vector) -> Result<f64> {
    same_dim(s, t)?;
    let lhs = s.lincomb(sigma, t, tau).norm_sq();
    let rhs = sigma * (sigma + tau) * s.norm_sq() + tau * (sigma + tau) * t.norm_sq()
        - sigma * tau * s.distance(t).powi(2);
    Ok((lhs - rhs).abs())
}

/// Guard used for `σ + τ ≈ 0`.
pub fn sum_epsilon(sigma: f64, tau: f64) -> f64 {
    1e-14 * (sigma.abs() + tau.abs() + 1.0)
}

/// Absolute residual of `σ‖s‖² + τ‖t‖² = (1/(σ+τ))‖σs+τt‖² + (στ/(σ+τ))‖s−t‖²`.
pub fn identity2_residual(sigma: f64, tau: f64, s: &Vector, t: &Vector) -> Result<f64> {
    same_dim(s, t)?;
    let sum = sigma + tau;
    if sum.abs() <= sum_epsilon(sigma, tau) {
        return Err(Error::Parameter(format!(
            "identity requires sigma + tau != 0 (got {sigma} + {tau})"
        )));
    }
    let lhs = sigma * s.norm_sq() + tau * t.norm_sq();
    let rhs = s.lincomb(sigma, t, tau).norm_sq() / sum + sigma * tau / sum * s.distance(t).powi(2);
    Ok((lhs - rhs).abs())
}
