//! Catalog of concrete operators `A: ℝⁿ → ℝⁿ` and α-convex functions, each
//! carrying analytically justified generalized-monotonicity constants.
//!
//! Sign convention for both kinds of certificate: `α > 0` is strong
//! monotonicity (resp. cocoercivity), `α = 0` plain monotonicity, `α < 0` weak
//! monotonicity (resp. cohypomonotonicity).
//!
//! * α-monotone: `⟨x−y, u−v⟩ ≥ α‖x−y‖²`
//! * α-comonotone: `⟨x−y, u−v⟩ ≥ α‖u−v‖²`
//!
//! The `Subdifferential` variant stands for the Fréchet subdifferential of a
//! catalog function. It may be set-valued, so it is only ever reached through
//! its resolvent (the proximity operator).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{dot, Vector};
use crate::linalg::Matrix;

/// Stand-in for "+∞" when an operator is α-comonotone for every α (the zero
/// operator). Downstream formulas need a finite number.
pub const COMONOTONE_CAP: f64 = 1e12;

const SYMMETRY_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertKind {
    Monotone,
    Comonotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityCert {
    pub kind: CertKind,
    pub alpha: f64,
    /// Set only for catalog constructions where maximality holds analytically.
    pub maximal: bool,
}

impl MonotonicityCert {
    pub fn monotone(alpha: f64) -> Self {
        MonotonicityCert {
            kind: CertKind::Monotone,
            alpha,
            maximal: true,
        }
    }

    pub fn comonotone(alpha: f64) -> Self {
        MonotonicityCert {
            kind: CertKind::Comonotone,
            alpha,
            maximal: true,
        }
    }
}

/// An α-convex function with a closed-form proximity operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    /// `½xᵀQx + bᵀx`, Q symmetric.
    Quadratic { q: Matrix, b: Vector },
    /// `w‖x‖₁`
    L1 { w: f64 },
    /// `w‖x‖₁ − (ρ/2)‖x‖²`
    WeaklyConvexL1 { w: f64, rho: f64 },
    /// Indicator of the box `[lo, hi]`.
    BoxIndicator { lo: Vector, hi: Vector },
}

impl FunctionSpec {
    pub fn quadratic(q: Matrix, b: Vector) -> Result<Self> {
        let f = FunctionSpec::Quadratic { q, b };
        f.validate()?;
        Ok(f)
    }

    pub fn l1(w: f64) -> Result<Self> {
        let f = FunctionSpec::L1 { w };
        f.validate()?;
        Ok(f)
    }

    pub fn weakly_convex_l1(w: f64, rho: f64) -> Result<Self> {
        let f = FunctionSpec::WeaklyConvexL1 { w, rho };
        f.validate()?;
        Ok(f)
    }

    pub fn box_indicator(lo: Vector, hi: Vector) -> Result<Self> {
        let f = FunctionSpec::BoxIndicator { lo, hi };
        f.validate()?;
        Ok(f)
    }

    /// Checks the variant invariants. Deserialized values go through this too.
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::Quadratic { q, b } => {
                b.check_dim(q.dim())?;
                if !q.is_symmetric(SYMMETRY_TOL) {
                    return Err(Error::Parameter("quadratic Q must be symmetric".into()));
                }
            }
            FunctionSpec::L1 { w } => nonneg("w", *w)?,
            FunctionSpec::WeaklyConvexL1 { w, rho } => {
                nonneg("w", *w)?;
                if !(rho.is_finite() && *rho > 0.0) {
                    return Err(Error::Parameter(format!("rho must be > 0 (got {rho})")));
                }
            }
            FunctionSpec::BoxIndicator { lo, hi } => {
                hi.check_dim(lo.dim())?;
                if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
                    return Err(Error::Parameter("box requires lo <= hi".into()));
                }
            }
        }
        Ok(())
    }

    /// Dimension fixed by the variant, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            FunctionSpec::Quadratic { q, .. } => Some(q.dim()),
            FunctionSpec::BoxIndicator { lo, .. } => Some(lo.dim()),
            _ => None,
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        match self.fixed_dim() {
            Some(n) => x.check_dim(n),
            None => Ok(()),
        }
    }

    /// The modulus α for which the function is α-convex (tight).
    pub fn alpha_convex(&self) -> f64 {
        match self {
            FunctionSpec::Quadratic { q, .. } => q.lambda_min(),
            FunctionSpec::L1 { .. } | FunctionSpec::BoxIndicator { .. } => 0.0,
            FunctionSpec::WeaklyConvexL1 { rho, .. } => -rho,
        }
    }

    /// Every catalog function except a non-diagonal quadratic is a sum of
    /// one-dimensional terms.
    pub fn is_separable(&self) -> bool {
        match self {
            FunctionSpec::Quadratic { q, .. } => q.is_diagonal(),
            _ => true,
        }
    }

    /// Value in `(−∞, +∞]`.
    pub fn value(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(match self {
            FunctionSpec::Quadratic { q, b } => 0.5 * dot(x, &q.apply(x)) + dot(b, x),
            FunctionSpec::L1 { w } => w * l1_norm(x),
            FunctionSpec::WeaklyConvexL1 { w, rho } => w * l1_norm(x) - 0.5 * rho * x.norm_sq(),
            FunctionSpec::BoxIndicator { lo, hi } => {
                let inside = x
                    .iter()
                    .zip(lo.iter().zip(hi.iter()))
                    .all(|(v, (l, h))| l <= v && v <= h);
                if inside {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        })
    }

    /// Value of the `i`-th one-dimensional term at `z`. Only meaningful for
    /// separable functions.
    pub(crate) fn component_value(&self, i: usize, z: f64) -> f64 {
        match self {
            FunctionSpec::Quadratic { q, b } => 0.5 * q.get(i, i) * z * z + b[i] * z,
            FunctionSpec::L1 { w } => w * z.abs(),
            FunctionSpec::WeaklyConvexL1 { w, rho } => w * z.abs() - 0.5 * rho * z * z,
            FunctionSpec::BoxIndicator { lo, hi } => {
                if lo[i] <= z && z <= hi[i] {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Interval `[lo, hi]` containing the `i`-th coordinate of the Fréchet
    /// subdifferential at `z` (every catalog subdifferential is a product of
    /// intervals, except for the gradient of a coupled quadratic which is a
    /// point).
    pub(crate) fn subgradient_interval(&self, z: &Vector, i: usize) -> (f64, f64) {
        match self {
            FunctionSpec::Quadratic { q, b } => {
                let g: f64 = (0..q.dim()).map(|j| q.get(i, j) * z[j]).sum::<f64>() + b[i];
                (g, g)
            }
            FunctionSpec::L1 { w } => sign_interval(z[i], *w, 0.0),
            FunctionSpec::WeaklyConvexL1 { w, rho } => sign_interval(z[i], *w, -rho * z[i]),
            FunctionSpec::BoxIndicator { lo, hi } => {
                let (l, h, v) = (lo[i], hi[i], z[i]);
                match (v <= l, v >= h) {
                    (true, true) => (f64::NEG_INFINITY, f64::INFINITY),
                    (true, false) => (f64::NEG_INFINITY, 0.0),
                    (false, true) => (0.0, f64::INFINITY),
                    (false, false) => (0.0, 0.0),
                }
            }
        }
    }
}

fn sign_interval(v: f64, w: f64, shift: f64) -> (f64, f64) {
    if v > 0.0 {
        (w + shift, w + shift)
    } else if v < 0.0 {
        (-w + shift, -w + shift)
    } else {
        (-w + shift, w + shift)
    }
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be >= 0 (got {v})")))
    }
}

fn l1_norm(x: &Vector) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

/// Function value, `+∞` outside the domain of an indicator.
pub fn function_value(f: &FunctionSpec, x: &Vector) -> Result<f64> {
    f.value(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum OperatorVariant {
    /// `x ↦ Mx + b`
    Affine { m: Matrix, b: Vector },
    /// `x ↦ a·x` on any dimension.
    ScaledIdentity { a: f64 },
    /// `x ↦ Qx + c`, the gradient of `½xᵀQx + cᵀx`.
    GradQuadratic { q: Matrix, c: Vector },
    /// Fréchet subdifferential of a catalog function.
    Subdifferential { function: FunctionSpec },
}

/// An operator together with its analytic certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    variant: OperatorVariant,
    certs: Vec<MonotonicityCert>,
}

impl OperatorSpec {
    pub fn new(variant: OperatorVariant) -> Result<Self> {
        match &variant {
            OperatorVariant::Affine { m, b } => b.check_dim(m.dim())?,
            OperatorVariant::ScaledIdentity { a } => {
                if !a.is_finite() {
                    return Err(Error::Parameter("scale must be finite".into()));
                }
            }
            OperatorVariant::GradQuadratic { q, c } => {
                c.check_dim(q.dim())?;
                if !q.is_symmetric(SYMMETRY_TOL) {
                    return Err(Error::Parameter("gradient quadratic Q must be symmetric".into()));
                }
            }
            OperatorVariant::Subdifferential { function } => function.validate()?,
        }
        let mut op = OperatorSpec {
            variant,
            certs: Vec::new(),
        };
        op.certs.push(MonotonicityCert::monotone(op.certify_monotone()));
        if let Some(alpha) = op.certify_comonotone() {
            op.certs.push(MonotonicityCert::comonotone(alpha));
        }
        Ok(op)
    }

    pub fn affine(m: Matrix, b: Vector) -> Result<Self> {
        Self::new(OperatorVariant::Affine { m, b })
    }

    pub fn scaled_identity(a: f64) -> Result<Self> {
        Self::new(OperatorVariant::ScaledIdentity { a })
    }

    pub fn grad_quadratic(q: Matrix, c: Vector) -> Result<Self> {
        Self::new(OperatorVariant::GradQuadratic { q, c })
    }

    pub fn subdifferential(function: FunctionSpec) -> Result<Self> {
        Self::new(OperatorVariant::Subdifferential { function })
    }

    /// The zero operator on any dimension.
    pub fn zero() -> Self {
        Self::scaled_identity(0.0).expect("zero is finite")
    }

    pub fn variant(&self) -> &OperatorVariant {
        &self.variant
    }

    pub fn certs(&self) -> &[MonotonicityCert] {
        &self.certs
    }

    pub fn cert(&self, kind: CertKind) -> Option<MonotonicityCert> {
        self.certs.iter().copied().find(|c| c.kind == kind)
    }

    pub fn fixed_dim(&self) -> Option<usize> {
        match &self.variant {
            OperatorVariant::Affine { m, .. } => Some(m.dim()),
            OperatorVariant::ScaledIdentity { .. } => None,
            OperatorVariant::GradQuadratic { q, .. } => Some(q.dim()),
            OperatorVariant::Subdifferential { function } => function.fixed_dim(),
        }
    }

    pub fn check_dim(&self, x: &Vector) -> Result<()> {
        match self.fixed_dim() {
            Some(n) => x.check_dim(n),
            None => Ok(()),
        }
    }

    pub fn is_evaluable(&self) -> bool {
        !matches!(self.variant, OperatorVariant::Subdifferential { .. })
    }

    /// Pointwise value `A(x)`.
    pub fn evaluate(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        match &self.variant {
            OperatorVariant::Affine { m, b } => Ok(&m.apply(x) + b),
            OperatorVariant::ScaledIdentity { a } => Ok(x.scale(*a)),
            OperatorVariant::GradQuadratic { q, c } => Ok(&q.apply(x) + c),
            OperatorVariant::Subdifferential { .. } => Err(Error::NotEvaluable(
                "subdifferential operators are reached only through their resolvent",
            )),
        }
    }

    /// Largest α for which the operator is α-monotone.
    pub fn certify_monotone(&self) -> f64 {
        match &self.variant {
            OperatorVariant::Affine { m, .. } => m.lambda_min(),
            OperatorVariant::ScaledIdentity { a } => *a,
            OperatorVariant::GradQuadratic { q, .. } => q.lambda_min(),
            OperatorVariant::Subdifferential { function } => function.alpha_convex(),
        }
    }

    /// Tight α-comonotonicity constant for the classes where one is known
    /// analytically; `None` is "no certificate", not a disproof.
    pub fn certify_comonotone(&self) -> Option<f64> {
        match &self.variant {
            OperatorVariant::ScaledIdentity { a } => Some(if *a == 0.0 {
                COMONOTONE_CAP
            } else {
                1.0 / a
            }),
            OperatorVariant::GradQuadratic { q, .. } => psd_comonotone(q),
            OperatorVariant::Affine { m, .. } => {
                if m.is_symmetric(SYMMETRY_TOL) {
                    psd_comonotone(m)
                } else {
                    None
                }
            }
            OperatorVariant::Subdifferential { function } => match function {
                FunctionSpec::Quadratic { q, .. } => psd_comonotone(q),
                // A set-valued graph has u ≠ v over a single x, which rules
                // out any positive constant; plain monotonicity is tight.
                FunctionSpec::L1 { w } if *w > 0.0 => Some(0.0),
                FunctionSpec::L1 { .. } => Some(COMONOTONE_CAP),
                FunctionSpec::BoxIndicator { .. } => Some(0.0),
                FunctionSpec::WeaklyConvexL1 { .. } => None,
            },
        }
    }
}

fn psd_comonotone(q: &Matrix) -> Option<f64> {
    let ev = q.sym_eigenvalues();
    let (lo, hi) = (ev[0], *ev.last().unwrap());
    if lo < -PSD_TOL * (1.0 + hi.abs()) {
        return None;
    }
    if hi <= PSD_TOL {
        Some(COMONOTONE_CAP)
    } else {
        Some(1.0 / hi)
    }
}

impl Serialize for OperatorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.variant.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OperatorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let variant = OperatorVariant::deserialize(d)?;
        OperatorSpec::new(variant).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vector {
        Vector::new(x.to_vec()).unwrap()
    }

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let op = OperatorSpec::affine(Matrix::diag(&[2.0, 2.0]), v(&[0.0, 0.0])).unwrap();
        assert_eq!(op.evaluate(&v(&[1.0, -1.0])).unwrap(), v(&[2.0, -2.0]));
        let op = OperatorSpec::scaled_identity(-0.5).unwrap();
        assert_eq!(op.evaluate(&v(&[4.0])).unwrap(), v(&[-2.0]));
        let op = OperatorSpec::grad_quadratic(Matrix::diag(&[2.0, 1.0]), v(&[1.0, 0.0])).unwrap();
        assert_eq!(op.evaluate(&v(&[1.0, 1.0])).unwrap(), v(&[3.0, 1.0]));
    }

    #[test]
    fn evaluate_errors() {
        let op = OperatorSpec::subdifferential(FunctionSpec::l1(1.0).unwrap()).unwrap();
        assert!(matches!(op.evaluate(&v(&[1.0])), Err(Error::NotEvaluable(_))));
        let op = OperatorSpec::affine(Matrix::identity(2), v(&[0.0, 0.0])).unwrap();
        assert!(matches!(
            op.evaluate(&v(&[1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn construction_invariants() {
        assert!(OperatorSpec::grad_quadratic(m(&[&[1.0, 2.0], &[0.0, 1.0]]), v(&[0.0, 0.0])).is_err());
        assert!(FunctionSpec::l1(-1.0).is_err());
        assert!(FunctionSpec::weakly_convex_l1(1.0, 0.0).is_err());
        assert!(FunctionSpec::box_indicator(v(&[1.0]), v(&[0.0])).is_err());
    }

    #[test]
    fn monotone_certificates() {
        assert_eq!(OperatorSpec::scaled_identity(-0.5).unwrap().certify_monotone(), -0.5);
        let rot = OperatorSpec::affine(m(&[&[0.0, 1.0], &[-1.0, 0.0]]), v(&[0.0, 0.0])).unwrap();
        assert_eq!(rot.certify_monotone(), 0.0);
        let sub = OperatorSpec::subdifferential(FunctionSpec::weakly_convex_l1(1.0, 0.3).unwrap()).unwrap();
        assert_eq!(sub.certify_monotone(), -0.3);
    }

    #[test]
    fn comonotone_certificates() {
        assert_eq!(OperatorSpec::scaled_identity(2.0).unwrap().certify_comonotone(), Some(0.5));
        assert_eq!(OperatorSpec::scaled_identity(-0.5).unwrap().certify_comonotone(), Some(-2.0));
        let gq = OperatorSpec::grad_quadratic(Matrix::diag(&[1.0, 4.0]), v(&[0.0, 0.0])).unwrap();
        assert_eq!(gq.certify_comonotone(), Some(0.25));
        assert_eq!(OperatorSpec::zero().certify_comonotone(), Some(COMONOTONE_CAP));
        let rot = OperatorSpec::affine(m(&[&[0.0, 1.0], &[-1.0, 0.0]]), v(&[0.0, 0.0])).unwrap();
        assert_eq!(rot.certify_comonotone(), None);
        let indef = OperatorSpec::grad_quadratic(Matrix::diag(&[1.0, -1.0]), v(&[0.0, 0.0])).unwrap();
        assert_eq!(indef.certify_comonotone(), None);
        let wc = OperatorSpec::subdifferential(FunctionSpec::weakly_convex_l1(1.0, 0.3).unwrap()).unwrap();
        assert_eq!(wc.certify_comonotone(), None);
        assert_eq!(wc.certs().len(), 1);
    }

    #[test]
    fn function_values() {
        assert_eq!(FunctionSpec::l1(2.0).unwrap().value(&v(&[1.0, -3.0])).unwrap(), 8.0);
        let bx = FunctionSpec::box_indicator(v(&[0.0, 0.0]), v(&[1.0, 1.0])).unwrap();
        assert_eq!(bx.value(&v(&[2.0, 0.0])).unwrap(), f64::INFINITY);
        assert_eq!(bx.value(&v(&[0.5, 1.0])).unwrap(), 0.0);
        let wc = FunctionSpec::weakly_convex_l1(1.0, 0.5).unwrap();
        assert_eq!(wc.value(&v(&[2.0])).unwrap(), 1.0);
        let q = FunctionSpec::quadratic(Matrix::diag(&[2.0]), v(&[-2.0])).unwrap();
        assert_eq!(q.value(&v(&[1.0])).unwrap(), -1.0);
    }

    #[test]
    fn alpha_convex_matches_variant() {
        let q = FunctionSpec::quadratic(m(&[&[2.0, 1.0], &[1.0, 2.0]]), v(&[0.0, 0.0])).unwrap();
        assert!((q.alpha_convex() - 1.0).abs() < 1e-12);
        assert_eq!(FunctionSpec::l1(3.0).unwrap().alpha_convex(), 0.0);
        assert_eq!(FunctionSpec::weakly_convex_l1(1.0, 0.7).unwrap().alpha_convex(), -0.7);
    }

    #[test]
    fn json_schema_is_strict() {
        let op: OperatorSpec = serde_json::from_str(r#"{"type":"scaled_identity","a":-0.5}"#).unwrap();
        assert_eq!(op.certify_comonotone(), Some(-2.0));
        assert!(serde_json::from_str::<OperatorSpec>(r#"{"type":"scaled_identity","a":1,"b":2}"#).is_err());
        let f: FunctionSpec =
            serde_json::from_str(r#"{"type":"weakly_convex_l1","w":1.0,"rho":0.5}"#).unwrap();
        assert_eq!(f.alpha_convex(), -0.5);
    }
}
