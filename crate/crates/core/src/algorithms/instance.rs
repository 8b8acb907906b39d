use serde::Serialize;

use super::km::{km_run, FixedPointMap, IterationTrace, KmOptions, StepSequence};
use super::params::{self, ParamReport, Regime, RfbCase};
use crate::calculus::ConicalCert;
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::operators::{CertKind, FunctionSpec, OperatorSpec};
use crate::resolvents::Resolvent;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    /// `(1−κ)Id + κJ_{γA}`
    Rpp,
    /// `(1−κ)Id + κJ_{γA}(Id − γB)`
    Rfb,
    /// `(1−κ)Id + κR₂R₁` with comonotone certificates.
    AdrComonotone,
    /// `(1−κ)Id + κR₂R₁` with monotone certificates.
    AdrMonotone,
}

impl AlgorithmKind {
    pub fn regime(&self) -> Option<Regime> {
        match self {
            AlgorithmKind::AdrComonotone => Some(Regime::Comonotone),
            AlgorithmKind::AdrMonotone => Some(Regime::Monotone),
            _ => None,
        }
    }
}

/// A certified iteration map: the operator data, the parameters, and the
/// conical constant `κ/κ*` of the full map.
#[derive(Clone, Debug)]
pub struct AlgorithmInstance {
    kind: AlgorithmKind,
    a: OperatorSpec,
    b: Option<OperatorSpec>,
    gamma: f64,
    delta: Option<f64>,
    kappa: f64,
    lambda: Option<f64>,
    mu: Option<f64>,
    alpha: f64,
    beta: Option<f64>,
    kappa_star: f64,
    cert: ConicalCert,
    swapped: bool,
    rfb_case: Option<RfbCase>,
    report: Option<ParamReport>,
    warnings: Vec<String>,
    ja: Resolvent,
    jb: Option<Resolvent>,
}

fn cert_of(op: &OperatorSpec, kind: CertKind, name: &str) -> Result<f64> {
    match op.cert(kind) {
        Some(c) if c.maximal => Ok(c.alpha),
        _ => Err(Error::Parameter(format!(
            "operator {name} has no maximal {} certificate",
            match kind {
                CertKind::Monotone => "monotone",
                CertKind::Comonotone => "comonotone",
            }
        ))),
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("kappa must be > 0 (got {kappa})")))
    }
}

fn same_dims(a: &OperatorSpec, b: &OperatorSpec) -> Result<()> {
    if let (Some(n), Some(m)) = (a.fixed_dim(), b.fixed_dim()) {
        if n != m {
            return Err(Error::DimensionMismatch { expected: n, found: m });
        }
    }
    Ok(())
}

impl AlgorithmInstance {
    #[allow(clippy::too_many_arguments)]
    fn finish(
        kind: AlgorithmKind,
        a: OperatorSpec,
        b: Option<OperatorSpec>,
        gamma: f64,
        delta: Option<f64>,
        kappa: f64,
        alpha: f64,
        beta: Option<f64>,
        kappa_star: f64,
    ) -> Result<Self> {
        let ja = Resolvent::new(&a, gamma)?;
        let jb = match (&b, delta) {
            (Some(b), Some(d)) => Some(Resolvent::new(b, d)?),
            _ => None,
        };
        let mut warnings: Vec<String> = ja.warning().into_iter().collect();
        warnings.extend(jb.as_ref().and_then(|j| j.warning()));
        if kappa >= kappa_star {
            warnings.push(format!(
                "kappa = {kappa} >= kappa* = {kappa_star}: convergence not guaranteed"
            ));
        }
        let (lambda, mu) = match delta {
            Some(d) => (Some(1.0 + d / gamma), Some(1.0 + gamma / d)),
            None => (None, None),
        };
        Ok(AlgorithmInstance {
            kind,
            a,
            b,
            gamma,
            delta,
            kappa,
            lambda,
            mu,
            alpha,
            beta,
            kappa_star,
            cert: ConicalCert::new(kappa / kappa_star)?,
            swapped: false,
            rfb_case: None,
            report: None,
            warnings,
            ja,
            jb,
        })
    }

    /// Relaxed proximal point for maximally α-comonotone `A`, `γ > max{0, −α}`.
    pub fn build_rpp(a: OperatorSpec, gamma: f64, kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        let alpha = cert_of(&a, CertKind::Comonotone, "A")?;
        let ks = params::kappa_star_rpp(alpha, gamma)?;
        Self::finish(AlgorithmKind::Rpp, a, None, gamma, None, kappa, alpha, None, ks)
    }

    /// Relaxed forward-backward for maximally α-comonotone `A` and
    /// β-cocoercive, pointwise-evaluable `B`.
    pub fn build_rfb(a: OperatorSpec, b: OperatorSpec, gamma: f64, kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        if !b.is_evaluable() {
            return Err(Error::NotEvaluable("the forward operator B must be pointwise-evaluable"));
        }
        same_dims(&a, &b)?;
        let alpha = cert_of(&a, CertKind::Comonotone, "A")?;
        let beta = cert_of(&b, CertKind::Comonotone, "B")?;
        let (ks, case) = params::kappa_star_rfb(alpha, beta, gamma)?;
        let mut inst = Self::finish(AlgorithmKind::Rfb, a, Some(b), gamma, None, kappa, alpha, Some(beta), ks)?;
        inst.rfb_case = Some(case);
        Ok(inst)
    }

    /// Adaptive Douglas–Rachford with the certificates of the given regime.
    pub fn build_adr(
        a: OperatorSpec,
        b: OperatorSpec,
        gamma: f64,
        delta: f64,
        kappa: f64,
        regime: Regime,
    ) -> Result<Self> {
        check_kappa(kappa)?;
        same_dims(&a, &b)?;
        let kind = match regime {
            Regime::Comonotone => AlgorithmKind::AdrComonotone,
            Regime::Monotone => AlgorithmKind::AdrMonotone,
        };
        let ck = match regime {
            Regime::Comonotone => CertKind::Comonotone,
            Regime::Monotone => CertKind::Monotone,
        };
        let alpha = cert_of(&a, ck, "A")?;
        let beta = cert_of(&b, ck, "B")?;
        let report = params::validate_params(regime, alpha, beta, gamma, delta)?;
        let ks = params::kappa_from_report(report.clone())?;
        let mut inst =
            Self::finish(kind, a, Some(b), gamma, Some(delta), kappa, alpha, Some(beta), ks)?;
        inst.report = Some(report);
        Ok(inst)
    }

    /// Adaptive Douglas–Rachford on `min f + g` through the subdifferentials,
    /// with resolvents realized as proximity operators.
    pub fn convex_min_instance(
        f: FunctionSpec,
        g: FunctionSpec,
        gamma: f64,
        delta: f64,
        kappa: f64,
    ) -> Result<Self> {
        Self::build_adr(
            OperatorSpec::subdifferential(f)?,
            OperatorSpec::subdifferential(g)?,
            gamma,
            delta,
            kappa,
            Regime::Monotone,
        )
    }

    /// The mirrored aDR map `(1−κ)Id + κR₁R₂`, whose shadow is `J_{δB}`.
    /// Same constant as the original.
    pub fn swapped(mut self) -> Result<Self> {
        if self.kind.regime().is_none() {
            return Err(Error::Parameter("only adaptive DR instances can be swapped".into()));
        }
        self.swapped = !self.swapped;
        Ok(self)
    }

    pub fn kind(&self) -> AlgorithmKind {
        self.kind
    }

    pub fn operator_a(&self) -> &OperatorSpec {
        &self.a
    }

    pub fn operator_b(&self) -> Option<&OperatorSpec> {
        self.b.as_ref()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn kappa_star(&self) -> f64 {
        self.kappa_star
    }

    pub fn cert(&self) -> ConicalCert {
        self.cert
    }

    pub fn theta(&self) -> f64 {
        self.cert.theta
    }

    pub fn is_swapped(&self) -> bool {
        self.swapped
    }

    /// `κ < κ*`: the map is averaged and the iteration provably converges.
    pub fn guaranteed(&self) -> bool {
        self.kappa < self.kappa_star
    }

    pub fn rfb_case(&self) -> Option<RfbCase> {
        self.rfb_case
    }

    pub fn param_report(&self) -> Option<&ParamReport> {
        self.report.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// How a fixed point is turned into a solution.
    pub fn solution_map(&self) -> &'static str {
        match (self.kind, self.swapped) {
            (AlgorithmKind::Rpp | AlgorithmKind::Rfb, _) => "identity",
            (_, false) => "resolvent of gamma*A",
            (_, true) => "resolvent of delta*B",
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        self.a.check_dim(x)?;
        if let Some(b) = &self.b {
            b.check_dim(x)?;
        }
        Ok(())
    }

    fn r1(&self, x: &Vector) -> Result<Vector> {
        self.ja.apply_relaxed(self.lambda.unwrap(), x)
    }

    fn r2(&self, x: &Vector) -> Result<Vector> {
        self.jb.as_ref().unwrap().apply_relaxed(self.mu.unwrap(), x)
    }

    /// The fixed point that corresponds to a zero `z` of `A + B` with
    /// `a ∈ Az` and `−a ∈ Bz`. For rPP and rFB this is `z` itself.
    pub fn fixed_point_from_zero(&self, z: &Vector, a: &Vector) -> Result<Vector> {
        a.check_dim(z.dim())?;
        Ok(match (self.kind.regime(), self.swapped) {
            (None, _) => z.clone(),
            (Some(_), false) => z.lincomb(1.0, a, self.gamma),
            (Some(_), true) => z.lincomb(1.0, a, -self.delta.unwrap()),
        })
    }

    /// Runs the Krasnosel'skiĭ–Mann iteration on this map with its certified θ.
    pub fn run(&self, x0: &Vector, steps: StepSequence, opts: &KmOptions) -> Result<IterationTrace> {
        self.check_dim(x0)?;
        let mut trace = km_run(self, self.theta(), x0, steps, opts)?;
        let mut w = self.warnings.clone();
        w.append(&mut trace.warnings);
        trace.warnings = w;
        Ok(trace)
    }
}

impl FixedPointMap for AlgorithmInstance {
    fn apply(&self, x: &Vector) -> Result<Vector> {
        self.check_dim(x)?;
        let k = self.kappa;
        let inner = match self.kind {
            AlgorithmKind::Rpp => self.ja.apply(x)?,
            AlgorithmKind::Rfb => {
                let bx = self.b.as_ref().unwrap().evaluate(x)?;
                self.ja.apply(&x.lincomb(1.0, &bx, -self.gamma))?
            }
            AlgorithmKind::AdrComonotone | AlgorithmKind::AdrMonotone => {
                if self.swapped {
                    self.r1(&self.r2(x)?)?
                } else {
                    self.r2(&self.r1(x)?)?
                }
            }
        };
        Ok(x.lincomb(1.0 - k, &inner, k))
    }

    fn shadow(&self, x: &Vector) -> Result<Vector> {
        match (self.kind.regime(), self.swapped) {
            (None, _) => Ok(x.clone()),
            (Some(_), false) => self.ja.apply(x),
            (Some(_), true) => self.jb.as_ref().unwrap().apply(x),
        }
    }
}

/// `J_{γA}x̄` (or `J_{δB}x̄` when swapped), with a warning when `x̄` is not an
/// approximate fixed point.
pub fn shadow(instance: &AlgorithmInstance, x: &Vector, tol: f64) -> Result<(Vector, Option<String>)> {
    let r = x.distance(&instance.apply(x)?);
    let warning = (r > tol).then(|| format!("point is not a fixed point: residual {r:e} > {tol:e}"));
    Ok((instance.shadow(x)?, warning))
}
