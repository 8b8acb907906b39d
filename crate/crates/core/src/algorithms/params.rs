//! Relaxation thresholds κ* and the (γ, δ) feasibility tests for the
//! adaptive Douglas–Rachford parameters.

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance used to decide `α + β = 0` and similar equalities.
pub const EQ_TOL: f64 = 1e-12;

/// Relative tolerance for landing exactly on an endpoint of a feasibility interval.
pub const BOUNDARY_TOL: f64 = 1e-12;

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be > 0 (got {v})")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{name} must be finite (got {v})")))
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL * (1.0 + a.abs().max(b.abs()))
}

/// `2β − 2√(β(α+β))` written without cancellation, valid for `α+β ≥ 0`, `β > 0`.
fn two_beta_minus_root(alpha: f64, beta: f64) -> f64 {
    let root = (beta * (alpha + beta).max(0.0)).sqrt();
    -2.0 * alpha * beta / (beta + root)
}

/// The threshold `γ₀`: 0 when `α ≥ 0`, else `2β − 2√(β(α+β))`.
pub fn gamma0(alpha: f64, beta: f64) -> f64 {
    if alpha >= 0.0 {
        0.0
    } else {
        two_beta_minus_root(alpha, beta)
    }
}

/// κ* for the relaxed proximal point map, requiring `γ > max{0, −α}`.
pub fn kappa_star_rpp(alpha: f64, gamma: f64) -> Result<f64> {
    finite("alpha", alpha)?;
    positive("gamma", gamma)?;
    if !(gamma + alpha > 0.0) {
        return Err(Error::Infeasible(format!(
            "gamma > max(0, -alpha) fails (gamma = {gamma}, alpha = {alpha})"
        )));
    }
    Ok(2.0 * (gamma + alpha) / gamma)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RfbCase {
    /// `α + β = 0` and `γ = 2β`.
    Balanced,
    /// `α + β > 0` with γ strictly inside its interval.
    Strong,
}

/// Open γ-interval of the strong forward-backward case.
pub fn rfb_gamma_interval(alpha: f64, beta: f64) -> (f64, f64) {
    let root = (beta * (alpha + beta).max(0.0)).sqrt();
    (two_beta_minus_root(alpha, beta).max(0.0), 2.0 * beta + 2.0 * root)
}

/// κ* for relaxed forward-backward with α-comonotone `A` and β-cocoercive `B`.
pub fn kappa_star_rfb(alpha: f64, beta: f64, gamma: f64) -> Result<(f64, RfbCase)> {
    finite("alpha", alpha)?;
    positive("gamma", gamma)?;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Infeasible(format!("B must be cocoercive: beta > 0 fails (beta = {beta})")));
    }
    let s = alpha + beta;
    if s.abs() <= EQ_TOL {
        if near(gamma, 2.0 * beta) {
            return Ok((1.0, RfbCase::Balanced));
        }
        return Err(Error::Infeasible(format!(
            "alpha + beta = 0 requires gamma = 2*beta (gamma = {gamma}, 2*beta = {})",
            2.0 * beta
        )));
    }
    if s < 0.0 {
        return Err(Error::Infeasible(format!(
            "alpha + beta >= 0 fails (alpha = {alpha}, beta = {beta})"
        )));
    }
    let (lo, hi) = rfb_gamma_interval(alpha, beta);
    if !(gamma > lo) {
        return Err(Error::Infeasible(format!(
            "gamma > max(0, 2*beta - 2*sqrt(beta*(alpha+beta))) = {lo} fails (gamma = {gamma})"
        )));
    }
    if !(gamma < hi) {
        return Err(Error::Infeasible(format!(
            "gamma < 2*beta + 2*sqrt(beta*(alpha+beta)) = {hi} fails (gamma = {gamma})"
        )));
    }
    let ks = (4.0 * (gamma + alpha) * beta - gamma * gamma) / (2.0 * gamma * s);
    Ok((ks, RfbCase::Strong))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Comonotone,
    Monotone,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Interior point: all inequalities strict.
    Strict,
    /// On an endpoint of the δ-interval (the only option when `α+β = 0`).
    Boundary,
    Infeasible,
}

/// Diagnostics of a (γ, δ) feasibility test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamReport {
    pub regime: Regime,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub verdict: Verdict,
    pub gamma0: f64,
    /// `(γ+α)(α+β)` for comonotone, `γ(1+γα)(α+β)` for monotone.
    pub discriminant: f64,
    /// Admissible closed δ-interval for this γ; empty when `lo > hi`.
    pub delta_interval: (f64, f64),
    /// Monotone regime only: the interval for `1/δ` the test is stated in.
    pub inv_delta_interval: Option<(f64, f64)>,
    /// Left and right side of the direct quadratic inequality `lhs ≤ rhs`.
    pub lhs: f64,
    pub rhs: f64,
    /// Positivity facts implied by feasibility, e.g. `gamma + alpha > 0`.
    pub implied: Vec<String>,
    /// Why the tuple is infeasible.
    pub reason: Option<String>,
    /// Present when the governing theorem applies (feasible, and κ* > 0).
    pub kappa_star: Option<f64>,
}

impl ParamReport {
    pub fn is_feasible(&self) -> bool {
        self.verdict != Verdict::Infeasible
    }

    /// The direct inequality, decided on its own.
    pub fn direct_holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

fn check_inputs(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<()> {
    finite("alpha", alpha)?;
    finite("beta", beta)?;
    positive("gamma", gamma)?;
    positive("delta", delta)?;
    if alpha + beta < -EQ_TOL {
        return Err(Error::Parameter(format!(
            "alpha + beta >= 0 is required (alpha = {alpha}, beta = {beta})"
        )));
    }
    Ok(())
}

struct IntervalTest {
    gamma0: f64,
    disc: f64,
    lo: f64,
    hi: f64,
    verdict: Verdict,
    reason: Option<String>,
}

/// The interval form of the comonotone lemma for a generic pair (g, d):
/// `g > γ₀` and `g+2α−2√Δ ≤ d ≤ g+2α+2√Δ` with `Δ = (g+α)(α+β)`.
fn interval_test(alpha: f64, beta: f64, g: f64, d: f64, gname: &str, dname: &str) -> IntervalTest {
    let g0 = gamma0(alpha, beta);
    let s = if (alpha + beta).abs() <= EQ_TOL {
        0.0
    } else {
        alpha + beta
    };
    let disc = (g + alpha) * s;
    let root = disc.max(0.0).sqrt();
    let lo = g + 2.0 * alpha - 2.0 * root;
    let hi = g + 2.0 * alpha + 2.0 * root;
    let (verdict, reason) = if !(g > g0) {
        (
            Verdict::Infeasible,
            Some(format!("{gname} > gamma0 = {g0} fails ({gname} = {g})")),
        )
    } else if near(d, lo) || near(d, hi) {
        (Verdict::Boundary, None)
    } else if d < lo {
        (
            Verdict::Infeasible,
            Some(format!("{dname} >= {lo} fails ({dname} = {d})")),
        )
    } else if d > hi {
        (
            Verdict::Infeasible,
            Some(format!("{dname} <= {hi} fails ({dname} = {d})")),
        )
    } else {
        (Verdict::Strict, None)
    };
    IntervalTest {
        gamma0: g0,
        disc,
        lo,
        hi,
        verdict,
        reason,
    }
}

fn theorem_kappa_star(
    verdict: Verdict,
    alpha: f64,
    beta: f64,
    formula: f64,
    reason: &mut Option<String>,
) -> Option<f64> {
    let balanced = (alpha + beta).abs() <= EQ_TOL;
    match verdict {
        Verdict::Infeasible => None,
        Verdict::Boundary if balanced => Some(1.0),
        _ if balanced => {
            *reason = Some("alpha + beta = 0 pins delta to a single value".into());
            None
        }
        _ if formula > 0.0 => Some(formula),
        _ => {
            *reason = Some(format!("kappa* > 0 fails (kappa* = {formula})"));
            None
        }
    }
}

/// Feasibility of (γ, δ) for α-comonotone `A` and β-comonotone `B`.
pub fn validate_params_comonotone(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<ParamReport> {
    check_inputs(alpha, beta, gamma, delta)?;
    let t = interval_test(alpha, beta, gamma, delta, "gamma", "delta");
    let lhs = (gamma + delta).powi(2);
    let rhs = 4.0 * (gamma + alpha) * (delta + beta);
    let mut reason = t.reason;
    let formula = (rhs - lhs) / (2.0 * (gamma + delta) * (alpha + beta));
    let kappa_star = theorem_kappa_star(t.verdict, alpha, beta, formula, &mut reason);
    let implied = if t.verdict == Verdict::Infeasible {
        Vec::new()
    } else {
        vec![
            format!("gamma + alpha = {} > 0", gamma + alpha),
            format!("delta + beta = {} > 0", delta + beta),
        ]
    };
    Ok(ParamReport {
        regime: Regime::Comonotone,
        alpha,
        beta,
        gamma,
        delta,
        verdict: t.verdict,
        gamma0: t.gamma0,
        discriminant: t.disc,
        delta_interval: (t.lo.max(0.0), t.hi),
        inv_delta_interval: None,
        lhs,
        rhs,
        implied,
        reason,
        kappa_star,
    })
}

/// Feasibility of (γ, δ) for α-monotone `A` and β-monotone `B`; the
/// comonotone test applied to `1/γ` and `1/δ`.
pub fn validate_params_monotone(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<ParamReport> {
    check_inputs(alpha, beta, gamma, delta)?;
    let t = interval_test(alpha, beta, 1.0 / gamma, 1.0 / delta, "1/gamma", "1/delta");
    let lhs = (gamma + delta).powi(2);
    let rhs = 4.0 * gamma * delta * (1.0 + gamma * alpha) * (1.0 + delta * beta);
    let mut reason = t.reason;
    let formula = (rhs - lhs) / (2.0 * gamma * delta * (gamma + delta) * (alpha + beta));
    let kappa_star = theorem_kappa_star(t.verdict, alpha, beta, formula, &mut reason);
    let implied = if t.verdict == Verdict::Infeasible {
        Vec::new()
    } else {
        vec![
            format!("1 + gamma*alpha = {} > 0", 1.0 + gamma * alpha),
            format!("1 + delta*beta = {} > 0", 1.0 + delta * beta),
        ]
    };
    let inv_lo = t.lo.max(0.0);
    let delta_interval = (
        1.0 / t.hi,
        if inv_lo > 0.0 { 1.0 / inv_lo } else { f64::INFINITY },
    );
    Ok(ParamReport {
        regime: Regime::Monotone,
        alpha,
        beta,
        gamma,
        delta,
        verdict: t.verdict,
        gamma0: t.gamma0,
        discriminant: gamma * gamma * t.disc,
        delta_interval,
        inv_delta_interval: Some((inv_lo, t.hi)),
        lhs,
        rhs,
        implied,
        reason,
        kappa_star,
    })
}

pub fn validate_params(regime: Regime, alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<ParamReport> {
    match regime {
        Regime::Comonotone => validate_params_comonotone(alpha, beta, gamma, delta),
        Regime::Monotone => validate_params_monotone(alpha, beta, gamma, delta),
    }
}

/// A feasible (γ, δ): `g = γ₀ + 1` and `d` in the middle of its interval,
/// where `(g, d) = (γ, δ)` for comonotone and `(1/γ, 1/δ)` for monotone.
/// With `α + β = 0` the unique admissible δ is returned.
pub fn suggest_params(regime: Regime, alpha: f64, beta: f64) -> Result<(f64, f64)> {
    finite("alpha", alpha)?;
    finite("beta", beta)?;
    if alpha + beta < -EQ_TOL {
        return Err(Error::Parameter(format!(
            "alpha + beta >= 0 is required (alpha = {alpha}, beta = {beta})"
        )));
    }
    let g = gamma0(alpha, beta) + 1.0;
    let t = interval_test(alpha, beta, g, g, "", "");
    let d = if (alpha + beta).abs() <= EQ_TOL {
        t.lo
    } else {
        0.5 * (t.lo.max(0.0) + t.hi)
    };
    if !(d > 0.0) {
        return Err(Error::Infeasible("no positive delta for the suggested gamma".into()));
    }
    Ok(match regime {
        Regime::Comonotone => (g, d),
        Regime::Monotone => (1.0 / g, 1.0 / d),
    })
}

/// κ* of the comonotone adaptive DR map; errors carry the validator diagnostics.
pub fn kappa_star_adr_comonotone(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<f64> {
    kappa_from_report(validate_params_comonotone(alpha, beta, gamma, delta)?)
}

/// κ* of the monotone adaptive DR map; errors carry the validator diagnostics.
pub fn kappa_star_adr_monotone(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<f64> {
    kappa_from_report(validate_params_monotone(alpha, beta, gamma, delta)?)
}

pub(crate) fn kappa_from_report(r: ParamReport) -> Result<f64> {
    r.kappa_star.ok_or_else(|| Error::Infeasible(describe_infeasible(&r)))
}

pub(crate) fn describe_infeasible(r: &ParamReport) -> String {
    let mut s = format!(
        "{}; gamma0 = {}, Delta = {}, admissible delta in [{}, {}]",
        r.reason.as_deref().unwrap_or("parameters outside the theorem"),
        r.gamma0,
        r.discriminant,
        r.delta_interval.0,
        r.delta_interval.1
    );
    if let Some((lo, hi)) = r.inv_delta_interval {
        s.push_str(&format!(" (1/delta in [{lo}, {hi}])"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn rpp_examples() {
        assert_eq!(kappa_star_rpp(0.0, 1.0).unwrap(), 2.0);
        assert_eq!(kappa_star_rpp(-2.0, 4.0).unwrap(), 1.0);
        assert_eq!(kappa_star_rpp(1.0, 1.0).unwrap(), 4.0);
        assert!(matches!(kappa_star_rpp(-2.0, 2.0), Err(Error::Infeasible(_))));
    }

    #[test]
    fn rfb_examples() {
        assert_eq!(kappa_star_rfb(0.0, 1.0, 3.0).unwrap(), (0.5, RfbCase::Strong));
        assert_eq!(kappa_star_rfb(-0.5, 0.5, 1.0).unwrap(), (1.0, RfbCase::Balanced));
        assert_eq!(kappa_star_rfb(1.0, 1.0, 2.0).unwrap(), (1.0, RfbCase::Strong));
        let err = kappa_star_rfb(0.0, 1.0, 5.0).unwrap_err().to_string();
        assert!(err.contains("gamma < 2*beta + 2*sqrt(beta*(alpha+beta))"), "{err}");
        assert!(kappa_star_rfb(-0.5, 0.5, 1.5).is_err());
        assert!(kappa_star_rfb(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn rfb_monotone_specialization() {
        for i in 1..400 {
            let gamma = i as f64 / 100.0;
            let (ks, _) = kappa_star_rfb(0.0, 1.0, gamma).unwrap();
            assert!(close(ks, (4.0 - gamma) / 2.0, 1e-14));
        }
        assert!(kappa_star_rfb(0.0, 1.0, 4.0).is_err());
    }

    #[test]
    fn gamma0_examples() {
        assert!(close(gamma0(-1.0, 2.0), 4.0 - 2.0 * 2f64.sqrt(), 1e-15));
        assert_eq!(gamma0(0.5, 2.0), 0.0);
        // γ₀ ≥ max{0, −α}
        assert!(gamma0(-1.0, 1.0) >= 1.0);
    }

    #[test]
    fn comonotone_validator_examples() {
        let r = validate_params_comonotone(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::Boundary);
        assert_eq!(r.kappa_star, Some(1.0));
        let r = validate_params_comonotone(0.0, 0.0, 1.0, 1.1).unwrap();
        assert_eq!(r.verdict, Verdict::Infeasible);
        let r = validate_params_comonotone(1.0, 1.0, 1.0, 2.0).unwrap();
        assert_eq!(r.discriminant, 4.0);
        assert_eq!(r.delta_interval, (0.0, 7.0));
        assert_eq!(r.verdict, Verdict::Strict);
        assert_eq!(r.implied.len(), 2);
        assert_eq!(validate_params_comonotone(1.0, 1.0, 1.0, 7.0).unwrap().verdict, Verdict::Boundary);
        assert_eq!(validate_params_comonotone(1.0, 1.0, 1.0, 7.5).unwrap().verdict, Verdict::Infeasible);
        let r = validate_params_comonotone(-1.0, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::Infeasible);
        assert!(close(r.gamma0, 1.17157, 1e-5));
        assert!(validate_params_comonotone(-1.0, 0.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn monotone_validator_examples() {
        for g in [0.3, 1.0, 7.0] {
            let r = validate_params_monotone(0.0, 0.0, g, g).unwrap();
            assert_eq!(r.verdict, Verdict::Boundary);
            assert_eq!(r.kappa_star, Some(1.0));
            assert_eq!(validate_params_monotone(0.0, 0.0, g, 1.2 * g).unwrap().verdict, Verdict::Infeasible);
        }
        let r = validate_params_monotone(-0.3, 0.5, 1.0, 1.0).unwrap();
        assert!(close(r.discriminant, 0.14, 1e-12));
        let (lo, hi) = r.inv_delta_interval.unwrap();
        assert_eq!(lo, 0.0);
        assert!(close(hi, 0.4 + 2.0 * 0.14f64.sqrt(), 1e-12));
        for k in 1..50 {
            let inv = hi * k as f64 / 50.0;
            let r = validate_params_monotone(-0.3, 0.5, 1.0, 1.0 / inv).unwrap();
            assert!(r.is_feasible() && r.direct_holds());
        }
        // α + β = 0 pins δ = γ/(1+2γα)
        let r = validate_params_monotone(-1.0, 1.0, 0.25, 0.25 / 0.5).unwrap();
        assert_eq!(r.verdict, Verdict::Boundary);
        assert_eq!(r.kappa_star, Some(1.0));
        let r = validate_params_monotone(-1.0, 1.0, 0.25, 0.4).unwrap();
        assert_eq!(r.verdict, Verdict::Infeasible);
    }

    #[test]
    fn adr_kappa_star_examples() {
        assert_eq!(kappa_star_adr_monotone(0.0, 0.0, 1.0, 1.0).unwrap(), 1.0);
        assert!(close(kappa_star_adr_monotone(1.0, 1.0, 1.0, 1.0).unwrap(), 1.5, 1e-14));
        assert!(close(kappa_star_adr_comonotone(1.0, 1.0, 1.0, 1.0).unwrap(), 1.5, 1e-14));
        let err = kappa_star_adr_comonotone(0.0, 0.0, 1.0, 2.0).unwrap_err().to_string();
        assert!(err.contains("gamma0") && err.contains("Delta"), "{err}");
    }

    #[test]
    fn classical_dr_specializations() {
        for &(a, b) in &[(1.0, 1.0), (0.5, 2.0), (-0.2, 1.0), (3.0, -1.0)] {
            for &g in &[0.2, 0.5, 1.0] {
                if let Ok(k) = kappa_star_adr_monotone(a, b, g, g) {
                    assert!(close(k, 1.0 + g * a * b / (a + b), 1e-12));
                }
                if let Ok(k) = kappa_star_adr_comonotone(a, b, g, g) {
                    assert!(close(k, 1.0 + a * b / (g * (a + b)), 1e-12));
                }
            }
        }
    }

    #[test]
    fn suggestions_are_strictly_feasible() {
        for &(a, b) in &[(-0.5, 2.0), (1.0, 1.0), (-1.0, 2.0), (0.0, 0.3), (2.0, -1.5)] {
            for regime in [Regime::Comonotone, Regime::Monotone] {
                let (g, d) = suggest_params(regime, a, b).unwrap();
                let r = validate_params(regime, a, b, g, d).unwrap();
                assert_eq!(r.verdict, Verdict::Strict, "{regime:?} {a} {b}");
                assert!(r.kappa_star.unwrap() > 0.0);
            }
        }
        for regime in [Regime::Comonotone, Regime::Monotone] {
            let (g, d) = suggest_params(regime, -1.0, 1.0).unwrap();
            let r = validate_params(regime, -1.0, 1.0, g, d).unwrap();
            assert_eq!(r.verdict, Verdict::Boundary);
        }
    }
}
