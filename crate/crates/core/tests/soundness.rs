//! Certified constants checked against the brute-force oracles on random
//! catalog instances.

use conical::algorithms::{
    suggest_params, AlgorithmInstance, FixedPointMap, FnMap, KmOptions, Regime, Status, StepSequence,
};
use conical::linalg::Matrix;
use conical::operators::{CertKind, FunctionSpec, OperatorSpec};
use conical::oracle::{
    analytic_zero, brute_prox, grid_argmin, sample_alpha_convexity_check, sample_conical_check,
    sample_monotonicity_check, zero_witness, GridConfig, SampleBox,
};
use conical::resolvents::{
    cert_forward_step, cert_resolvent_comonotone, cert_resolvent_monotone, prox, Resolvent,
};
use conical::Vector;
use proptest::prelude::*;

const TOL: f64 = 1e-9;
const PAIRS: usize = 2_000;

fn v(x: &[f64]) -> Vector {
    Vector::new(x.to_vec()).unwrap()
}

fn region(n: usize) -> SampleBox {
    SampleBox::cube(n, 10.0)
}

fn diag_op(d: &[f64], c: &[f64]) -> OperatorSpec {
    OperatorSpec::grad_quadratic(Matrix::diag(d), v(c)).unwrap()
}

fn function_strategy() -> impl Strategy<Value = FunctionSpec> {
    prop_oneof![
        (0.0..3.0f64).prop_map(|w| FunctionSpec::l1(w).unwrap()),
        (0.0..3.0f64, 0.01..1.0f64).prop_map(|(w, r)| FunctionSpec::weakly_convex_l1(w, r).unwrap()),
        (-3.0..0.0f64, 0.0..3.0f64)
            .prop_map(|(l, h)| FunctionSpec::box_indicator(v(&[l, l]), v(&[h, h])).unwrap()),
        (prop::collection::vec(-1.0..3.0f64, 2), prop::collection::vec(-2.0..2.0f64, 2))
            .prop_map(|(q, b)| FunctionSpec::quadratic(Matrix::diag(&q), v(&b)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prox_matches_grid_oracle(f in function_strategy(), x in prop::collection::vec(-6.0..6.0f64, 2), g in 0.05..0.95f64) {
        // γ below 1/|α| keeps every catalog prox well defined.
        let alpha = f.alpha_convex();
        let gamma = if alpha < 0.0 { g / -alpha } else { g * 3.0 };
        let x = v(&x);
        let closed = prox(&f, gamma, &x).unwrap();
        let cfg = GridConfig { radius: 200.0, ..GridConfig::default() };
        let brute = brute_prox(&f, gamma, &x, &cfg).unwrap();
        prop_assert!(closed.distance(&brute) <= 1e-6 * closed.norm().max(1.0), "{f:?} {gamma} {x:?}: {closed:?} vs {brute:?}");
    }

    #[test]
    fn comonotone_resolvent_certificate_holds(a in -3.0..3.0f64, shift in 0.05..3.0f64, lambda in 0.1..3.0f64) {
        prop_assume!(a.abs() > 1e-3);
        let op = OperatorSpec::scaled_identity(a).unwrap();
        let alpha = op.cert(CertKind::Comonotone).unwrap().alpha;
        let gamma = (-alpha).max(0.0) + shift;
        let theta = cert_resolvent_comonotone(alpha, gamma, lambda).unwrap().theta;
        let j = Resolvent::new(&op, gamma).unwrap();
        let map = FnMap(move |x: &Vector| j.apply_relaxed(lambda, x));
        let r = sample_conical_check(&map, theta, &region(2), PAIRS, TOL, 3).unwrap();
        prop_assert!(r.passed());
    }

    #[test]
    fn monotone_resolvent_certificate_holds(
        d in prop::collection::vec(-0.9..3.0f64, 3), gamma in 0.1..1.0f64, lambda in 1.05..4.0f64,
    ) {
        let op = diag_op(&d, &[0.5, -1.0, 2.0]);
        let alpha = op.cert(CertKind::Monotone).unwrap().alpha;
        let c = cert_resolvent_monotone(alpha, gamma, lambda).unwrap();
        let j = Resolvent::new(&op, gamma).unwrap();
        let map = FnMap(move |x: &Vector| Ok(j.apply_relaxed(lambda, x)?.scale(c.omega)));
        let r = sample_conical_check(&map, c.theta, &region(3), PAIRS, TOL, 4).unwrap();
        prop_assert!(r.passed(), "{alpha} {gamma} {lambda}: {:?}", r.worst_slack);
    }

    #[test]
    fn forward_step_certificate_holds(d in prop::collection::vec(0.1..4.0f64, 2), gamma in 0.05..6.0f64) {
        let op = diag_op(&d, &[1.0, -1.0]);
        let beta = op.cert(CertKind::Comonotone).unwrap().alpha;
        let theta = cert_forward_step(beta, gamma).unwrap().theta;
        let map = FnMap(|x: &Vector| Ok(x.lincomb(1.0, &op.evaluate(x)?, -gamma)));
        let r = sample_conical_check(&map, theta, &region(2), PAIRS, TOL, 5).unwrap();
        prop_assert!(r.passed());
    }

    #[test]
    fn subdifferential_certificates_hold(f in function_strategy()) {
        let op = OperatorSpec::subdifferential(f.clone()).unwrap();
        for c in op.certs() {
            let r = sample_monotonicity_check(&op, c.alpha, c.kind, &region(2), PAIRS, TOL, 6).unwrap();
            prop_assert!(r.passed(), "{f:?} {c:?}: {}", r.worst_slack);
        }
        let r = sample_alpha_convexity_check(&f, f.alpha_convex(), &region(2), PAIRS, TOL, 7).unwrap();
        prop_assert!(r.passed());
    }

    #[test]
    fn analytic_zero_matches_grid(f in function_strategy(), q in prop::collection::vec(1.1..3.0f64, 2), c in prop::collection::vec(-3.0..3.0f64, 2)) {
        let g = FunctionSpec::quadratic(Matrix::diag(&q), v(&c)).unwrap();
        let a = OperatorSpec::subdifferential(f.clone()).unwrap();
        let b = OperatorSpec::subdifferential(g.clone()).unwrap();
        let z = analytic_zero(&a, Some(&b), 2).unwrap();
        let z = z.known().expect("strongly convex sums have a known zero");
        let grid = grid_argmin(&f, &g, 2, &GridConfig::default()).unwrap();
        prop_assert!(z.distance(&grid) <= 1e-6);
        prop_assert!(zero_witness(&a, &b, z).is_ok());
    }

    #[test]
    fn algorithm_maps_are_conically_certified(
        a in -0.45..2.0f64, b in 0.6..3.0f64, rel in 0.1..0.99f64, seed in 0u64..1000,
    ) {
        let fa = FunctionSpec::l1(1.0).unwrap();
        let ops = || (
            OperatorSpec::scaled_identity(a).unwrap(),
            OperatorSpec::subdifferential(fa.clone()).unwrap(),
            diag_op(&[b, b], &[-1.0, 2.0]),
        );
        let (sa, l1, quad) = ops();
        let mut instances = Vec::new();
        let g = 1.0 / b + 1.0;
        if let Ok(probe) = AlgorithmInstance::build_rpp(sa.clone(), g, 1.0) {
            instances.push(AlgorithmInstance::build_rpp(sa.clone(), g, rel * probe.kappa_star()).unwrap());
        }
        let probe = AlgorithmInstance::build_rfb(l1.clone(), quad.clone(), 1.5 / b, 1.0).unwrap();
        instances.push(AlgorithmInstance::build_rfb(l1, quad.clone(), 1.5 / b, rel * probe.kappa_star()).unwrap());
        for regime in [Regime::Comonotone, Regime::Monotone] {
            let alpha = match regime {
                Regime::Comonotone => sa.cert(CertKind::Comonotone).unwrap().alpha,
                Regime::Monotone => a,
            };
            let beta = quad.cert(match regime {
                Regime::Comonotone => CertKind::Comonotone,
                Regime::Monotone => CertKind::Monotone,
            }).unwrap().alpha;
            let Ok((gamma, delta)) = suggest_params(regime, alpha, beta) else { continue };
            let Ok(probe) = AlgorithmInstance::build_adr(sa.clone(), quad.clone(), gamma, delta, 1.0, regime) else { continue };
            let k = rel * probe.kappa_star();
            instances.push(AlgorithmInstance::build_adr(sa.clone(), quad.clone(), gamma, delta, k, regime).unwrap());
            instances.push(AlgorithmInstance::build_adr(sa.clone(), quad.clone(), gamma, delta, k, regime).unwrap().swapped().unwrap());
        }
        for inst in &instances {
            let r = sample_conical_check(inst, inst.theta(), &region(2), PAIRS, TOL, seed).unwrap();
            prop_assert!(r.passed(), "{:?} theta {}: {}", inst.kind(), inst.theta(), r.worst_slack);
        }
    }
}

#[test]
fn certified_runs_are_fejer_monotone() {
    let c = v(&[3.0, -2.0, 0.4]);
    let z = v(&[2.0, -1.0, 0.0]);
    for gamma in [0.5, 1.9, 3.5] {
        let a = OperatorSpec::subdifferential(FunctionSpec::l1(1.0).unwrap()).unwrap();
        let b = OperatorSpec::grad_quadratic(Matrix::identity(3), -&c).unwrap();
        let inst = AlgorithmInstance::build_rfb(a, b, gamma, 0.8 * (4.0 - gamma) / 2.0).unwrap();
        let opts = KmOptions {
            reference: Some(z.clone()),
            ..KmOptions::default()
        };
        let t = inst.run(&v(&[-4.0, 5.0, 1.0]), StepSequence::constant(1.0), &opts).unwrap();
        assert_eq!(t.status, Status::Converged);
        assert!(t.records.iter().filter_map(|r| r.fejer_gap).all(|g| g <= 1e-12));
    }
}

#[test]
fn mirrored_adr_shares_zero_and_rate() {
    let f = FunctionSpec::weakly_convex_l1(1.0, 0.5).unwrap();
    let g = FunctionSpec::quadratic(Matrix::diag(&[2.0, 4.0]), v(&[-2.0, 1.0])).unwrap();
    let (gamma, delta) = suggest_params(Regime::Monotone, -0.5, 2.0).unwrap();
    let base = AlgorithmInstance::convex_min_instance(f.clone(), g.clone(), gamma, delta, 0.4).unwrap();
    let mirror = base.clone().swapped().unwrap();
    assert_eq!(base.theta(), mirror.theta());
    let a = OperatorSpec::subdifferential(f).unwrap();
    let b = OperatorSpec::subdifferential(g).unwrap();
    let z = analytic_zero(&a, Some(&b), 2).unwrap().known().cloned().unwrap();
    let w = zero_witness(&a, &b, &z).unwrap();
    for inst in [&base, &mirror] {
        let fixed = inst.fixed_point_from_zero(&z, &w).unwrap();
        assert!(fixed.distance(&inst.apply(&fixed).unwrap()) <= 1e-12);
        assert!(inst.shadow(&fixed).unwrap().distance(&z) <= 1e-12);
        let opts = KmOptions {
            solution: Some(z.clone()),
            tol: 1e-12,
            ..KmOptions::default()
        };
        let t = inst.run(&v(&[4.0, -3.0]), StepSequence::constant(1.0), &opts).unwrap();
        assert_eq!(t.status, Status::Converged);
        assert!(t.final_shadow.unwrap().distance(&z) <= 1e-9);
    }
}
