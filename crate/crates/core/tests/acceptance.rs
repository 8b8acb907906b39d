//! Acceptance suite A1–A8. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;

use conical::algorithms::{
    kappa_star_rfb, suggest_params, validate_params, AlgorithmInstance, FnMap, IterationTrace, KmOptions,
    Regime, Status, StepSequence, Verdict,
};
use conical::calculus::{compose2, compose_many, convex_combination, relax};
use conical::linalg::Matrix;
use conical::operators::{CertKind, FunctionSpec, OperatorSpec};
use conical::oracle::{
    analytic_zero, grid_argmin, rate_check, sample_conical_check, sample_monotonicity_check, GridConfig,
    SampleBox, DEFAULT_TOL,
};
use conical::Vector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// A1
const A1_TUPLES: usize = 1_000;
const A1_PAIRS: usize = 10_000;
const A1_SLACK_TOL: f64 = 1e-8;
const A1_FOLD_TOL: f64 = 1e-12;
const A1_ADDITIVITY_TOL: f64 = 1e-10;
// A2
const A2_STEP_TOL: f64 = 1e-12;
// A3
const A3_DIST_TOL: f64 = 1e-6;
const A3_MAX_ITER: usize = 10_000;
// A4
const A4_ARGMIN_TOL: f64 = 1e-4;
const A4_SWAP_TOL: f64 = 1e-6;
// A5
const A5_SHADOW_TOL: f64 = 1e-8;
// A6
const A6_MIN_TUPLES: usize = 100_000;
const A6_BOUNDARY_TOL: f64 = 1e-9;
// A7
const A7_SAMPLES: usize = 100_000;
const A7_REPS: u64 = 20;
// A8
const A8_MAX_ITER: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn v(x: &[f64]) -> Vector {
    Vector::new(x.to_vec()).unwrap()
}

/// `(1−θ)Id + θQ` for an orthogonal `Q` with no eigenvalue near 1, which is
/// conically θ-averaged and no better.
fn tight_map(theta: f64, rng: &mut ChaCha8Rng) -> Matrix {
    let q = match rng.random_range(0..3) {
        0 => Matrix::identity(2).scaled(-1.0),
        1 => {
            let phi: f64 = rng.random_range(PI / 2.0..PI);
            let (s, c) = phi.sin_cos();
            Matrix::from_rows(vec![vec![c, -s], vec![s, c]]).unwrap()
        }
        _ => {
            let phi: f64 = rng.random_range(0.0..2.0 * PI);
            let (s, c) = phi.sin_cos();
            Matrix::from_rows(vec![vec![c, s], vec![s, -c]]).unwrap()
        }
    };
    Matrix::identity(2).scaled(1.0 - theta).add(&q.scaled(theta))
}

fn chain_map(ms: Vec<Matrix>) -> impl Fn(&Vector) -> conical::Result<Vector> + Sync {
    move |x: &Vector| ms.iter().try_fold(x.clone(), |y, m| m.mul_vec(&y))
}

fn a1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA1);
    let region = SampleBox::cube(2, 10.0);
    let (mut done, mut failures, mut fold_bad, mut add_bad, mut chains) = (0, 0, 0, 0, 0);
    let mut worst = f64::INFINITY;
    while done < A1_TUPLES {
        let rule = done % 4;
        let (theta, map): (f64, Box<dyn Fn(&Vector) -> conical::Result<Vector> + Sync>) = match rule {
            0 => {
                let t = rng.random_range(0.05..3.0);
                let lambda = rng.random_range(0.05..3.0);
                let Ok(th) = relax(t, lambda) else { continue };
                let n = tight_map(t, &mut rng);
                let m = Matrix::identity(2).scaled(1.0 - lambda).add(&n.scaled(lambda));
                (th, Box::new(chain_map(vec![m])))
            }
            1 => {
                let k = rng.random_range(2..=4);
                let ts: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..3.0)).collect();
                let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let ws: Vec<f64> = raw.iter().map(|w| w / total).collect();
                let Ok(th) = convex_combination(&ts, &ws) else { continue };
                let mut m = Matrix::identity(2).scaled(0.0);
                for (t, w) in ts.iter().zip(&ws) {
                    m = m.add(&tight_map(*t, &mut rng).scaled(*w));
                }
                (th, Box::new(chain_map(vec![m])))
            }
            2 => {
                let (t1, t2) = (rng.random_range(0.05..2.0), rng.random_range(0.05..2.0));
                let Ok(th) = compose2(t1, t2) else { continue };
                let ms = vec![tight_map(t1, &mut rng), tight_map(t2, &mut rng)];
                (th, Box::new(chain_map(ms)))
            }
            _ => {
                let k = rng.random_range(3..=5);
                let ts: Vec<f64> = (0..k)
                    .map(|_| if rng.random_bool(0.2) { rng.random_range(1.0..1.5) } else { rng.random_range(0.05..0.95) })
                    .collect();
                let Ok(c) = compose_many(&ts) else { continue };
                chains += 1;
                // Left fold of the pairwise rule.
                let fold = ts[1..].iter().try_fold(ts[0], |acc, &t| compose2(acc, t));
                if !fold.is_ok_and(|f| (f - c.theta).abs() <= A1_FOLD_TOL) {
                    fold_bad += 1;
                }
                let lhs = c.theta / (1.0 - c.theta);
                let rhs: f64 = ts.iter().map(|t| t / (1.0 - t)).sum();
                if (lhs - rhs).abs() > A1_ADDITIVITY_TOL * (1.0 + rhs.abs()) {
                    add_bad += 1;
                }
                let ms = ts.iter().map(|&t| tight_map(t, &mut rng)).collect();
                (c.theta, Box::new(chain_map(ms)))
            }
        };
        let r = sample_conical_check(&FnMap(map), theta, &region, A1_PAIRS, A1_SLACK_TOL, done as u64).unwrap();
        worst = worst.min(r.worst_slack);
        if !r.passed() || !r.forms_agree {
            failures += 1;
        }
        done += 1;
    }
    outcome(
        failures == 0 && fold_bad == 0 && add_bad == 0,
        format!(
            "{done} tuples x {A1_PAIRS} pairs: {failures} failures (worst slack {worst:.2e}); \
             {chains} chains: {fold_bad} fold mismatches, {add_bad} additivity mismatches"
        ),
    )
}

fn a2() -> Outcome {
    let a = || OperatorSpec::scaled_identity(-0.5).unwrap();
    let alpha = a().cert(CertKind::Comonotone).unwrap().alpha;
    let mut notes = vec![format!("alpha = {alpha}")];
    let mut pass = alpha == -2.0;
    let x0 = v(&[1.0]);
    for kappa in [0.25, 0.5, 0.9, 1.0] {
        let inst = AlgorithmInstance::build_rpp(a(), 4.0, kappa).unwrap();
        pass &= inst.kappa_star() == 1.0;
        let opts = KmOptions {
            max_iter: 200,
            reference: Some(Vector::zeros(1)),
            snapshot_stride: 1,
            ..KmOptions::default()
        };
        let t = inst.run(&x0, StepSequence::constant(1.0), &opts).unwrap();
        let factor = (1.0 - 2.0 * kappa).abs();
        let xs: Vec<f64> = t.records.iter().filter_map(|r| r.snapshot.as_ref()).map(|x| x[0]).collect();
        let steps_ok = xs
            .windows(2)
            .all(|w| (w[1].abs() - factor * w[0].abs()).abs() <= A2_STEP_TOL * w[0].abs().max(1e-300));
        let gaps: Vec<f64> = t.records.iter().filter_map(|r| r.fejer_gap).collect();
        if kappa < 1.0 {
            let ok = t.status == Status::Converged && steps_ok && gaps.iter().all(|&g| g <= 0.0);
            pass &= ok;
            notes.push(format!("kappa={kappa}: {} in {} (factor {factor})", t.status.as_str(), t.iterations()));
        } else {
            let flips = xs.windows(2).all(|w| w[1] == -w[0]);
            let constant = t.residuals().iter().all(|&r| r == 2.0);
            let equality = gaps.iter().all(|&g| g == 0.0);
            let ok = t.status == Status::MaxIter && flips && constant && equality && !inst.guaranteed();
            pass &= ok;
            notes.push(format!(
                "kappa=1: {} (oscillating {flips}, constant residual {constant}, Fejer equality {equality})",
                t.status.as_str()
            ));
        }
    }
    outcome(pass, notes.join("; "))
}

fn a3_instance(gamma: f64) -> (AlgorithmInstance, f64) {
    let c = v(&[3.0, -2.0, 0.4]);
    let a = OperatorSpec::subdifferential(FunctionSpec::l1(1.0).unwrap()).unwrap();
    let b = OperatorSpec::grad_quadratic(Matrix::identity(3), -&c).unwrap();
    let ks = (4.0 - gamma) / 2.0;
    (AlgorithmInstance::build_rfb(a, b, gamma, 0.8 * ks).unwrap(), ks)
}

fn long_opts(solution: Option<Vector>) -> KmOptions {
    KmOptions {
        max_iter: A8_MAX_ITER,
        tol: 0.0,
        solution,
        ..KmOptions::default()
    }
}

fn a3(traces: &mut Vec<(String, IterationTrace)>) -> Outcome {
    let solution = v(&[2.0, -1.0, 0.0]);
    let mut pass = true;
    let mut notes = Vec::new();
    // The solution itself, cross-checked against the oracles.
    let a = OperatorSpec::subdifferential(FunctionSpec::l1(1.0).unwrap()).unwrap();
    let b = OperatorSpec::grad_quadratic(Matrix::identity(3), v(&[-3.0, 2.0, -0.4])).unwrap();
    let exact = analytic_zero(&a, Some(&b), 3).unwrap();
    let grid = grid_argmin(
        &FunctionSpec::l1(1.0).unwrap(),
        &FunctionSpec::quadratic(Matrix::identity(3), v(&[-3.0, 2.0, -0.4])).unwrap(),
        3,
        &GridConfig::default(),
    )
    .unwrap();
    pass &= exact.known() == Some(&solution) && grid.distance(&solution) <= A3_DIST_TOL;
    let x0 = v(&[-4.0, 5.0, 1.0]);
    for gamma in [0.5, 1.9, 2.5, 3.5] {
        let (inst, ks) = a3_instance(gamma);
        let (library_ks, _) = kappa_star_rfb(0.0, 1.0, gamma).unwrap();
        let t = inst.run(&x0, StepSequence::constant(1.0), &long_opts(Some(solution.clone()))).unwrap();
        let hit = t
            .records
            .iter()
            .find(|r| r.dist_to_solution.is_some_and(|d| d <= A3_DIST_TOL))
            .map(|r| r.n);
        let last = t.records.last().and_then(|r| r.dist_to_solution).unwrap_or(f64::NAN);
        let rate = rate_check(&t, 0).map(|r| r.pass).unwrap_or(false);
        let ok = (library_ks - ks).abs() <= 1e-15 * ks
            && hit.is_some_and(|n| n <= A3_MAX_ITER)
            && last <= A3_DIST_TOL
            && rate;
        pass &= ok;
        notes.push(format!("gamma={gamma}: dist<=1e-6 at n={hit:?}, final {last:.1e}, rate {rate}"));
        traces.push((format!("A3 gamma={gamma}"), t));
    }
    outcome(pass, notes.join("; "))
}

fn a4(traces: &mut Vec<(String, IterationTrace)>) -> Outcome {
    let (alpha, beta) = (-0.5, 2.0);
    let f = FunctionSpec::weakly_convex_l1(1.0, 0.5).unwrap();
    let g = FunctionSpec::quadratic(Matrix::diag(&[2.0]), v(&[-2.0])).unwrap();
    let target = grid_argmin(&f, &g, 1, &GridConfig::default()).unwrap();
    let (gamma, delta) = suggest_params(Regime::Monotone, alpha, beta).unwrap();
    let report = validate_params(Regime::Monotone, alpha, beta, gamma, delta).unwrap();
    let formula = (4.0 * gamma * delta * (1.0 + gamma * alpha) * (1.0 + delta * beta) - (gamma + delta).powi(2))
        / (2.0 * gamma * delta * (gamma + delta) * (alpha + beta));
    let ks = report.kappa_star.unwrap_or(f64::NAN);
    let mut pass = report.verdict == Verdict::Strict && (ks - formula).abs() <= 1e-12 * formula;
    let x0 = v(&[5.0]);
    let mut limits = Vec::new();
    for swap in [false, true] {
        let mut inst = AlgorithmInstance::convex_min_instance(f.clone(), g.clone(), gamma, delta, 0.8 * ks).unwrap();
        if swap {
            inst = inst.swapped().unwrap();
        }
        let t = inst.run(&x0, StepSequence::constant(1.0), &long_opts(None)).unwrap();
        pass &= t.status != Status::Diverged;
        let s = t.final_shadow.clone().unwrap_or_else(|| v(&[f64::NAN]));
        pass &= s.distance(&target) <= A4_ARGMIN_TOL;
        limits.push(s);
        traces.push((format!("A4 swap={swap}"), t));
    }
    let gap = limits[0].distance(&limits[1]);
    pass &= gap <= A4_SWAP_TOL;
    outcome(
        pass,
        format!(
            "gamma={gamma:.4} delta={delta:.4} kappa*={ks:.6}; shadows {:.8}, {:.8} vs grid {:.8}; swap gap {gap:.1e}",
            limits[0][0], limits[1][0], target[0]
        ),
    )
}

fn a5(traces: &mut Vec<(String, IterationTrace)>) -> Outcome {
    let f = FunctionSpec::l1(1.0).unwrap();
    let inst = AlgorithmInstance::convex_min_instance(f.clone(), f, 1.0, 1.0, 0.5).unwrap();
    let mut pass = inst.lambda() == Some(2.0) && inst.mu() == Some(2.0) && inst.kappa_star() == 1.0 && inst.theta() == 0.5;
    let t = inst.run(&v(&[3.0, -2.0, 0.7]), StepSequence::constant(1.0), &long_opts(None)).unwrap();
    let shadow = t.final_shadow.clone().unwrap_or_else(|| v(&[f64::NAN; 3]));
    let dist = shadow.norm();
    pass &= t.status == Status::Converged && dist <= A5_SHADOW_TOL;
    let r = sample_conical_check(&inst, 0.5, &SampleBox::cube(3, 10.0), A1_PAIRS, DEFAULT_TOL, 5).unwrap();
    pass &= r.passed();
    let detail = format!(
        "{} in {}, |shadow| = {dist:.1e}, theta=1/2 sampled {:?} (worst {:.1e})",
        t.status.as_str(),
        t.iterations(),
        r.verdict,
        r.worst_slack
    );
    traces.push(("A5".into(), t));
    outcome(pass, detail)
}

fn a6() -> Outcome {
    let ab: Vec<f64> = (0..=20).map(|i| -2.0 + 0.2 * i as f64).collect();
    let gd: Vec<f64> = (1..=21).map(|k| 5.0 * k as f64 / 21.0).collect();
    let (mut total, mut boundary, mut bad) = (0usize, 0usize, 0usize);
    let mut first_bad = None;
    for &alpha in &ab {
        for &beta in &ab {
            if alpha + beta < -1e-12 {
                continue;
            }
            for &gamma in &gd {
                for &delta in &gd {
                    for regime in [Regime::Comonotone, Regime::Monotone] {
                        let (lhs, rhs) = match regime {
                            Regime::Comonotone => ((gamma + delta).powi(2), 4.0 * (gamma + alpha) * (delta + beta)),
                            Regime::Monotone => (
                                (gamma + delta).powi(2),
                                4.0 * gamma * delta * (1.0 + gamma * alpha) * (1.0 + delta * beta),
                            ),
                        };
                        let scale = 1.0 + lhs.abs() + rhs.abs();
                        let r = validate_params(regime, alpha, beta, gamma, delta).unwrap();
                        total += 1;
                        let agree = if (lhs - rhs).abs() <= A6_BOUNDARY_TOL * scale {
                            boundary += 1;
                            r.verdict != Verdict::Infeasible
                        } else {
                            (lhs < rhs) == r.is_feasible()
                        };
                        if !agree {
                            bad += 1;
                            first_bad.get_or_insert((regime, alpha, beta, gamma, delta, r.verdict));
                        }
                    }
                }
            }
        }
    }
    outcome(
        bad == 0 && total >= 2 * A6_MIN_TUPLES,
        format!("{} tuples per regime, {boundary} on the boundary, {bad} disagreements {first_bad:?}", total / 2),
    )
}

fn a7() -> Outcome {
    let region = SampleBox::cube(2, 10.0);
    let (mut theta_hits, mut alpha_hits, mut kappa_hits) = (0, 0, 0);
    for seed in 0..A7_REPS {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA7 + seed);
        let theta = rng.random_range(0.05..3.0);
        let m = tight_map(theta, &mut rng);
        let map = FnMap(move |x: &Vector| m.mul_vec(x));
        let r = sample_conical_check(&map, 0.9 * theta, &region, A7_SAMPLES, DEFAULT_TOL, seed).unwrap();
        theta_hits += usize::from(r.witness.is_some());

        let a: f64 = rng.random_range(0.1..5.0);
        let op = OperatorSpec::scaled_identity(a).unwrap();
        let alpha = op.cert(CertKind::Comonotone).unwrap().alpha;
        let r = sample_monotonicity_check(&op, 1.1 * alpha, CertKind::Comonotone, &region, A7_SAMPLES, DEFAULT_TOL, seed)
            .unwrap();
        alpha_hits += usize::from(r.witness.is_some());

        let kappa = [0.25, 0.5, 0.9][seed as usize % 3];
        let inst = AlgorithmInstance::build_rpp(OperatorSpec::scaled_identity(-0.5).unwrap(), 4.0, kappa).unwrap();
        let inflated = kappa / (1.05 * inst.kappa_star());
        let r = sample_conical_check(&inst, inflated, &SampleBox::cube(1, 10.0), A7_SAMPLES, DEFAULT_TOL, seed).unwrap();
        kappa_hits += usize::from(r.witness.is_some());
    }
    let n = A7_REPS as usize;
    outcome(
        theta_hits == n && alpha_hits == n && kappa_hits == n,
        format!("witnesses found: theta*0.9 {theta_hits}/{n}, alpha*1.1 {alpha_hits}/{n}, kappa_star*1.05 {kappa_hits}/{n}"),
    )
}

fn a8(traces: &[(String, IterationTrace)]) -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (name, t) in traces {
        match rate_check(t, 0) {
            Ok(r) => {
                pass &= r.pass;
                let cps: Vec<String> = r.checkpoints.iter().map(|(n, s)| format!("{n}:{s:.1e}")).collect();
                notes.push(format!("{name} [{}]{}", cps.join(" "), if r.pass { "" } else { " FAIL" }));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, notes.join("; "))
}

fn main() -> ExitCode {
    let mut traces = Vec::new();
    let a2_trace = AlgorithmInstance::build_rpp(OperatorSpec::scaled_identity(-0.5).unwrap(), 4.0, 0.5)
        .unwrap()
        .run(&v(&[1.0]), StepSequence::constant(1.0), &long_opts(None))
        .unwrap();
    traces.push(("A2 kappa=0.5".to_string(), a2_trace));

    let mut results = vec![("A1", a1()), ("A2", a2())];
    results.push(("A3", a3(&mut traces)));
    results.push(("A4", a4(&mut traces)));
    results.push(("A5", a5(&mut traces)));
    results.push(("A6", a6()));
    results.push(("A7", a7()));
    results.push(("A8", a8(&traces)));

    let mut all = true;
    for (name, o) in &results {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        all &= o.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
