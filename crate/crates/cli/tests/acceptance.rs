//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::process::Command;
use std::time::Instant;

use nestpol_core::chain::{
    derivative_error_experiment, error_first_experiment, min_stable_order, stability_first_experiment,
    uniform_stability_experiment, variable_order_error_bound, variable_order_schedule,
    variable_order_stability_constant, Anchor, BoundParams, Chain,
};
use nestpol_core::chebyshev::{lebesgue_constant, single_level_experiment};
use nestpol_core::check::{fit_log_slope, Measurement, REGRESSION_FLOOR_MARGIN};
use nestpol_core::fastsum::{
    build_tree, direct_moments, direct_summation, interleaved_points, relative_error, summation, upward_pass,
    Kernel, OrderSchedule, SummationConfig,
};
use nestpol_core::functions::{AnalyticFunction, HelmholtzSlice, Pole, Polynomial};
use nestpol_core::geometry::{
    bernstein_radius_of, disc_sup_norm_refined, joukowsky_dagger, joukowsky_real, nesting_sigma, sigma_hat,
    BernsteinDisc, Interval,
};
use nestpol_core::oscillatory::{
    min_oscillatory_order, oscillatory_experiment, oscillatory_sup_stability_check, DirectionalChain,
};
use nestpol_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn holds(m: &Measurement, what: impl FnOnce() -> String) -> Result<(), String> {
    ensure(m.holds(), || format!("{}: measured {:e} > bound {:e}", what(), m.measured, m.bound))
}

fn core<T>(r: nestpol_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_anchors(rng: &mut ChaCha8Rng, l: usize) -> Vec<Anchor> {
    (0..l).map(|_| [Anchor::Left, Anchor::Center, Anchor::Right][rng.gen_range(0..3)]).collect()
}

fn pole_family() -> Vec<Pole> {
    [(3.0, 0.0), (2.0, 1.0), (0.0, 1.5)]
        .into_iter()
        .map(|(re, im)| Pole::new(Complex64::new(re, im)))
        .collect()
}

fn geometry_identities() -> Outcome {
    let mut worst = 0.0_f64;
    for k in 0..200 {
        let rho = 10f64.powf(6.0 * k as f64 / 199.0);
        let back = joukowsky_real(core(joukowsky_dagger(rho))?);
        worst = worst.max((back - rho).abs() / rho);
    }
    ensure(worst <= 1e-9, || format!("round trip error {worst:e}"))?;
    for delta in [0.1, 0.25, 0.5, 0.75, 0.9] {
        ensure(core(sigma_hat(1.0, delta))? == 1.0, || format!("sigma_hat(1, {delta}) != 1"))?;
    }
    let far = core(sigma_hat(1e6, 0.5))?;
    ensure((far - 2.0).abs() <= 1e-3, || format!("sigma_hat(1e6, 0.5) = {far}"))?;
    Ok(format!("max relative round trip error {worst:.1e}, sigma_hat(1e6, 1/2) = {far:.6}"))
}

fn nested_containment() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = 0;
    for _ in 0..20 {
        let rho0 = rng.gen_range(1.05..8.0);
        let delta0 = rng.gen_range(0.05..0.95);
        let c = rng.gen_range(-5.0..5.0);
        let d = c + rng.gen_range(0.1..4.0);
        let parent = core(Interval::new(c, d))?;
        let len = (d - c) * delta0 * rng.gen_range(0.05..=1.0);
        let a = c + rng.gen_range(0.0..=1.0) * ((d - c) - len);
        let child = core(Interval::new(a, (a + len).min(d)))?;
        let sigma = core(nesting_sigma(rho0, delta0))?;
        for rho in [rho0, rho0 * rng.gen_range(1.0..3.0)] {
            let outer = core(BernsteinDisc::new(parent, rho))?;
            let inner = core(BernsteinDisc::new(child, sigma * rho))?;
            failures += core(inner.boundary(512))?.into_iter().filter(|&w| !outer.contains(w)).count();
        }
    }
    ensure(failures == 0, || format!("{failures} boundary samples outside the parent disc"))?;
    Ok("20 configurations, 2 radii each, 512 samples, no failures".into())
}

fn single_level_bound() -> Outcome {
    let mut worst_slope = 0.0_f64;
    let mut cases = 0;
    for centre in [Complex64::new(3.0, 0.0), Complex64::new(2.0, 1.0)] {
        let pole = Pole::new(centre);
        for (a, b) in [(-1.0, 1.0), (0.0, 1.0)] {
            let iv = core(Interval::new(a, b))?;
            let rho = 0.98 * bernstein_radius_of(&iv, centre);
            for rho_hat in [1.0, 1.2] {
                let mut points = Vec::new();
                for m in 2..=25 {
                    let meas = core(single_level_experiment(&pole, iv, m, rho, rho_hat))?;
                    holds(&meas, || format!("pole {centre}, [{a}, {b}], rho_hat {rho_hat}, m = {m}"))?;
                    if meas.measured > REGRESSION_FLOOR_MARGIN * meas.floor {
                        points.push((m as f64, meas.measured));
                    }
                }
                let slope = fit_log_slope(&points).ok_or("too few points above the rounding floor")?;
                let expected = (rho_hat / rho).ln();
                let rel = (slope - expected).abs() / expected.abs();
                ensure(rel <= 0.15, || {
                    format!("pole {centre}, [{a}, {b}], rho_hat {rho_hat}: slope {slope} vs {expected}")
                })?;
                worst_slope = worst_slope.max(rel);
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} cases, m = 2..25, worst slope deviation {:.1}%", 100.0 * worst_slope))
}

fn bernstein_inequality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tightest = 0.0_f64;
    for trial in 0..100 {
        let m: i32 = rng.gen_range(1..=15);
        let coeffs: Vec<f64> = (0..=m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let poly = Polynomial::real(&coeffs);
        let eval = |w| poly.eval(w);
        let rho_hat = [1.1, 1.5, 2.0][trial % 3];
        let on_disc = core(disc_sup_norm_refined(&eval, &core(BernsteinDisc::new(Interval::reference(), rho_hat))?))?;
        let on_interval = core(disc_sup_norm_refined(&eval, &core(BernsteinDisc::new(Interval::reference(), 1.0))?))?;
        let ratio = on_disc / (rho_hat.powi(m) * on_interval);
        ensure(ratio <= 1.0 + 1e-8, || format!("trial {trial}: degree {m}, rho_hat {rho_hat}, ratio {ratio}"))?;
        tightest = tightest.max(ratio);
    }
    Ok(format!("100 trials, largest disc/(rho^m interval) ratio {tightest:.4}"))
}

fn lebesgue_constants() -> Outcome {
    for m in 0..=60 {
        let lambda = lebesgue_constant(m);
        ensure(lambda <= 1.0 + m as f64, || format!("Lambda_{m} = {lambda}"))?;
    }
    let one = lebesgue_constant(1);
    ensure((one - 2f64.sqrt()).abs() <= 1e-6, || format!("Lambda_1 = {one}"))?;
    Ok(format!("Lambda_m <= 1 + m for m <= 60, Lambda_1 = {one:.12}"))
}

fn iterated_chains() -> Outcome {
    let params = core(BoundParams::derive(2.0, 0.5))?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let poles = pole_family();
    let mut checks = 0;
    for l in 1..=8 {
        let anchors = random_anchors(&mut rng, l);
        for alpha in params.alpha0..=params.alpha0 + 4 {
            let chain = core(Chain::dyadic(Interval::reference(), vec![alpha; l], &anchors))?;
            let pole = &poles[(l + alpha) % poles.len()];
            for (i, j) in [(0, l), (0, l / 2), (l / 2, l), (l - 1, l)] {
                let tag = || format!("L = {l}, alpha = {alpha}, ({i}, {j}), {}", pole.name());
                let m = core(error_first_experiment(&chain, &params, pole, 2.0, i, j, i))?;
                holds(&m.stability, || format!("approximation first stability {}", tag()))?;
                holds(&m.accuracy, || format!("approximation first accuracy {}", tag()))?;
                let m = core(stability_first_experiment(&chain, &params, pole, 2.0, i, j))?;
                holds(&m.stability, || format!("stability first stability {}", tag()))?;
                holds(&m.accuracy, || format!("stability first accuracy {}", tag()))?;
                let m = core(uniform_stability_experiment(&chain, &params, pole, 2.0, i, j))?;
                holds(&m.stability, || format!("uniform stability {}", tag()))?;
                holds(&m.accuracy, || format!("uniform accuracy {}", tag()))?;
                checks += 6;
            }
        }
    }

    let pole = Pole::new(Complex64::new(3.0, 0.0));
    let norm = core(disc_sup_norm_refined(&|w| pole.eval(w), &core(BernsteinDisc::new(Interval::reference(), 2.0))?))?;
    let mut slopes = Vec::new();
    for alpha in 1..=2 {
        for beta in 1..=2 {
            let c_st = core(variable_order_stability_constant(alpha, beta, params.q, params.c_in))?;
            let mut points = Vec::new();
            for l in 1..=8 {
                let chain = core(Chain::dyadic(
                    Interval::reference(),
                    variable_order_schedule(alpha, beta, l),
                    &vec![Anchor::Center; l],
                ))?;
                let m = core(error_first_experiment(&chain, &params, &pole, 2.0, 0, l, 0))?;
                let tag = || format!("variable order ({alpha}, {beta}), L = {l}");
                holds(&m.stability, || format!("{} stability", tag()))?;
                holds(&m.accuracy, || format!("{} accuracy", tag()))?;
                if l >= 2 {
                    let bound = core(variable_order_error_bound(alpha, beta, l, params.q, params.c_in, c_st))? * norm;
                    holds(&Measurement::new(m.accuracy.measured, bound, m.accuracy.floor), || {
                        format!("{} schedule bound", tag())
                    })?;
                }
                checks += 3;
                if m.accuracy.above_floor() {
                    points.push((l as f64, m.accuracy.measured));
                }
            }
            let slope = fit_log_slope(&points).ok_or("too few variable-order points above the floor")?;
            let required = 0.8 * params.q.ln() * alpha.min(beta) as f64;
            ensure(slope <= required, || {
                format!("variable order ({alpha}, {beta}): slope {slope} above {required}")
            })?;
            slopes.push(format!("{slope:.2}"));
        }
    }
    Ok(format!(
        "{checks} measurements within bounds, variable-order slopes [{}] vs required <= {:.3} min(alpha, beta)",
        slopes.join(", "),
        0.8 * params.q.ln()
    ))
}

fn derivatives() -> Outcome {
    let params = core(BoundParams::derive(2.0, 0.5))?;
    let alpha0 = core(min_stable_order(params.c_in_split, params.q1, params.q2, Some(0.5)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for l in 1..=6 {
        let anchors = random_anchors(&mut rng, l);
        for alpha in [alpha0, alpha0 + 3] {
            let chain = core(Chain::dyadic(Interval::reference(), vec![alpha; l], &anchors))?;
            for pole in pole_family() {
                for j in 0..=l {
                    for i in 0..=j {
                        let m = core(derivative_error_experiment(&chain, &params, &pole, 2.0, i, j))?;
                        holds(&m, || format!("L = {l}, alpha = {alpha}, ({i}, {j}), {}", pole.name()))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    let low = core(Chain::dyadic(Interval::reference(), vec![alpha0 - 1; 2], &[Anchor::Center; 2]))?;
    ensure(
        derivative_error_experiment(&low, &params, &pole_family()[0], 2.0, 0, 2).is_err(),
        || "orders below the threshold were accepted".into(),
    )?;
    Ok(format!("alpha0 = {alpha0}, {checks} derivative measurements within bounds"))
}

fn oscillatory() -> Outcome {
    let params = core(BoundParams::derive(2.0, 0.5))?;
    let slice = HelmholtzSlice::new(40.0, -1.0, 1.0);
    let on_line = |x: f64| slice.eval(Complex64::new(x, 0.0));
    let root = core(Interval::new(0.0, 1.0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut smoothed, mut sup, mut vacuous) = (0, 0, 0);
    for l in 1..=5 {
        let alpha = core(min_oscillatory_order(l, params.q, params.p))?;
        for omega in [1.0, 2.0] {
            let anchors = random_anchors(&mut rng, l);
            let increments: Vec<f64> = (0..l).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let chains = [
                core(DirectionalChain::approaching(core(Chain::dyadic(root, vec![alpha; l], &anchors))?, 40.0, omega))?,
                core(DirectionalChain::from_increments(
                    core(Chain::dyadic(root, vec![alpha; l], &anchors))?,
                    40.0,
                    &increments,
                    omega,
                ))?,
            ];
            for chain in &chains {
                for j in 0..=l {
                    for i in 0..=j {
                        let tag = || format!("L = {l}, omega = {omega}, ({i}, {j})");
                        let (s, a) = core(oscillatory_experiment(chain, &params, &slice, i, j))?;
                        holds(&s, || format!("smoothed stability {}", tag()))?;
                        holds(&a, || format!("smoothed accuracy {}", tag()))?;
                        smoothed += 2;
                        if i < j {
                            let m = core(oscillatory_sup_stability_check(chain, &params, &on_line, i, j))?;
                            holds(&m, || format!("sup stability {}", tag()))?;
                            sup += 1;
                            vacuous += usize::from(!m.bound.is_finite());
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "{smoothed} smoothed and {sup} sup-norm measurements within bounds ({vacuous} sup-norm bounds overflow to inf)"
    ))
}

fn fast_summation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut masses = |n: usize| -> Vec<Complex64> {
        (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect()
    };
    let config = SummationConfig { eta: 1.0, leaf_capacity: 16, orders: OrderSchedule::Constant(8) };

    let n = 2048;
    let (s, t) = interleaved_points(n);
    let m = masses(n);
    let fast = core(summation(&s, &m, &t, &Kernel::Cauchy, &config))?;
    let (direct, _) = core(direct_summation(&s, &m, &t, &Kernel::Cauchy))?;
    let err = relative_error(&fast.potentials, &direct);
    ensure(err <= 1e-6, || format!("relative error {err:e} at n = 2048"))?;

    let mut ratios = Vec::new();
    let mut previous: Option<u64> = None;
    for k in 10..=14 {
        let n = 1usize << k;
        let (s, t) = interleaved_points(n);
        let ops = core(summation(&s, &masses(n), &t, &Kernel::Cauchy, &config))?.op_count;
        if let Some(p) = previous {
            let ratio = ops as f64 / p as f64;
            ensure(ratio <= 2.5, || format!("op ratio {ratio} at n = {n}"))?;
            ratios.push(format!("{ratio:.2}"));
        }
        previous = Some(ops);
    }

    let (s, _) = interleaved_points(4096);
    let m = masses(4096);
    let tree = core(build_tree(&s, core(Interval::new(0.0, 1.0))?, 16, OrderSchedule::Constant(10)))?;
    let (moments, _) = core(upward_pass(&tree, &m, &[0.0]))?;
    let mut transfer = 0.0_f64;
    for (idx, node_moments) in moments[0].iter().enumerate() {
        let direct = direct_moments(&tree, &m, idx, 0.0);
        let scale = direct.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for (a, b) in node_moments.iter().zip(&direct) {
            transfer = transfer.max((a - b).norm() / scale);
        }
    }
    ensure(transfer <= 1e-8, || format!("transfer mismatch {transfer:e}"))?;
    Ok(format!(
        "error {err:.2e}, op ratios [{}], transfer mismatch {transfer:.1e}",
        ratios.join(", ")
    ))
}

fn determinism() -> Outcome {
    let scenarios: [&[&str]; 8] = [
        &["geom"],
        &["converge", "--m_max", "12"],
        &["chain", "--L", "3"],
        &["chain", "--mode", "varorder", "--L", "4", "--anchors", "random"],
        &["osc", "--L", "3", "--directions", "random"],
        &["osc", "--L", "2", "--fn", "helmholtz", "--y0", "-1"],
        &["fastsum", "--n", "512,1024"],
        &["fastsum", "--n", "512", "--kernel", "helmholtz", "--order_mode", "variable"],
    ];
    for args in scenarios {
        let run = || {
            Command::new(env!("CARGO_BIN_EXE_nestpol"))
                .args(args)
                .output()
                .map_err(|e| e.to_string())
        };
        let (first, second) = (run()?, run()?);
        ensure(first.status.success(), || {
            format!("{args:?} exited with {}: {}", first.status, String::from_utf8_lossy(&first.stderr))
        })?;
        ensure(!first.stdout.is_empty() && first.stdout == second.stdout, || {
            format!("{args:?} produced different output")
        })?;
    }
    Ok(format!("{} scenarios byte-identical across two runs", scenarios.len()))
}

fn main() {
    let criteria: [(&str, Criterion); 10] = [
        ("geometry identities", geometry_identities),
        ("nested-disc containment", nested_containment),
        ("single-level bound and decay rate", single_level_bound),
        ("Bernstein inequality", bernstein_inequality),
        ("Lebesgue constants", lebesgue_constants),
        ("iterated chains", iterated_chains),
        ("derivatives", derivatives),
        ("oscillatory chains", oscillatory),
        ("fast summation", fast_summation),
        ("CLI determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1} s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1} s)", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
