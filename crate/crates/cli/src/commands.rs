//! The five experiment commands. Each turns a [`Scenario`] into a [`Report`].

use nestpol_core::chain::{
    error_first_experiment, min_stable_order, stability_first_experiment, uniform_stability_experiment,
    variable_order_error_bound, variable_order_schedule, variable_order_stability_constant, Anchor, BoundParams,
    Chain, ChainMeasurement, FreeParameters, derivative_error_experiment,
};
use nestpol_core::chebyshev::{lebesgue_constant, single_level_experiment};
use nestpol_core::check::Measurement;
use nestpol_core::fastsum::{
    direct_summation, interleaved_points, relative_error, summation, Kernel, OrderSchedule, SummationConfig,
};
use nestpol_core::functions::{AnalyticFunction, HelmholtzSlice, Pole, Polynomial};
use nestpol_core::geometry::{disc_sup_norm_refined, nesting_sigma, BernsteinDisc, Interval};
use nestpol_core::oscillatory::{
    compute_c_os, min_oscillatory_order, oscillatory_experiment, oscillatory_sup_stability_check,
    DirectionalChain,
};
use nestpol_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scenario::{CommandName, Scenario};
use crate::CliError;

/// CSV rows plus every bound violation found while producing them.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: CommandName,
    pub seed: u64,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub violations: Vec<String>,
}

impl Report {
    fn new(scenario: &Scenario, columns: &[&'static str]) -> Result<Self, CliError> {
        Ok(Self {
            command: scenario.command(),
            seed: scenario.seed()?,
            columns: columns.to_vec(),
            rows: Vec::new(),
            violations: Vec::new(),
        })
    }

    fn check(&mut self, what: &str, m: &Measurement) {
        if !m.holds() {
            self.violations.push(format!(
                "{what}: measured {} exceeds bound {} (floor {})",
                m.measured, m.bound, m.floor
            ));
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("# nestpol v1 seed={} cmd={}\n", self.seed, self.command);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_field(f: &str) -> String {
    if f.contains([',', '"', '\n']) {
        format!("\"{}\"", f.replace('"', "\"\""))
    } else {
        f.to_string()
    }
}

/// Floats with 17 significant digits.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn run(scenario: &Scenario) -> Result<Report, CliError> {
    match scenario.command() {
        CommandName::Geom => geom(scenario),
        CommandName::Converge => converge(scenario),
        CommandName::Chain => chain(scenario),
        CommandName::Osc => osc(scenario),
        CommandName::Fastsum => fastsum(scenario),
    }
}

fn bound_params(s: &Scenario) -> Result<BoundParams, CliError> {
    let free = FreeParameters {
        q: s.get_auto("q")?,
        theta1: s.get_auto("theta1")?,
        q1: s.get_auto("q1")?,
        p: s.get_auto("p")?,
        lebesgue_scale: Some(s.get("lebesgue_scale")?),
        lebesgue_exponent: Some(s.get("lebesgue_exponent")?),
    };
    Ok(BoundParams::new(s.get("rho0")?, s.get("delta0")?, &free)?)
}

fn interval(s: &Scenario) -> Result<Interval, CliError> {
    Ok(Interval::new(s.get("a")?, s.get("b")?)?)
}

fn test_function(s: &Scenario, root: Interval) -> Result<Box<dyn AnalyticFunction>, CliError> {
    match s.raw("fn") {
        "pole" => Ok(Box::new(Pole::new(Complex64::new(s.get("pole_re")?, s.get("pole_im")?)))),
        "constant" => Ok(Box::new(Polynomial::constant(1.0))),
        "helmholtz" => {
            let y0: f64 = s.get("y0")?;
            if root.contains(y0) {
                return Err(CliError::Config(format!("y0 = {y0} lies inside the root interval")));
            }
            Ok(Box::new(HelmholtzSlice::new(s.get("kappa")?, y0, root.a() - y0)))
        }
        other => Err(CliError::Config(format!("unknown function `{other}`"))),
    }
}

fn anchors(s: &Scenario, levels: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Anchor>, CliError> {
    let fixed = match s.raw("anchors") {
        "left" => Anchor::Left,
        "center" => Anchor::Center,
        "right" => Anchor::Right,
        "random" => {
            let all = [Anchor::Left, Anchor::Center, Anchor::Right];
            return Ok((0..levels).map(|_| all[rng.gen_range(0..3)]).collect());
        }
        other => return Err(CliError::Config(format!("unknown anchors `{other}`"))),
    };
    Ok(vec![fixed; levels])
}

fn levels(s: &Scenario) -> Result<usize, CliError> {
    let l: usize = s.get("L")?;
    if l == 0 {
        return Err(CliError::Config("L must be positive".into()));
    }
    Ok(l)
}

fn geom(s: &Scenario) -> Result<Report, CliError> {
    let params = bound_params(s)?;
    let omega: f64 = s.get("omega")?;
    let delta1: f64 = s.get("delta1")?;
    let l = levels(s)?;
    let mut report = Report::new(s, &["quantity", "value", "formula"])?;
    let c_os = compute_c_os(omega, params.delta0, params.sigma * params.rho0)?;
    let alpha_derivative = min_stable_order(params.c_in_split, params.q1, params.q2, Some(delta1))?;
    let alpha_osc = min_oscillatory_order(l, params.q, params.p)?;
    debug_assert_eq!(params.sigma, nesting_sigma(params.rho0, params.delta0)?);
    let rows: Vec<(&str, String, &str)> = vec![
        ("sigma", num(params.sigma), "rho_ab(rho0 delta0) / rho0 with rho_ab = jdag((j(rho0) - 1) / delta0 + 1)"),
        ("q", num(params.q), "sigma^(-1/2) unless given"),
        ("theta1", num(params.theta1), "1/2 unless given"),
        ("theta2", num(params.theta2), "1 - theta1"),
        ("q1", num(params.q1), "sigma^(-theta1/2) unless given"),
        ("q2", num(params.q2), "sigma^(-theta2)"),
        ("p", num(params.p), "sqrt(q) unless given"),
        ("c_in", num(params.c_in), "sup_m 2 (1 + Lambda (1 + m)^lambda) / (sigma - 1) (sigma q)^(-m)"),
        ("c_in_split", num(params.c_in_split), "c_in with sigma^theta1 and q1"),
        ("c_ca", num(params.c_ca), "4 rho0 / (rho0 - 1)^2"),
        ("c_os", num(c_os), "exp(omega / (1 - delta0) (r - 1/r) / 4) with r = sigma rho0"),
        ("alpha0", params.alpha0.to_string(), "min a with (1 + c_in_split q1^a) q2^a <= 1/2"),
        ("alpha0_derivative", alpha_derivative.to_string(), "min a with (q2^a / delta1) (1 + c_in_split q1^a) <= 1/2"),
        ("alpha0_oscillatory", alpha_osc.to_string(), "max(1 ceil(log L / (log p - log q)))"),
        ("c_st_uniform", num(params.uniform_stability_constant(params.alpha0)), "1 + 2 c_in_split (q1 q2)^alpha0"),
        ("c_ap_derivative", num(params.derivative_constant()), "2 c_ca c_in_split"),
    ];
    report.rows = rows
        .into_iter()
        .map(|(k, v, f)| vec![k.to_string(), v, f.to_string()])
        .collect();
    Ok(report)
}

fn converge(s: &Scenario) -> Result<Report, CliError> {
    let iv = interval(s)?;
    let f = test_function(s, iv)?;
    let (rho, rho_hat): (f64, f64) = (s.get("rho")?, s.get("rho_hat")?);
    let (m_min, m_max): (usize, usize) = (s.get("m_min")?, s.get("m_max")?);
    if m_min > m_max {
        return Err(CliError::Config(format!("m_min = {m_min} exceeds m_max = {m_max}")));
    }
    if !(rho_hat >= 1.0 && rho_hat < rho) {
        return Err(CliError::Config(format!("need 1 <= rho_hat < rho, got {rho_hat} and {rho}")));
    }
    let mut report = Report::new(s, &["m", "lebesgue", "measured", "bound"])?;
    for m in m_min..=m_max {
        let meas = single_level_experiment(f.as_ref(), iv, m, rho, rho_hat)?;
        report.check(&format!("m = {m}"), &meas);
        report.rows.push(vec![m.to_string(), num(lebesgue_constant(m)), num(meas.measured), num(meas.bound)]);
    }
    Ok(report)
}

const CHAIN_COLUMNS: [&str; 10] = [
    "mode",
    "L",
    "i",
    "j",
    "alpha",
    "measured_stability",
    "bound_stability",
    "measured_accuracy",
    "bound_accuracy",
    "varorder_bound",
];

fn chain_row(mode: &str, l: usize, i: usize, j: usize, alpha: usize, m: &ChainMeasurement, varorder: Option<f64>) -> Vec<String> {
    vec![
        mode.to_string(),
        l.to_string(),
        i.to_string(),
        j.to_string(),
        alpha.to_string(),
        num(m.stability.measured),
        num(m.stability.bound),
        num(m.accuracy.measured),
        num(m.accuracy.bound),
        varorder.map(num).unwrap_or_default(),
    ]
}

fn chain(s: &Scenario) -> Result<Report, CliError> {
    let params = bound_params(s)?;
    let root = interval(s)?;
    let f = test_function(s, root)?;
    let l = levels(s)?;
    let rho = s.get_auto::<f64>("rho")?.unwrap_or(params.rho0);
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed()?);
    let anchors = anchors(s, l, &mut rng)?;
    let mode = s.raw("mode").to_string();
    let mut report = Report::new(s, &CHAIN_COLUMNS)?;
    let alpha_given: Option<usize> = s.get_auto("alpha")?;

    if mode == "varorder" {
        let alpha = alpha_given.unwrap_or(1);
        let beta: usize = s.get("beta")?;
        if alpha == 0 || beta == 0 {
            return Err(CliError::Config("varorder mode needs alpha, beta >= 1".into()));
        }
        let c_st = variable_order_stability_constant(alpha, beta, params.q, params.c_in)?;
        let norm = disc_sup_norm_refined(&|w| f.eval(w), &BernsteinDisc::new(root, rho)?)?;
        for depth in 1..=l {
            let chain = Chain::dyadic(root, variable_order_schedule(alpha, beta, depth), &anchors[..depth])?;
            let m = error_first_experiment(&chain, &params, f.as_ref(), rho, 0, depth, 0)?;
            let varorder = if depth > 1 {
                let bound = variable_order_error_bound(alpha, beta, depth, params.q, params.c_in, c_st)? * norm;
                report.check(
                    &format!("varorder L = {depth}"),
                    &Measurement::new(m.accuracy.measured, bound, m.accuracy.floor),
                );
                Some(bound)
            } else {
                None
            };
            report.check(&format!("varorder L = {depth} stability"), &m.stability);
            report.check(&format!("varorder L = {depth} accuracy"), &m.accuracy);
            report.rows.push(chain_row(&mode, depth, 0, depth, alpha, &m, varorder));
        }
        return Ok(report);
    }

    let alpha = match (mode.as_str(), alpha_given) {
        (_, Some(a)) => a,
        ("uniform", None) => params.alpha0,
        ("derivative", None) => min_stable_order(params.c_in_split, params.q1, params.q2, Some(0.5))?,
        (_, None) => 8,
    };
    if alpha == 0 {
        return Err(CliError::Config("alpha must be positive".into()));
    }
    let chain = Chain::dyadic(root, vec![alpha; l], &anchors)?;
    for i in 0..=l {
        for j in i..=l {
            let what = format!("{mode} ({i}, {j})");
            if mode == "derivative" {
                let m = derivative_error_experiment(&chain, &params, f.as_ref(), rho, i, j)?;
                report.check(&what, &m);
                report.rows.push(vec![
                    mode.clone(),
                    l.to_string(),
                    i.to_string(),
                    j.to_string(),
                    alpha.to_string(),
                    String::new(),
                    String::new(),
                    num(m.measured),
                    num(m.bound),
                    String::new(),
                ]);
                continue;
            }
            let m = match mode.as_str() {
                "error_first" => error_first_experiment(&chain, &params, f.as_ref(), rho, i, j, i)?,
                "stability_first" => stability_first_experiment(&chain, &params, f.as_ref(), rho, i, j)?,
                "uniform" => uniform_stability_experiment(&chain, &params, f.as_ref(), rho, i, j)?,
                other => return Err(CliError::Config(format!("unknown mode `{other}`"))),
            };
            report.check(&format!("{what} stability"), &m.stability);
            report.check(&format!("{what} accuracy"), &m.accuracy);
            report.rows.push(chain_row(&mode, l, i, j, alpha, &m, None));
        }
    }
    Ok(report)
}

fn directions(s: &Scenario, base: Chain, natural: f64, omega: f64, rng: &mut ChaCha8Rng) -> Result<DirectionalChain, CliError> {
    let l = base.depth();
    let chain = match s.raw("directions") {
        "constant" => DirectionalChain::constant(base, natural, omega)?,
        "zero" => DirectionalChain::constant(base, 0.0, omega)?,
        "approach" => DirectionalChain::approaching(base, natural, omega)?,
        "saturate" => DirectionalChain::saturating(base, natural, omega)?,
        "random" => {
            let increments: Vec<f64> = (0..l).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            DirectionalChain::from_increments(base, natural, &increments, omega)?
        }
        _ => DirectionalChain::new(base, s.get_list("directions")?, omega)?,
    };
    Ok(chain)
}

fn osc(s: &Scenario) -> Result<Report, CliError> {
    let params = bound_params(s)?;
    let root = interval(s)?;
    let f = test_function(s, root)?;
    let l = levels(s)?;
    let omega: f64 = s.get("omega")?;
    let kappa: f64 = s.get("kappa")?;
    let natural = if s.raw("fn") == "helmholtz" {
        kappa * (root.a() - s.get::<f64>("y0")?).signum()
    } else {
        kappa
    };
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed()?);
    let anchors = anchors(s, l, &mut rng)?;
    let alpha0 = min_oscillatory_order(l, params.q, params.p)?;
    let alpha = s.get_auto::<usize>("alpha")?.unwrap_or(alpha0.max(10));
    if alpha == 0 {
        return Err(CliError::Config("alpha must be positive".into()));
    }
    let chain = directions(s, Chain::dyadic(root, vec![alpha; l], &anchors)?, natural, omega, &mut rng)?;
    let mut report = Report::new(
        s,
        &[
            "L",
            "i",
            "j",
            "alpha",
            "measured_stability",
            "bound_stability",
            "measured_accuracy",
            "bound_accuracy",
            "measured_sup",
            "bound_sup",
        ],
    )?;
    let on_line = |x: f64| f.eval(Complex64::new(x, 0.0));
    for i in 0..=l {
        for j in i..=l {
            let (stab, acc) = oscillatory_experiment(&chain, &params, f.as_ref(), i, j)?;
            report.check(&format!("({i}, {j}) stability"), &stab);
            report.check(&format!("({i}, {j}) accuracy"), &acc);
            let (sup_measured, sup_bound) = if i < j && alpha >= alpha0 {
                let sup = oscillatory_sup_stability_check(&chain, &params, &on_line, i, j)?;
                report.check(&format!("({i}, {j}) sup stability"), &sup);
                (num(sup.measured), num(sup.bound))
            } else {
                (String::new(), String::new())
            };
            report.rows.push(vec![
                l.to_string(),
                i.to_string(),
                j.to_string(),
                alpha.to_string(),
                num(stab.measured),
                num(stab.bound),
                num(acc.measured),
                num(acc.bound),
                sup_measured,
                sup_bound,
            ]);
        }
    }
    Ok(report)
}

fn fastsum(s: &Scenario) -> Result<Report, CliError> {
    let kernel = match s.raw("kernel") {
        "cauchy" => Kernel::Cauchy,
        "log" => Kernel::Log,
        "helmholtz" => Kernel::Helmholtz { kappa: s.get("kappa")? },
        other => return Err(CliError::Config(format!("unknown kernel `{other}`"))),
    };
    let (orders, label) = match s.raw("order_mode") {
        "constant" => {
            let m: usize = s.get("m")?;
            (OrderSchedule::Constant(m), m.to_string())
        }
        "variable" => {
            let (alpha, beta): (usize, usize) = (s.get("alpha")?, s.get("beta")?);
            (OrderSchedule::Variable { alpha, beta }, format!("{alpha}+{beta}(D-d)"))
        }
        other => return Err(CliError::Config(format!("unknown order mode `{other}`"))),
    };
    let config = SummationConfig {
        eta: s.get("eta")?,
        leaf_capacity: s.get("leaf")?,
        orders,
    };
    config.validate()?;
    let sizes: Vec<usize> = s.get_list("n")?;
    if sizes.contains(&0) {
        return Err(CliError::Config("n must be positive".into()));
    }
    let mut report = Report::new(s, &["n", "m", "err_rel", "op_count"])?;
    for n in sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(s.seed()?);
        let masses: Vec<Complex64> = match s.raw("masses") {
            "random" => (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect(),
            "uniform" => vec![Complex64::new(1.0 / n as f64, 0.0); n],
            other => return Err(CliError::Config(format!("unknown masses `{other}`"))),
        };
        let (sources, targets) = interleaved_points(n);
        let fast = summation(&sources, &masses, &targets, &kernel, &config)?;
        let (direct, _) = direct_summation(&sources, &masses, &targets, &kernel)?;
        report.rows.push(vec![
            n.to_string(),
            label.clone(),
            num(relative_error(&fast.potentials, &direct)),
            fast.op_count.to_string(),
        ]);
    }
    Ok(report)
}
