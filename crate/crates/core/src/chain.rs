//! Iterated interpolation along nested interval chains.
//!
//! A [`Chain`] holds intervals `[a_0, b_0] ⊇ [a_1, b_1] ⊇ ... ⊇ [a_L, b_L]`
//! and orders `m_1..m_L`. The iterated operator `I_{j,i}` interpolates on
//! level `i + 1`, re-interpolates the result on level `i + 2`, and so on up
//! to level `j`; `I_{i,i}` is the identity.
//!
//! Two families of bounds control `I_{j,i}`. The "approximation first"
//! bounds ([`error_first_bounds`]) combine single-step errors of `f` with
//! stability of the remaining steps; they suit variable-order schedules.
//! The "stability first" bounds ([`stability_first_bounds`]) estimate the
//! error of re-interpolating the previous interpolant on a slightly inflated
//! disc and lead to order thresholds ([`min_stable_order`]) and derivative
//! estimates ([`derivative_error_experiment`]).
//!
//! Every bound is relative to a disc norm of `f`. Experiments evaluate norms
//! of polynomials by boundary sampling and norms of `f` with the refined
//! boundary maximum, so the measured side never over-estimates a norm the
//! bound depends on.

use num_complex::Complex64;

use crate::check::{rounding_floor, Measurement};
use crate::chebyshev::{interpolate, Interpolant};
use crate::error::{Error, Result};
use crate::functions::{ensure_holomorphic_on, AnalyticFunction};
use crate::geometry::{
    disc_sup_norm_refined, nesting_sigma, BernsteinDisc, Interval, DEFAULT_BOUNDARY_SAMPLES,
};

/// Number of consecutive decreasing terms that confirm the supremum in
/// [`compute_c_in`].
const C_IN_CONFIRMATION: usize = 50;

/// Default minimum scan range for [`compute_c_in`].
pub const C_IN_SCAN: usize = 200;

/// Grid size for derivative error measurements.
pub const DERIVATIVE_GRID: usize = 1000;

/// Relative tolerance on the nesting and shrinking checks.
const GEOMETRY_SLACK: f64 = 1e-12;

/// Where a dyadic child sits inside its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Left,
    Center,
    Right,
}

/// Nested intervals with per-level interpolation orders.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    levels: Vec<Interval>,
    orders: Vec<usize>,
    delta0: f64,
    delta1: Option<f64>,
}

impl Chain {
    /// `levels[0]` is the root; `orders[l - 1]` is the order on level `l`.
    /// With `delta1` present the chain must also shrink no faster than
    /// `delta1` per level.
    pub fn new(levels: Vec<Interval>, orders: Vec<usize>, delta0: f64, delta1: Option<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::domain("a chain needs at least the root interval"));
        }
        if orders.len() + 1 != levels.len() {
            return Err(Error::domain(format!(
                "{} levels need {} orders, got {}",
                levels.len(),
                levels.len() - 1,
                orders.len()
            )));
        }
        if orders.contains(&0) {
            return Err(Error::domain("interpolation orders must be positive"));
        }
        if !(delta0 > 0.0 && delta0 < 1.0) {
            return Err(Error::domain(format!("delta0 must lie in (0, 1), got {delta0}")));
        }
        if let Some(d1) = delta1 {
            if !(d1 > 0.0 && d1 <= 1.0) {
                return Err(Error::domain(format!("delta1 must lie in (0, 1], got {d1}")));
            }
        }
        for l in 1..levels.len() {
            let (parent, child) = (levels[l - 1], levels[l]);
            let slack = GEOMETRY_SLACK * parent.length();
            if child.a() < parent.a() - slack || child.b() > parent.b() + slack {
                return Err(Error::domain(format!("level {l} is not nested in level {}", l - 1)));
            }
            if child.length() > delta0 * parent.length() * (1.0 + GEOMETRY_SLACK) {
                return Err(Error::domain(format!(
                    "level {l} shrinks by {} > delta0 = {delta0}",
                    child.length() / parent.length()
                )));
            }
            if let Some(d1) = delta1 {
                if child.length() < d1 * parent.length() * (1.0 - GEOMETRY_SLACK) {
                    return Err(Error::domain(format!(
                        "level {l} shrinks by {} < delta1 = {d1}",
                        child.length() / parent.length()
                    )));
                }
            }
        }
        Ok(Self {
            levels,
            orders,
            delta0,
            delta1,
        })
    }

    /// Halving chain: level `l` has length `2^-l` times the root length and
    /// sits inside level `l - 1` as given by `anchors[l - 1]`. Both shrinking
    /// parameters are `1/2`.
    pub fn dyadic(base: Interval, orders: Vec<usize>, anchors: &[Anchor]) -> Result<Self> {
        if anchors.len() != orders.len() {
            return Err(Error::domain(format!(
                "{} orders need {} anchors, got {}",
                orders.len(),
                orders.len(),
                anchors.len()
            )));
        }
        let mut levels = vec![base];
        for anchor in anchors {
            let parent = *levels.last().unwrap();
            let half = 0.5 * parent.length();
            let a = match anchor {
                Anchor::Left => parent.a(),
                Anchor::Center => parent.a() + 0.5 * half,
                Anchor::Right => parent.b() - half,
            };
            levels.push(Interval::new(a, a + half)?);
        }
        Self::new(levels, orders, 0.5, Some(0.5))
    }

    /// Same geometry, different orders.
    pub fn with_orders(&self, orders: Vec<usize>) -> Result<Self> {
        Self::new(self.levels.clone(), orders, self.delta0, self.delta1)
    }

    /// Number of interpolation steps `L`.
    pub fn depth(&self) -> usize {
        self.orders.len()
    }

    pub fn level(&self, l: usize) -> Interval {
        self.levels[l]
    }

    pub fn levels(&self) -> &[Interval] {
        &self.levels
    }

    /// Order `m_l` of level `l` in `1..=L`.
    pub fn order(&self, l: usize) -> usize {
        self.orders[l - 1]
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    /// `min { m_l : l in [1:L] }`.
    pub fn min_order(&self) -> usize {
        self.orders.iter().copied().min().unwrap_or(0)
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    pub fn delta1(&self) -> Option<f64> {
        self.delta1
    }

    pub(crate) fn check_window(&self, i: usize, j: usize) -> Result<()> {
        if i > j {
            return Err(Error::index(format!("need i <= j, got i = {i}, j = {j}")));
        }
        if j > self.depth() {
            return Err(Error::index(format!("level {j} exceeds chain depth {}", self.depth())));
        }
        Ok(())
    }

    pub(crate) fn disc(&self, l: usize, rho: f64) -> Result<BernsteinDisc> {
        BernsteinDisc::new(self.levels[l], rho)
    }
}

/// Result of `I_{j,i}`: the identity for `i = j`, a polynomial otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum Iterated {
    Identity,
    Polynomial(Interpolant),
}

impl Iterated {
    /// Evaluates `I_{j,i}[f]` at `w`; `f` is needed for the identity case.
    pub fn evaluate_with<F>(&self, f: &F, w: Complex64) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + ?Sized,
    {
        match self {
            Iterated::Identity => f(w),
            Iterated::Polynomial(p) => p.evaluate(w),
        }
    }

    pub fn interpolant(&self) -> Option<&Interpolant> {
        match self {
            Iterated::Identity => None,
            Iterated::Polynomial(p) => Some(p),
        }
    }
}

/// Re-interpolates a polynomial on a new interval by sampling it at the new
/// Chebyshev points.
pub fn reinterpolate(p: &Interpolant, interval: Interval, m: usize) -> Result<Interpolant> {
    interpolate(&|w| p.evaluate(w), interval, m)
}

/// `I_{j,i}[f]`, built by resampling level by level.
pub fn iterated_interpolate<F>(chain: &Chain, f: &F, i: usize, j: usize) -> Result<Iterated>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    chain.check_window(i, j)?;
    if i == j {
        return Ok(Iterated::Identity);
    }
    let mut p = interpolate(f, chain.level(i + 1), chain.order(i + 1))?;
    for l in i + 2..=j {
        p = reinterpolate(&p, chain.level(l), chain.order(l))?;
    }
    Ok(Iterated::Polynomial(p))
}

/// Supremum over `m in [1, m_max]` of
/// `2 (1 + Lambda (1 + m)^lambda) / (sigma - 1) (sigma q)^-m`, with the scan
/// extended until 50 consecutive terms have decreased.
pub fn compute_c_in(sigma: f64, q: f64, lebesgue_scale: f64, lebesgue_exponent: f64, m_max: usize) -> Result<f64> {
    if !(sigma > 1.0) {
        return Err(Error::domain(format!("C_in needs sigma > 1, got {sigma}")));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain(format!("C_in needs q in (0, 1], got {q}")));
    }
    let base = sigma * q;
    if !(base > 1.0) {
        return Err(Error::domain(format!("C_in needs sigma q > 1, got {base}")));
    }
    let term = |m: usize| {
        let lebesgue = lebesgue_scale * (1.0 + m as f64).powf(lebesgue_exponent);
        2.0 * (1.0 + lebesgue) / (sigma - 1.0) * (-(m as f64) * base.ln()).exp()
    };
    let mut best = term(1);
    let mut previous = best;
    let mut decreasing = 0;
    let mut m = 1;
    while m < m_max.max(1) || decreasing < C_IN_CONFIRMATION {
        m += 1;
        let t = term(m);
        best = best.max(t);
        decreasing = if t < previous { decreasing + 1 } else { 0 };
        previous = t;
        if m > 100_000_000 {
            return Err(Error::domain("C_in scan did not terminate; sigma q is too close to 1"));
        }
    }
    Ok(best)
}

/// `C_ca = 4 rho0 / (rho0 - 1)^2`.
pub fn compute_c_ca(rho0: f64) -> Result<f64> {
    if !(rho0 > 1.0) {
        return Err(Error::domain(format!("C_ca needs rho0 > 1, got {rho0}")));
    }
    Ok(4.0 * rho0 / ((rho0 - 1.0) * (rho0 - 1.0)))
}

/// Free parameters of the bound constants; `None` selects the default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FreeParameters {
    /// Default `sigma^{-1/2}`.
    pub q: Option<f64>,
    /// Default `1/2`; `theta2 = 1 - theta1`.
    pub theta1: Option<f64>,
    /// Default `sigma^{-theta1 / 2}`.
    pub q1: Option<f64>,
    /// Default `sqrt(q)`.
    pub p: Option<f64>,
    /// `Lambda` in `Lambda_m <= Lambda (1 + m)^lambda`; default 1.
    pub lebesgue_scale: Option<f64>,
    /// `lambda`; default 1.
    pub lebesgue_exponent: Option<f64>,
}

/// All constants of the chain and oscillatory bounds for a given
/// `rho0` and shrinking factor `delta0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub rho0: f64,
    pub delta0: f64,
    pub sigma: f64,
    pub q: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub q1: f64,
    pub q2: f64,
    pub p: f64,
    pub lebesgue_scale: f64,
    pub lebesgue_exponent: f64,
    /// `C_in` for `(sigma, q)`: single steps and the approximation-first bounds.
    pub c_in: f64,
    /// `C_in` for `(sigma^theta1, q1)`: the stability-first bounds.
    pub c_in_split: f64,
    pub c_ca: f64,
    /// Smallest order with `(1 + C_in q1^a) q2^a <= 1/2`.
    pub alpha0: usize,
}

impl BoundParams {
    /// All free parameters at their defaults.
    pub fn derive(rho0: f64, delta0: f64) -> Result<Self> {
        Self::new(rho0, delta0, &FreeParameters::default())
    }

    pub fn new(rho0: f64, delta0: f64, free: &FreeParameters) -> Result<Self> {
        let sigma = nesting_sigma(rho0, delta0)?;
        let q = free.q.unwrap_or(sigma.powf(-0.5));
        if !(q > 1.0 / sigma && q <= 1.0) {
            return Err(Error::domain(format!("q must lie in (1/sigma, 1] = ({}, 1], got {q}", 1.0 / sigma)));
        }
        let theta1 = free.theta1.unwrap_or(0.5);
        if !(theta1 > 0.0 && theta1 < 1.0) {
            return Err(Error::domain(format!("theta1 must lie in (0, 1), got {theta1}")));
        }
        let theta2 = 1.0 - theta1;
        let q1 = free.q1.unwrap_or(sigma.powf(-0.5 * theta1));
        let q1_min = sigma.powf(-theta1);
        if !(q1 > q1_min && q1 < 1.0) {
            return Err(Error::domain(format!("q1 must lie in ({q1_min}, 1), got {q1}")));
        }
        let q2 = sigma.powf(-theta2);
        let p = free.p.unwrap_or(q.sqrt());
        if !(p > q && p <= 1.0) {
            return Err(Error::domain(format!("p must lie in (q, 1] = ({q}, 1], got {p}")));
        }
        let lebesgue_scale = free.lebesgue_scale.unwrap_or(1.0);
        let lebesgue_exponent = free.lebesgue_exponent.unwrap_or(1.0);
        if !(lebesgue_scale > 0.0 && lebesgue_exponent > 0.0) {
            return Err(Error::domain("Lebesgue growth constants must be positive"));
        }
        let c_in = compute_c_in(sigma, q, lebesgue_scale, lebesgue_exponent, C_IN_SCAN)?;
        let c_in_split = compute_c_in(sigma.powf(theta1), q1, lebesgue_scale, lebesgue_exponent, C_IN_SCAN)?;
        let c_ca = compute_c_ca(rho0)?;
        let alpha0 = min_stable_order(c_in_split, q1, q2, None)?;
        Ok(Self {
            rho0,
            delta0,
            sigma,
            q,
            theta1,
            theta2,
            q1,
            q2,
            p,
            lebesgue_scale,
            lebesgue_exponent,
            c_in,
            c_in_split,
            c_ca,
            alpha0,
        })
    }

    /// `C_ap = 2 C_in` of the uniform stability estimate.
    pub fn stability_accuracy_constant(&self) -> f64 {
        2.0 * self.c_in_split
    }

    /// `C_st = 1 + C_ap q1^alpha q2^alpha`.
    pub fn uniform_stability_constant(&self, alpha: usize) -> f64 {
        1.0 + self.stability_accuracy_constant() * (self.q1 * self.q2).powi(alpha as i32)
    }

    /// `C_ap = 2 C_ca C_in` of the derivative estimate.
    pub fn derivative_constant(&self) -> f64 {
        2.0 * self.c_ca * self.c_in_split
    }

    fn check_chain(&self, chain: &Chain) -> Result<()> {
        if chain.delta0() > self.delta0 * (1.0 + GEOMETRY_SLACK) {
            return Err(Error::hypothesis(format!(
                "chain shrinks with delta0 = {} but the constants assume {}",
                chain.delta0(),
                self.delta0
            )));
        }
        Ok(())
    }

    fn check_rho(&self, rho: f64) -> Result<()> {
        if rho < self.rho0 {
            return Err(Error::hypothesis(format!("rho = {rho} is below rho0 = {}", self.rho0)));
        }
        Ok(())
    }
}

/// Constants of one interpolation step: `||f - I f||_rho <= C_in q^m tau^-m ||f||_{sigma tau rho}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConstants {
    pub sigma: f64,
    pub q: f64,
    pub c_in: f64,
}

impl StepConstants {
    pub fn new(sigma: f64, q: f64, lebesgue_scale: f64, lebesgue_exponent: f64) -> Result<Self> {
        let c_in = compute_c_in(sigma, q, lebesgue_scale, lebesgue_exponent, C_IN_SCAN)?;
        Ok(Self { sigma, q, c_in })
    }

    /// Constants for an interval that only shrinks over two levels: the
    /// single step runs with `sigma^{1/2}` and `q^{1/2}`.
    pub fn halved(&self) -> Result<Self> {
        // Recompute with the default Lebesgue growth.
        Self::new(self.sigma.sqrt(), self.q.sqrt(), 1.0, 1.0)
    }
}

fn sampled_error<F, G>(f: &F, p: &G, disc: &BernsteinDisc, order_sum: usize, condition: &dyn Fn(Complex64) -> f64) -> Result<(f64, f64)>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
    G: Fn(Complex64) -> Complex64 + ?Sized,
{
    let mut measured = 0.0_f64;
    let mut scale = 0.0_f64;
    for w in disc.boundary(DEFAULT_BOUNDARY_SAMPLES)? {
        let (fv, pv) = (f(w), p(w));
        let err = (fv - pv).norm();
        if !err.is_finite() {
            return Err(Error::Evaluation {
                at: format!("{w}"),
                reason: "non-finite error sample".into(),
            });
        }
        measured = measured.max(err);
        scale = scale.max(fv.norm() + condition(w));
    }
    Ok((measured, rounding_floor(order_sum, scale)))
}

/// Measured disc error of one interpolation step against
/// `C_in q^m tau^-m ||f||_{[a,b], sigma tau rho}`.
pub fn single_step_error(
    f: &dyn AnalyticFunction,
    interval: Interval,
    m: usize,
    rho: f64,
    tau: f64,
    step: &StepConstants,
) -> Result<Measurement> {
    if !(tau >= 1.0) {
        return Err(Error::domain(format!("tau must be >= 1, got {tau}")));
    }
    let outer = BernsteinDisc::new(interval, step.sigma * tau * rho)?;
    ensure_holomorphic_on(f, &outer)?;
    let eval = |w| f.eval(w);
    let p = interpolate(&eval, interval, m)?;
    let (measured, floor) = sampled_error(
        &eval,
        &|w| p.evaluate(w),
        &BernsteinDisc::new(interval, rho)?,
        m,
        &|w| p.evaluation_condition(w),
    )?;
    let bound = step.c_in * (step.q / tau).powi(m as i32) * disc_sup_norm_refined(&eval, &outer)?;
    Ok(Measurement::new(measured, bound, floor))
}

/// Right-hand sides of the approximation-first estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorFirstBounds {
    /// `prod_{l=i+1}^j (1 + C_in q^{m_l})`.
    pub stability: f64,
    /// `(prod_{l=k+1}^j (1 + C_in q^{m_l})) C_in q^{m_k (k - r)}` for `k = i+1..=j`.
    pub terms: Vec<f64>,
}

impl ErrorFirstBounds {
    pub fn accuracy(&self) -> f64 {
        self.terms.iter().sum()
    }

    pub fn largest_term(&self) -> f64 {
        self.terms.iter().copied().fold(0.0, f64::max)
    }
}

pub fn error_first_bounds(chain: &Chain, params: &BoundParams, i: usize, j: usize, r: usize) -> Result<ErrorFirstBounds> {
    chain.check_window(i, j)?;
    if r > i {
        return Err(Error::index(format!("need r <= i, got r = {r}, i = {i}")));
    }
    let factor = |l: usize| 1.0 + params.c_in * params.q.powi(chain.order(l) as i32);
    let stability = (i + 1..=j).map(factor).product();
    let terms = (i + 1..=j)
        .map(|k| {
            let tail: f64 = (k + 1..=j).map(factor).product();
            let exponent = (chain.order(k) * (k - r)) as f64;
            tail * params.c_in * params.q.powf(exponent)
        })
        .collect();
    Ok(ErrorFirstBounds { stability, terms })
}

/// Measured stability and accuracy of `I_{j,i}` with their bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainMeasurement {
    pub stability: Measurement,
    pub accuracy: Measurement,
}

impl ChainMeasurement {
    pub fn holds(&self) -> bool {
        self.stability.holds() && self.accuracy.holds()
    }
}

struct ChainSampling {
    norm_iterated: f64,
    error: f64,
    floor: f64,
}

/// Samples `I_{j,i}[f]` and `f - I_{j,i}[f]` on the level-`j` disc of
/// radius `rho_error` and the norm of `I_{j,i}[f]` on radius `rho_norm`.
fn sample_iterated(
    chain: &Chain,
    f: &dyn AnalyticFunction,
    iterated: &Iterated,
    i: usize,
    j: usize,
    rho_norm: f64,
    rho_error: f64,
) -> Result<ChainSampling> {
    let eval = |w| f.eval(w);
    let order_sum: usize = (i + 1..=j).map(|l| chain.order(l)).sum();
    let condition = |w: Complex64| match iterated.interpolant() {
        Some(p) => p.evaluation_condition(w),
        None => 0.0,
    };
    let value = |w: Complex64| iterated.evaluate_with(&eval, w);
    let (error, floor_error) = sampled_error(&eval, &value, &chain.disc(j, rho_error)?, order_sum, &condition)?;
    let mut norm_iterated = 0.0_f64;
    let mut scale = 0.0_f64;
    for w in chain.disc(j, rho_norm)?.boundary(DEFAULT_BOUNDARY_SAMPLES)? {
        norm_iterated = norm_iterated.max(value(w).norm());
        scale = scale.max(condition(w));
    }
    let floor = floor_error.max(rounding_floor(order_sum, scale));
    Ok(ChainSampling {
        norm_iterated,
        error,
        floor,
    })
}

fn f_norm(f: &dyn AnalyticFunction, chain: &Chain, l: usize, rho: f64) -> Result<f64> {
    disc_sup_norm_refined(&|w| f.eval(w), &chain.disc(l, rho)?)
}

/// Measures both approximation-first estimates for `f` holomorphic on the
/// root disc of radius `rho >= rho0`.
pub fn error_first_experiment(
    chain: &Chain,
    params: &BoundParams,
    f: &dyn AnalyticFunction,
    rho: f64,
    i: usize,
    j: usize,
    r: usize,
) -> Result<ChainMeasurement> {
    params.check_chain(chain)?;
    params.check_rho(rho)?;
    ensure_holomorphic_on(f, &chain.disc(0, rho)?)?;
    let bounds = error_first_bounds(chain, params, i, j, r)?;
    let iterated = iterated_interpolate(chain, &|w| f.eval(w), i, j)?;
    let s = sample_iterated(chain, f, &iterated, i, j, rho, rho)?;
    Ok(ChainMeasurement {
        stability: Measurement::new(s.norm_iterated, bounds.stability * f_norm(f, chain, i, rho)?, s.floor),
        accuracy: Measurement::new(s.error, bounds.accuracy() * f_norm(f, chain, r, rho)?, s.floor),
    })
}

/// `(prod_{l=i+1}^j (1 + C_in q1^{m_l}), C_in sum_k q2^{m_k (k-i)} q1^{m_k} prod_{l=i+1}^{k-1} (1 + C_in q1^{m_l}))`.
pub fn stability_first_bounds(chain: &Chain, params: &BoundParams, i: usize, j: usize) -> Result<(f64, f64)> {
    chain.check_window(i, j)?;
    let c = params.c_in_split;
    let factor = |l: usize| 1.0 + c * params.q1.powi(chain.order(l) as i32);
    let stability = (i + 1..=j).map(factor).product();
    let accuracy = c * (i + 1..=j)
        .map(|k| {
            let m = chain.order(k);
            let head: f64 = (i + 1..k).map(factor).product();
            params.q2.powf((m * (k - i)) as f64) * params.q1.powi(m as i32) * head
        })
        .sum::<f64>();
    Ok((stability, accuracy))
}

/// Measures the stability-first estimates. Stability is measured on the
/// inflated disc of radius `sigma^{theta2 (j - i)} rho`.
pub fn stability_first_experiment(
    chain: &Chain,
    params: &BoundParams,
    f: &dyn AnalyticFunction,
    rho: f64,
    i: usize,
    j: usize,
) -> Result<ChainMeasurement> {
    params.check_chain(chain)?;
    params.check_rho(rho)?;
    ensure_holomorphic_on(f, &chain.disc(0, rho)?)?;
    let (stability, accuracy) = stability_first_bounds(chain, params, i, j)?;
    let inflated = params.sigma.powf(params.theta2 * (j - i) as f64) * rho;
    let iterated = iterated_interpolate(chain, &|w| f.eval(w), i, j)?;
    let s = sample_iterated(chain, f, &iterated, i, j, inflated, rho)?;
    let norm_i = f_norm(f, chain, i, rho)?;
    Ok(ChainMeasurement {
        stability: Measurement::new(s.norm_iterated, stability * norm_i, s.floor),
        accuracy: Measurement::new(s.error, accuracy * norm_i, s.floor),
    })
}

/// Uniform stability for chains whose minimal order is at least `alpha0`:
/// `||I_{j,i} f|| <= C_st ||f||` and `||f - I_{j,i} f|| <= C_ap q1^a q2^a ||f||`.
pub fn uniform_stability_experiment(
    chain: &Chain,
    params: &BoundParams,
    f: &dyn AnalyticFunction,
    rho: f64,
    i: usize,
    j: usize,
) -> Result<ChainMeasurement> {
    params.check_chain(chain)?;
    params.check_rho(rho)?;
    let alpha = chain.min_order();
    if alpha < params.alpha0 {
        return Err(Error::hypothesis(format!(
            "minimal order {alpha} is below alpha0 = {}",
            params.alpha0
        )));
    }
    ensure_holomorphic_on(f, &chain.disc(0, rho)?)?;
    chain.check_window(i, j)?;
    let iterated = iterated_interpolate(chain, &|w| f.eval(w), i, j)?;
    let s = sample_iterated(chain, f, &iterated, i, j, rho, rho)?;
    let norm_i = f_norm(f, chain, i, rho)?;
    let c_ap = params.stability_accuracy_constant();
    Ok(ChainMeasurement {
        stability: Measurement::new(s.norm_iterated, params.uniform_stability_constant(alpha) * norm_i, s.floor),
        accuracy: Measurement::new(s.error, c_ap * (params.q1 * params.q2).powi(alpha as i32) * norm_i, s.floor),
    })
}

/// Orders `m_l = alpha + beta (L - l)` for `l = 1..=L`.
pub fn variable_order_schedule(alpha: usize, beta: usize, levels: usize) -> Vec<usize> {
    (1..=levels).map(|l| alpha + beta * (levels - l)).collect()
}

/// `exp(C_in q^alpha / (1 - q^beta))`, the uniform stability constant of
/// the variable-order schedule.
pub fn variable_order_stability_constant(alpha: usize, beta: usize, q: f64, c_in: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("variable-order stability needs q in (0, 1), got {q}")));
    }
    Ok((c_in * q.powi(alpha as i32) / (1.0 - q.powi(beta as i32))).exp())
}

/// `2 C_st C_in q^{min(alpha, beta) L} / (1 - q^{beta floor(L/2)})`.
pub fn variable_order_error_bound(alpha: usize, beta: usize, levels: usize, q: f64, c_in: f64, c_st: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("variable-order bound needs q in (0, 1), got {q}")));
    }
    if levels < 2 {
        return Err(Error::domain(format!("variable-order bound needs L > 1, got {levels}")));
    }
    let rate = q.powf((alpha.min(beta) * levels) as f64);
    Ok(2.0 * c_st * c_in * rate / (1.0 - q.powf((beta * (levels / 2)) as f64)))
}

/// Smallest `alpha >= 1` with `(1 + C_in q1^alpha) q2^alpha <= 1/2`, or with
/// `q2^alpha / delta1` in place of `q2^alpha` when `delta1` is given.
pub fn min_stable_order(c_in: f64, q1: f64, q2: f64, delta1: Option<f64>) -> Result<usize> {
    if !(q1 > 0.0 && q1 < 1.0 && q2 > 0.0 && q2 < 1.0) {
        return Err(Error::domain(format!("need q1, q2 in (0, 1), got q1 = {q1}, q2 = {q2}")));
    }
    let scale = match delta1 {
        Some(d) if d > 0.0 && d <= 1.0 => 1.0 / d,
        Some(d) => return Err(Error::domain(format!("delta1 must lie in (0, 1], got {d}"))),
        None => 1.0,
    };
    (1..=1_000_000)
        .find(|&a| scale * q2.powi(a) * (1.0 + c_in * q1.powi(a)) <= 0.5)
        .map(|a| a as usize)
        .ok_or_else(|| Error::domain("no stable order below 10^6"))
}

/// Measured maximum of `|f' - (I_{j,i} f)'|` on a 1000-point grid of
/// `[a_j, b_j]` against `C_ap / (b_i - a_i) q1^alpha ||f||_{[a_i,b_i], rho}`.
pub fn derivative_error_experiment(
    chain: &Chain,
    params: &BoundParams,
    f: &dyn AnalyticFunction,
    rho: f64,
    i: usize,
    j: usize,
) -> Result<Measurement> {
    params.check_chain(chain)?;
    params.check_rho(rho)?;
    chain.check_window(i, j)?;
    let delta1 = chain
        .delta1()
        .ok_or_else(|| Error::hypothesis("derivative estimates need a slow-shrinking chain (delta1)"))?;
    let alpha0 = min_stable_order(params.c_in_split, params.q1, params.q2, Some(delta1))?;
    let alpha = chain.min_order();
    if alpha < alpha0 {
        return Err(Error::hypothesis(format!(
            "minimal order {alpha} is below alpha0 = {alpha0} for delta1 = {delta1}"
        )));
    }
    ensure_holomorphic_on(f, &chain.disc(0, rho)?)?;
    let bound = params.derivative_constant() / chain.level(i).length()
        * params.q1.powi(alpha as i32)
        * f_norm(f, chain, i, rho)?;
    let iterated = iterated_interpolate(chain, &|w| f.eval(w), i, j)?;
    let Some(p) = iterated.interpolant() else {
        return Ok(Measurement::new(0.0, bound, 0.0));
    };
    let dp = p.derivative();
    let target = chain.level(j);
    let mut measured = 0.0_f64;
    for x in target.grid(DERIVATIVE_GRID) {
        let w = Complex64::new(x, 0.0);
        let exact = f
            .derivative(w)
            .ok_or_else(|| Error::domain(format!("{} has no analytic derivative", f.name())))?;
        measured = measured.max((exact - dp.evaluate(w)).norm());
    }
    // Differentiation amplifies sample perturbations by at most m^2 / half-length.
    let m = p.order() as f64;
    let amplification = m * m / target.half_length();
    let sample_scale = p.samples().iter().map(|s| s.norm()).fold(0.0, f64::max);
    let order_sum: usize = (i + 1..=j).map(|l| chain.order(l)).sum();
    let floor = rounding_floor(order_sum, sample_scale * amplification * (1.0 + m));
    Ok(Measurement::new(measured, bound, floor))
}
