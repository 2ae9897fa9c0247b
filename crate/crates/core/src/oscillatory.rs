//! Plane-wave modulated interpolation.
//!
//! `E_c` multiplies by `exp(i c x)`. The oscillatory interpolation operator
//! `E_c ∘ I ∘ E_{-c}` interpolates the demodulated function, so an integrand
//! like `exp(i kappa x) g(x)` with smooth `g` is approximated as well as `g`.
//! A [`DirectionalChain`] attaches a direction `c_l` to every level of a
//! [`Chain`]; neighbouring directions must be close relative to the level
//! length, which bounds the growth of `E_{c_j - c_i}` on Bernstein discs by
//! [`compute_c_os`].

use num_complex::Complex64;

use crate::chain::{BoundParams, Chain};
use crate::chebyshev::{interpolate, lebesgue_constant, Interpolant};
use crate::check::{rounding_floor, Measurement};
use crate::error::{Error, Result};
use crate::functions::{ensure_holomorphic_on, AnalyticFunction};
use crate::geometry::{disc_sup_norm_refined, BernsteinDisc, DEFAULT_BOUNDARY_SAMPLES};

/// Grid size of the sup-norm stability check.
pub const SUP_GRID: usize = 2000;

const BUDGET_SLACK: f64 = 1e-12;

/// `exp(i c w)`.
pub fn plane_wave(c: f64, w: Complex64) -> Complex64 {
    (Complex64::i() * c * w).exp()
}

/// `w -> exp(i c w) f(w)`.
pub fn modulate<F>(c: f64, f: F) -> impl Fn(Complex64) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    move |w| plane_wave(c, w) * f(w)
}

/// `exp(i c x) p(x)` with a polynomial `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulatedInterpolant {
    direction: f64,
    inner: Interpolant,
}

impl ModulatedInterpolant {
    pub fn direction(&self) -> f64 {
        self.direction
    }

    /// The interpolant of the demodulated function.
    pub fn inner(&self) -> &Interpolant {
        &self.inner
    }

    pub fn evaluate(&self, w: Complex64) -> Complex64 {
        plane_wave(self.direction, w) * self.inner.evaluate(w)
    }

    /// `|exp(i c w)| sum |l_nu(w)| |p_nu|`.
    pub fn evaluation_condition(&self, w: Complex64) -> f64 {
        plane_wave(self.direction, w).norm() * self.inner.evaluation_condition(w)
    }
}

/// `E_c ∘ I_{[a,b],m} ∘ E_{-c}`.
pub fn oscillatory_interpolate<F>(f: &F, interval: crate::geometry::Interval, m: usize, c: f64) -> Result<ModulatedInterpolant>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let inner = interpolate(&|w| plane_wave(-c, w) * f(w), interval, m)?;
    Ok(ModulatedInterpolant { direction: c, inner })
}

/// `exp(omega / (1 - delta0) (rho - 1/rho) / 4)`.
pub fn compute_c_os(omega: f64, delta0: f64, rho: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain(format!("omega must be positive, got {omega}")));
    }
    if !(delta0 > 0.0 && delta0 < 1.0) {
        return Err(Error::domain(format!("delta0 must lie in (0, 1), got {delta0}")));
    }
    if !(rho >= 1.0) {
        return Err(Error::domain(format!("rho must be >= 1, got {rho}")));
    }
    Ok((omega / (1.0 - delta0) * (rho - 1.0 / rho) / 4.0).exp())
}

/// A chain with one direction per level and a neighbour budget `omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalChain {
    base: Chain,
    directions: Vec<f64>,
    omega: f64,
}

impl DirectionalChain {
    /// Checks `|c_l - c_{l-1}| (b_l - a_l) <= omega` for every level and the
    /// implied long-range bound `|c_j - c_i| (b_j - a_j) <= omega / (1 - delta0)`
    /// for every pair `i <= j`.
    pub fn new(base: Chain, directions: Vec<f64>, omega: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::domain(format!("omega must be positive, got {omega}")));
        }
        if directions.len() != base.depth() + 1 {
            return Err(Error::domain(format!(
                "{} levels need {} directions, got {}",
                base.depth() + 1,
                base.depth() + 1,
                directions.len()
            )));
        }
        if directions.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("directions must be finite"));
        }
        for l in 1..directions.len() {
            let spread = (directions[l] - directions[l - 1]).abs() * base.level(l).length();
            if spread > omega * (1.0 + BUDGET_SLACK) {
                return Err(Error::domain(format!(
                    "directions of levels {} and {l} differ by {spread} > omega = {omega} per level length",
                    l - 1
                )));
            }
        }
        let long_range = omega / (1.0 - base.delta0());
        for j in 0..directions.len() {
            for i in 0..=j {
                let spread = (directions[j] - directions[i]).abs() * base.level(j).length();
                if spread > long_range * (1.0 + BUDGET_SLACK) {
                    return Err(Error::Audit(format!(
                        "long-range direction bound fails for i = {i}, j = {j}: {spread} > {long_range}"
                    )));
                }
            }
        }
        Ok(Self { base, directions, omega })
    }

    /// The same direction on every level.
    pub fn constant(base: Chain, c: f64, omega: f64) -> Result<Self> {
        let directions = vec![c; base.depth() + 1];
        Self::new(base, directions, omega)
    }

    /// `c_l = c_{l-1} + t_l omega / (b_l - a_l)` with `t_l` in `[-1, 1]`.
    pub fn from_increments(base: Chain, c0: f64, increments: &[f64], omega: f64) -> Result<Self> {
        if increments.len() != base.depth() {
            return Err(Error::domain(format!(
                "{} levels need {} increments, got {}",
                base.depth() + 1,
                base.depth(),
                increments.len()
            )));
        }
        if increments.iter().any(|t| !(t.abs() <= 1.0)) {
            return Err(Error::domain("direction increments must lie in [-1, 1]"));
        }
        let mut directions = vec![c0];
        for (l, t) in increments.iter().enumerate() {
            let previous = directions[l];
            directions.push(previous + t * omega / base.level(l + 1).length());
        }
        Self::new(base, directions, omega)
    }

    /// Every level uses the whole neighbour budget in the positive direction.
    pub fn saturating(base: Chain, c0: f64, omega: f64) -> Result<Self> {
        let increments = vec![1.0; base.depth()];
        Self::from_increments(base, c0, &increments, omega)
    }

    /// Starts at 0 on the root and moves towards `target` as fast as the
    /// budget allows.
    pub fn approaching(base: Chain, target: f64, omega: f64) -> Result<Self> {
        let mut directions = vec![0.0];
        for l in 1..=base.depth() {
            let step = omega / base.level(l).length();
            let previous = directions[l - 1];
            directions.push(previous + (target - previous).clamp(-step, step));
        }
        Self::new(base, directions, omega)
    }

    pub fn base(&self) -> &Chain {
        &self.base
    }

    pub fn directions(&self) -> &[f64] {
        &self.directions
    }

    pub fn direction(&self, l: usize) -> f64 {
        self.directions[l]
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn depth(&self) -> usize {
        self.base.depth()
    }

    fn disc(&self, l: usize, rho: f64) -> Result<BernsteinDisc> {
        BernsteinDisc::new(self.base.level(l), rho)
    }
}

/// Largest `|exp(i (c_j - c_i) w)|` over `n` boundary samples of the level-`j` disc.
pub fn bounded_oscillation_check(chain: &DirectionalChain, rho: f64, i: usize, j: usize, n: usize) -> Result<f64> {
    check_window(chain, i, j)?;
    let shift = chain.direction(j) - chain.direction(i);
    let boundary = chain.disc(j, rho)?.boundary(n)?;
    Ok(boundary.into_iter().map(|w| plane_wave(shift, w).norm()).fold(0.0, f64::max))
}

fn check_window(chain: &DirectionalChain, i: usize, j: usize) -> Result<()> {
    if i > j {
        return Err(Error::index(format!("need i <= j, got i = {i}, j = {j}")));
    }
    if j > chain.depth() {
        return Err(Error::index(format!("level {j} exceeds chain depth {}", chain.depth())));
    }
    Ok(())
}

/// Result of the oscillatory `I_{j,i}`.
#[derive(Debug, Clone, PartialEq)]
pub enum OscillatoryIterated {
    Identity,
    Modulated(ModulatedInterpolant),
}

impl OscillatoryIterated {
    pub fn evaluate_with<F>(&self, f: &F, w: Complex64) -> Complex64
    where
        F: Fn(Complex64) -> Complex64 + ?Sized,
    {
        match self {
            OscillatoryIterated::Identity => f(w),
            OscillatoryIterated::Modulated(p) => p.evaluate(w),
        }
    }

    pub fn interpolant(&self) -> Option<&ModulatedInterpolant> {
        match self {
            OscillatoryIterated::Identity => None,
            OscillatoryIterated::Modulated(p) => Some(p),
        }
    }

    fn condition(&self, w: Complex64) -> f64 {
        self.interpolant().map_or(0.0, |p| p.evaluation_condition(w))
    }
}

/// `I_{[a_j,b_j],m_j,c_j} ∘ ... ∘ I_{[a_{i+1},b_{i+1}],m_{i+1},c_{i+1}}`.
pub fn oscillatory_chain_interpolate<F>(chain: &DirectionalChain, f: &F, i: usize, j: usize) -> Result<OscillatoryIterated>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    check_window(chain, i, j)?;
    if i == j {
        return Ok(OscillatoryIterated::Identity);
    }
    let base = chain.base();
    let mut p = oscillatory_interpolate(f, base.level(i + 1), base.order(i + 1), chain.direction(i + 1))?;
    for l in i + 2..=j {
        let previous = p;
        p = oscillatory_interpolate(&|w| previous.evaluate(w), base.level(l), base.order(l), chain.direction(l))?;
    }
    Ok(OscillatoryIterated::Modulated(p))
}

/// `(prod_{l=i+1}^j (1 + C_os^2 C_in q^{m_l}),
///   sum_{k=i+1}^j prod_{l=i+1}^{k-1} (1 + C_os^2 C_in q^{m_l}) C_os^2 C_in q^{m_k})`.
pub fn oscillatory_bounds(chain: &DirectionalChain, params: &BoundParams, c_os: f64, i: usize, j: usize) -> Result<(f64, f64)> {
    check_window(chain, i, j)?;
    if !(c_os >= 1.0) {
        return Err(Error::domain(format!("C_os must be >= 1, got {c_os}")));
    }
    let step = |l: usize| c_os * c_os * params.c_in * params.q.powi(chain.base().order(l) as i32);
    let stability = (i + 1..=j).map(|l| 1.0 + step(l)).product();
    let accuracy = (i + 1..=j)
        .map(|k| (i + 1..k).map(|l| 1.0 + step(l)).product::<f64>() * step(k))
        .sum();
    Ok((stability, accuracy))
}

/// `C_os` used by the chain bounds: the bounded-oscillation constant on radius `sigma rho0`.
pub fn chain_c_os(chain: &DirectionalChain, params: &BoundParams) -> Result<f64> {
    compute_c_os(chain.omega(), params.delta0, params.sigma * params.rho0)
}

/// Measures the smoothed stability `||E_{-c_i} I_{j,i} f||` and accuracy
/// `||E_{-c_i} (f - I_{j,i} f)||` on the level-`j` disc of radius `rho0`
/// against [`oscillatory_bounds`] times `||E_{-c_i} f||_{[a_i,b_i], rho0}`.
pub fn oscillatory_experiment(
    chain: &DirectionalChain,
    params: &BoundParams,
    f: &dyn AnalyticFunction,
    i: usize,
    j: usize,
) -> Result<(Measurement, Measurement)> {
    let rho = params.rho0;
    if chain.base().delta0() > params.delta0 * (1.0 + BUDGET_SLACK) {
        return Err(Error::hypothesis(format!(
            "chain shrinks with delta0 = {} but the constants assume {}",
            chain.base().delta0(),
            params.delta0
        )));
    }
    ensure_holomorphic_on(f, &chain.disc(0, rho)?)?;
    let c_os = chain_c_os(chain, params)?;
    let (stability, accuracy) = oscillatory_bounds(chain, params, c_os, i, j)?;
    let eval = |w| f.eval(w);
    let iterated = oscillatory_chain_interpolate(chain, &eval, i, j)?;
    let ci = chain.direction(i);
    let order_sum: usize = (i + 1..=j).map(|l| chain.base().order(l)).sum();

    let (mut norm, mut error, mut scale) = (0.0_f64, 0.0_f64, 0.0_f64);
    for w in chain.disc(j, rho)?.boundary(DEFAULT_BOUNDARY_SAMPLES)? {
        let damp = plane_wave(-ci, w);
        let (fv, pv) = (eval(w), iterated.evaluate_with(&eval, w));
        norm = norm.max((damp * pv).norm());
        error = error.max((damp * (fv - pv)).norm());
        scale = scale.max(damp.norm() * (fv.norm() + iterated.condition(w)));
    }
    if !(norm.is_finite() && error.is_finite()) {
        return Err(Error::Evaluation {
            at: format!("level {j} disc"),
            reason: "non-finite oscillatory samples".into(),
        });
    }
    let floor = rounding_floor(order_sum, scale);
    let smoothed = disc_sup_norm_refined(&|w| plane_wave(-ci, w) * eval(w), &chain.disc(i, rho)?)?;
    Ok((
        Measurement::new(norm, stability * smoothed, floor),
        Measurement::new(error, accuracy * smoothed, floor),
    ))
}

/// `max(1, ceil(log L / (log p - log q)))`.
pub fn min_oscillatory_order(levels: usize, q: f64, p: f64) -> Result<usize> {
    if levels == 0 {
        return Err(Error::domain("L must be positive"));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("q must lie in (0, 1), got {q}")));
    }
    if !(p > q && p <= 1.0) {
        return Err(Error::domain(format!("p must lie in (q, 1], got p = {p}, q = {q}")));
    }
    let alpha = ((levels as f64).ln() / (p.ln() - q.ln())).ceil();
    Ok((alpha as usize).max(1))
}

/// Uniform bounds for `alpha >= min_oscillatory_order`: stability
/// `exp(C_os^2 C_in)` and accuracy `C_in C_os^2 exp(C_os^2 C_in) p^alpha`.
pub fn oscillatory_uniform_bounds(params: &BoundParams, c_os: f64, alpha: usize) -> (f64, f64) {
    let growth = c_os * c_os * params.c_in;
    let stability = growth.exp();
    (stability, growth * stability * params.p.powi(alpha as i32))
}

/// `1 + C_os C_in exp(C_os^2 C_in) p^alpha`. Overflows to infinity for large
/// `C_os^2 C_in`, in which case the estimate is vacuous.
pub fn oscillatory_stability_constant(params: &BoundParams, c_os: f64, alpha: usize) -> f64 {
    let growth = c_os * c_os * params.c_in;
    1.0 + c_os * params.c_in * growth.exp() * params.p.powi(alpha as i32)
}

/// Grid sup of `I_{j,i} f` on `[a_j, b_j]` against
/// `C_st Lambda_{m_{i+1}} sup |f|` on `[a_i, b_i]`, for merely continuous `f`
/// and constant orders `alpha >= min_oscillatory_order(L, q, p)`.
pub fn oscillatory_sup_stability_check(
    chain: &DirectionalChain,
    params: &BoundParams,
    f: &dyn Fn(f64) -> Complex64,
    i: usize,
    j: usize,
) -> Result<Measurement> {
    check_window(chain, i, j)?;
    if i == j {
        return Err(Error::index("sup-norm stability needs i < j"));
    }
    let orders = chain.base().orders();
    let alpha = orders[0];
    if orders.iter().any(|&m| m != alpha) {
        return Err(Error::hypothesis("sup-norm stability needs constant orders"));
    }
    let alpha0 = min_oscillatory_order(chain.depth(), params.q, params.p)?;
    if alpha < alpha0 {
        return Err(Error::hypothesis(format!("order {alpha} is below alpha0 = {alpha0}")));
    }
    let c_os = chain_c_os(chain, params)?;
    let c_st = oscillatory_stability_constant(params, c_os, alpha);
    let on_line = |w: Complex64| f(w.re);
    let iterated = oscillatory_chain_interpolate(chain, &on_line, i, j)?;
    let source = chain.base().level(i);
    let f_sup = source.grid(SUP_GRID).into_iter().map(|x| f(x).norm()).fold(0.0, f64::max);
    let (mut measured, mut scale) = (0.0_f64, 0.0_f64);
    for x in chain.base().level(j).grid(SUP_GRID) {
        let w = Complex64::new(x, 0.0);
        measured = measured.max(iterated.evaluate_with(&on_line, w).norm());
        scale = scale.max(iterated.condition(w));
    }
    let order_sum: usize = orders[i..j].iter().sum();
    let bound = c_st * lebesgue_constant(chain.base().order(i + 1)) * f_sup;
    Ok(Measurement::new(measured, bound, rounding_floor(order_sum, scale)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{iterated_interpolate, Anchor};
    use crate::functions::{HelmholtzSlice, Pole};
    use crate::geometry::Interval;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dyadic(base: Interval, orders: Vec<usize>) -> Chain {
        let anchors = vec![Anchor::Center; orders.len()];
        Chain::dyadic(base, orders, &anchors).unwrap()
    }

    #[test]
    fn modulation_examples() {
        let f = |w: Complex64| w * w + 1.0;
        let w = c(0.3, -0.4);
        assert_eq!(modulate(0.0, f)(w), f(w));
        let there = modulate(2.5, f);
        let back = modulate(-2.5, there);
        assert!((back(w) - f(w)).norm() < 1e-14);
        for x in [-1.0, 0.2, 3.0] {
            let x = c(x, 0.0);
            assert!((modulate(7.0, f)(x).norm() - f(x).norm()).abs() < 1e-13);
        }
    }

    #[test]
    fn oscillatory_interpolation_examples() {
        let iv = Interval::reference();
        let wave = |w| plane_wave(3.0, w);
        for m in [0, 1, 5] {
            let p = oscillatory_interpolate(&wave, iv, m, 3.0).unwrap();
            for x in iv.grid(50) {
                assert!((p.evaluate(c(x, 0.0)) - wave(c(x, 0.0))).norm() < 1e-14);
            }
        }
        let pole = |w: Complex64| (w - 3.0).inv();
        let plain = interpolate(&pole, iv, 8).unwrap();
        let zero = oscillatory_interpolate(&pole, iv, 8, 0.0).unwrap();
        assert_eq!(plain.samples(), zero.inner().samples());

        let kappa = 40.0;
        let f = |w: Complex64| plane_wave(kappa, w) / (w - 3.0);
        let osc = oscillatory_interpolate(&f, iv, 10, kappa).unwrap();
        let plain = interpolate(&pole, iv, 10).unwrap();
        for x in iv.grid(100) {
            let w = c(x, 0.0);
            let e1 = (f(w) - osc.evaluate(w)).norm();
            let e2 = (pole(w) - plain.evaluate(w)).norm();
            assert!((e1 - e2).abs() < 1e-13);
        }
    }

    #[test]
    fn c_os_examples() {
        assert_eq!(compute_c_os(3.0, 0.5, 1.0).unwrap(), 1.0);
        assert!((compute_c_os(1.0, 0.5, 2.0).unwrap() - 0.75_f64.exp()).abs() < 1e-15);
        assert!((compute_c_os(1.0, 0.5, 2.0).unwrap() - 2.117000016612675).abs() < 1e-12);
        let once = compute_c_os(1.0, 0.5, 1.7).unwrap();
        let twice = compute_c_os(2.0, 0.5, 1.7).unwrap();
        assert!((twice - once * once).abs() < 1e-13);
        assert!(compute_c_os(0.0, 0.5, 2.0).is_err());
        assert!(compute_c_os(1.0, 1.0, 2.0).is_err());
        assert!(compute_c_os(1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn budget_validation() {
        let base = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![4; 3]);
        // Level 1 has length 1/2: a jump of 5 costs 2.5 > 2.
        assert!(DirectionalChain::new(base.clone(), vec![0.0, 5.0, 5.0, 5.0], 2.0).is_err());
        assert!(DirectionalChain::new(base.clone(), vec![0.0, 4.0, 4.0, 4.0], 2.0).is_ok());
        assert!(DirectionalChain::new(base.clone(), vec![0.0; 3], 2.0).is_err());
        let s = DirectionalChain::saturating(base.clone(), 0.0, 2.0).unwrap();
        assert_eq!(s.directions(), &[0.0, 4.0, 12.0, 28.0]);
        let a = DirectionalChain::approaching(base, 10.0, 2.0).unwrap();
        assert_eq!(a.directions(), &[0.0, 4.0, 10.0, 10.0]);
    }

    #[test]
    fn oscillation_check_examples() {
        let base = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![4; 4]);
        let chain = DirectionalChain::saturating(base, 0.0, 2.0).unwrap();
        assert_eq!(bounded_oscillation_check(&chain, 2.0, 2, 2, 256).unwrap(), 1.0);
        assert_eq!(bounded_oscillation_check(&chain, 1.0, 0, 4, 256).unwrap(), 1.0);
        let c_os = compute_c_os(2.0, 0.5, 2.0).unwrap();
        for j in 0..=4 {
            for i in 0..=j {
                assert!(bounded_oscillation_check(&chain, 2.0, i, j, 1024).unwrap() <= c_os);
            }
        }
        assert!(matches!(bounded_oscillation_check(&chain, 2.0, 3, 1, 64), Err(Error::Index(_))));
    }

    #[test]
    fn zero_directions_match_plain_chain() {
        let base = dyadic(Interval::reference(), vec![6, 5, 7]);
        let chain = DirectionalChain::constant(base.clone(), 0.0, 1.0).unwrap();
        let f = |w: Complex64| (w - 3.0).inv();
        let osc = oscillatory_chain_interpolate(&chain, &f, 0, 3).unwrap();
        let plain = iterated_interpolate(&base, &f, 0, 3).unwrap();
        for x in base.level(3).grid(50) {
            let w = c(x, 0.0);
            assert!((osc.evaluate_with(&f, w) - plain.evaluate_with(&f, w)).norm() < 1e-15);
        }
    }

    #[test]
    fn modulated_polynomials_pass_through() {
        let base = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![5, 4, 6]);
        let chain = DirectionalChain::constant(base.clone(), 30.0, 1.0).unwrap();
        let f = |w: Complex64| plane_wave(30.0, w) * (w * w * w - 2.0 * w + 0.5);
        let p = oscillatory_chain_interpolate(&chain, &f, 0, 3).unwrap();
        for x in base.level(3).grid(50) {
            let w = c(x, 0.0);
            assert!((p.evaluate_with(&f, w) - f(w)).norm() < 1e-12);
        }
    }

    #[test]
    fn composition_matches_manual_steps() {
        let base = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![8, 8, 8]);
        let chain = DirectionalChain::approaching(base.clone(), 40.0, 2.0).unwrap();
        let slice = HelmholtzSlice::new(40.0, -1.0, 1.0);
        let f = |w| slice.eval(w);
        let full = oscillatory_chain_interpolate(&chain, &f, 0, 3).unwrap();
        let mut step: Box<dyn Fn(Complex64) -> Complex64> = Box::new(f);
        for l in 1..=3 {
            let c_l = chain.direction(l);
            let level = base.level(l);
            let values: Vec<Complex64> = crate::chebyshev::ChebyshevRule::new(8)
                .points()
                .iter()
                .map(|&t| c(level.map(t), 0.0))
                .map(|x| plane_wave(-c_l, x) * step(x))
                .collect();
            let inner = Interpolant::from_samples(base.level(l), values).unwrap();
            step = Box::new(move |w| plane_wave(c_l, w) * inner.evaluate(w));
        }
        for x in base.level(3).grid(50) {
            let w = c(x, 0.0);
            assert!((full.evaluate_with(&f, w) - step(w)).norm() < 1e-12);
        }
    }

    #[test]
    fn bound_examples() {
        let params = BoundParams::derive(2.0, 0.5).unwrap();
        let base = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![10; 4]);
        let chain = DirectionalChain::constant(base.clone(), 40.0, 2.0).unwrap();
        assert_eq!(oscillatory_bounds(&chain, &params, 3.0, 2, 2).unwrap(), (1.0, 0.0));
        let (stab, acc) = oscillatory_bounds(&chain, &params, 1.0, 0, 4).unwrap();
        let plain = crate::chain::error_first_bounds(&base, &params, 0, 4, 0).unwrap();
        assert!((stab - plain.stability).abs() < 1e-12 * stab);
        let step = params.c_in * params.q.powi(10);
        let expected: f64 = (1..=4).map(|k| (1.0 + step).powi(k - 1) * step).sum();
        assert!((acc - expected).abs() < 1e-12 * acc);
    }

    #[test]
    fn helmholtz_family_respects_the_bounds() {
        let params = BoundParams::derive(2.0, 0.5).unwrap();
        let base = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![10; 4]);
        let slice = HelmholtzSlice::new(40.0, -1.0, 1.0);
        let chain = DirectionalChain::approaching(base, 40.0, 2.0).unwrap();
        for j in 0..=4 {
            for i in 0..=j {
                let (s, a) = oscillatory_experiment(&chain, &params, &slice, i, j).unwrap();
                assert!(s.holds() && a.holds(), "i = {i}, j = {j}: {s:?} {a:?}");
            }
        }
    }

    #[test]
    fn min_order_examples() {
        assert_eq!(min_oscillatory_order(1, 0.5, 0.9).unwrap(), 1);
        assert_eq!(min_oscillatory_order(16, 0.25, 0.5).unwrap(), 4);
        for levels in [2, 5, 17, 100] {
            let a = min_oscillatory_order(levels, 0.874, 0.935).unwrap();
            assert!(levels as f64 * (0.874_f64 / 0.935).powi(a as i32) <= 1.0 + 1e-12);
            assert!(levels as f64 * 0.874_f64.powi(a as i32) <= 1.0 + 1e-12);
        }
        assert!(min_oscillatory_order(4, 0.5, 0.5).is_err());
    }

    #[test]
    fn sup_stability_examples() {
        let params = BoundParams::derive(2.0, 0.5).unwrap();
        let alpha = min_oscillatory_order(4, params.q, params.p).unwrap();
        let base = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![alpha; 4]);
        let zero = DirectionalChain::constant(base.clone(), 0.0, 0.5).unwrap();
        let one = |_: f64| c(1.0, 0.0);
        let m = oscillatory_sup_stability_check(&zero, &params, &one, 0, 4).unwrap();
        assert!((m.measured - 1.0).abs() < 1e-13 && m.holds());

        let saw = |x: f64| {
            let t = 12.0 * x;
            c(2.0 * (t - (t + 0.5).floor()).abs() * if (t as i64) % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        };
        let chain = DirectionalChain::approaching(base.clone(), 40.0, 2.0).unwrap();
        for i in 0..4 {
            assert!(oscillatory_sup_stability_check(&chain, &params, &saw, i, 4).unwrap().holds());
        }
        let low = dyadic(Interval::new(0.0, 1.0).unwrap(), vec![1; 4]);
        let low = DirectionalChain::constant(low, 0.0, 1.0).unwrap();
        if min_oscillatory_order(4, params.q, params.p).unwrap() > 1 {
            assert!(matches!(
                oscillatory_sup_stability_check(&low, &params, &one, 0, 4),
                Err(Error::Hypothesis(_))
            ));
        }
    }

    #[test]
    fn imaginary_extent_is_bounded() {
        for (a, b, rho) in [(0.0, 1.0, 2.0), (-3.0, 5.0, 1.3), (2.0, 2.5, 4.0)] {
            let disc = BernsteinDisc::new(Interval::new(a, b).unwrap(), rho).unwrap();
            let extent = disc.boundary(2048).unwrap().into_iter().map(|w| w.im.abs()).fold(0.0, f64::max);
            assert!(extent <= (b - a) * (rho - 1.0 / rho) / 4.0 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn pole_is_refused_inside_root_disc() {
        let params = BoundParams::derive(2.0, 0.5).unwrap();
        let base = dyadic(Interval::reference(), vec![6; 2]);
        let chain = DirectionalChain::constant(base, 0.0, 1.0).unwrap();
        let pole = Pole::new(c(1.2, 0.0));
        assert!(matches!(oscillatory_experiment(&chain, &params, &pole, 0, 2), Err(Error::Hypothesis(_))));
    }
}
