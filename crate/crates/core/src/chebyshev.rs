//! Chebyshev interpolation on real intervals, evaluated anywhere in the
//! complex plane.
//!
//! Interpolation points are the Chebyshev zeros
//! `xi_nu = cos(pi (2 nu + 1) / (2 m + 2))`, `nu = 0..=m`, in descending
//! order. Interpolants are evaluated with the second barycentric formula,
//! which stays valid off the real axis, so error norms can be measured on
//! Bernstein discs.
//!
//! Two coefficient conventions appear here. [`ChebyshevSeries`] stores plain
//! coefficients `p = sum_k b_k C_k`. [`chebyshev_coefficients_analytic`]
//! returns the Laurent coefficients `a_n` of `f(gamma(z))`, for which
//! `f = a_0 + 2 sum_{n >= 1} a_n C_n`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::check::{rounding_floor, Measurement};
use crate::error::{Error, Result};
use crate::functions::{ensure_holomorphic_on, AnalyticFunction};
use crate::geometry::{disc_sup_norm_refined, joukowsky, BernsteinDisc, Interval, DEFAULT_BOUNDARY_SAMPLES};

/// Relative distance (in reference coordinates) below which an evaluation
/// point is treated as coinciding with a node.
const NODE_COINCIDENCE: f64 = 2e-14;

/// Uniform grid size used by [`lebesgue_constant`].
pub const LEBESGUE_GRID: usize = 4096;

/// Default trapezoidal quadrature size for Laurent coefficients.
pub const DEFAULT_QUADRATURE_POINTS: usize = 4096;

/// Chebyshev zeros of order `m` with their barycentric weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevRule {
    order: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl ChebyshevRule {
    pub fn new(order: usize) -> Self {
        let denom = 2.0 * order as f64 + 2.0;
        let angle = |nu: usize| PI * (2.0 * nu as f64 + 1.0) / denom;
        // The sine form is exactly antisymmetric and hits 0 for even orders.
        let points = (0..=order)
            .map(|nu| (PI * (order as f64 - 2.0 * nu as f64) / denom).sin())
            .collect();
        let weights = (0..=order)
            .map(|nu| {
                let sign = if nu % 2 == 0 { 1.0 } else { -1.0 };
                sign * angle(nu).sin()
            })
            .collect();
        Self { order, points, weights }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn coincident_node(&self, x: Complex64) -> Option<usize> {
        self.points
            .iter()
            .position(|&xi| (x - xi).norm() <= NODE_COINCIDENCE)
    }

    /// Values `l_0(x), ..., l_m(x)` of the Lagrange basis.
    pub fn lagrange_basis(&self, x: Complex64) -> Vec<Complex64> {
        if let Some(k) = self.coincident_node(x) {
            let mut unit = vec![Complex64::new(0.0, 0.0); self.order + 1];
            unit[k] = Complex64::new(1.0, 0.0);
            return unit;
        }
        let terms: Vec<Complex64> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(&xi, &w)| w / (x - xi))
            .collect();
        let total: Complex64 = terms.iter().sum();
        terms.into_iter().map(|t| t / total).collect()
    }

    /// Barycentric evaluation of the polynomial through `(xi_nu, values[nu])`.
    pub fn evaluate(&self, values: &[Complex64], x: Complex64) -> Complex64 {
        debug_assert_eq!(values.len(), self.order + 1);
        if let Some(k) = self.coincident_node(x) {
            return values[k];
        }
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for ((&xi, &w), &v) in self.points.iter().zip(&self.weights).zip(values) {
            let t = w / (x - xi);
            num += t * v;
            den += t;
        }
        num / den
    }

    /// Lebesgue function `sum_nu |l_nu(x)|` on the reference interval.
    pub fn lebesgue_function(&self, x: f64) -> f64 {
        self.lagrange_basis(Complex64::new(x, 0.0))
            .iter()
            .map(|l| l.norm())
            .sum()
    }
}

/// `C_n(w)` by the three-term recurrence.
pub fn chebyshev_polynomial(n: usize, w: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = w;
    for _ in 1..n {
        let next = 2.0 * w * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Lebesgue constant of the order-`m` Chebyshev rule, maximised over a
/// 4096-point uniform grid of `[-1, 1]` (endpoints included).
pub fn lebesgue_constant(m: usize) -> f64 {
    let rule = ChebyshevRule::new(m);
    let n = LEBESGUE_GRID;
    (0..=n)
        .map(|k| rule.lebesgue_function(-1.0 + 2.0 * k as f64 / n as f64))
        .fold(0.0, f64::max)
}

/// A polynomial in Chebyshev form `sum_k b_k C_k(Phi^{-1}(w))` on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries {
    interval: Interval,
    coefficients: Vec<Complex64>,
}

impl ChebyshevSeries {
    pub fn new(interval: Interval, coefficients: Vec<Complex64>) -> Self {
        assert!(!coefficients.is_empty(), "a Chebyshev series needs at least one coefficient");
        Self { interval, coefficients }
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Clenshaw evaluation.
    pub fn evaluate(&self, w: Complex64) -> Complex64 {
        let x = self.interval.pullback(w);
        let zero = Complex64::new(0.0, 0.0);
        let (mut b1, mut b2) = (zero, zero);
        for &c in self.coefficients.iter().skip(1).rev() {
            let b0 = c + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coefficients[0] + x * b1 - b2
    }

    /// Coefficients of the derivative with respect to the interval variable.
    pub fn derivative(&self) -> ChebyshevSeries {
        let m = self.degree();
        let zero = Complex64::new(0.0, 0.0);
        if m == 0 {
            return ChebyshevSeries::new(self.interval, vec![zero]);
        }
        let b = &self.coefficients;
        let mut d = vec![zero; m + 1];
        for k in (1..=m).rev() {
            d[k - 1] = d.get(k + 1).copied().unwrap_or(zero) + 2.0 * k as f64 * b[k];
        }
        d[0] *= 0.5;
        d.truncate(m);
        let scale = 1.0 / self.interval.half_length();
        ChebyshevSeries::new(self.interval, d.into_iter().map(|c| c * scale).collect())
    }
}

/// The interpolating polynomial of a function on an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    interval: Interval,
    rule: ChebyshevRule,
    samples: Vec<Complex64>,
    coefficients: Option<Vec<Complex64>>,
}

fn check_finite(v: Complex64, at: f64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation {
            at: format!("{at}"),
            reason: format!("non-finite sample {v}"),
        })
    }
}

/// Interpolates `f` at the `m + 1` Chebyshev points mapped to `interval`.
pub fn interpolate<F>(f: &F, interval: Interval, m: usize) -> Result<Interpolant>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let rule = ChebyshevRule::new(m);
    let samples = rule
        .points()
        .iter()
        .map(|&xi| {
            let x = interval.map(xi);
            check_finite(f(Complex64::new(x, 0.0)), x)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Interpolant {
        interval,
        rule,
        samples,
        coefficients: None,
    })
}

impl Interpolant {
    /// Builds an interpolant from values at the mapped Chebyshev points.
    pub fn from_samples(interval: Interval, samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("an interpolant needs at least one sample"));
        }
        let rule = ChebyshevRule::new(samples.len() - 1);
        Ok(Self {
            interval,
            rule,
            samples,
            coefficients: None,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    pub fn rule(&self) -> &ChebyshevRule {
        &self.rule
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// The interpolation points in interval coordinates.
    pub fn nodes(&self) -> Vec<f64> {
        self.rule.points().iter().map(|&xi| self.interval.map(xi)).collect()
    }

    pub fn evaluate(&self, w: Complex64) -> Complex64 {
        self.rule.evaluate(&self.samples, self.interval.pullback(w))
    }

    pub fn evaluate_real(&self, x: f64) -> Complex64 {
        self.evaluate(Complex64::new(x, 0.0))
    }

    /// `sum_nu |l_nu(w)| |f_nu|`: the scale of rounding errors when
    /// evaluating the interpolant at `w`.
    pub fn evaluation_condition(&self, w: Complex64) -> f64 {
        self.rule
            .lagrange_basis(self.interval.pullback(w))
            .iter()
            .zip(&self.samples)
            .map(|(l, s)| l.norm() * s.norm())
            .sum()
    }

    /// Chebyshev coefficients `b_0..b_m` with `p = sum_k b_k C_k`, computed
    /// by a direct cosine sum over the samples.
    pub fn chebyshev_coefficients(&self) -> Vec<Complex64> {
        if let Some(c) = &self.coefficients {
            return c.clone();
        }
        let m = self.order();
        let denom = 2.0 * m as f64 + 2.0;
        (0..=m)
            .map(|k| {
                let sum: Complex64 = self
                    .samples
                    .iter()
                    .enumerate()
                    .map(|(nu, &f)| f * (k as f64 * PI * (2.0 * nu as f64 + 1.0) / denom).cos())
                    .sum();
                let scale = if k == 0 { 1.0 } else { 2.0 };
                sum * (scale / (m as f64 + 1.0))
            })
            .collect()
    }

    /// Computes and caches the coefficient form.
    pub fn with_coefficients(mut self) -> Self {
        self.coefficients = Some(self.chebyshev_coefficients());
        self
    }

    pub fn coefficients(&self) -> Option<&[Complex64]> {
        self.coefficients.as_deref()
    }

    pub fn to_series(&self) -> ChebyshevSeries {
        ChebyshevSeries::new(self.interval, self.chebyshev_coefficients())
    }

    /// The derivative as an interpolant of order `m - 1` on the same
    /// interval (order 0 and identically zero for constants).
    pub fn derivative(&self) -> Interpolant {
        let series = self.to_series().derivative();
        let order = series.degree();
        let rule = ChebyshevRule::new(order);
        let samples = rule
            .points()
            .iter()
            .map(|&xi| series.evaluate(Complex64::new(self.interval.map(xi), 0.0)))
            .collect();
        Interpolant {
            interval: self.interval,
            rule,
            samples,
            coefficients: Some(series.coefficients().to_vec()),
        }
    }
}

/// Laurent coefficients `a_0..a_m` of `f(gamma(z))` by `n_quad`-point
/// trapezoidal quadrature on the circle `|z| = r`, `1/rho < r < rho`.
pub fn chebyshev_coefficients_analytic<F>(
    f: &F,
    rho: f64,
    r: f64,
    m: usize,
    n_quad: usize,
) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    if !(rho > 1.0) {
        return Err(Error::domain(format!("Laurent coefficients need rho > 1, got {rho}")));
    }
    if !(r > 1.0 / rho && r < rho) {
        return Err(Error::domain(format!("quadrature radius {r} must lie in (1/rho, rho)")));
    }
    if n_quad < 2 * m + 2 {
        return Err(Error::domain(format!(
            "{n_quad} quadrature points cannot resolve {} coefficients",
            m + 1
        )));
    }
    let values = (0..n_quad)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n_quad as f64;
            let w = joukowsky(Complex64::from_polar(r, theta))?;
            let v = f(w);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::Evaluation {
                    at: format!("{w}"),
                    reason: "quadrature node hit a singularity".into(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..=m)
        .map(|n| {
            let sum: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * (n * k) as f64 / n_quad as f64))
                .sum();
            sum / (n_quad as f64 * r.powi(n as i32))
        })
        .collect())
}

/// `p = a_0 + 2 sum_{n=1}^m a_n C_n` on `interval`, from Laurent coefficients.
pub fn truncated_expansion(laurent: &[Complex64], m: usize, interval: Interval) -> Result<ChebyshevSeries> {
    if laurent.len() <= m {
        return Err(Error::domain(format!(
            "need {} Laurent coefficients, got {}",
            m + 1,
            laurent.len()
        )));
    }
    let coefficients = laurent[..=m]
        .iter()
        .enumerate()
        .map(|(n, &a)| if n == 0 { a } else { 2.0 * a })
        .collect();
    Ok(ChebyshevSeries::new(interval, coefficients))
}

/// Error bound for order-`m` interpolation measured on the disc of radius
/// `rho_hat`, for `f` bounded by `f_norm` on the disc of radius `rho`:
/// `2 (1 + Lambda_m) / (rho/rho_hat - 1) (rho_hat/rho)^m f_norm`.
pub fn single_level_error_bound(m: usize, rho: f64, rho_hat: f64, f_norm: f64, lambda_m: f64) -> Result<f64> {
    if !(rho_hat >= 1.0 && rho_hat < rho) {
        return Err(Error::domain(format!("need 1 <= rho_hat < rho, got rho_hat = {rho_hat}, rho = {rho}")));
    }
    if !(f_norm >= 0.0) {
        return Err(Error::domain(format!("norm must be nonnegative, got {f_norm}")));
    }
    let ratio = rho_hat / rho;
    Ok(2.0 * (1.0 + lambda_m) / (rho / rho_hat - 1.0) * ratio.powi(m as i32) * f_norm)
}

/// Measured error of order-`m` interpolation on the disc of radius
/// `rho_hat` against [`single_level_error_bound`] with the refined norm of
/// `f` on radius `rho`.
pub fn single_level_experiment(
    f: &dyn AnalyticFunction,
    interval: Interval,
    m: usize,
    rho: f64,
    rho_hat: f64,
) -> Result<Measurement> {
    let outer = BernsteinDisc::new(interval, rho)?;
    ensure_holomorphic_on(f, &outer)?;
    let eval = |w| f.eval(w);
    let p = interpolate(&eval, interval, m)?;
    let (mut measured, mut scale) = (0.0_f64, 0.0_f64);
    for w in BernsteinDisc::new(interval, rho_hat)?.boundary(DEFAULT_BOUNDARY_SAMPLES)? {
        let fv = eval(w);
        measured = measured.max((fv - p.evaluate(w)).norm());
        scale = scale.max(fv.norm() + p.evaluation_condition(w));
    }
    let norm = disc_sup_norm_refined(&eval, &outer)?;
    let bound = single_level_error_bound(m, rho, rho_hat, norm, lebesgue_constant(m))?;
    Ok(Measurement::new(measured, bound, rounding_floor(m, scale)))
}

/// Exact Lagrange-form evaluation, `O(m^2)` per point. Test oracle for the
/// barycentric path.
#[cfg(test)]
pub(crate) fn lagrange_oracle(nodes: &[f64], values: &[Complex64], x: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for (j, &xj) in nodes.iter().enumerate() {
        let mut l = Complex64::new(1.0, 0.0);
        for (k, &xk) in nodes.iter().enumerate() {
            if k != j {
                l *= (x - xk) / (xj - xk);
            }
        }
        total += l * values[j];
    }
    total
}
