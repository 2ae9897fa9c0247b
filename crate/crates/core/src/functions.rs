//! Analytic test functions with known singularities.
//!
//! Experiments that compare against holomorphy-based bounds take a
//! [`AnalyticFunction`] so they can refuse configurations where a
//! singularity lies inside the disc the bound needs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::BernsteinDisc;

pub trait AnalyticFunction: Send + Sync {
    fn eval(&self, w: Complex64) -> Complex64;

    /// Exact derivative, when available.
    fn derivative(&self, w: Complex64) -> Option<Complex64>;

    /// Isolated singularities; empty for entire functions.
    fn singularities(&self) -> Vec<Complex64>;

    fn name(&self) -> String;
}

/// Fails with [`Error::Hypothesis`] if `f` has a singularity in the closed disc.
pub fn ensure_holomorphic_on(f: &dyn AnalyticFunction, disc: &BernsteinDisc) -> Result<()> {
    match f.singularities().into_iter().find(|&s| disc.contains(s)) {
        Some(s) => Err(Error::hypothesis(format!(
            "{} has a singularity at {s} inside the disc of radius {} around [{}, {}]",
            f.name(),
            disc.rho(),
            disc.interval().a(),
            disc.interval().b()
        ))),
        None => Ok(()),
    }
}

/// `w -> 1 / (w - w0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub center: Complex64,
}

impl Pole {
    pub fn new(center: Complex64) -> Self {
        Self { center }
    }
}

impl AnalyticFunction for Pole {
    fn eval(&self, w: Complex64) -> Complex64 {
        (w - self.center).inv()
    }

    fn derivative(&self, w: Complex64) -> Option<Complex64> {
        let d = w - self.center;
        Some(-(d * d).inv())
    }

    fn singularities(&self) -> Vec<Complex64> {
        vec![self.center]
    }

    fn name(&self) -> String {
        format!("pole({})", self.center)
    }
}

/// A polynomial in monomial form `sum_k c_k w^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coefficients: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<Complex64>) -> Self {
        Self { coefficients }
    }

    pub fn real(coefficients: &[f64]) -> Self {
        Self::new(coefficients.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(value: f64) -> Self {
        Self::real(&[value])
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

impl AnalyticFunction for Polynomial {
    fn eval(&self, w: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    fn derivative(&self, w: Complex64) -> Option<Complex64> {
        Some(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * w + c * k as f64),
        )
    }

    fn singularities(&self) -> Vec<Complex64> {
        Vec::new()
    }

    fn name(&self) -> String {
        format!("polynomial(degree {})", self.degree())
    }
}

/// One-dimensional slice of the Helmholtz kernel,
/// `x -> exp(i kappa |x - y0|) / |x - y0|`, continued holomorphically from
/// the side of `y0` the intervals lie on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzSlice {
    pub kappa: f64,
    pub source: f64,
    /// `+1` if the evaluation region lies right of `source`, `-1` if left.
    pub side: f64,
}

impl HelmholtzSlice {
    pub fn new(kappa: f64, source: f64, side: f64) -> Self {
        Self { kappa, source, side: side.signum() }
    }

    /// The direction that removes the oscillation exactly: `kappa * side`.
    pub fn natural_direction(&self) -> f64 {
        self.kappa * self.side
    }
}

impl AnalyticFunction for HelmholtzSlice {
    fn eval(&self, w: Complex64) -> Complex64 {
        let u = (w - self.source) * self.side;
        (Complex64::i() * self.kappa * u).exp() / u
    }

    fn derivative(&self, w: Complex64) -> Option<Complex64> {
        let u = (w - self.source) * self.side;
        Some(self.eval(w) * self.side * (Complex64::i() * self.kappa - u.inv()))
    }

    fn singularities(&self) -> Vec<Complex64> {
        vec![Complex64::new(self.source, 0.0)]
    }

    fn name(&self) -> String {
        format!("helmholtz(kappa={}, y0={})", self.kappa, self.source)
    }
}
