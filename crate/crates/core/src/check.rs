//! Comparison of measured quantities against analytic bounds.
//!
//! The bounds hold in exact arithmetic. A measured error cannot drop below
//! the rounding error of evaluating the interpolant, so every comparison
//! carries a floor proportional to machine epsilon times the evaluation
//! condition `sum |l_nu(w)| |f_nu|` of the quantities involved.

/// Multiplier on `eps * (sum of orders + 1) * condition` for the rounding floor.
pub const ROUNDING_FACTOR: f64 = 64.0;

/// Measured errors below this multiple of the rounding floor are excluded
/// from decay-rate regressions.
pub const REGRESSION_FLOOR_MARGIN: f64 = 1e3;

/// A measured quantity, its analytic bound and the rounding floor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub measured: f64,
    pub bound: f64,
    pub floor: f64,
}

impl Measurement {
    pub fn new(measured: f64, bound: f64, floor: f64) -> Self {
        Self { measured, bound, floor }
    }

    /// `measured <= bound + floor`. An infinite bound always holds.
    pub fn holds(&self) -> bool {
        self.measured.is_finite() && self.measured <= self.bound + self.floor
    }

    /// `true` when the measurement is far enough above the rounding floor to
    /// reflect the true decay of the error.
    pub fn above_floor(&self) -> bool {
        self.measured > REGRESSION_FLOOR_MARGIN * self.floor
    }
}

/// Rounding floor for an evaluation chain with total order `order_sum`
/// and evaluation condition `condition`.
pub fn rounding_floor(order_sum: usize, condition: f64) -> f64 {
    ROUNDING_FACTOR * f64::EPSILON * (order_sum as f64 + 1.0) * condition
}

/// Least-squares slope of `ln(y)` against `x`. `None` with fewer than two
/// points or non-positive values.
pub fn fit_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(_, y)| !(y > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mean_x) * (y.ln() - mean_y);
        sxx += (x - mean_x) * (x - mean_x);
    }
    (sxx > 0.0).then(|| sxy / sxx)
}
