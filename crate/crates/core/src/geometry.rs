//! Intervals, the Joukowsky transformation and Bernstein elliptic discs.
//!
//! The closed Bernstein disc of radius `rho >= 1` around `[-1, 1]` is
//! `{ w : |w - 1| + |w + 1| <= 2 gamma(rho) }`, the image of the closed
//! annulus `1/rho <= |z| <= rho` under `gamma(z) = (z + 1/z) / 2`. Discs
//! around a general interval `[a, b]` are affine images of the reference
//! disc under `Phi_{a,b}(x) = (a + b)/2 + (b - a)/2 x`.
//!
//! Disc norms are estimated by sampling the boundary ellipse. For functions
//! holomorphic on a neighbourhood of the closed disc the maximum modulus
//! principle makes this a lower estimate of the supremum that converges as
//! the number of samples grows.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default number of boundary samples for disc norms.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 1024;

/// Boundary samples used before local refinement in [`disc_sup_norm_refined`].
pub const REFINED_BOUNDARY_SAMPLES: usize = 8192;

/// Absolute slack of the closed-disc membership test in pullback coordinates.
pub const MEMBERSHIP_SLACK: f64 = 1e-12;

/// A real interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::domain(format!("interval bounds must be finite, got [{a}, {b}]")));
        }
        if a >= b {
            return Err(Error::domain(format!("interval requires a < b, got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    /// The reference interval `[-1, 1]`.
    pub fn reference() -> Self {
        Self { a: -1.0, b: 1.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn half_length(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    /// `Phi_{a,b}`: maps the reference interval onto `[a, b]`.
    pub fn map(&self, x: f64) -> f64 {
        // Endpoint-exact form: Phi(-1) = a and Phi(1) = b without cancellation.
        0.5 * (self.a * (1.0 - x) + self.b * (1.0 + x))
    }

    /// `Phi_{a,b}` extended to the complex plane.
    pub fn map_complex(&self, z: Complex64) -> Complex64 {
        Complex64::new(self.midpoint(), 0.0) + z * self.half_length()
    }

    /// `Phi_{a,b}^{-1}` on the complex plane.
    pub fn pullback(&self, w: Complex64) -> Complex64 {
        (w - self.midpoint()) / self.half_length()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    /// `true` if `other` is a subset of `self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    /// `n` equispaced points including both endpoints (`n >= 2`).
    pub fn grid(&self, n: usize) -> Vec<f64> {
        assert!(n >= 2, "grid needs at least two points");
        let step = 1.0 / (n - 1) as f64;
        (0..n).map(|k| self.map(-1.0 + 2.0 * k as f64 * step)).collect()
    }
}

/// `gamma(z) = (z + 1/z) / 2`.
pub fn joukowsky(z: Complex64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::domain("Joukowsky map is undefined at z = 0"));
    }
    Ok(0.5 * (z + z.inv()))
}

/// The Joukowsky map restricted to real arguments `x >= 1`.
pub fn joukowsky_real(x: f64) -> f64 {
    0.5 * (x + 1.0 / x)
}

/// `gamma^dagger(rho) = rho + sqrt(rho^2 - 1)`, the inverse of the Joukowsky
/// map on `[1, inf)`.
pub fn joukowsky_dagger(rho: f64) -> Result<f64> {
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::domain(format!("joukowsky_dagger requires rho >= 1, got {rho}")));
    }
    if rho < 1.0 + 1e-14 {
        return Ok(1.0);
    }
    // (rho - 1)(rho + 1) avoids cancellation in rho^2 - 1 near rho = 1.
    Ok(rho + ((rho - 1.0) * (rho + 1.0)).sqrt())
}

/// Radius of the Bernstein disc around a subinterval of relative half
/// length `delta` that fits into the reference disc of radius `rho`.
pub fn rho_ab(rho: f64, delta: f64) -> Result<f64> {
    if !(rho > 1.0) || !rho.is_finite() {
        return Err(Error::domain(format!("rho_ab requires rho > 1, got {rho}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::domain(format!("rho_ab requires delta in (0, 1], got {delta}")));
    }
    if delta == 1.0 {
        return Ok(rho);
    }
    joukowsky_dagger((joukowsky_real(rho) - 1.0) / delta + 1.0)
}

/// `sigma_hat(rho, delta) = rho_ab(rho, delta) / rho`, nondecreasing in `rho`
/// and nonincreasing in `delta`, with `sigma_hat(1, delta) = 1` and limit
/// `1/delta` as `rho` grows.
pub fn sigma_hat(rho: f64, delta: f64) -> Result<f64> {
    if !(rho >= 1.0) || !rho.is_finite() {
        return Err(Error::domain(format!("sigma_hat requires rho >= 1, got {rho}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("sigma_hat requires delta in (0, 1), got {delta}")));
    }
    if rho == 1.0 {
        return Ok(1.0);
    }
    Ok(joukowsky_dagger((joukowsky_real(rho) - 1.0) / delta + 1.0)? / rho)
}

/// Growth factor `sigma > 1` such that discs of radius `sigma * rho` around
/// subintervals shrunk by at least `delta0` fit into the disc of radius `rho`
/// around the parent, for every `rho >= rho0`.
pub fn nesting_sigma(rho0: f64, delta0: f64) -> Result<f64> {
    if !(rho0 > 1.0) {
        return Err(Error::domain(format!("nesting_sigma requires rho0 > 1, got {rho0}")));
    }
    sigma_hat(rho0, delta0)
}

/// A closed Bernstein disc `D_{[a,b],rho}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinDisc {
    interval: Interval,
    rho: f64,
}

impl BernsteinDisc {
    pub fn new(interval: Interval, rho: f64) -> Result<Self> {
        if !(rho >= 1.0) || !rho.is_finite() {
            return Err(Error::domain(format!("Bernstein disc requires rho >= 1, got {rho}")));
        }
        Ok(Self { interval, rho })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Closed-disc membership, evaluated in pullback coordinates.
    pub fn contains(&self, w: Complex64) -> bool {
        let hat = self.interval.pullback(w);
        let lhs = (hat - 1.0).norm() + (hat + 1.0).norm();
        lhs <= 2.0 * joukowsky_real(self.rho) + MEMBERSHIP_SLACK
    }

    /// The boundary point with annulus angle `theta`.
    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        let (s, c) = theta.sin_cos();
        // gamma(rho e^{i theta}) in closed form avoids a complex division.
        let hat = Complex64::new(
            0.5 * (self.rho + 1.0 / self.rho) * c,
            0.5 * (self.rho - 1.0 / self.rho) * s,
        );
        self.interval.map_complex(hat)
    }

    /// `n` boundary samples `Phi(gamma(rho e^{2 pi i k / n}))`.
    pub fn boundary(&self, n: usize) -> Result<Vec<Complex64>> {
        if n < 4 {
            return Err(Error::domain(format!("disc boundary needs n >= 4 samples, got {n}")));
        }
        Ok((0..n)
            .map(|k| self.boundary_point(2.0 * PI * k as f64 / n as f64))
            .collect())
    }
}

fn eval_checked<F>(f: &F, w: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let v = f(w);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v.norm())
    } else {
        Err(Error::Evaluation {
            at: format!("{w}"),
            reason: format!("non-finite value {v}"),
        })
    }
}

/// Sup norm estimate over `n >= 64` boundary samples of the closed disc.
pub fn disc_sup_norm<F>(f: &F, disc: &BernsteinDisc, n: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    if n < 64 {
        return Err(Error::domain(format!("disc_sup_norm needs n >= 64 samples, got {n}")));
    }
    let mut best = 0.0_f64;
    for w in disc.boundary(n)? {
        best = best.max(eval_checked(f, w)?);
    }
    Ok(best)
}

/// Near-exact boundary maximum: a dense scan followed by golden-section
/// refinement around the largest local maxima.
pub fn disc_sup_norm_refined<F>(f: &F, disc: &BernsteinDisc) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let n = REFINED_BOUNDARY_SAMPLES;
    let step = 2.0 * PI / n as f64;
    let values = (0..n)
        .map(|k| eval_checked(f, disc.boundary_point(k as f64 * step)))
        .collect::<Result<Vec<f64>>>()?;

    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| {
            let prev = values[(k + n - 1) % n];
            let next = values[(k + 1) % n];
            values[k] >= prev && values[k] >= next
        })
        .collect();
    peaks.sort_by(|&x, &y| values[y].total_cmp(&values[x]));
    peaks.truncate(4);

    let mut best = values.iter().copied().fold(0.0, f64::max);
    for k in peaks {
        let centre = k as f64 * step;
        let modulus = |theta: f64| f(disc.boundary_point(theta)).norm();
        let refined = golden_section_max(modulus, centre - step, centre + step, 60);
        if refined.is_finite() {
            best = best.max(refined);
        }
    }
    Ok(best)
}

fn golden_section_max(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    let mut best = g1.max(g2);
    for _ in 0..iters {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + ratio * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - ratio * (hi - lo);
            g1 = g(x1);
        }
        best = best.max(g1).max(g2);
    }
    best
}

/// Sup norm over `n` equispaced points of a real interval.
pub fn interval_sup_norm<F>(f: &F, interval: &Interval, n: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let mut best = 0.0_f64;
    for x in interval.grid(n) {
        best = best.max(eval_checked(f, Complex64::new(x, 0.0))?);
    }
    Ok(best)
}

/// Smallest radius `rho` whose closed disc around `interval` contains `w`.
pub fn bernstein_radius_of(interval: &Interval, w: Complex64) -> f64 {
    let hat = interval.pullback(w);
    let half_sum = 0.5 * ((hat - 1.0).norm() + (hat + 1.0).norm());
    joukowsky_dagger(half_sum.max(1.0)).unwrap_or(1.0)
}
