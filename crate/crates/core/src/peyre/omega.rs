//! The archimedean density `omega_inf`.
//!
//! Over `K` the `z2` integral is a disc of radius
//! `r = min(1, |z0|^-1/2, |z1|^-1/2, 1/(|z0||z1|))` (ordinary modulus), leaving
//! `omega_inf = 12 int int r^2 dz0 dz1` over `|z0 z1 (z0 + z1)| <= 1`, which is
//! rotation invariant. Over `Q` the `y2` interval has length `2r` and
//! `omega_inf = 3 int int r dy0 dy1` over `|y0 y1 (y0 + y1)| <= 1`.

use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::integrate::{breakpoints, integrate, mc_mean, McConfig, Quadrature};
use crate::field::{FieldContext, FieldMode};
use crate::{Error, Real, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaMethod {
    /// nested adaptive quadrature in polar (over `K`) or `y0, y1` (over `Q`) coordinates
    Quadrature,
    /// importance-sampled Monte Carlo over the full unbounded domain
    MonteCarlo,
    /// `Q` only: `y2` outermost, exact `y1` length
    Sliced,
}

impl fmt::Display for OmegaMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaMethod::Quadrature => "quadrature",
            OmegaMethod::MonteCarlo => "monte-carlo",
            OmegaMethod::Sliced => "sliced",
        })
    }
}

impl OmegaMethod {
    pub fn available(mode: FieldMode) -> &'static [OmegaMethod] {
        match mode {
            FieldMode::Rational => &[OmegaMethod::Quadrature, OmegaMethod::MonteCarlo, OmegaMethod::Sliced],
            FieldMode::Quadratic => &[OmegaMethod::Quadrature, OmegaMethod::MonteCarlo],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegrationConfig {
    pub rel_tol: f64,
    pub max_intervals: usize,
    pub mc: McConfig,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-8, max_intervals: 4000, mc: McConfig { samples: 1_000_000, seed: 1, workers: 4 } }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OmegaEstimate<T> {
    pub value: T,
    /// absolute error: quadrature estimate, or one standard error for Monte Carlo
    pub err: T,
    pub method: OmegaMethod,
    pub converged: bool,
}

impl<T: Real> OmegaEstimate<T> {
    /// Whether two estimates agree within `k` combined error bars or relative `rel`.
    pub fn agrees(&self, other: &Self, k: T, rel: T) -> bool {
        let d = (self.value - other.value).abs();
        d <= k * (self.err + other.err) || d <= rel * self.value.abs()
    }
}

/// `min(1, a^-1/2, b^-1/2, 1/(ab))` for moduli `a, b >= 0`.
pub fn radius<T: Real>(a: T, b: T) -> T {
    let one = T::one();
    one.min(a.sqrt().recip()).min(b.sqrt().recip()).min((a * b).recip())
}

/// Measure of angles `t` with `|a + b e^{it}| <= 1/(ab)`.
fn arc<T: Real>(a: T, b: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let ab = a * b;
    let k = ((ab * ab).recip() - a * a - b * b) / (T::lit(2.0) * ab);
    if k.is_nan() || k >= T::one() {
        two_pi
    } else if k <= -T::one() {
        T::zero()
    } else {
        two_pi - T::lit(2.0) * k.acos()
    }
}

/// Positive roots of `a x^2 + a^2 x - 1 = 0`, `a x^2 - a^2 x - 1 = 0`, and `a x^2 - a^2 x + 1 = 0`.
fn boundary_roots<T: Real>(a: T) -> Vec<T> {
    let two_a = T::lit(2.0) * a;
    let a2 = a * a;
    let d = (a2 * a2 + T::lit(4.0) * a).sqrt();
    let two = T::lit(2.0);
    let mut v = vec![two / (d + a2), (d + a2) / two_a];
    let e = a2 * a2 - T::lit(4.0) * a;
    if e >= T::zero() {
        v.push(two / (a2 + e.sqrt()));
        v.push((a2 + e.sqrt()) / two_a);
    }
    v
}

/// Where the minimum in [`radius`] switches branch, as values of `b`.
fn radius_breaks<T: Real>(a: T) -> Vec<T> {
    vec![T::one(), a, a.recip(), a.sqrt().recip(), (a * a).recip()]
}

fn to_unit<T: Real>(x: T) -> T {
    x / (T::one() + x)
}

/// `s / (1 - s)` and its derivative; `None` once `s` rounds to 1.
fn from_unit<T: Real>(s: T) -> Option<(T, T)> {
    let d = T::one() - s;
    (d > T::zero()).then(|| (s / d, (d * d).recip()))
}

fn quad<T: Real>(cfg: &IntegrationConfig, rel: f64) -> Quadrature<T> {
    Quadrature { abs_tol: T::lit(1e-300), rel_tol: T::lit(rel), max_intervals: cfg.max_intervals }
}

fn nested<T: Real>(
    cfg: &IntegrationConfig,
    outer: &[T],
    mut inner: impl FnMut(T) -> (T, T, bool),
) -> (T, T, bool) {
    let mut inner_err = T::zero();
    let mut ok = true;
    let r = integrate(
        |s| {
            let (v, e, c) = inner(s);
            inner_err = inner_err.max(e);
            ok &= c;
            v
        },
        outer,
        &quad(cfg, cfg.rel_tol),
    );
    // inner errors are already in outer units and the outer range has length 1
    let err = r.error + inner_err;
    let within = err <= T::lit(cfg.rel_tol) * r.value.abs();
    (r.value, err, r.converged && (ok || within))
}

/// `24 pi int int rho0 rho1 r^2 arc drho0 drho1` on `(0, inf)^2`.
fn complex_quadrature<T: Real>(cfg: &IntegrationConfig) -> (T, T, bool) {
    let inner_rel = (cfg.rel_tol * 0.1).max(1e-13);
    let outer_breaks = breakpoints(T::zero(), T::one(), &[to_unit(T::one()), to_unit(T::lit(4f64.cbrt()))]);
    let (v, e, ok) = nested(cfg, &outer_breaks, |s0| {
        let Some((a, ja)) = from_unit(s0) else { return (T::zero(), T::zero(), true) };
        let pts: Vec<T> = radius_breaks(a).into_iter().chain(boundary_roots(a)).map(to_unit).collect();
        let r = integrate(
            |s1| {
                let Some((b, jb)) = from_unit(s1) else { return T::zero() };
                let rr = radius(a, b);
                a * b * rr * rr * arc(a, b) * jb
            },
            &breakpoints(T::zero(), T::one(), &pts),
            &quad(cfg, inner_rel),
        );
        (r.value * ja, r.error * ja, r.converged)
    });
    let c = T::lit(24.0) * T::PI();
    (c * v, c * e, ok)
}

/// Sample `z` in `C` with area density `min(1, |z|^-3) / (3 pi)`; returns `(z, density)`.
fn sample_plane<T: Real>(rng: &mut ChaCha8Rng) -> ((T, T), T) {
    let u: f64 = rng.gen();
    let rho = if u < 1.0 / 3.0 { rng.gen::<f64>().sqrt() } else { 1.0 / (1.0 - rng.gen::<f64>()) };
    let t = rng.gen::<f64>() * std::f64::consts::TAU;
    let rho_t = T::lit(rho);
    let dens = T::one().min(rho_t.powi(-3)) / (T::lit(3.0) * T::PI());
    ((rho_t * T::lit(t.cos()), rho_t * T::lit(t.sin())), dens)
}

fn complex_monte_carlo<T: Real>(cfg: &IntegrationConfig) -> (T, T) {
    let e = mc_mean(&cfg.mc, |rng| {
        let ((x0, y0), p0) = sample_plane::<T>(rng);
        let ((x1, y1), p1) = sample_plane::<T>(rng);
        let a = (x0 * x0 + y0 * y0).sqrt();
        let b = (x1 * x1 + y1 * y1).sqrt();
        let (sx, sy) = (x0 + x1, y0 + y1);
        if a * b * (sx * sx + sy * sy).sqrt() > T::one() {
            return T::zero();
        }
        let r = radius(a, b);
        T::lit(12.0) * r * r / (p0 * p1)
    });
    (e.mean, e.stderr)
}

/// `y1` with `|y1 (a + y1)| <= 1/a`, for `a > 0`, as disjoint closed intervals.
fn rational_slices<T: Real>(a: T) -> Vec<(T, T)> {
    let half = T::lit(0.5);
    let d1 = (a * a + T::lit(4.0) / a).sqrt();
    // the small roots come from the root products -1/a and 1/a
    let two = T::lit(2.0);
    let (l1, r1) = ((-a - d1) * half, two / (a * (a + d1)));
    let e = a * a - T::lit(4.0) / a;
    if e > T::zero() {
        let d2 = e.sqrt();
        vec![(l1, (-a - d2) * half), (-two / (a * (a + d2)), r1)]
    } else {
        vec![(l1, r1)]
    }
}

/// `6 int_0^inf dy0 int r dy1`.
fn rational_quadrature<T: Real>(cfg: &IntegrationConfig) -> (T, T, bool) {
    let inner_rel = (cfg.rel_tol * 0.1).max(1e-13);
    let outer_breaks = breakpoints(T::zero(), T::one(), &[to_unit(T::one()), to_unit(T::lit(4f64.cbrt()))]);
    let (v, e, ok) = nested(cfg, &outer_breaks, |s0| {
        let Some((a, ja)) = from_unit(s0) else { return (T::zero(), T::zero(), true) };
        let rb = radius_breaks(a);
        let (mut val, mut err, mut conv) = (T::zero(), T::zero(), true);
        for (lo, hi) in rational_slices(a) {
            let pts: Vec<T> = rb.iter().flat_map(|&x| [x, -x]).collect();
            let r = integrate(|b: T| radius(a, b.abs()), &breakpoints(lo, hi, &pts), &quad(cfg, inner_rel));
            val = val + r.value;
            err = err + r.error;
            conv &= r.converged;
        }
        (val * ja, err * ja, conv)
    });
    let c = T::lit(6.0);
    (c * v, c * e, ok)
}

/// Length of `{y1 : |y1 (a + y1)| <= 1/a, |y1| <= m}`.
fn slice_length<T: Real>(a: T, m: T) -> T {
    rational_slices(a)
        .into_iter()
        .map(|(lo, hi)| (hi.min(m) - lo.max(-m)).max(T::zero()))
        .sum()
}

/// `6 int_0^1 dy2 int_0^{y2^-2} dy0 len`, with `|y1| <= min(y2^-2, 1/(y0 y2))`.
fn rational_sliced<T: Real>(cfg: &IntegrationConfig) -> (T, T, bool) {
    let inner_rel = (cfg.rel_tol * 0.1).max(1e-13);
    let (v, e, ok) = nested(cfg, &[T::zero(), T::one()], |c| {
        let top = to_unit((c * c).recip());
        let pts = [to_unit(c), to_unit(T::lit(4f64.cbrt())), to_unit(T::one()), to_unit(c.recip())];
        let r = integrate(
            |s| {
                let Some((a, ja)) = from_unit(s) else { return T::zero() };
                let m = (c * c).recip().min((a * c).recip());
                slice_length(a, m) * ja
            },
            &breakpoints(T::zero(), top, &pts),
            &quad(cfg, inner_rel),
        );
        (r.value, r.error, r.converged)
    });
    let k = T::lit(6.0);
    (k * v, k * e, ok)
}

/// Sample `y` in `R` with density `min(1, |y|^-3/2) / 6`.
fn sample_line<T: Real>(rng: &mut ChaCha8Rng) -> (T, T) {
    let u: f64 = rng.gen();
    let mag = if u < 1.0 / 3.0 { rng.gen::<f64>() } else { (1.0 - rng.gen::<f64>()).powi(-2) };
    let y = if rng.gen::<bool>() { mag } else { -mag };
    let dens = 1f64.min(mag.powf(-1.5)) / 6.0;
    (T::lit(y), T::lit(dens))
}

fn rational_monte_carlo<T: Real>(cfg: &IntegrationConfig) -> (T, T) {
    let e = mc_mean(&cfg.mc, |rng| {
        let (y0, p0) = sample_line::<T>(rng);
        let (y1, p1) = sample_line::<T>(rng);
        if (y0 * y1 * (y0 + y1)).abs() > T::one() {
            return T::zero();
        }
        T::lit(3.0) * radius(y0.abs(), y1.abs()) / (p0 * p1)
    });
    (e.mean, e.stderr)
}

/// `omega_inf` for the mode of `ctx`; the value does not depend on `K` beyond that.
pub fn omega_infinity<T: Real>(ctx: &FieldContext, method: OmegaMethod, cfg: &IntegrationConfig) -> Result<OmegaEstimate<T>> {
    let (value, err, converged) = match (ctx.mode, method) {
        (FieldMode::Quadratic, OmegaMethod::Quadrature) => complex_quadrature(cfg),
        (FieldMode::Quadratic, OmegaMethod::MonteCarlo) => {
            let (v, e) = complex_monte_carlo::<T>(cfg);
            (v, e, true)
        }
        (FieldMode::Rational, OmegaMethod::Quadrature) => rational_quadrature(cfg),
        (FieldMode::Rational, OmegaMethod::Sliced) => rational_sliced(cfg),
        (FieldMode::Rational, OmegaMethod::MonteCarlo) => {
            let (v, e) = rational_monte_carlo::<T>(cfg);
            (v, e, true)
        }
        (FieldMode::Quadratic, OmegaMethod::Sliced) => {
            return Err(Error::InvalidArgument("the sliced method is only implemented over Q".into()))
        }
    };
    if !value.is_finite() {
        return Err(Error::NoConvergence(format!("{method} produced {value}")));
    }
    Ok(OmegaEstimate { value, err, method, converged })
}
