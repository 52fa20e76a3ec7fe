//! Empirical checks of the summation machinery: ideal densities, average
//! values of multiplicative functions, `omega`-sums, and lattice counting.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::{AlgInt, FieldContext, FieldMode, KElem};
use crate::lattice::ideal_lattice;
use crate::lattice::region::davenport_main_term;
use crate::peyre::theta8::theta8_value;
use crate::{Error, Rational, Result};

/// Multiplicative functions `theta(a) = prod_p A_p(v_p(a))` whose local values
/// depend on `p` only through `x = 1/Np`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiplicativeSpec {
    /// `A = 1`
    Ones,
    /// `A(0) = 1`, `A(n) = 1 - 1/Np`
    PhiStar,
    /// `A(n) = n + 1`, whose average diverges
    Divisor,
    /// The seven-variable rule `theta_8`, depending only on which variables are divisible by `p`.
    Theta8,
}

impl std::str::FromStr for MultiplicativeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ones" => Ok(Self::Ones),
            "phi-star" => Ok(Self::PhiStar),
            "divisor" => Ok(Self::Divisor),
            "theta8" => Ok(Self::Theta8),
            _ => Err(Error::Parse(format!("spec `{s}`, expected ones, phi-star, divisor or theta8"))),
        }
    }
}

impl MultiplicativeSpec {
    /// Upper bound on the local values, `None` if unbounded.
    pub fn bound(self) -> Option<f64> {
        match self {
            Self::Ones | Self::PhiStar | Self::Theta8 => Some(1.0),
            Self::Divisor => None,
        }
    }

    pub fn one_variable(self) -> bool {
        self != Self::Theta8
    }

    pub fn local(self, np: u64, n: u32) -> f64 {
        match self {
            Self::Ones => 1.0,
            Self::PhiStar if n == 0 => 1.0,
            Self::PhiStar => 1.0 - 1.0 / np as f64,
            Self::Divisor => f64::from(n + 1),
            Self::Theta8 => panic!("theta8 has no one-variable local rule"),
        }
    }

    pub fn value(self, factors: &[(u64, u32)]) -> f64 {
        factors.iter().map(|&(q, e)| self.local(q, e)).product()
    }

    /// The local factor of the average, `(1 - x)^k sum A x^(n_1 + ... + n_k)`
    /// with `k` the number of variables, summed directly from the rule.
    pub fn local_average(self, x: f64) -> f64 {
        match self {
            Self::Theta8 => {
                // only the support L of the valuations matters, and sum_{n >= 1} (1-x) x^n = x
                let mut s = 0.0;
                for mask in 0u32..128 {
                    let l: Vec<usize> = (0..7).filter(|j| mask >> j & 1 == 1).map(|j| j + 1).collect();
                    let k = l.len() as i32;
                    s += (1.0 - x).powi(7 - k) * x.powi(k) * theta8_value(&l).poly().map(|c| *c.numer() as f64 / *c.denom() as f64).eval(&x);
                }
                s
            }
            _ => {
                let np = 1.0 / x;
                let mut s = 0.0;
                let mut xn = 1.0;
                for n in 0..200u32 {
                    s += self.local(np.round() as u64, n) * xn;
                    xn *= x;
                    if xn < 1e-18 {
                        break;
                    }
                }
                (1.0 - x) * s
            }
        }
    }

    /// Lower bound for `log` of the omitted factors `Np > cutoff`, given at most
    /// `m` prime ideals per norm.
    fn tail_log_lower(self, cutoff: u64, m: f64) -> f64 {
        let p = cutoff as f64;
        match self {
            Self::Ones => 0.0,
            // 1 - x^2, and -log(1 - y) <= y / (1 - y); sum_{n > P} 1/(n^2 - 1) <= 1/P
            Self::PhiStar => -m / p,
            Self::Theta8 => {
                let a = 20f64.sqrt();
                if p > a + 1.0 {
                    -m * 5f64.sqrt() * ((p + a) / (p - a)).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::Divisor => f64::NEG_INFINITY,
        }
    }
}

fn reject_divergent(spec: MultiplicativeSpec) -> Result<()> {
    if spec.bound().is_none() {
        return Err(Error::InvalidArgument(format!("{spec:?} has a divergent average")));
    }
    Ok(())
}

fn ideals_per_norm(ctx: &FieldContext) -> f64 {
    match ctx.mode {
        FieldMode::Rational => 1.0,
        FieldMode::Quadratic => 2.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bracketed {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// `A(theta)` as the Euler product over prime ideals of norm at most `cutoff`.
pub fn average_euler(ctx: &FieldContext, spec: MultiplicativeSpec, cutoff: u64) -> Result<Bracketed> {
    reject_divergent(spec)?;
    let mut v = 1.0;
    for q in ctx.prime_ideals_up_to(cutoff) {
        v *= spec.local_average(1.0 / q.norm() as f64);
    }
    let lo = v * spec.tail_log_lower(cutoff, ideals_per_norm(ctx)).exp();
    Ok(Bracketed { value: v, lo: lo.min(v), hi: v })
}

/// `A(theta) = sum (theta * mu)(a) / Na` truncated at `Na <= t`, for one-variable rules.
pub fn average_mobius(ctx: &FieldContext, spec: MultiplicativeSpec, t: u64) -> Result<f64> {
    reject_divergent(spec)?;
    if !spec.one_variable() {
        return Err(Error::InvalidArgument("the convolution sum needs a one-variable rule".into()));
    }
    let mut s = 0.0;
    ctx.visit_ideals(t, |v| {
        let g: f64 = v
            .factors
            .iter()
            .map(|&(q, e)| spec.local(q, e) - spec.local(q, e - 1))
            .product();
        s += g / v.norm as f64;
    });
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassSum {
    pub class: usize,
    pub t: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / t`
    pub deviation: f64,
    /// `max |lhs(s) - rhs(s)| / t` over `t/2 <= s <= t`
    pub window_deviation: f64,
    /// `lhs / rhs`
    pub ratio: f64,
}

fn class_sums(ctx: &FieldContext, spec: MultiplicativeSpec, t: u64, average: f64) -> Vec<ClassSum> {
    let h = ctx.class_number;
    let mut by_norm = vec![0.0; h * (t as usize + 1)];
    ctx.visit_ideals(t, |v| by_norm[v.norm as usize * h + v.class] += spec.value(v.factors));
    let slope = ctx.rho * average;
    (0..h)
        .map(|class| {
            let (mut l, mut window) = (0.0, 0.0f64);
            for n in 1..=t {
                l += by_norm[n as usize * h + class];
                if 2 * n >= t {
                    // the sum jumps at n; compare both sides of the jump
                    let r = slope * n as f64;
                    let before = l - by_norm[n as usize * h + class];
                    window = window.max((l - r).abs()).max((before - r).abs());
                }
            }
            let rhs = slope * t as f64;
            let tf = t as f64;
            ClassSum { class, t, lhs: l, rhs, deviation: (l - rhs).abs() / tf, window_deviation: window / tf, ratio: l / rhs }
        })
        .collect()
}

/// Ideals of norm at most `t` in each class, against `rho_K t`.
pub fn ideal_density_check(ctx: &FieldContext, t: u64) -> Vec<ClassSum> {
    class_sums(ctx, MultiplicativeSpec::Ones, t, 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AverageReport {
    pub spec: MultiplicativeSpec,
    pub average: Bracketed,
    pub rows: Vec<ClassSum>,
    /// `log(w(4t) / w(t)) / log 4` with `w` the largest window deviation over classes
    pub decay_exponent: Option<f64>,
}

/// `sum_{a in class, Na <= t} theta(a)` against `rho_K A(theta) t`, at `t` and `4t`.
pub fn average_value_check(ctx: &FieldContext, spec: MultiplicativeSpec, t: u64, cutoff: u64) -> Result<AverageReport> {
    reject_divergent(spec)?;
    if !spec.one_variable() {
        return Err(Error::InvalidArgument("class sums need a one-variable rule".into()));
    }
    let average = if spec == MultiplicativeSpec::Ones {
        Bracketed { value: 1.0, lo: 1.0, hi: 1.0 }
    } else {
        average_euler(ctx, spec, cutoff)?
    };
    let mut rows = class_sums(ctx, spec, t, average.value);
    let wide = class_sums(ctx, spec, 4 * t, average.value);
    let worst = |r: &[ClassSum]| r.iter().map(|c| c.window_deviation).fold(0.0, f64::max);
    let (d1, d2) = (worst(&rows), worst(&wide));
    let decay_exponent = (d1 > 0.0 && d2 > 0.0).then(|| (d2 / d1).ln() / 4f64.ln());
    rows.extend(wide);
    Ok(AverageReport { spec, average, rows, decay_exponent })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaSumRow {
    pub c: u32,
    pub t: u64,
    pub sum: f64,
    /// `sum / (t log(t + 2)^c)`
    pub ratio: f64,
}

/// `sum_{Na <= t} (C + 1)^omega(a)` normalized by `t log(t + 2)^C`.
pub fn omega_sum_report(ctx: &FieldContext, c: u32, ts: &[u64]) -> Vec<OmegaSumRow> {
    ts.iter()
        .map(|&t| {
            let mut sum = 0.0;
            ctx.visit_ideals(t, |v| sum += f64::from(c + 1).powi(v.factors.len() as i32));
            let ratio = sum / (t as f64 * ((t + 2) as f64).ln().powi(c as i32));
            OmegaSumRow { c, t, sum, ratio }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DavenportRow {
    pub norm: u64,
    pub radius: u32,
    pub count: u64,
    pub main: f64,
    /// `|count - main| / (R / sqrt(Na) + 1)`
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DavenportSweep {
    pub rows: Vec<DavenportRow>,
    /// largest normalized error over the sweep
    pub fitted_c: f64,
    /// largest normalized error at each radius
    pub per_radius: Vec<(u32, f64)>,
}

impl DavenportSweep {
    /// Ratio between the largest and smallest per-radius constant.
    pub fn spread(&self) -> f64 {
        let v = self.per_radius.iter().map(|p| p.1);
        v.clone().fold(0.0, f64::max) / v.fold(f64::INFINITY, f64::min)
    }
}

/// Points of random integral ideals in discs `|z - z0| <= R` with random
/// centers, against the main term `2 pi R^2 / (sqrt|D| Na)`.
pub fn davenport_sweep(ctx: &FieldContext, ideals: usize, max_norm: u64, radii: &[u32], seed: u64) -> Result<DavenportSweep> {
    let pool = ctx.enumerate_ideals(max_norm);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for _ in 0..ideals {
        let ideal = pool[rng.gen_range(0..pool.len())];
        let norm = ctx.norm(&ideal).to_integer() as u64;
        let lat = ideal_lattice(ctx, &ideal, &KElem::zero())?;
        let center = KElem::new(AlgInt::new(rng.gen_range(-60..60), rng.gen_range(-60..60)), 60);
        for &r in radii {
            let count = lat.count_in_disc(ctx, &center, Rational::from_integer(i128::from(r) * i128::from(r)));
            let main = davenport_main_term(ctx, PI * f64::from(r).powi(2), &ideal);
            let normalized = (count as f64 - main).abs() / (f64::from(r) / (norm as f64).sqrt() + 1.0);
            rows.push(DavenportRow { norm, radius: r, count, main, normalized });
        }
    }
    let per_radius: Vec<(u32, f64)> = radii
        .iter()
        .map(|&r| (r, rows.iter().filter(|w| w.radius == r).map(|w| w.normalized).fold(0.0, f64::max)))
        .collect();
    let fitted_c = per_radius.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(DavenportSweep { rows, fitted_c, per_radius })
}

/// `1 / zeta_K(2)` for the fields with a closed form used in tests: `Q` and `Q(i)`.
pub fn inverse_zeta2(ctx: &FieldContext) -> Option<f64> {
    const CATALAN: f64 = 0.915_965_594_177_219;
    match (ctx.mode, ctx.d) {
        (FieldMode::Rational, _) => Some(6.0 / (PI * PI)),
        (FieldMode::Quadratic, -1) => Some(6.0 / (PI * PI * CATALAN)),
        _ => None,
    }
}
