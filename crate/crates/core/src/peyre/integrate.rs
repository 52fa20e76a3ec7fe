//! Adaptive Gauss-Kronrod quadrature and seeded parallel Monte Carlo.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Clone, Copy, Debug)]
pub struct Quadrature<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Quadrature<T> {
    pub fn new(rel_tol: f64) -> Self {
        Self { abs_tol: T::lit(1e-300), rel_tol: T::lit(rel_tol), max_intervals: 2000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Integral<T> {
    pub value: T,
    pub error: T,
    pub converged: bool,
    pub intervals: usize,
}

/// 15-point Kronrod estimate and its difference from the embedded 7-point Gauss rule.
fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let c = (a + b) * half;
    let h = (b - a) * half;
    let fc = f(c);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for i in 0..7 {
        let x = h * T::lit(XGK[i]);
        let s = f(c - x) + f(c + x);
        k = k + s * T::lit(WGK[i]);
        if i % 2 == 1 {
            g = g + s * T::lit(WG[i / 2]);
        }
    }
    (k * h, ((k - g) * h).abs())
}

struct Piece<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

impl<T: Real> PartialEq for Piece<T> {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl<T: Real> Eq for Piece<T> {}
impl<T: Real> PartialOrd for Piece<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Piece<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.partial_cmp(&o.error).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive integration of `f` over `[breaks[0], breaks[last]]`,
/// starting from the subintervals given by the sorted break points.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, breaks: &[T], q: &Quadrature<T>) -> Integral<T> {
    let mut heap = BinaryHeap::new();
    let (mut value, mut error) = (T::zero(), T::zero());
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk15(&mut f, w[0], w[1]);
        value = value + v;
        error = error + e;
        heap.push(Piece { a: w[0], b: w[1], value: v, error: e });
    }
    let tol = |v: T| q.abs_tol.max(q.rel_tol * v.abs());
    while error > tol(value) && heap.len() < q.max_intervals {
        let Some(p) = heap.pop() else { break };
        let m = (p.a + p.b) * T::lit(0.5);
        if m <= p.a || m >= p.b {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk15(&mut f, p.a, m);
        let (v2, e2) = gk15(&mut f, m, p.b);
        value = value - p.value + v1 + v2;
        error = error - p.error + e1 + e2;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
    }
    // resum to shed accumulated rounding
    let value = heap.iter().map(|p| p.value).sum();
    let error: T = heap.iter().map(|p| p.error).sum();
    Integral { value, error, converged: error <= tol(value), intervals: heap.len() }
}

/// Sorted, deduplicated break points inside `[a, b]`, including the ends.
pub fn breakpoints<T: Real>(a: T, b: T, inner: &[T]) -> Vec<T> {
    let mut v: Vec<T> = inner.iter().copied().filter(|x| x.is_finite() && *x > a && *x < b).collect();
    v.push(a);
    v.push(b);
    v.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    v.dedup();
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate<T> {
    pub mean: T,
    /// one standard error
    pub stderr: T,
    pub samples: u64,
}

/// Sample mean of `f` over independent draws. Worker `k` uses stream `k` of
/// the ChaCha generator seeded by `seed`, and partial sums are combined in
/// worker order, so the result depends only on `(samples, seed, workers)`.
pub fn mc_mean<T: Real, F: Fn(&mut ChaCha8Rng) -> T + Sync>(cfg: &McConfig, f: F) -> McEstimate<T> {
    let workers = cfg.workers.max(1) as u64;
    let parts: Vec<(T, T, u64)> = (0..workers)
        .into_par_iter()
        .map(|k| {
            let n = cfg.samples / workers + u64::from(k < cfg.samples % workers);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(k);
            let (mut s, mut s2) = (T::zero(), T::zero());
            for _ in 0..n {
                let v = f(&mut rng);
                s = s + v;
                s2 = s2 + v * v;
            }
            (s, s2, n)
        })
        .collect();
    let (s, s2, n) = parts.iter().fold((T::zero(), T::zero(), 0u64), |acc, p| (acc.0 + p.0, acc.1 + p.1, acc.2 + p.2));
    let nn = T::lit(n as f64);
    let mean = s / nn;
    let var = (s2 / nn - mean * mean).max(T::zero());
    McEstimate { mean, stderr: (var / nn).sqrt(), samples: n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn smooth_and_kinked_integrands() {
        let q = Quadrature::<f64>::new(1e-12);
        let r = integrate(|x: f64| x.exp(), &[0.0, 1.0], &q);
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-13 && r.converged);
        let r = integrate(|x: f64| x.abs().sqrt(), &[-1.0, 1.0], &q);
        assert!((r.value - 4.0 / 3.0).abs() < 1e-10, "{r:?}");
        let r = integrate(|x: f32| x * x, &[0.0, 3.0], &Quadrature::new(1e-6));
        assert!((r.value - 9.0).abs() < 1e-4);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = Quadrature { abs_tol: 0.0, rel_tol: 1e-15, max_intervals: 4 };
        let r = integrate(|x: f64| if x < 0.3 { 0.0 } else { 1.0 }, &[0.0, 1.0], &q);
        assert!(!r.converged);
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let cfg = McConfig { samples: 100_000, seed: 42, workers: 4 };
        let f = |r: &mut ChaCha8Rng| r.gen::<f64>();
        let a = mc_mean(&cfg, f);
        let b = mc_mean(&cfg, f);
        assert_eq!(a, b);
        assert!((a.mean - 0.5).abs() < 4.0 * a.stderr);
        let c = mc_mean(&McConfig { seed: 43, ..cfg }, f);
        assert_ne!(a.mean, c.mean);
    }
}
