//! The Euler product `prod_p (1 - 1/Np)^6 (1 + 6/Np + 1/Np^2)`.

use serde::Serialize;

use crate::arith::primes_up_to;
use crate::field::{FieldContext, FieldMode};
use crate::poly::Poly;
use crate::{Rational, Real};

/// `(1 - x)^6 (1 + 6x + x^2)` in `x = 1/Np`.
pub fn local_factor_poly() -> Poly<Rational> {
    let one = Rational::from_integer(1);
    let one_minus_x = Poly::new(vec![one, -one]);
    let quad = Poly::new(vec![one, Rational::from_integer(6), one]);
    &one_minus_x.pow(6) * &quad
}

pub fn local_factor<T: Real>(x: T) -> T {
    let y = T::one() - x;
    y.powi(6) * (T::one() + T::lit(6.0) * x + x * x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EulerProduct<T> {
    /// product over prime ideals of norm at most `cutoff`
    pub value: T,
    pub lower: T,
    pub upper: T,
    pub cutoff: u64,
}

impl<T: Real> EulerProduct<T> {
    pub fn contains(&self, other: &Self) -> bool {
        self.lower <= other.lower && other.upper <= self.upper
    }
}

/// Truncated product with a rigorous bracket for the full product.
///
/// Every local factor is at most 1, and `f(x) >= 1 - 20x^2 >= exp(-20x^2 / (1 - 20x^2))`
/// for `x <= 1/5`. At most `m` primes (`m = 2` over `K`, `1` over `Q`) have a
/// given norm `n`, so the omitted factors are bounded below by
/// `exp(-m * int_P^oo 20 / (t^2 - 20) dt)`.
pub fn euler_product<T: Real>(ctx: &FieldContext, cutoff: u64) -> EulerProduct<T> {
    let mut acc = T::one();
    for p in primes_up_to(cutoff) {
        for q in ctx.split_prime(p) {
            let n = q.norm();
            if n <= cutoff {
                acc = acc * local_factor(T::one() / T::lit(n as f64));
            }
        }
    }
    let m = match ctx.mode {
        FieldMode::Rational => T::one(),
        FieldMode::Quadratic => T::lit(2.0),
    };
    let p = T::lit(cutoff as f64);
    let a = T::lit(20.0).sqrt();
    let lower = if p > a + T::one() {
        // int_P^oo 20/(t^2 - 20) dt = sqrt(5) log((P + sqrt 20) / (P - sqrt 20))
        let tail = m * T::lit(5.0).sqrt() * ((p + a) / (p - a)).ln();
        acc * (-tail).exp()
    } else {
        T::zero()
    };
    EulerProduct { value: acc, lower, upper: acc, cutoff }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_at_two() {
        let f = local_factor_poly();
        assert_eq!(f.eval(&Rational::new(1, 2)), Rational::new(17, 256));
        let q = FieldContext::rational();
        let e = euler_product::<f64>(&q, 2);
        assert!((e.value - 17.0 / 256.0).abs() < 1e-15);
        assert_eq!(e.lower, 0.0);
    }

    #[test]
    fn gaussian_small_primes() {
        let k = FieldContext::quadratic(-1).unwrap();
        let e = euler_product::<f64>(&k, 5);
        let f = |n: f64| local_factor(1.0 / n);
        assert!((e.value - f(2.0) * f(5.0) * f(5.0)).abs() < 1e-15);
        // 3 is inert of norm 9, so it enters only from cutoff 9 on
        let e9 = euler_product::<f64>(&k, 9);
        assert!((e9.value - e.value * f(9.0)).abs() < 1e-15);
    }

    #[test]
    fn brackets_nest_and_converge() {
        for ctx in [FieldContext::rational(), FieldContext::quadratic(-1).unwrap()] {
            let mut prev: Option<EulerProduct<f64>> = None;
            for p in [10u64, 20, 40, 80, 160, 320, 640, 1280] {
                let e = euler_product::<f64>(&ctx, p);
                assert!(e.lower <= e.value && e.value <= e.upper);
                if let Some(pr) = prev {
                    assert!(pr.contains(&e), "P={p}");
                }
                prev = Some(e);
            }
        }
    }

    #[test]
    fn generic_in_the_scalar() {
        let q = FieldContext::rational();
        let a = euler_product::<f32>(&q, 100);
        let b = euler_product::<f64>(&q, 100);
        assert!((a.value as f64 - b.value).abs() < 1e-5);
    }
}
