//! Enumeration of integral ideals of bounded norm.
//!
//! Ideals are generated as products of prime powers by a depth-first walk
//! over the primes sorted by norm, so every ideal is produced exactly once
//! together with its factorization and class.

use super::ideal::FracIdeal;
use super::primes::PrimeIdeal;
use super::FieldContext;
use crate::arith::primes_up_to;

/// One visited ideal: its norm, class index, and factorization as `(N p, e)`.
#[derive(Debug)]
pub struct IdealVisit<'a> {
    pub norm: u64,
    pub class: usize,
    pub factors: &'a [(u64, u32)],
}

impl FieldContext {
    /// All prime ideals of norm at most `t`, sorted by norm.
    pub fn prime_ideals_up_to(&self, t: u64) -> Vec<PrimeIdeal> {
        let mut out: Vec<PrimeIdeal> = primes_up_to(t)
            .into_iter()
            .flat_map(|p| self.split_prime(p))
            .filter(|q| q.norm() <= t)
            .collect();
        out.sort_by_key(|q| (q.norm(), q.ideal));
        out
    }

    /// Calls `f` once for every integral ideal with `N <= t`, without
    /// materializing the ideals.
    pub fn visit_ideals<F: FnMut(&IdealVisit)>(&self, t: u64, mut f: F) {
        if t == 0 {
            return;
        }
        let primes = self.prime_ideals_up_to(t);
        let norms: Vec<u64> = primes.iter().map(|q| q.norm()).collect();
        let classes: Vec<usize> =
            primes.iter().map(|q| self.class_index(&q.ideal).expect("prime ideals are nonzero")).collect();
        let mut stack = Vec::new();
        self.visit_rec(&norms, &classes, 0, 1, 0, t, &mut stack, &mut f);
    }

    #[allow(clippy::too_many_arguments)]
    fn visit_rec<F: FnMut(&IdealVisit)>(
        &self,
        norms: &[u64],
        classes: &[usize],
        start: usize,
        norm: u64,
        class: usize,
        t: u64,
        stack: &mut Vec<(u64, u32)>,
        f: &mut F,
    ) {
        f(&IdealVisit { norm, class, factors: stack });
        for i in start..norms.len() {
            let q = norms[i];
            if norm.saturating_mul(q) > t {
                break;
            }
            let (mut m, mut c, mut e) = (norm * q, self.class_mul(class, classes[i]), 1u32);
            loop {
                stack.push((q, e));
                self.visit_rec(norms, classes, i + 1, m, c, t, stack, f);
                stack.pop();
                match m.checked_mul(q) {
                    Some(next) if next <= t => {
                        m = next;
                        c = self.class_mul(c, classes[i]);
                        e += 1;
                    }
                    _ => break,
                }
            }
        }
    }

    /// All integral ideals with `N <= t`, sorted by norm then basis.
    pub fn enumerate_ideals(&self, t: u64) -> Vec<FracIdeal> {
        if t == 0 {
            return Vec::new();
        }
        let primes = self.prime_ideals_up_to(t);
        let mut out = Vec::new();
        self.enum_rec(&primes, 0, FracIdeal::UNIT, 1, t, &mut out);
        out.sort_by_key(|i| (i.a * i.c, *i));
        out
    }

    fn enum_rec(&self, primes: &[PrimeIdeal], start: usize, cur: FracIdeal, norm: u64, t: u64, out: &mut Vec<FracIdeal>) {
        out.push(cur);
        for (i, q) in primes.iter().enumerate().skip(start) {
            let qn = q.norm();
            if norm * qn > t {
                break;
            }
            let (mut m, mut ideal) = (norm * qn, self.mul(&cur, &q.ideal));
            while m <= t {
                self.enum_rec(primes, i + 1, ideal, m, t, out);
                m *= qn;
                ideal = self.mul(&ideal, &q.ideal);
            }
        }
    }

    pub fn enumerate_ideals_in_class(&self, t: u64, class: usize) -> Vec<FracIdeal> {
        self.enumerate_ideals(t)
            .into_iter()
            .filter(|i| self.class_index(i).expect("nonzero") == class)
            .collect()
    }

    /// Number of integral ideals with `N <= t` in each class.
    pub fn ideal_counts_by_class(&self, t: u64) -> Vec<u64> {
        let mut counts = vec![0u64; self.class_number];
        self.visit_ideals(t, |v| counts[v.class] += 1);
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldMode;

    /// Integral ideals by their Hermite shape `c * (a', b' + w)` with
    /// `a' | N(b' + w)`; quadratic in `t`, for small cross-checks only.
    fn ideals_by_shape(k: &FieldContext, t: i128) -> Vec<FracIdeal> {
        let mut out = Vec::new();
        let mut c = 1;
        while c * c <= t {
            for a in 1..=t / (c * c) {
                for b in 0..a {
                    let nb = k.ring.norm(&crate::field::AlgInt::new(b, 1));
                    if nb % a == 0 {
                        out.push(FracIdeal { den: 1, a: a * c, b: b * c, c });
                    }
                }
            }
            c += 1;
        }
        out.sort_by_key(|i| (i.a * i.c, *i));
        out
    }

    #[test]
    fn small_gaussian_list() {
        let k = FieldContext::quadratic(-1).unwrap();
        let norms: Vec<_> = k.enumerate_ideals(5).iter().map(|i| k.norm(i).to_integer()).collect();
        assert_eq!(norms, vec![1, 2, 4, 5, 5]);
        assert!(k.enumerate_ideals(0).is_empty());
    }

    #[test]
    fn matches_hermite_shapes() {
        for d in [-1i64, -2, -3, -5, -15, -23] {
            let k = FieldContext::quadratic(d).unwrap();
            assert_eq!(k.enumerate_ideals(150), ideals_by_shape(&k, 150), "d={d}");
        }
    }

    #[test]
    fn gaussian_count_is_sum_of_two_squares_count() {
        // #{ideals of norm n} = r2(n)/4 in Z[i]
        let k = FieldContext::quadratic(-1).unwrap();
        let t = 5000i64;
        let mut r2 = 0i64;
        let m = (t as f64).sqrt() as i64 + 1;
        for x in -m..=m {
            for y in -m..=m {
                let n = x * x + y * y;
                if 1 <= n && n <= t {
                    r2 += 1;
                }
            }
        }
        assert_eq!(k.enumerate_ideals(t as u64).len() as i64, r2 / 4);
        assert_eq!(k.ideal_counts_by_class(t as u64), vec![(r2 / 4) as u64]);
    }

    #[test]
    fn visit_agrees_with_materialized_list() {
        let k = FieldContext::quadratic(-5).unwrap();
        let list = k.enumerate_ideals(400);
        let mut by_class = vec![0u64; 2];
        for i in &list {
            by_class[k.class_index(i).unwrap()] += 1;
        }
        assert_eq!(k.ideal_counts_by_class(400), by_class);
        assert_eq!(k.enumerate_ideals_in_class(400, 1).len() as u64, by_class[1]);
        let mut prev = 0;
        for t in [1, 2, 10, 50, 200] {
            let n = k.enumerate_ideals(t).len();
            assert!(n >= prev);
            prev = n;
        }
    }

    #[test]
    fn rational_ideals_are_positive_integers() {
        let q = FieldContext::rational();
        assert_eq!(q.mode, FieldMode::Rational);
        let list = q.enumerate_ideals(30);
        assert_eq!(list.len(), 30);
        assert_eq!(list[5], q.int_ideal(6));
    }
}
