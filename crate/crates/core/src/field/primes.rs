//! Prime splitting, ideal factorization and multiplicative functions on ideals.

use num_rational::Ratio;
use serde::Serialize;

use super::elem::AlgInt;
use super::ideal::FracIdeal;
use super::{FieldContext, FieldMode};
use crate::arith::{factor_with_bound, kronecker, sqrt_mod_prime};
use crate::error::{Error, Result};

/// Trial-division bound used when factoring ideal norms.
pub const DEFAULT_TRIAL_BOUND: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitType {
    /// The rational prime itself, over `Q`.
    Rational,
    Split,
    Inert,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub residue_degree: u32,
    pub ideal: FracIdeal,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_degree)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealFactorization {
    pub factors: Vec<(PrimeIdeal, u32)>,
}

impl IdealFactorization {
    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|f| f.1)
    }
}

impl FieldContext {
    pub fn split_type(&self, p: u64) -> SplitType {
        match self.mode {
            FieldMode::Rational => SplitType::Rational,
            FieldMode::Quadratic => match kronecker(self.disc as i128, p) {
                1 => SplitType::Split,
                -1 => SplitType::Inert,
                _ => SplitType::Ramified,
            },
        }
    }

    /// Norms of the primes above `p` (with multiplicity in the sense of
    /// distinct primes, not ramification).
    pub fn prime_norms_above(&self, p: u64) -> Vec<u64> {
        match self.split_type(p) {
            SplitType::Rational | SplitType::Ramified => vec![p],
            SplitType::Split => vec![p, p],
            SplitType::Inert => vec![p * p],
        }
    }

    /// Prime ideals above the rational prime `p`.
    pub fn split_prime(&self, p: u64) -> Vec<PrimeIdeal> {
        let pi = p as i128;
        match self.split_type(p) {
            SplitType::Rational => {
                vec![PrimeIdeal { p, residue_degree: 1, ideal: FracIdeal { den: 1, a: pi, b: 0, c: 1 } }]
            }
            SplitType::Inert => {
                vec![PrimeIdeal { p, residue_degree: 2, ideal: FracIdeal { den: 1, a: pi, b: 0, c: pi } }]
            }
            kind => {
                let roots = self.roots_of_min_poly(p);
                let mut out: Vec<PrimeIdeal> = roots
                    .into_iter()
                    .map(|r| PrimeIdeal {
                        p,
                        residue_degree: 1,
                        ideal: FracIdeal { den: 1, a: pi, b: (-(r as i128)).rem_euclid(pi), c: 1 },
                    })
                    .collect();
                out.sort();
                out.dedup();
                debug_assert_eq!(out.len(), if kind == SplitType::Split { 2 } else { 1 });
                out
            }
        }
    }

    /// Roots of `X^2 - tX - n` modulo `p`.
    fn roots_of_min_poly(&self, p: u64) -> Vec<u64> {
        let (t, n) = (self.ring.t, self.ring.n);
        let pi = p as i128;
        if p == 2 {
            return (0..2).filter(|&x: &i128| (x * x - t * x - n).rem_euclid(2) == 0).map(|x| x as u64).collect();
        }
        // X = (t +- sqrt(Delta)) / 2
        let s = sqrt_mod_prime(self.disc as i128, p).expect("split or ramified prime has a root") as i128;
        let inv2 = (pi + 1) / 2;
        let mut r: Vec<u64> = [s, -s]
            .iter()
            .map(|&sq| ((t + sq).rem_euclid(pi) * inv2).rem_euclid(pi) as u64)
            .collect();
        r.sort();
        r.dedup();
        r
    }

    /// `v_p(I)` for a nonzero fractional ideal.
    pub fn valuation(&self, prime: &PrimeIdeal, i: &FracIdeal) -> Result<i32> {
        if i.is_zero() {
            return Err(Error::ZeroIdeal("valuation"));
        }
        let numerator = FracIdeal { den: 1, ..*i };
        let den = self.int_ideal(i.den);
        Ok(self.valuation_integral(prime, &numerator)? as i32 - self.valuation_integral(prime, &den)? as i32)
    }

    fn valuation_integral(&self, prime: &PrimeIdeal, i: &FracIdeal) -> Result<u32> {
        let pinv = self.inv(&prime.ideal)?;
        let mut e = 0u32;
        let mut cur = *i;
        loop {
            let next = self.mul(&cur, &pinv);
            if !next.is_integral() {
                return Ok(e);
            }
            cur = next;
            e += 1;
        }
    }

    /// Prime factorization of a nonzero integral ideal.
    pub fn factor_ideal(&self, i: &FracIdeal) -> Result<IdealFactorization> {
        self.factor_ideal_with_bound(i, DEFAULT_TRIAL_BOUND)
    }

    pub fn factor_ideal_with_bound(&self, i: &FracIdeal, bound: u64) -> Result<IdealFactorization> {
        if i.is_zero() {
            return Err(Error::ZeroIdeal("factorization"));
        }
        if !i.is_integral() {
            return Err(Error::NotIntegral(i.to_string()));
        }
        let nrm = self.norm(i).to_integer() as u64;
        let ps = factor_with_bound(nrm, bound)
            .ok_or_else(|| Error::Internal(format!("could not factor norm {nrm} below trial bound {bound}")))?;
        let mut factors = Vec::new();
        for (p, _) in ps {
            for prime in self.split_prime(p) {
                let e = self.valuation_integral(&prime, i)?;
                if e > 0 {
                    factors.push((prime, e));
                }
            }
        }
        Ok(IdealFactorization { factors })
    }

    pub fn mobius(&self, i: &FracIdeal) -> Result<i32> {
        let f = self.factor_ideal(i)?;
        if f.exponents().any(|e| e > 1) {
            return Ok(0);
        }
        Ok(if f.factors.len() % 2 == 0 { 1 } else { -1 })
    }

    /// `phi_K(I) = |(O_K / I)^x|`.
    pub fn euler_phi(&self, i: &FracIdeal) -> Result<u64> {
        let f = self.factor_ideal(i)?;
        Ok(f.factors.iter().map(|(p, e)| p.norm().pow(e - 1) * (p.norm() - 1)).product())
    }

    /// `phi_K(I) / N(I) = prod_{p | I} (1 - 1/Np)`.
    pub fn phi_star(&self, i: &FracIdeal) -> Result<Ratio<i128>> {
        let f = self.factor_ideal(i)?;
        Ok(f.factors.iter().fold(Ratio::from_integer(1), |acc, (p, _)| {
            acc * (Ratio::from_integer(1) - Ratio::new(1, p.norm() as i128))
        }))
    }

    /// Number of distinct prime divisors.
    pub fn omega_count(&self, i: &FracIdeal) -> Result<u32> {
        Ok(self.factor_ideal(i)?.factors.len() as u32)
    }

    /// Number of divisors.
    pub fn tau(&self, i: &FracIdeal) -> Result<u64> {
        Ok(self.factor_ideal(i)?.exponents().map(|e| e as u64 + 1).product())
    }

    /// Product of the factorization, for checking.
    pub fn expand(&self, f: &IdealFactorization) -> FracIdeal {
        f.factors.iter().fold(FracIdeal::UNIT, |acc, (p, e)| {
            self.mul(&acc, &self.pow(&p.ideal, *e as i32).expect("positive power"))
        })
    }

    /// Rational integer `n` as an ideal.
    pub fn int_ideal(&self, n: i128) -> FracIdeal {
        self.principal_int(&AlgInt::new(n, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_up_to;

    fn gauss() -> FieldContext {
        FieldContext::quadratic(-1).unwrap()
    }

    #[test]
    fn gaussian_splitting() {
        let k = gauss();
        let five = k.split_prime(5);
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|p| p.norm() == 5));
        let two_plus_i = k.principal_int(&AlgInt::new(2, 1));
        let two_minus_i = k.principal_int(&AlgInt::new(2, -1));
        let ideals: Vec<_> = five.iter().map(|p| p.ideal).collect();
        assert!(ideals.contains(&two_plus_i) && ideals.contains(&two_minus_i));
        let three = k.split_prime(3);
        assert_eq!((three.len(), three[0].norm()), (1, 9));
        let two = k.split_prime(2);
        assert_eq!((two.len(), two[0].norm()), (1, 2));
        assert_eq!(k.split_type(2), SplitType::Ramified);
    }

    #[test]
    fn products_over_primes_recover_p() {
        for d in [-1i64, -2, -3, -5, -7, -23, -15] {
            let k = FieldContext::quadratic(d).unwrap();
            for p in primes_up_to(150) {
                let ps = k.split_prime(p);
                let expect = k.int_ideal(p as i128);
                let prod = match k.split_type(p) {
                    SplitType::Ramified => k.mul(&ps[0].ideal, &ps[0].ideal),
                    _ => ps.iter().fold(FracIdeal::UNIT, |a, q| k.mul(&a, &q.ideal)),
                };
                assert_eq!(prod, expect, "d={d} p={p}");
                let kr = kronecker(k.disc as i128, p);
                let st = k.split_type(p);
                assert_eq!(kr == 1, st == SplitType::Split);
                assert_eq!(kr == -1, st == SplitType::Inert);
            }
        }
    }

    #[test]
    fn arithmetic_function_examples() {
        let k = gauss();
        let p2 = k.split_prime(2)[0].ideal;
        assert_eq!(k.mobius(&k.mul(&p2, &p2)).unwrap(), 0);
        let q = k.principal_int(&AlgInt::new(2, 1));
        assert_eq!(k.phi_star(&q).unwrap(), Ratio::new(4, 5));
        // (6) = p2^2 p3, divisors by exponent tuples: 3 * 2
        let six = k.int_ideal(6);
        let f = k.factor_ideal(&six).unwrap();
        let mut exps: Vec<u32> = f.exponents().collect();
        exps.sort();
        assert_eq!(exps, vec![1, 2]);
        assert_eq!(k.tau(&six).unwrap(), 6);
        assert_eq!(k.expand(&f), six);
        assert!(k.mobius(&FracIdeal::ZERO).is_err());
    }

    #[test]
    fn tau_of_six_by_divisor_enumeration() {
        // independent count: all ideals of norm dividing 36 that divide (6)
        let k = gauss();
        let six = k.int_ideal(6);
        let mut count = 0;
        for i in k.enumerate_ideals(36) {
            if k.divides(&i, &six) {
                count += 1;
            }
        }
        assert_eq!(count, k.tau(&six).unwrap());
    }

    #[test]
    fn multiplicativity_on_coprime_pairs() {
        let k = FieldContext::quadratic(-5).unwrap();
        let ideals = k.enumerate_ideals(60);
        let mut checked = 0;
        for i in ideals.iter().step_by(3) {
            for j in ideals.iter().step_by(5) {
                if k.sum(i, j) != FracIdeal::UNIT {
                    continue;
                }
                let ij = k.mul(i, j);
                assert_eq!(k.mobius(&ij).unwrap(), k.mobius(i).unwrap() * k.mobius(j).unwrap());
                assert_eq!(k.euler_phi(&ij).unwrap(), k.euler_phi(i).unwrap() * k.euler_phi(j).unwrap());
                assert_eq!(k.tau(&ij).unwrap(), k.tau(i).unwrap() * k.tau(j).unwrap());
                assert_eq!(k.omega_count(&ij).unwrap(), k.omega_count(i).unwrap() + k.omega_count(j).unwrap());
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn rational_mode_factoring() {
        let q = FieldContext::rational();
        let i = q.int_ideal(-360);
        assert_eq!(q.norm(&i), 360.into());
        assert_eq!(q.tau(&i).unwrap(), 24);
        assert_eq!(q.euler_phi(&i).unwrap(), 96);
        assert_eq!(q.mobius(&q.int_ideal(30)).unwrap(), -1);
    }
}
