use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// `O_K = Z[w]` with `w^2 = t*w + n`. The rational integers use `t = n = 0`
/// and elements with `b = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadRing<T> {
    pub t: T,
    pub n: T,
}

/// `a + b*w`, generic over the integer type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadInt<T> {
    pub a: T,
    pub b: T,
}

impl<T> QuadInt<T> {
    pub const fn new(a: T, b: T) -> Self {
        Self { a, b }
    }
}

impl<T: Integer + Signed + Clone> QuadInt<T> {
    pub fn from_int(a: T) -> Self {
        Self { a, b: T::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.a.clone() * k.clone(), self.b.clone() * k.clone())
    }
}

impl<T: Integer + Signed + Clone> QuadRing<T> {
    pub fn mul(&self, x: &QuadInt<T>, y: &QuadInt<T>) -> QuadInt<T> {
        let bd = x.b.clone() * y.b.clone();
        QuadInt::new(
            x.a.clone() * y.a.clone() + bd.clone() * self.n.clone(),
            x.a.clone() * y.b.clone() + x.b.clone() * y.a.clone() + bd * self.t.clone(),
        )
    }

    /// Field norm `a^2 + t*a*b - n*b^2`; the squared complex modulus.
    pub fn norm(&self, x: &QuadInt<T>) -> T {
        x.a.clone() * x.a.clone() + self.t.clone() * x.a.clone() * x.b.clone()
            - self.n.clone() * x.b.clone() * x.b.clone()
    }

    /// Galois conjugate, `w -> t - w`.
    pub fn conj(&self, x: &QuadInt<T>) -> QuadInt<T> {
        QuadInt::new(x.a.clone() + x.b.clone() * self.t.clone(), -x.b.clone())
    }

    pub fn pow(&self, x: &QuadInt<T>, e: u32) -> QuadInt<T> {
        let mut acc = QuadInt::from_int(T::one());
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Exact quotient `x / y` if it lies in `O_K`.
    pub fn div_exact(&self, x: &QuadInt<T>, y: &QuadInt<T>) -> Option<QuadInt<T>> {
        let nrm = self.norm(y);
        if nrm.is_zero() {
            return None;
        }
        let p = self.mul(x, &self.conj(y));
        if (p.a.clone() % nrm.clone()).is_zero() && (p.b.clone() % nrm.clone()).is_zero() {
            Some(QuadInt::new(p.a / nrm.clone(), p.b / nrm))
        } else {
            None
        }
    }
}

impl<T: Add<Output = T>> Add for QuadInt<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.a + o.a, self.b + o.b)
    }
}

impl<T: Sub<Output = T>> Sub for QuadInt<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.a - o.a, self.b - o.b)
    }
}

impl<T: Neg<Output = T>> Neg for QuadInt<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl<T: fmt::Display + Zero + PartialOrd + Clone + Neg<Output = T>> fmt::Display for QuadInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < T::zero() {
            write!(f, "{}-{}*w", self.a, -self.b.clone())
        } else {
            write!(f, "{}+{}*w", self.a, self.b)
        }
    }
}

pub type AlgInt = QuadInt<i128>;

/// Element `(a + b*w) / den` of `K`, kept reduced with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KElem {
    pub num: AlgInt,
    pub den: i128,
}

impl KElem {
    pub fn new(num: AlgInt, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = num.a.gcd(&num.b).gcd(&den);
        let s = if den < 0 { -g } else { g };
        Self { num: AlgInt::new(num.a / s, num.b / s), den: den / s }
    }

    pub fn int(x: AlgInt) -> Self {
        Self { num: x, den: 1 }
    }

    pub fn from_i128(a: i128) -> Self {
        Self::int(AlgInt::new(a, 0))
    }

    pub fn zero() -> Self {
        Self::from_i128(0)
    }

    pub fn one() -> Self {
        Self::from_i128(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let l = self.den.lcm(&o.den);
        let x = self.num.scale(&(l / self.den)) + o.num.scale(&(l / o.den));
        Self::new(x, l)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: -self.num, den: self.den }
    }

    pub fn mul(&self, o: &Self, ring: &QuadRing<i128>) -> Self {
        Self::new(ring.mul(&self.num, &o.num), self.den * o.den)
    }

    pub fn inv(&self, ring: &QuadRing<i128>) -> Option<Self> {
        let nrm = ring.norm(&self.num);
        if nrm == 0 {
            return None;
        }
        Some(Self::new(ring.conj(&self.num).scale(&self.den), nrm))
    }

    pub fn div(&self, o: &Self, ring: &QuadRing<i128>) -> Option<Self> {
        o.inv(ring).map(|i| self.mul(&i, ring))
    }

    /// Norm as an exact fraction `(numerator, denominator)`.
    pub fn norm(&self, ring: &QuadRing<i128>) -> (i128, i128) {
        (ring.norm(&self.num), self.den * self.den)
    }
}

impl fmt::Display for KElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

/// Complex embedding of `w`: `(t + sqrt(Delta)) / 2` with `Delta = t^2 + 4n`.
pub fn embed_w(ring: &QuadRing<i128>) -> Complex64 {
    let disc = ring.t * ring.t + 4 * ring.n;
    Complex64::new(ring.t as f64 / 2.0, ((-disc) as f64).sqrt() / 2.0)
}

pub fn embed(x: &KElem, w: Complex64) -> Complex64 {
    (Complex64::new(x.num.a as f64, 0.0) + w * x.num.b as f64) / x.den as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAUSS: QuadRing<i128> = QuadRing { t: 0, n: -1 };
    const EISEN: QuadRing<i128> = QuadRing { t: 1, n: -1 };

    #[test]
    fn norm_is_squared_modulus() {
        for ring in [GAUSS, EISEN, QuadRing { t: 0, n: -5 }] {
            let w = embed_w(&ring);
            for a in -4..=4 {
                for b in -4..=4 {
                    let x = AlgInt::new(a, b);
                    let z = embed(&KElem::int(x), w);
                    assert!((z.norm_sqr() - ring.norm(&x) as f64).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn multiplication_is_multiplicative_on_norms() {
        let x = AlgInt::new(3, -2);
        let y = AlgInt::new(-1, 5);
        for ring in [GAUSS, EISEN] {
            assert_eq!(ring.norm(&ring.mul(&x, &y)), ring.norm(&x) * ring.norm(&y));
        }
    }

    #[test]
    fn generic_over_bigint() {
        use num_bigint::BigInt;
        let ring: QuadRing<BigInt> = QuadRing { t: BigInt::from(0), n: BigInt::from(-1) };
        let x = QuadInt::new(BigInt::from(1), BigInt::from(1));
        assert_eq!(ring.norm(&x), BigInt::from(2));
        let y = ring.pow(&x, 2);
        assert_eq!(y, QuadInt::new(BigInt::from(0), BigInt::from(2)));
    }

    #[test]
    fn kelem_reduction_and_inverse() {
        let x = KElem::new(AlgInt::new(4, 6), -2);
        assert_eq!(x, KElem::int(AlgInt::new(-2, -3)));
        let y = KElem::int(AlgInt::new(1, 1));
        let i = y.inv(&GAUSS).unwrap();
        assert_eq!(y.mul(&i, &GAUSS), KElem::one());
        assert_eq!(GAUSS.div_exact(&AlgInt::new(2, 0), &AlgInt::new(1, 1)), Some(AlgInt::new(1, -1)));
        assert_eq!(GAUSS.div_exact(&AlgInt::new(1, 0), &AlgInt::new(1, 1)), None);
    }
}
