//! Dense univariate polynomials over any commutative ring.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Coefficients from the constant term up, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Zero + One> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &T) -> T
    where
        T: Mul<Output = T> + Add<Output = T>,
    {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn pow(&self, e: u32) -> Self
    where
        T: Mul<Output = T> + Add<Output = T>,
    {
        (0..e).fold(Self::constant(T::one()), |acc, _| &acc * self)
    }

    pub fn map<U: Clone + Zero + One>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Clone + Zero + One + Add<Output = T>> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, o: Self) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<T: Clone + Zero + One + Neg<Output = T>> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().cloned().map(Neg::neg).collect())
    }
}

impl<T: Clone + Zero + One + Sub<Output = T>> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, o: Self) -> Poly<T> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, o: Self) -> Poly<T> {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Clone + Zero + One + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn binomial_expansion() {
        let one_minus_x = &Poly::constant(1i64) - &Poly::x();
        let p = one_minus_x.pow(6);
        assert_eq!(p.coeffs(), &[1, -6, 15, -20, 15, -6, 1]);
        assert_eq!(p.eval(&1), 0);
        assert_eq!(p.degree(), Some(6));
    }

    #[test]
    fn rational_coefficients_and_cancellation() {
        let half = Poly::constant(Rational::new(1, 2));
        let x = Poly::<Rational>::x();
        let p = &(&x + &half) - &x;
        assert_eq!(p, half);
        assert_eq!((&x - &x).degree(), None);
        assert_eq!((&x * &x).eval(&Rational::new(2, 3)), Rational::new(4, 9));
    }
}
