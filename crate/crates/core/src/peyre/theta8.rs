//! The local factor `theta_8` of the first summation, and its average.

use super::euler::local_factor_poly;
use crate::poly::Poly;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaValue {
    One,
    /// `1 - 1/Np`
    OneMinusX,
    /// `1 - 2/Np`
    OneMinusTwoX,
    Zero,
}

impl ThetaValue {
    /// As a polynomial in `x = 1/Np`.
    pub fn poly(self) -> Poly<Rational> {
        let one = Rational::from_integer(1);
        match self {
            ThetaValue::One => Poly::new(vec![one]),
            ThetaValue::OneMinusX => Poly::new(vec![one, -one]),
            ThetaValue::OneMinusTwoX => Poly::new(vec![one, Rational::from_integer(-2)]),
            ThetaValue::Zero => Poly::new(vec![]),
        }
    }
}

/// `theta_{8,p}(J)` for `J` a subset of `{1, ..., 7}` (the set of `j` with `p | I_j`).
pub fn theta8_value(j: &[usize]) -> ThetaValue {
    let mut s = j.to_vec();
    s.sort_unstable();
    s.dedup();
    match s.as_slice() {
        [] | [5] | [6] | [7] => ThetaValue::One,
        [1] | [3] | [4] | [1, 2] | [1, 4] | [2, 3] | [2, 5] | [3, 6] | [4, 7] => ThetaValue::OneMinusX,
        [2] => ThetaValue::OneMinusTwoX,
        _ => ThetaValue::Zero,
    }
}

/// `sum over L in {1..7} of (1 - x)^(7 - |L|) x^|L| theta_8(L)`.
pub fn theta8_average() -> Poly<Rational> {
    let one = Poly::constant(Rational::from_integer(1));
    let x = Poly::<Rational>::x();
    let one_minus_x = &one - &x;
    let mut total = Poly::new(vec![]);
    for mask in 0u32..128 {
        let l: Vec<usize> = (0..7).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        let k = l.len() as u32;
        let term = &(&one_minus_x.pow(7 - k) * &x.pow(k)) * &theta8_value(&l).poly();
        total = &total + &term;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub average: Poly<Rational>,
    pub target: Poly<Rational>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.average == self.target
    }
}

/// Compares the `theta_8` average with `(1 - x)^6 (1 + 6x + x^2)`, exactly.
pub fn theta8_average_identity() -> IdentityReport {
    IdentityReport { average: theta8_average(), target: local_factor_poly() }
}
