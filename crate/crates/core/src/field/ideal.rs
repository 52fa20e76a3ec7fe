use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::elem::{AlgInt, KElem};
use super::{FieldContext, FieldMode};
use crate::arith::{ext_gcd, gcd};
use crate::error::{Error, Result};

/// Fractional ideal `(1/den) * (Z*a + Z*(b + c*w))` in Hermite normal form:
/// `a, c > 0`, `c | a`, `c | b`, `0 <= b < a`, `gcd(den, c) = 1`.
///
/// Over the rationals the ideal is `(a/den) Z` and `b = 0`, `c = 1`. The zero
/// ideal is `a = b = c = 0`, `den = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FracIdeal {
    pub den: i128,
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl FracIdeal {
    pub const UNIT: FracIdeal = FracIdeal { den: 1, a: 1, b: 0, c: 1 };
    pub const ZERO: FracIdeal = FracIdeal { den: 1, a: 0, b: 0, c: 0 };

    pub fn is_zero(&self) -> bool {
        self.a == 0
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::UNIT
    }

    /// Z-basis of the integral ideal `den * I`, as `(x, y)` coordinates in `1, w`.
    pub fn basis(&self) -> [(i128, i128); 2] {
        [(self.a, 0), (self.b, self.c)]
    }
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; [{},{};0,{}])", self.den, self.a, self.b, self.c)
    }
}

impl std::str::FromStr for FracIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("ideal `{s}`, expected `(den; [a,b;0,c])`"));
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (den, mat) = inner.split_once(';').ok_or_else(bad)?;
        let mat = mat.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let (top, bottom) = mat.split_once(';').ok_or_else(bad)?;
        let (a, b) = top.split_once(',').ok_or_else(bad)?;
        let (zero, c) = bottom.split_once(',').ok_or_else(bad)?;
        let p = |x: &str| x.trim().parse::<i128>().map_err(|_| bad());
        if p(zero)? != 0 {
            return Err(bad());
        }
        Ok(FracIdeal { den: p(den)?, a: p(a)?, b: p(b)?, c: p(c)? })
    }
}

/// Hermite normal form `(a, b, c)` of the lattice spanned by `gens` in `Z^2`,
/// or `None` if the span has rank < 2.
pub fn hnf(gens: &[(i128, i128)]) -> Option<(i128, i128, i128)> {
    let mut pivot: Option<(i128, i128)> = None;
    let mut a = 0i128;
    for &(x, y) in gens {
        if y == 0 {
            a = gcd(a, x);
            continue;
        }
        match pivot {
            None => pivot = Some((x, y)),
            Some((px, py)) => {
                let (g, s, t) = ext_gcd(py, y);
                let new = (s * px + t * x, g);
                // the complementary combination has vanishing y
                let zx = (y / g) * px - (py / g) * x;
                a = gcd(a, zx);
                pivot = Some(new);
            }
        }
    }
    let (mut bx, mut c) = pivot?;
    if a == 0 {
        return None;
    }
    if c < 0 {
        c = -c;
        bx = -bx;
    }
    Some((a, bx.rem_euclid(a), c))
}

impl FieldContext {
    fn build_ideal(&self, den: i128, gens: &[(i128, i128)]) -> FracIdeal {
        match self.mode {
            FieldMode::Rational => {
                let a = gens.iter().fold(0, |g, &(x, _)| gcd(g, x));
                if a == 0 {
                    return FracIdeal::ZERO;
                }
                let g = gcd(a, den);
                let s = if den < 0 { -g } else { g };
                FracIdeal { den: den / s, a: a / g, b: 0, c: 1 }
            }
            FieldMode::Quadratic => {
                let Some((a, b, c)) = hnf(gens) else {
                    return FracIdeal::ZERO;
                };
                let g = gcd(c, den);
                let s = if den < 0 { -g } else { g };
                FracIdeal { den: den / s, a: a / g, b: (b / g).rem_euclid(a / g), c: c / g }
            }
        }
    }

    fn gens_of(&self, i: &FracIdeal) -> Vec<(i128, i128)> {
        match self.mode {
            FieldMode::Rational => vec![(i.a, 0)],
            FieldMode::Quadratic => i.basis().to_vec(),
        }
    }

    /// Ideal generated by the given field elements.
    pub fn ideal_from_elems(&self, elems: &[KElem]) -> FracIdeal {
        let den = elems.iter().fold(1i128, |l, e| l.lcm(&e.den));
        let w = AlgInt::new(0, 1);
        let mut gens = Vec::with_capacity(2 * elems.len());
        for e in elems {
            let x = e.num.scale(&(den / e.den));
            gens.push((x.a, x.b));
            if self.mode == FieldMode::Quadratic {
                let xw = self.ring.mul(&x, &w);
                gens.push((xw.a, xw.b));
            }
        }
        if gens.iter().all(|&(x, y)| x == 0 && y == 0) {
            return FracIdeal::ZERO;
        }
        self.build_ideal(den, &gens)
    }

    pub fn principal(&self, x: &KElem) -> FracIdeal {
        self.ideal_from_elems(std::slice::from_ref(x))
    }

    pub fn principal_int(&self, x: &AlgInt) -> FracIdeal {
        self.principal(&KElem::int(*x))
    }

    pub fn norm(&self, i: &FracIdeal) -> Ratio<i128> {
        match self.mode {
            FieldMode::Rational => Ratio::new(i.a, i.den),
            FieldMode::Quadratic => Ratio::new(i.a * i.c, i.den * i.den),
        }
    }

    pub fn mul(&self, i: &FracIdeal, j: &FracIdeal) -> FracIdeal {
        if i.is_zero() || j.is_zero() {
            return FracIdeal::ZERO;
        }
        let mut gens = Vec::with_capacity(4);
        for (x1, y1) in self.gens_of(i) {
            for (x2, y2) in self.gens_of(j) {
                let p = self.ring.mul(&AlgInt::new(x1, y1), &AlgInt::new(x2, y2));
                gens.push((p.a, p.b));
            }
        }
        self.build_ideal(i.den * j.den, &gens)
    }

    pub fn pow(&self, i: &FracIdeal, e: i32) -> Result<FracIdeal> {
        let base = if e < 0 { self.inv(i)? } else { *i };
        let mut acc = FracIdeal::UNIT;
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    pub fn inv(&self, i: &FracIdeal) -> Result<FracIdeal> {
        if i.is_zero() {
            return Err(Error::ZeroIdeal("inverse"));
        }
        match self.mode {
            FieldMode::Rational => Ok(self.build_ideal(i.a, &[(i.den, 0)])),
            FieldMode::Quadratic => {
                // I = J/den  =>  I^-1 = den * conj(J) / N(J)
                let nj = i.a * i.c;
                let gens: Vec<_> = i
                    .basis()
                    .iter()
                    .map(|&(x, y)| {
                        let cj = self.ring.conj(&AlgInt::new(x, y)).scale(&i.den);
                        (cj.a, cj.b)
                    })
                    .collect();
                Ok(self.build_ideal(nj, &gens))
            }
        }
    }

    pub fn div(&self, i: &FracIdeal, j: &FracIdeal) -> Result<FracIdeal> {
        Ok(self.mul(i, &self.inv(j)?))
    }

    /// `I + J`, the gcd of the two ideals.
    pub fn sum(&self, i: &FracIdeal, j: &FracIdeal) -> FracIdeal {
        if i.is_zero() {
            return *j;
        }
        if j.is_zero() {
            return *i;
        }
        let den = i.den.lcm(&j.den);
        let mut gens = Vec::with_capacity(4);
        for (id, g) in [(i.den, self.gens_of(i)), (j.den, self.gens_of(j))] {
            let k = den / id;
            gens.extend(g.into_iter().map(|(x, y)| (x * k, y * k)));
        }
        self.build_ideal(den, &gens)
    }

    pub fn contains(&self, i: &FracIdeal, x: &KElem) -> Result<bool> {
        if i.is_zero() {
            return Err(Error::ZeroIdeal("membership"));
        }
        Ok(self.contains_unchecked(i, x))
    }

    /// Membership without the zero-ideal guard; `I` must be nonzero.
    pub fn contains_unchecked(&self, i: &FracIdeal, x: &KElem) -> bool {
        let (p, q) = (x.num.a * i.den, x.num.b * i.den);
        if p % x.den != 0 || q % x.den != 0 {
            return false;
        }
        let (p, q) = (p / x.den, q / x.den);
        match self.mode {
            FieldMode::Rational => q == 0 && p % i.a == 0,
            FieldMode::Quadratic => q % i.c == 0 && (p - (q / i.c) * i.b) % i.a == 0,
        }
    }

    /// `I ⊆ J`.
    pub fn is_subset(&self, i: &FracIdeal, j: &FracIdeal) -> bool {
        if i.is_zero() {
            return true;
        }
        if j.is_zero() {
            return false;
        }
        self.gens_of(i).iter().all(|&(x, y)| self.contains_unchecked(j, &KElem::new(AlgInt::new(x, y), i.den)))
    }

    pub fn divides(&self, d: &FracIdeal, i: &FracIdeal) -> bool {
        self.is_subset(i, d)
    }

    /// Index in `class_reps` of the class of `I`.
    pub fn class_index(&self, i: &FracIdeal) -> Result<usize> {
        if i.is_zero() {
            return Err(Error::ZeroIdeal("class lookup"));
        }
        if self.mode == FieldMode::Rational {
            return Ok(0);
        }
        let form = self.form_of(i);
        self.form_index
            .get(&form)
            .copied()
            .ok_or_else(|| Error::Internal(format!("reduced form {form:?} not among class representatives")))
    }

    /// Reduced binary quadratic form attached to the class of `I`.
    pub fn form_of(&self, i: &FracIdeal) -> (i128, i128, i128) {
        let a = i.a / i.c;
        let b = i.b / i.c;
        let t = self.ring.t;
        let nb = self.ring.norm(&AlgInt::new(b, 1));
        super::classgroup::reduce_form(a, 2 * b + t, nb / a)
    }

    /// A generator of the principal ideal `I`, if it is principal.
    pub fn generator(&self, i: &FracIdeal) -> Option<KElem> {
        if i.is_zero() {
            return Some(KElem::zero());
        }
        match self.mode {
            FieldMode::Rational => Some(KElem::new(AlgInt::new(i.a, 0), i.den)),
            FieldMode::Quadratic => {
                let target = i.a * i.c;
                let candidates = crate::lattice::elements_of_norm_in(self, &FracIdeal { den: 1, ..*i }, target);
                candidates.first().map(|x| KElem::new(*x, i.den))
            }
        }
    }
}
