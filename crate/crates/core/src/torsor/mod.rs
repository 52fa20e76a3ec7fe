//! The universal torsor of the A3 surface: twisted ideals per class tuple,
//! the curve graph, height and coprimality conditions, and the torsor count
//! `N(B) = omega^-6 * sum over class tuples of |M_C(B)|`.

mod enumerate;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FracIdeal, KElem};
use crate::surface::ProjPoint5;
use crate::Rational;
pub use enumerate::{
    enumerate_m, fiber_census, torsor_count, torsor_count_by_tuple, visit_m, FiberCensus, TorsorCount,
    TorsorOptions, TupleRecord,
};

/// Indices `(C0, ..., C5)` into the class representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassTuple(pub [usize; 6]);

impl ClassTuple {
    pub fn trivial() -> Self {
        ClassTuple([0; 6])
    }

    /// All `h^6` tuples, lexicographically.
    pub fn all(ctx: &FieldContext) -> Vec<ClassTuple> {
        let h = ctx.class_number;
        (0..h.pow(6))
            .map(|mut k| {
                let mut c = [0; 6];
                for slot in c.iter_mut().rev() {
                    *slot = k % h;
                    k /= h;
                }
                ClassTuple(c)
            })
            .collect()
    }
}

impl fmt::Display for ClassTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "({},{},{},{},{},{})", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

/// Exponents of `C0..C5` in `O_1..O_9`.
const O_EXPONENTS: [[i32; 6]; 9] = [
    [0, 1, 0, 0, -1, 0],
    [1, -1, -1, -1, 0, 0],
    [0, 0, 1, 0, 0, -1],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1],
    [1, -1, 0, 0, -1, 0],
    [1, 0, -1, 0, 0, -1],
    [1, 0, 0, -1, 0, 0],
];

/// Exponents of `eta_1..eta_8` in the first four coordinates of `Psi`.
pub const HEIGHT_EXPONENTS: [[u32; 8]; 4] = [
    [2, 2, 1, 2, 1, 0, 1, 0],
    [1, 2, 2, 0, 1, 2, 0, 1],
    [2, 3, 2, 1, 2, 1, 0, 0],
    [1, 1, 1, 1, 0, 1, 1, 1],
];

#[derive(Clone, Debug)]
pub struct TorsorIdeals {
    pub tuple: ClassTuple,
    /// `O_1..O_9`
    pub o: [FracIdeal; 9],
    /// `N(C0^3 C1^-1 ... C5^-1)`
    pub u: Rational,
}

pub fn torsor_ideals(ctx: &FieldContext, tuple: ClassTuple) -> Result<TorsorIdeals> {
    let c: Vec<FracIdeal> = tuple.0.iter().map(|&i| ctx.class_reps[i]).collect();
    let mono = |e: &[i32; 6]| -> Result<FracIdeal> {
        let mut acc = FracIdeal::UNIT;
        for (ci, &k) in c.iter().zip(e) {
            acc = ctx.mul(&acc, &ctx.pow(ci, k)?);
        }
        Ok(acc)
    };
    let mut o = [FracIdeal::UNIT; 9];
    for (j, e) in O_EXPONENTS.iter().enumerate() {
        o[j] = mono(e)?;
    }
    let content = mono(&[3, -1, -1, -1, -1, -1])?;
    let u = ctx.norm(&content);
    // the three monomials of the torsor equation live in the same ideal C0
    let m1 = ctx.mul(&ctx.mul(&o[0], &ctx.mul(&o[3], &o[3])), &o[6]);
    let m2 = ctx.mul(&ctx.mul(&o[2], &ctx.mul(&o[5], &o[5])), &o[7]);
    let m3 = ctx.mul(&o[4], &o[8]);
    if m1 != m2 || m2 != m3 || m1 != c[0] {
        return Err(Error::Internal(format!("torsor monomial ideals differ for {tuple}")));
    }
    // every coordinate of Psi lives in the content ideal
    for e in HEIGHT_EXPONENTS {
        let mut acc = FracIdeal::UNIT;
        for (j, &k) in e.iter().enumerate() {
            acc = ctx.mul(&acc, &ctx.pow(&o[j], k as i32)?);
        }
        if acc != content {
            return Err(Error::Internal(format!("height monomial ideal differs from the content for {tuple}")));
        }
    }
    if ctx.mul(&ctx.mul(&o[6], &o[7]), &o[8]) != content {
        return Err(Error::Internal(format!("O7 O8 O9 differs from the content for {tuple}")));
    }
    Ok(TorsorIdeals { tuple, o, u })
}

/// Intersection graph of the curves `E_1..E_9` (1-based vertex labels).
pub struct CurveGraph;

impl CurveGraph {
    pub const EDGES: [(usize, usize); 11] =
        [(1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 7), (5, 9), (6, 8), (7, 8), (7, 9), (8, 9)];

    pub fn adjacent(j: usize, k: usize) -> bool {
        let (a, b) = (j.min(k), j.max(k));
        Self::EDGES.contains(&(a, b))
    }

    /// Distinct nonadjacent pairs `j < k`.
    pub fn nonadjacent_pairs() -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 1..=9 {
            for k in j + 1..=9 {
                if !Self::adjacent(j, k) {
                    out.push((j, k));
                }
            }
        }
        out
    }
}

/// A point of `M_C(B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsorPoint {
    pub tuple: ClassTuple,
    pub eta: [KElem; 9],
}

impl fmt::Display for TorsorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.eta.iter().map(|e| e.to_string()).collect();
        write!(f, "{} {}", self.tuple, parts.join(" "))
    }
}

fn kprod(ctx: &FieldContext, factors: &[(&KElem, u32)]) -> KElem {
    let mut acc = KElem::one();
    for (x, e) in factors {
        for _ in 0..*e {
            acc = ctx.kmul(&acc, x);
        }
    }
    acc
}

/// The five conditions `|Psi_i(eta)| <= bound`, exactly. Condition five is
/// taken in the form with `eta_9` eliminated, so it needs `eta_5 != 0`.
pub fn height_ok(ctx: &FieldContext, eta: &[KElem; 8], bound: Rational) -> Result<bool> {
    if eta[4].is_zero() {
        return Err(Error::InvalidArgument("eta_5 = 0".into()));
    }
    for e in HEIGHT_EXPONENTS {
        let f: Vec<(&KElem, u32)> = eta.iter().zip(e).collect();
        if ctx.abs_elem(&kprod(ctx, &f)) > bound {
            return Ok(false);
        }
    }
    let [e1, _, e3, e4, e5, e6, e7, e8] = eta;
    let num = kprod(ctx, &[(e1, 1), (e4, 2), (e7, 2), (e8, 1)]).add(&kprod(ctx, &[(e3, 1), (e6, 2), (e7, 1), (e8, 2)]));
    let fifth = ctx.kdiv(&num, e5).expect("eta_5 nonzero");
    Ok(ctx.abs_elem(&fifth) <= bound)
}

/// `eta_9 = -(eta_1 eta_4^2 eta_7 + eta_3 eta_6^2 eta_8) / eta_5` if it lies in `O_9`.
pub fn solve_eta9(ctx: &FieldContext, eta: &[KElem; 8], o9: &FracIdeal) -> Option<KElem> {
    let [e1, _, e3, e4, e5, e6, e7, e8] = eta;
    let num = kprod(ctx, &[(e1, 1), (e4, 2), (e7, 1)]).add(&kprod(ctx, &[(e3, 1), (e6, 2), (e8, 1)]));
    let e9 = ctx.kdiv(&num, e5)?.neg();
    ctx.contains_unchecked(o9, &e9).then_some(e9)
}

/// `I_j + I_k = O_K` for all nonadjacent pairs; the zero ideal is coprime
/// only to `O_K`.
pub fn coprime_ok(ctx: &FieldContext, ideals: &[FracIdeal; 9]) -> bool {
    CurveGraph::nonadjacent_pairs().into_iter().all(|(j, k)| ctx.sum(&ideals[j - 1], &ideals[k - 1]).is_unit())
}

/// `I_j = eta_j O_j^-1`.
pub fn eta_ideals(ctx: &FieldContext, ideals: &TorsorIdeals, eta: &[KElem; 9]) -> Result<[FracIdeal; 9]> {
    let mut out = [FracIdeal::ZERO; 9];
    for j in 0..9 {
        out[j] = ctx.div(&ctx.principal(&eta[j]), &ideals.o[j])?;
    }
    Ok(out)
}

/// `Psi(eta)` with coordinates cleared to `O_K`.
pub fn map_to_surface(ctx: &FieldContext, eta: &[KElem; 9]) -> Result<ProjPoint5> {
    let [e1, e2, e3, e4, e5, e6, e7, e8, e9] = eta;
    let coords = [
        kprod(ctx, &[(e1, 2), (e2, 2), (e3, 1), (e4, 2), (e5, 1), (e7, 1)]),
        kprod(ctx, &[(e1, 1), (e2, 2), (e3, 2), (e5, 1), (e6, 2), (e8, 1)]),
        kprod(ctx, &[(e1, 2), (e2, 3), (e3, 2), (e4, 1), (e5, 2), (e6, 1)]),
        kprod(ctx, &[(e1, 1), (e2, 1), (e3, 1), (e4, 1), (e6, 1), (e7, 1), (e8, 1)]),
        kprod(ctx, &[(e7, 1), (e8, 1), (e9, 1)]),
    ];
    let den = coords.iter().fold(1i128, |l, c| num_integer::lcm(l, c.den));
    let x = coords.map(|c| c.num.scale(&(den / c.den)));
    ProjPoint5::new(x)
}

/// Walks every defining condition of `M_C(B)` from scratch: membership,
/// nonvanishing, torsor equation, coprimality of all nonadjacent pairs, and
/// the five height conditions.
pub fn check_point(ctx: &FieldContext, ideals: &TorsorIdeals, eta: &[KElem; 9], bound: u64) -> Result<()> {
    let fail = |what: &str| Err(Error::Internal(format!("{what} fails for {}", TorsorPoint { tuple: ideals.tuple, eta: *eta })));
    for j in 0..9 {
        if !ctx.contains_unchecked(&ideals.o[j], &eta[j]) {
            return fail(&format!("membership of eta_{}", j + 1));
        }
        if j < 8 && eta[j].is_zero() {
            return fail(&format!("eta_{} != 0", j + 1));
        }
    }
    let [e1, _, e3, e4, e5, e6, e7, e8, e9] = eta;
    let lhs = kprod(ctx, &[(e1, 1), (e4, 2), (e7, 1)])
        .add(&kprod(ctx, &[(e3, 1), (e6, 2), (e8, 1)]))
        .add(&ctx.kmul(e5, e9));
    if !lhs.is_zero() {
        return fail("torsor equation");
    }
    let is = eta_ideals(ctx, ideals, eta)?;
    for (j, i) in is.iter().enumerate() {
        if !i.is_integral() {
            return fail(&format!("integrality of I_{}", j + 1));
        }
    }
    if !coprime_ok(ctx, &is) {
        return fail("coprimality");
    }
    let first8: [KElem; 8] = eta[..8].try_into().expect("eight entries");
    let b = ideals.u * Rational::from_integer(bound as i128);
    if !height_ok(ctx, &first8, b)? {
        return fail("height");
    }
    if ctx.abs_elem(&kprod(ctx, &[(e7, 1), (e8, 1), (e9, 1)])) > b {
        return fail("|eta_7 eta_8 eta_9| bound");
    }
    Ok(())
}

#[cfg(test)]
pub(crate) fn elem(a: i128) -> KElem {
    KElem::from_i128(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AlgInt;
    use crate::peyre::theta8;

    fn ones() -> [KElem; 8] {
        [elem(1); 8]
    }

    #[test]
    fn trivial_tuple_is_untwisted() {
        let k = FieldContext::quadratic(-1).unwrap();
        let t = torsor_ideals(&k, ClassTuple::trivial()).unwrap();
        assert!(t.o.iter().all(FracIdeal::is_unit));
        assert_eq!(t.u, Rational::from_integer(1));
    }

    #[test]
    fn all_minus_five_tuples_are_consistent() {
        let k = FieldContext::quadratic(-5).unwrap();
        let tuples = ClassTuple::all(&k);
        assert_eq!(tuples.len(), 64);
        for t in tuples {
            let ti = torsor_ideals(&k, t).unwrap();
            assert!(ti.u > Rational::from_integer(0));
        }
    }

    #[test]
    fn height_examples() {
        let q = FieldContext::rational();
        let k = FieldContext::quadratic(-1).unwrap();
        assert!(height_ok(&k, &ones(), Rational::from_integer(4)).unwrap());
        assert!(!height_ok(&k, &ones(), Rational::from_integer(3)).unwrap());
        assert!(height_ok(&q, &ones(), Rational::from_integer(2)).unwrap());
        let mut z = ones();
        z[4] = elem(0);
        assert!(height_ok(&k, &z, Rational::from_integer(4)).is_err());
        assert!(height_ok(&k, &ones(), Rational::from_integer(i64::MAX as i128)).unwrap());
    }

    #[test]
    fn eta9_examples() {
        let k = FieldContext::quadratic(-1).unwrap();
        assert_eq!(solve_eta9(&k, &ones(), &FracIdeal::UNIT), Some(elem(-2)));
        let mut e = ones();
        e[2] = elem(-1);
        assert_eq!(solve_eta9(&k, &e, &FracIdeal::UNIT), Some(elem(0)));
        let mut e = ones();
        e[4] = elem(2);
        assert_eq!(solve_eta9(&k, &e, &FracIdeal::UNIT), Some(elem(-1)));
        // numerator 1 over 1+i is not integral
        let mut e = ones();
        e[2] = elem(0);
        e[4] = KElem::int(AlgInt::new(1, 1));
        assert_eq!(solve_eta9(&k, &e, &FracIdeal::UNIT), None);
    }

    #[test]
    fn coprimality_examples() {
        let k = FieldContext::quadratic(-1).unwrap();
        let p = k.split_prime(5)[0].ideal;
        let mut is = [FracIdeal::UNIT; 9];
        assert!(coprime_ok(&k, &is));
        is[0] = p;
        is[2] = p;
        assert!(!coprime_ok(&k, &is));
        let mut is = [FracIdeal::UNIT; 9];
        is[6] = p;
        is[7] = p;
        assert!(coprime_ok(&k, &is));
        let mut is = [FracIdeal::UNIT; 9];
        is[8] = FracIdeal::ZERO;
        assert!(coprime_ok(&k, &is));
        is[0] = p;
        assert!(!coprime_ok(&k, &is));
    }

    #[test]
    fn graph_edges_match_theta8_table() {
        // among 1..7 the pairs with a factor 1 - 1/Np are exactly the edges
        for j in 1..=7 {
            for k in j + 1..=7 {
                let v = theta8::theta8_value(&[j, k]);
                assert_eq!(v == theta8::ThetaValue::OneMinusX, CurveGraph::adjacent(j, k), "pair {j},{k}");
            }
        }
        assert_eq!(CurveGraph::nonadjacent_pairs().len(), 36 - 11);
    }

    #[test]
    fn psi_of_ones() {
        let q = FieldContext::rational();
        let mut eta = [elem(1); 9];
        eta[8] = elem(-2);
        let p = map_to_surface(&q, &eta).unwrap();
        assert_eq!(p, ProjPoint5::from_ints([1, 1, 1, 1, -2]).unwrap());
        let t = torsor_ideals(&q, ClassTuple::trivial()).unwrap();
        assert!(check_point(&q, &t, &eta, 2).is_ok());
        assert!(check_point(&q, &t, &eta, 1).is_err());
    }
}
