//! The A3 quartic del Pezzo surface `x0 x1 - x2 x3 = x0 x3 + x1 x3 + x2 x4 = 0`,
//! its five lines, the height, and brute-force point counts.

use std::collections::HashSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::field::{random_int, AlgInt, FieldContext, FracIdeal, KElem};
use crate::lattice::ideal_elements_by_size;
use crate::{CheckTally, Rational};

/// The lines on `S`, each given by the three coordinates that vanish on it.
pub const LINES: [[usize; 3]; 5] = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [1, 2, 3], [1, 3, 4]];

/// The singular point.
pub const SINGULARITY: [i128; 5] = [0, 0, 0, 0, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint5 {
    pub x: [AlgInt; 5],
}

/// Canonical projective key: the first nonzero index and all ratios to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointKey {
    pub lead: usize,
    pub ratios: [KElem; 5],
}

impl ProjPoint5 {
    pub fn new(x: [AlgInt; 5]) -> Result<Self> {
        if x.iter().all(AlgInt::is_zero) {
            return Err(Error::Degenerate("all coordinates vanish".into()));
        }
        Ok(Self { x })
    }

    pub fn from_ints(x: [i128; 5]) -> Result<Self> {
        Self::new(x.map(AlgInt::from_int))
    }

    pub fn on_surface(&self, ctx: &FieldContext) -> bool {
        let m = |i: usize, j: usize| ctx.ring.mul(&self.x[i], &self.x[j]);
        let q1 = m(0, 1) - m(2, 3);
        let q2 = m(0, 3) + m(1, 3) + m(2, 4);
        q1.is_zero() && q2.is_zero()
    }

    /// Indices into [`LINES`] of all lines through the point.
    pub fn lines_through(&self) -> Vec<usize> {
        (0..5).filter(|&l| LINES[l].iter().all(|&i| self.x[i].is_zero())).collect()
    }

    pub fn on_line(&self, ctx: &FieldContext) -> Result<Option<usize>> {
        self.require_on_surface(ctx)?;
        Ok(self.lines_through().first().copied())
    }

    pub fn in_u(&self, ctx: &FieldContext) -> Result<bool> {
        Ok(self.on_line(ctx)?.is_none())
    }

    fn require_on_surface(&self, ctx: &FieldContext) -> Result<()> {
        if self.on_surface(ctx) {
            Ok(())
        } else {
            Err(Error::NotOnSurface(self.to_string()))
        }
    }

    pub fn key(&self, ctx: &FieldContext) -> PointKey {
        let lead = self.x.iter().position(|v| !v.is_zero()).expect("nonzero point");
        let l = KElem::int(self.x[lead]);
        let ratios = self.x.map(|v| ctx.kdiv(&KElem::int(v), &l).expect("nonzero lead"));
        PointKey { lead, ratios }
    }

    pub fn equivalent(&self, other: &Self, ctx: &FieldContext) -> bool {
        (0..5).all(|i| {
            (i + 1..5).all(|j| {
                ctx.ring.mul(&self.x[i], &other.x[j]) == ctx.ring.mul(&self.x[j], &other.x[i])
            })
        })
    }

    pub fn scale(&self, ctx: &FieldContext, lambda: &AlgInt) -> Self {
        Self { x: self.x.map(|v| ctx.ring.mul(&v, lambda)) }
    }
}

impl fmt::Display for ProjPoint5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.x.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeightValue {
    /// `max |x_i|`
    pub numerator: i128,
    /// `N(x0 O + ... + x4 O)`
    #[serde(serialize_with = "crate::serde_ratio")]
    pub denominator: Rational,
    #[serde(serialize_with = "crate::serde_ratio")]
    pub value: Rational,
}

pub fn height(ctx: &FieldContext, p: &ProjPoint5) -> HeightValue {
    let numerator = p.x.iter().map(|v| ctx.abs_int(v)).max().unwrap_or(0);
    let denominator = if ctx.is_rational() {
        Rational::from_integer(p.x.iter().fold(0, |g, v| gcd(g, v.a)))
    } else {
        ctx.norm(&content_ideal(ctx, p))
    };
    HeightValue { numerator, denominator, value: Rational::from_integer(numerator) / denominator }
}

pub fn content_ideal(ctx: &FieldContext, p: &ProjPoint5) -> FracIdeal {
    let elems: Vec<KElem> = p.x.iter().map(|v| KElem::int(*v)).collect();
    ctx.ideal_from_elems(&elems)
}

/// `H(p) <= bound`, with a cheap rejection before the ideal gcd.
pub fn height_at_most(ctx: &FieldContext, p: &ProjPoint5, bound: i128) -> bool {
    let sizes = p.x.map(|v| ctx.abs_int(&v));
    let max = *sizes.iter().max().unwrap_or(&0);
    // N(content) divides every nonzero |x_i| over K, and is the gcd over Q
    let g = sizes.iter().fold(0, |g, &s| gcd(g, s));
    if max > bound * g {
        return false;
    }
    height(ctx, p).value <= Rational::from_integer(bound)
}

/// `(y0 y2^2 : y1 y2^2 : y2^3 : y0 y1 y2 : -y0 y1 (y0 + y1))`
pub fn psi(ctx: &FieldContext, y: [AlgInt; 3]) -> Result<ProjPoint5> {
    let m = |a: &AlgInt, b: &AlgInt| ctx.ring.mul(a, b);
    let y22 = m(&y[2], &y[2]);
    let y01 = m(&y[0], &y[1]);
    ProjPoint5::new([m(&y[0], &y22), m(&y[1], &y22), m(&y22, &y[2]), m(&y01, &y[2]), -m(&y01, &(y[0] + y[1]))])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BruteMode {
    /// Images of plane triples under `psi`.
    Psi,
    /// Direct search over surface coordinates.
    Direct,
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForceCount {
    pub count: u64,
    pub stabilized: bool,
    pub radius: u64,
    pub mode: BruteMode,
}

/// Coordinate bound that provably captures every point of `U` with `H <= bound`:
/// some representative has content ideal among the class representatives.
pub fn default_radius(ctx: &FieldContext, bound: u64) -> u64 {
    bound * ctx.max_rep_norm() as u64
}

/// Nonzero elements of `O_K` up to `radius`, one per unit orbit.
fn orbit_reps(ctx: &FieldContext, all: &[AlgInt]) -> Vec<AlgInt> {
    let units = ctx.unit_group();
    all.iter()
        .copied()
        .filter(|y| units.iter().all(|u| ctx.ring.mul(u, y) >= *y))
        .collect()
}

fn small_elements(ctx: &FieldContext, radius: u64) -> Vec<AlgInt> {
    ideal_elements_by_size(ctx, &FracIdeal::UNIT, radius).into_iter().map(|(x, _)| x.num).collect()
}

/// Distinct points of `U` with `H <= bound` found with coordinates (or plane
/// coordinates, for [`BruteMode::Psi`]) of size at most `radius`, sorted by key.
pub fn brute_force_points(ctx: &FieldContext, bound: u64, radius: u64, mode: BruteMode) -> Vec<(PointKey, ProjPoint5)> {
    let elems = small_elements(ctx, radius);
    let outer = orbit_reps(ctx, &elems);
    let b = bound as i128;
    let found: HashSet<(PointKey, ProjPoint5)> = outer
        .par_iter()
        .fold(HashSet::new, |mut acc, first| {
            for second in &elems {
                for third in &elems {
                    let p = match mode {
                        BruteMode::Psi => psi(ctx, [*second, *third, *first]).ok(),
                        BruteMode::Direct => direct_completion(ctx, *first, *second, *third),
                    };
                    let Some(p) = p else { continue };
                    if !p.lines_through().is_empty() || !height_at_most(ctx, &p, b) {
                        continue;
                    }
                    debug_assert!(p.on_surface(ctx));
                    acc.insert((p.key(ctx), p));
                }
            }
            acc
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let mut seen = HashSet::new();
    let mut out: Vec<_> = found.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.x.cmp(&b.1.x)));
    out.retain(|(k, _)| seen.insert(*k));
    out
}

/// Given `x0, x2, x3`, solve `x1 = x2 x3 / x0` and `x4 = -x3 (x0 + x1) / x2`.
fn direct_completion(ctx: &FieldContext, x0: AlgInt, x2: AlgInt, x3: AlgInt) -> Option<ProjPoint5> {
    let x1 = ctx.ring.div_exact(&ctx.ring.mul(&x2, &x3), &x0)?;
    let x4 = -ctx.ring.div_exact(&ctx.ring.mul(&x3, &(x0 + x1)), &x2)?;
    Some(ProjPoint5 { x: [x0, x1, x2, x3, x4] })
}

/// Count of `U`-points with `H <= bound`, and whether doubling the radius
/// leaves it unchanged.
pub fn brute_force_count(ctx: &FieldContext, bound: u64, radius: u64, mode: BruteMode) -> BruteForceCount {
    let count = brute_force_points(ctx, bound, radius, mode).len() as u64;
    let doubled = brute_force_points(ctx, bound, 2 * radius, mode).len() as u64;
    BruteForceCount { count, stabilized: count == doubled, radius, mode }
}

/// One line per point: `x0 x1 x2 x3 x4 H`.
pub fn format_points(ctx: &FieldContext, points: &[(PointKey, ProjPoint5)]) -> String {
    let mut s = String::new();
    for (_, p) in points {
        let h = height(ctx, p).value;
        s.push_str(&format!("{p} {}/{}\n", h.numer(), h.denom()));
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceChecks {
    /// `psi(y)` satisfies both equations
    pub membership: CheckTally,
    /// `H(lambda x) = H(x)` for random nonzero `lambda`
    pub height_invariance: CheckTally,
}

/// `n` random plane triples `y` with nonzero `y2`, pushed through `psi`.
pub fn random_surface_checks(ctx: &FieldContext, n: u64, seed: u64) -> SurfaceChecks {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SurfaceChecks { membership: CheckTally::default(), height_invariance: CheckTally::default() };
    while out.membership.checked < n {
        let y = [random_int(ctx, &mut rng, 30), random_int(ctx, &mut rng, 30), random_int(ctx, &mut rng, 30)];
        let Ok(p) = psi(ctx, y) else { continue };
        out.membership.record(p.on_surface(ctx));
        let lambda = random_int(ctx, &mut rng, 20);
        out.height_invariance.record(height(ctx, &p.scale(ctx, &lambda)).value == height(ctx, &p).value);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn pt(x: [i128; 5]) -> ProjPoint5 {
        ProjPoint5::from_ints(x).unwrap()
    }

    #[test]
    fn membership_examples() {
        let q = FieldContext::rational();
        assert!(pt([1, 1, 1, 1, -2]).on_surface(&q));
        assert!(pt(SINGULARITY).on_surface(&q));
        assert!(!pt([1, 1, 1, 1, 1]).on_surface(&q));
        assert!(!pt(SINGULARITY).in_u(&q).unwrap());
        assert!(pt(SINGULARITY).lines_through().contains(&1));
        assert!(pt([1, 1, 1, 1, -2]).in_u(&q).unwrap());
        assert_eq!(pt([0, 1, 0, 0, 5]).on_line(&q).unwrap(), Some(1));
        assert!(pt([1, 1, 1, 1, 1]).in_u(&q).is_err());
        assert!(ProjPoint5::from_ints([0; 5]).is_err());
    }

    #[test]
    fn height_examples() {
        let q = FieldContext::rational();
        let k = FieldContext::quadratic(-1).unwrap();
        let p = pt([1, 1, 1, 1, -2]);
        assert_eq!(height(&q, &p).value, Rational::from_integer(2));
        assert_eq!(height(&k, &p).value, Rational::from_integer(4));
        assert_eq!(height(&q, &p.scale(&q, &AlgInt::new(3, 0))).value, Rational::from_integer(2));
        let h = height(&k, &p.scale(&k, &AlgInt::new(1, 1)));
        assert_eq!((h.numerator, h.denominator, h.value), (8, Rational::from_integer(2), Rational::from_integer(4)));
    }

    #[test]
    fn psi_examples() {
        let q = FieldContext::rational();
        let y = |a: [i128; 3]| a.map(AlgInt::from_int);
        assert_eq!(psi(&q, y([1, 1, 1])).unwrap(), pt([1, 1, 1, 1, -2]));
        assert_eq!(psi(&q, y([1, 0, 1])).unwrap(), pt([1, 0, 1, 0, 0]));
        let sing = psi(&q, y([2, 3, 0])).unwrap();
        assert!(sing.equivalent(&pt(SINGULARITY), &q));
        assert!(psi(&q, y([0, 0, 0])).is_err());
        assert!(psi(&q, y([1, -1, 0])).is_err());
    }

    #[test]
    fn keys_respect_projective_equivalence() {
        let k = FieldContext::quadratic(-5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let y = [0; 3].map(|_| AlgInt::new(rng.gen_range(-6..6), rng.gen_range(-6..6)));
            let Ok(p) = psi(&k, y) else { continue };
            let lam = AlgInt::new(rng.gen_range(-6..6), rng.gen_range(1..6));
            let q = p.scale(&k, &lam);
            assert!(p.equivalent(&q, &k));
            assert_eq!(p.key(&k), q.key(&k));
            assert_eq!(height(&k, &p).value, height(&k, &q).value);
        }
        let a = pt([1, 1, 1, 1, -2]);
        let b = pt([1, 0, 1, 0, 0]);
        assert_ne!(a.key(&k), b.key(&k));
        assert!(!a.equivalent(&b, &k));
    }

    #[test]
    fn rational_small_bounds_agree_between_modes() {
        let q = FieldContext::rational();
        let mut prev = 0;
        for b in [1u64, 2, 3, 4, 6, 10] {
            let r = default_radius(&q, b);
            let psi_pts = brute_force_points(&q, b, r, BruteMode::Psi);
            let direct = brute_force_points(&q, b, r, BruteMode::Direct);
            let keys = |v: &[(PointKey, ProjPoint5)]| v.iter().map(|x| x.0).collect::<Vec<_>>();
            assert_eq!(keys(&psi_pts), keys(&direct), "B={b}");
            assert!(psi_pts.len() >= prev);
            prev = psi_pts.len();
        }
        // (1:1:1:1:-2) has height 2; (1:0:1:0:0) is on no line but x1 = 0 forces x3 = 0
        let four = brute_force_points(&q, 4, 4, BruteMode::Psi);
        assert!(four.iter().any(|(_, p)| p.equivalent(&pt([1, 1, 1, 1, -2]), &q)));
        assert!(four.iter().all(|(_, p)| height(&q, p).value <= Rational::from_integer(4)));
    }

    #[test]
    fn small_radius_is_flagged() {
        let q = FieldContext::rational();
        let r = brute_force_count(&q, 20, 1, BruteMode::Psi);
        assert!(!r.stabilized);
        let r = brute_force_count(&q, 20, default_radius(&q, 20), BruteMode::Psi);
        assert!(r.stabilized);
    }

    #[test]
    fn randomized_exact_checks() {
        for ctx in [FieldContext::rational(), FieldContext::quadratic(-1).unwrap(), FieldContext::quadratic(-5).unwrap()] {
            let r = random_surface_checks(&ctx, 200, 9);
            assert!(r.membership.passed() && r.height_invariance.passed(), "{r:?}");
            assert!(ctx.random_ideal_checks(200, 9).passed());
        }
    }
}
