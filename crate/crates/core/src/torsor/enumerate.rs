//! Nested enumeration of `M_C(B)`.
//!
//! Writing `n_j = |eta_j| / N(O_j)`, a positive integer, the first four
//! height conditions become `prod n_j^e <= B` and the fifth becomes
//! `n_7 n_8 n_9 <= B`, independently of the class tuple. The loops run over
//! `eta_2, eta_1, eta_3, eta_5, eta_4, eta_6, eta_7, eta_8` with the partial
//! products bounding each inner range; `eta_9` is solved from the torsor
//! equation.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{torsor_ideals, map_to_surface, ClassTuple, CurveGraph, TorsorIdeals, TorsorPoint, HEIGHT_EXPONENTS};
use crate::arith::{gcd, iroot};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FracIdeal, KElem};
use crate::lattice::ideal_elements_by_size;
use crate::surface::{height, PointKey, ProjPoint5};
use crate::Rational;

const ORDER: [usize; 8] = [1, 0, 2, 4, 3, 5, 6, 7];

#[derive(Clone, Copy, Debug, Default)]
pub struct TorsorOptions {
    /// Enumerate only one representative per orbit of the unit torus, which
    /// acts freely and moves `eta_1..eta_6` independently, and multiply by
    /// `omega^6`.
    pub unit_normalized: bool,
}

#[derive(Clone, Debug)]
struct Candidate {
    x: KElem,
    n: u64,
    /// `x O_j^-1`
    ideal: FracIdeal,
}

struct Prepared<'a> {
    ctx: &'a FieldContext,
    ideals: TorsorIdeals,
    lists: Vec<Vec<Candidate>>,
    o9_inv: FracIdeal,
    o9_norm: Rational,
    bound: u64,
    /// `nonadj[j]` lists the earlier loop variables not adjacent to `j`
    nonadj: [Vec<usize>; 8],
}

fn canonical_under_units(ctx: &FieldContext, x: &KElem) -> bool {
    ctx.unit_group().iter().all(|u| ctx.kmul(&KElem::int(*u), x) >= *x)
}

impl<'a> Prepared<'a> {
    fn new(ctx: &'a FieldContext, tuple: ClassTuple, bound: u64, opts: TorsorOptions) -> Result<Self> {
        let ideals = torsor_ideals(ctx, tuple)?;
        let mut lists = Vec::with_capacity(8);
        for j in 0..8 {
            let nmax = (0..4)
                .filter(|&k| HEIGHT_EXPONENTS[k][j] > 0)
                .map(|k| iroot(bound as u128, HEIGHT_EXPONENTS[k][j]) as u64)
                .min()
                .expect("every variable appears in a height monomial");
            let oinv = ctx.inv(&ideals.o[j])?;
            let mut list: Vec<Candidate> = ideal_elements_by_size(ctx, &ideals.o[j], nmax)
                .into_iter()
                .filter(|(x, _)| !opts.unit_normalized || j >= 6 || canonical_under_units(ctx, x))
                .map(|(x, n)| Candidate { x, n, ideal: ctx.mul(&ctx.principal(&x), &oinv) })
                .collect();
            list.sort_by_key(|c| (c.n, c.x));
            lists.push(list);
        }
        let mut nonadj: [Vec<usize>; 8] = Default::default();
        for (d, &j) in ORDER.iter().enumerate() {
            nonadj[j] = ORDER[..d].iter().copied().filter(|&k| !CurveGraph::adjacent(j + 1, k + 1)).collect();
        }
        let o9_inv = ctx.inv(&ideals.o[8])?;
        let o9_norm = ctx.norm(&ideals.o[8]);
        Ok(Prepared { ctx, ideals, lists, o9_inv, o9_norm, bound, nonadj })
    }

    fn coprime(&self, a: &Candidate, b: &Candidate) -> bool {
        if gcd(a.n as i128, b.n as i128) == 1 {
            return true;
        }
        !self.ctx.is_rational() && self.ctx.sum(&a.ideal, &b.ideal).is_unit()
    }

    /// All points whose `eta_2` is the `first`-th candidate.
    fn walk<F: FnMut(&[KElem; 9])>(&self, first: usize, f: &mut F) {
        let mut chosen: [usize; 8] = [0; 8];
        let c = &self.lists[ORDER[0]][first];
        let mut partial = [1u64; 4];
        if !self.push(ORDER[0], c.n, &mut partial) {
            return;
        }
        chosen[ORDER[0]] = first;
        self.rec(1, &mut chosen, partial, None, None, f);
    }

    /// Multiplies the partial height products by `n^e`; false if some exceeds `B`.
    fn push(&self, j: usize, n: u64, partial: &mut [u64; 4]) -> bool {
        for k in 0..4 {
            for _ in 0..HEIGHT_EXPONENTS[k][j] {
                partial[k] = partial[k].saturating_mul(n);
            }
            if partial[k] > self.bound {
                return false;
            }
        }
        true
    }

    fn rec<F: FnMut(&[KElem; 9])>(
        &self,
        depth: usize,
        chosen: &mut [usize; 8],
        partial: [u64; 4],
        c_term: Option<KElem>,
        a_term: Option<KElem>,
        f: &mut F,
    ) {
        let ctx = self.ctx;
        let j = ORDER[depth];
        let nmax = (0..4)
            .filter(|&k| HEIGHT_EXPONENTS[k][j] > 0)
            .map(|k| iroot((self.bound / partial[k]) as u128, HEIGHT_EXPONENTS[k][j]) as u64)
            .min()
            .unwrap_or(0);
        let list = &self.lists[j];
        for (idx, cand) in list.iter().enumerate() {
            if cand.n > nmax {
                break;
            }
            if !self.nonadj[j].iter().all(|&k| self.coprime(cand, &self.lists[k][chosen[k]])) {
                continue;
            }
            let mut p = partial;
            if !self.push(j, cand.n, &mut p) {
                continue;
            }
            chosen[j] = idx;
            let e = |k: usize| &self.lists[k][chosen[k]].x;
            match depth {
                // eta_6 fixed: C = eta_3 eta_6^2
                5 => {
                    let c = ctx.kmul(e(2), &ctx.kmul(e(5), e(5)));
                    self.rec(depth + 1, chosen, p, Some(c), None, f);
                }
                // eta_7 fixed: A = eta_1 eta_4^2 eta_7
                6 => {
                    let a = ctx.kmul(&ctx.kmul(e(0), e(6)), &ctx.kmul(e(3), e(3)));
                    self.rec(depth + 1, chosen, p, c_term, Some(a), f);
                }
                7 => self.finish(chosen, c_term.as_ref().expect("set"), a_term.as_ref().expect("set"), f),
                _ => self.rec(depth + 1, chosen, p, c_term, a_term, f),
            }
        }
    }

    fn finish<F: FnMut(&[KElem; 9])>(&self, chosen: &[usize; 8], c: &KElem, a: &KElem, f: &mut F) {
        let ctx = self.ctx;
        let cand = |k: usize| &self.lists[k][chosen[k]];
        let num = a.add(&ctx.kmul(c, &cand(7).x));
        let Some(e9) = ctx.kdiv(&num, &cand(4).x).map(|q| q.neg()) else { return };
        if !ctx.contains_unchecked(&self.ideals.o[8], &e9) {
            return;
        }
        // eta_9 is not adjacent to 1, 2, 3, 4, 6
        let others = [0usize, 1, 2, 3, 5];
        if e9.is_zero() {
            if others.iter().any(|&k| cand(k).n != 1) {
                return;
            }
        } else {
            let n9 = (ctx.abs_elem(&e9) / self.o9_norm).to_integer() as u64;
            if (cand(6).n as u128) * (cand(7).n as u128) * (n9 as u128) > self.bound as u128 {
                return;
            }
            let c9 = Candidate { x: e9, n: n9, ideal: ctx.mul(&ctx.principal(&e9), &self.o9_inv) };
            if !others.iter().all(|&k| self.coprime(&c9, cand(k))) {
                return;
            }
        }
        let mut eta = [KElem::zero(); 9];
        for k in 0..8 {
            eta[k] = cand(k).x;
        }
        eta[8] = e9;
        f(&eta);
    }

    fn first_range(&self) -> std::ops::Range<usize> {
        0..self.lists[ORDER[0]].len()
    }
}

/// Calls `f` on every point of `M_C(B)` (one per unit orbit when normalized).
pub fn visit_m<F>(ctx: &FieldContext, tuple: ClassTuple, bound: u64, opts: TorsorOptions, f: F) -> Result<()>
where
    F: Fn(&[KElem; 9]) + Sync,
{
    let prep = Prepared::new(ctx, tuple, bound, opts)?;
    prep.first_range().into_par_iter().for_each(|i| prep.walk(i, &mut |eta| f(eta)));
    Ok(())
}

/// `M_C(B)`, sorted.
pub fn enumerate_m(ctx: &FieldContext, tuple: ClassTuple, bound: u64) -> Result<Vec<TorsorPoint>> {
    let prep = Prepared::new(ctx, tuple, bound, TorsorOptions::default())?;
    let mut out: Vec<TorsorPoint> = prep
        .first_range()
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut v = Vec::new();
            prep.walk(i, &mut |eta| v.push(TorsorPoint { tuple, eta: *eta }));
            v
        })
        .collect();
    out.sort();
    Ok(out)
}

fn count_tuple(ctx: &FieldContext, tuple: ClassTuple, bound: u64, opts: TorsorOptions) -> Result<u64> {
    let prep = Prepared::new(ctx, tuple, bound, opts)?;
    let n: u64 = prep
        .first_range()
        .into_par_iter()
        .map(|i| {
            let mut n = 0u64;
            prep.walk(i, &mut |_| n += 1);
            n
        })
        .sum();
    let scale = if opts.unit_normalized { (ctx.units as u64).pow(6) } else { 1 };
    Ok(n * scale)
}

#[derive(Clone, Debug, Serialize)]
pub struct TupleRecord {
    pub classtuple: String,
    #[serde(serialize_with = "crate::serde_ratio")]
    pub u: Rational,
    pub count: u64,
    pub millis: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorsorCount {
    pub bound: u64,
    /// `sum_C |M_C(B)|`
    pub torsor_points: u64,
    /// `N_{U,H}(B)`
    pub count: u64,
    pub tuples: Vec<TupleRecord>,
}

pub fn torsor_count_by_tuple(ctx: &FieldContext, bound: u64, opts: TorsorOptions) -> Result<TorsorCount> {
    let mut tuples = Vec::new();
    let mut total = 0u64;
    for t in ClassTuple::all(ctx) {
        let start = Instant::now();
        let n = count_tuple(ctx, t, bound, opts)?;
        let u = torsor_ideals(ctx, t)?.u;
        tuples.push(TupleRecord { classtuple: t.to_string(), u, count: n, millis: start.elapsed().as_millis() as u64 });
        total += n;
    }
    let w6 = (ctx.units as u64).pow(6);
    if !total.is_multiple_of(w6) {
        return Err(Error::Internal(format!("sum of |M_C({bound})| = {total} is not divisible by {w6}")));
    }
    Ok(TorsorCount { bound, torsor_points: total, count: total / w6, tuples })
}

pub fn torsor_count(ctx: &FieldContext, bound: u64, opts: TorsorOptions) -> Result<u64> {
    Ok(torsor_count_by_tuple(ctx, bound, opts)?.count)
}

#[derive(Clone, Debug, Serialize)]
pub struct FiberCensus {
    pub bound: u64,
    pub expected: u64,
    pub fibers: u64,
    pub min_size: u64,
    pub max_size: u64,
    /// every image lies in `U` and has height at most `B`
    pub images_ok: bool,
}

impl FiberCensus {
    pub fn exact(&self) -> bool {
        self.images_ok && self.min_size == self.expected && self.max_size == self.expected
    }
}

/// Groups all of `M_C(B)`, over all class tuples, by image point.
pub fn fiber_census(ctx: &FieldContext, bound: u64) -> Result<FiberCensus> {
    let mut fibers: HashMap<PointKey, (u64, ProjPoint5)> = HashMap::new();
    for t in ClassTuple::all(ctx) {
        let prep = Prepared::new(ctx, t, bound, TorsorOptions::default())?;
        let part = prep
            .first_range()
            .into_par_iter()
            .fold(HashMap::new, |mut acc: HashMap<PointKey, (u64, ProjPoint5)>, i| {
                prep.walk(i, &mut |eta| {
                    let p = map_to_surface(ctx, eta).expect("torsor points map to nonzero points");
                    acc.entry(p.key(ctx)).or_insert((0, p)).0 += 1;
                });
                acc
            })
            .reduce(HashMap::new, merge);
        fibers = merge(fibers, part);
    }
    let b = Rational::from_integer(bound as i128);
    let images_ok = fibers.values().all(|(_, p)| p.in_u(ctx).unwrap_or(false) && height(ctx, p).value <= b);
    let sizes = fibers.values().map(|v| v.0);
    Ok(FiberCensus {
        bound,
        expected: (ctx.units as u64).pow(6),
        fibers: fibers.len() as u64,
        min_size: sizes.clone().min().unwrap_or(0),
        max_size: sizes.max().unwrap_or(0),
        images_ok,
    })
}

fn merge(
    mut a: HashMap<PointKey, (u64, ProjPoint5)>,
    b: HashMap<PointKey, (u64, ProjPoint5)>,
) -> HashMap<PointKey, (u64, ProjPoint5)> {
    for (k, (n, p)) in b {
        a.entry(k).or_insert((0, p)).0 += n;
    }
    a
}
