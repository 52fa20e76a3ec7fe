//! Exact volumes of H-polytopes, and `alpha` of the minimal desingularization.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::integrate::{mc_mean, McConfig, McEstimate};
use crate::{BigRational, Error, Real, Result};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `{x : a_i . x <= b_i}`, assumed bounded.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    pub dim: usize,
    pub a: Vec<Vec<BigRational>>,
    pub b: Vec<BigRational>,
}

/// Solve the square system `m x = rhs`; `None` if singular.
fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
                let t = &f * &rhs[c];
                rhs[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                for k in c..cols {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut d = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        d *= &m[c][c];
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &m[c][c];
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[r][k] -= t;
                }
            }
        }
    }
    d
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f)
}

impl Polytope {
    pub fn new(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Result<Self> {
        let dim = a.first().map_or(0, Vec::len);
        if dim == 0 || a.len() != b.len() || a.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("constraint matrix shape".into()));
        }
        Ok(Self { dim, a, b })
    }

    /// From integer rows `a_i . x <= b_i`.
    pub fn from_ints(rows: &[(Vec<i64>, i64)]) -> Result<Self> {
        Self::new(rows.iter().map(|(r, _)| r.iter().map(|&x| q(x)).collect()).collect(), rows.iter().map(|r| q(r.1)).collect())
    }

    /// Adds `x_j >= 0` for every coordinate.
    pub fn with_nonnegativity(mut self) -> Self {
        for j in 0..self.dim {
            let mut r = vec![BigRational::zero(); self.dim];
            r[j] = q(-1);
            self.a.push(r);
            self.b.push(BigRational::zero());
        }
        self
    }

    fn slack(&self, i: usize, x: &[BigRational]) -> BigRational {
        let lhs: BigRational = self.a[i].iter().zip(x).map(|(a, x)| a * x).sum();
        &self.b[i] - lhs
    }

    pub fn contains(&self, x: &[BigRational]) -> bool {
        (0..self.a.len()).all(|i| !self.slack(i, x).is_negative())
    }

    pub fn contains_float<T: Real>(&self, x: &[T]) -> bool {
        (0..self.a.len()).all(|i| {
            let lhs: T = self.a[i].iter().zip(x).map(|(a, &x)| T::lit(a.to_f64().unwrap_or(f64::NAN)) * x).sum();
            lhs <= T::lit(self.b[i].to_f64().unwrap_or(f64::NAN))
        })
    }

    /// Vertices in lexicographic order, each with its set of tight constraints.
    pub fn vertices(&self) -> Vec<(Vec<BigRational>, BTreeSet<usize>)> {
        let mut found: Vec<Vec<BigRational>> = Vec::new();
        combinations(self.a.len(), self.dim, &mut |idx| {
            let m = idx.iter().map(|&i| self.a[i].clone()).collect();
            let rhs = idx.iter().map(|&i| self.b[i].clone()).collect();
            if let Some(x) = solve(m, rhs) {
                if self.contains(&x) && !found.contains(&x) {
                    found.push(x);
                }
            }
        });
        found.sort();
        found
            .into_iter()
            .map(|x| {
                let tight = (0..self.a.len()).filter(|&i| self.slack(i, &x).is_zero()).collect();
                (x, tight)
            })
            .collect()
    }

    fn affine_dim(&self, verts: &[Vec<BigRational>], face: &BTreeSet<usize>) -> usize {
        let mut it = face.iter();
        let Some(&v0) = it.next() else { return 0 };
        rank(it.map(|&v| verts[v].iter().zip(&verts[v0]).map(|(a, b)| a - b).collect()).collect())
    }

    /// Pulling triangulation: cone the lowest vertex of each face over the
    /// facets of that face which avoid it.
    fn triangulate(
        &self,
        verts: &[Vec<BigRational>],
        tight: &[BTreeSet<usize>],
        face: &BTreeSet<usize>,
        k: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v0 = *face.iter().next().expect("nonempty face");
        if k == 0 {
            out.push(vec![v0]);
            return;
        }
        let mut facets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for i in 0..self.a.len() {
            if tight[v0].contains(&i) {
                continue;
            }
            let g: BTreeSet<usize> = face.iter().copied().filter(|&v| tight[v].contains(&i)).collect();
            if !g.is_empty() && self.affine_dim(verts, &g) == k - 1 {
                facets.insert(g);
            }
        }
        for g in facets {
            let start = out.len();
            self.triangulate(verts, tight, &g, k - 1, out);
            for s in &mut out[start..] {
                s.push(v0);
            }
        }
    }

    /// Exact volume. Lower-dimensional or empty polytopes are rejected.
    pub fn volume(&self) -> Result<BigRational> {
        let vt = self.vertices();
        if vt.is_empty() {
            return Err(Error::Degenerate("empty polytope".into()));
        }
        let (verts, tight): (Vec<_>, Vec<_>) = vt.into_iter().unzip();
        let all: BTreeSet<usize> = (0..verts.len()).collect();
        if self.affine_dim(&verts, &all) != self.dim {
            return Err(Error::Degenerate("polytope is not full-dimensional".into()));
        }
        let mut simplices = Vec::new();
        self.triangulate(&verts, &tight, &all, self.dim, &mut simplices);
        let mut vol = BigRational::zero();
        for s in &simplices {
            let base = &verts[s[0]];
            let m = s[1..].iter().map(|&v| verts[v].iter().zip(base).map(|(a, b)| a - b).collect()).collect();
            vol += det(m).abs();
        }
        let fact: BigInt = (1..=self.dim as u64).map(BigInt::from).product();
        Ok(vol / BigRational::from_integer(fact))
    }

    /// Coordinatewise bounds of the vertex set.
    pub fn bounding_box(&self) -> Vec<(BigRational, BigRational)> {
        let v = self.vertices();
        (0..self.dim)
            .map(|j| {
                let lo = v.iter().map(|(x, _)| x[j].clone()).min().unwrap_or_else(BigRational::zero);
                let hi = v.iter().map(|(x, _)| x[j].clone()).max().unwrap_or_else(BigRational::zero);
                (lo, hi)
            })
            .collect()
    }
}

/// `[-K]` and the two extra negative curves in the basis `E1..E6` of `Pic`.
pub const ANTICANONICAL: [i64; 6] = [2, 3, 2, 1, 2, 1];
pub const EXTRA_CURVES: [[i64; 6]; 2] = [[0, 1, 1, -1, 1, 1], [1, 1, 0, 1, 1, -1]];
/// Coordinate moved to the last slot; it must carry a positive coefficient of `-K`.
pub const PIVOT: usize = 1;

fn pivoted(v: &[i64; 6]) -> [i64; 6] {
    let mut w = *v;
    w.swap(PIVOT, 5);
    w
}

/// The 5-dimensional region `R0` in log-height coordinates, together with
/// the coefficient of the pivot in `-K`.
pub fn alpha_polytope() -> Result<(Polytope, i64)> {
    let c = pivoted(&ANTICANONICAL);
    if c[5] <= 0 {
        return Err(Error::Degenerate("pivot coefficient of -K must be positive".into()));
    }
    let mut rows = vec![(c[..5].to_vec(), 1)];
    for b in EXTRA_CURVES.iter().map(pivoted) {
        rows.push(((0..5).map(|j| b[5] * c[j] - b[j] * c[5]).collect(), b[5]));
    }
    Ok((Polytope::from_ints(&rows)?.with_nonnegativity(), c[5]))
}

/// `vol(R0) / c_pivot`.
pub fn alpha_volume() -> Result<BigRational> {
    let (p, c) = alpha_polytope()?;
    Ok(p.volume()? / q(c))
}

/// `6 vol{t in R^6_{>=0} : E7.t >= 0, E8.t >= 0, -K.t <= 1}`, straight from the
/// dual effective cone.
pub fn alpha_dual_cone() -> Result<BigRational> {
    let mut rows = vec![(ANTICANONICAL.to_vec(), 1)];
    for b in EXTRA_CURVES {
        rows.push((b.iter().map(|x| -x).collect(), 0));
    }
    Ok(Polytope::from_ints(&rows)?.with_nonnegativity().volume()? * q(6))
}

/// Hit-or-miss estimate of `alpha` over the bounding box of `R0`.
pub fn alpha_monte_carlo<T: Real>(cfg: &McConfig) -> Result<McEstimate<T>> {
    let (p, c) = alpha_polytope()?;
    let bx: Vec<(T, T)> = p
        .bounding_box()
        .iter()
        .map(|(lo, hi)| (T::lit(lo.to_f64().unwrap_or(0.0)), T::lit(hi.to_f64().unwrap_or(0.0))))
        .collect();
    let scale = bx.iter().fold(T::one(), |acc, (lo, hi)| acc * (*hi - *lo)) / T::lit(c as f64);
    let est = mc_mean(cfg, |rng| {
        let x: Vec<T> = bx.iter().map(|&(lo, hi)| lo + (hi - lo) * T::lit(rng.gen::<f64>())).collect();
        if p.contains_float(&x) {
            scale
        } else {
            T::zero()
        }
    });
    Ok(est)
}
