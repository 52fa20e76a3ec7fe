//! Fractional ideals as lattices in `C`: reduced bases, exact enumeration of
//! lattice points in discs and regions, and the Davenport main term.

pub mod region;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::field::elem::{embed, embed_w};
use crate::field::{AlgInt, FieldContext, FieldMode, FracIdeal, KElem};
use crate::Rational;
pub use region::{davenport_main_term, region_area, AreaMethod, Constraint, Region, Relation};

/// The translated lattice `beta + I` in `C`, with a Gauss-reduced basis.
#[derive(Clone, Debug)]
pub struct ComplexLattice {
    pub ideal: FracIdeal,
    pub beta: KElem,
    /// Reduced basis as numerators over `ideal.den`: `|u1| <= |u2|`, `|<u1,u2>| <= |u1|^2 / 2`.
    pub exact: [AlgInt; 2],
    pub basis: [Complex64; 2],
    pub det: f64,
}

/// `2 <x, y>` for the real inner product induced by the norm form.
fn dot2(ctx: &FieldContext, x: &AlgInt, y: &AlgInt) -> i128 {
    ctx.ring.norm(&(*x + *y)) - ctx.ring.norm(x) - ctx.ring.norm(y)
}

/// Gauss (Lagrange) reduction of a basis of a rank 2 lattice in `O_K`.
pub fn gauss_reduce(ctx: &FieldContext, mut u: AlgInt, mut v: AlgInt) -> [AlgInt; 2] {
    if ctx.ring.norm(&u) > ctx.ring.norm(&v) {
        std::mem::swap(&mut u, &mut v);
    }
    loop {
        let nu = ctx.ring.norm(&u);
        // nearest integer to <u,v>/<u,u> = dot2 / (2 nu)
        let mu = Integer::div_floor(&(dot2(ctx, &u, &v) + nu), &(2 * nu));
        v = v - u.scale(&mu);
        if ctx.ring.norm(&v) >= nu {
            return [u, v];
        }
        std::mem::swap(&mut u, &mut v);
    }
}

pub fn ideal_lattice(ctx: &FieldContext, ideal: &FracIdeal, beta: &KElem) -> Result<ComplexLattice> {
    if ideal.is_zero() {
        return Err(Error::ZeroIdeal("lattice"));
    }
    if ctx.mode == FieldMode::Rational {
        return Err(Error::InvalidField("complex lattices need an imaginary quadratic field".into()));
    }
    let exact = gauss_reduce(ctx, AlgInt::new(ideal.a, 0), AlgInt::new(ideal.b, ideal.c));
    let w = embed_w(&ctx.ring);
    let basis = exact.map(|u| embed(&KElem::new(u, ideal.den), w));
    let det = (basis[0].re * basis[1].im - basis[0].im * basis[1].re).abs();
    Ok(ComplexLattice { ideal: *ideal, beta: *beta, exact, basis, det })
}

impl ComplexLattice {
    /// `lambda_1^2`, the squared length of the shortest nonzero vector of `I`.
    pub fn lambda1_sq(&self, ctx: &FieldContext) -> Rational {
        Rational::new(ctx.ring.norm(&self.exact[0]), self.ideal.den * self.ideal.den)
    }

    /// All `x` in `beta + I` with `|x - center|^2 <= r2`, sorted.
    pub fn enumerate_in_disc(&self, ctx: &FieldContext, center: &KElem, r2: Rational) -> Vec<KElem> {
        let mut out = Vec::new();
        self.visit_disc(ctx, center, r2, |x| out.push(x));
        out.sort_by_key(|x| (ctx.abs_elem(x), *x));
        out
    }

    pub fn count_in_disc(&self, ctx: &FieldContext, center: &KElem, r2: Rational) -> u64 {
        let mut n = 0;
        self.visit_disc(ctx, center, r2, |_| n += 1);
        n
    }

    /// Calls `f` on every lattice point in the closed disc. Float bounds pick
    /// the candidates, membership is decided exactly.
    pub fn visit_disc<F: FnMut(KElem)>(&self, ctx: &FieldContext, center: &KElem, r2: Rational, mut f: F) {
        if r2 < Rational::from_integer(0) {
            return;
        }
        let den = self.ideal.den.lcm(&self.beta.den).lcm(&center.den);
        let s = den / self.ideal.den;
        let e1 = self.exact[0].scale(&s);
        let e2 = self.exact[1].scale(&s);
        let shift = self.beta.sub(center);
        let g = shift.num.scale(&(den / shift.den));
        let limit = *r2.numer() * den * den;
        let scale = *r2.denom();

        let w = embed_w(&ctx.ring);
        let to_c = |x: &AlgInt| Complex64::new(x.a as f64, 0.0) + w * x.b as f64;
        let (z1, z2, zg) = (to_c(&e1), to_c(&e2), to_c(&g));
        // -g = m0 e1 + n0 e2
        let det = z1.re * z2.im - z1.im * z2.re;
        let m0 = (-zg.re * z2.im + zg.im * z2.re) / det;
        let n0 = (-z1.re * zg.im + z1.im * zg.re) / det;
        let a = z1.norm_sqr();
        let b = z1.re * z2.re + z1.im * z2.im;
        let c = z2.norm_sqr();
        let gram = a * c - b * b;
        let rr = limit as f64 / scale as f64;
        let slack = 1e-9 * (1.0 + rr);
        let nspan = ((rr + slack) * a / gram).sqrt();
        let (nlo, nhi) = ((n0 - nspan).floor() as i128 - 1, (n0 + nspan).ceil() as i128 + 1);
        for n in nlo..=nhi {
            let dn = n as f64 - n0;
            let rest = rr + slack - gram / a * dn * dn;
            if rest < 0.0 && n != nlo && n != nhi {
                continue;
            }
            let mspan = (rest.max(0.0) / a).sqrt();
            let mc = m0 - b / a * dn;
            let (mlo, mhi) = ((mc - mspan).floor() as i128 - 1, (mc + mspan).ceil() as i128 + 1);
            let base = g + e2.scale(&n);
            for m in mlo..=mhi {
                let p = base + e1.scale(&m);
                if ctx.ring.norm(&p) * scale <= limit {
                    f(center.add(&KElem::new(p, den)));
                }
            }
        }
    }
}

/// Elements of the integral ideal `I` of norm exactly `target`.
pub fn elements_of_norm_in(ctx: &FieldContext, ideal: &FracIdeal, target: i128) -> Vec<AlgInt> {
    if ctx.mode == FieldMode::Rational {
        if target % ideal.a != 0 {
            return Vec::new();
        }
        return vec![AlgInt::new(target, 0), AlgInt::new(-target, 0)];
    }
    let lat = ideal_lattice(ctx, ideal, &KElem::zero()).expect("nonzero ideal");
    lat.enumerate_in_disc(ctx, &KElem::zero(), Rational::from_integer(target))
        .into_iter()
        .filter(|x| x.is_integral() && ctx.ring.norm(&x.num) == target)
        .map(|x| x.num)
        .collect()
}

/// Nonzero `x` in the fractional ideal `I` with `|x| <= nmax * N(I)`, paired
/// with the integer `|x| / N(I)` and sorted by it. `|x|` is the absolute
/// value over `Q` and the squared modulus over `K`.
pub fn ideal_elements_by_size(ctx: &FieldContext, ideal: &FracIdeal, nmax: u64) -> Vec<(KElem, u64)> {
    let norm = ctx.norm(ideal);
    let mut out: Vec<(KElem, u64)> = match ctx.mode {
        FieldMode::Rational => {
            // I = (a/den) Z, |x| / N(I) = |k|
            (1..=nmax as i128)
                .flat_map(|k| [k, -k])
                .map(|k| (KElem::new(AlgInt::new(k * ideal.a, 0), ideal.den), k.unsigned_abs() as u64))
                .collect()
        }
        FieldMode::Quadratic => {
            let lat = ideal_lattice(ctx, ideal, &KElem::zero()).expect("nonzero ideal");
            let r2 = norm * Rational::from_integer(nmax as i128);
            let mut v = Vec::new();
            lat.visit_disc(ctx, &KElem::zero(), r2, |x| {
                if !x.is_zero() {
                    let q = ctx.abs_elem(&x) / norm;
                    debug_assert!(q.is_integer());
                    v.push((x, q.to_integer() as u64));
                }
            });
            v
        }
    };
    out.sort_by_key(|(x, n)| (*n, *x));
    out
}
