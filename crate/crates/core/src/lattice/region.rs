//! Bounded regions of `C` cut out by modulus inequalities between polynomials.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ComplexLattice;
use crate::error::{Error, Result};
use crate::field::elem::{embed, embed_w};
use crate::field::{FieldContext, FracIdeal, KElem};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
}

/// `|f(z)|^2 <= scale * |g(z)|^2` (or `=`), coefficients listed from the
/// constant term up.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub f: Vec<KElem>,
    pub g: Vec<KElem>,
    pub scale: Rational,
    pub rel: Relation,
}

impl Constraint {
    pub fn le(f: Vec<KElem>, g: Vec<KElem>) -> Self {
        Self { f, g, scale: Rational::from_integer(1), rel: Relation::Le }
    }

    pub fn eq(f: Vec<KElem>, g: Vec<KElem>) -> Self {
        Self { f, g, scale: Rational::from_integer(1), rel: Relation::Eq }
    }

    pub fn scaled(mut self, scale: Rational) -> Self {
        self.scale = scale;
        self
    }

    pub fn degree(&self) -> usize {
        self.f.len().max(self.g.len()).saturating_sub(1)
    }

    fn holds_exact(&self, ctx: &FieldContext, z: &KElem) -> bool {
        let ev = |p: &[KElem]| p.iter().rev().fold(KElem::zero(), |acc, c| ctx.kmul(&acc, z).add(c));
        let (lf, lg) = (ctx.abs_elem(&ev(&self.f)), self.scale * ctx.abs_elem(&ev(&self.g)));
        match self.rel {
            Relation::Le => lf <= lg,
            Relation::Eq => lf == lg,
        }
    }

    fn holds_float(&self, w: Complex64, z: Complex64) -> bool {
        let ev = |p: &[KElem]| p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + embed(c, w));
        let scale = *self.scale.numer() as f64 / *self.scale.denom() as f64;
        let (lf, lg) = (ev(&self.f).norm_sqr(), scale * ev(&self.g).norm_sqr());
        match self.rel {
            Relation::Le => lf <= lg,
            Relation::Eq => (lf - lg).abs() <= 1e-12 * (1.0 + lg),
        }
    }
}

/// Intersection of constraints, with an optional certificate that the set
/// lies in the disc `|z - center|^2 <= r2`.
#[derive(Clone, Debug, Default)]
pub struct Region {
    pub constraints: Vec<Constraint>,
    pub bounding_disc: Option<(KElem, Rational)>,
}

impl Region {
    pub fn new(constraints: Vec<Constraint>) -> Self {
        Self { constraints, bounding_disc: None }
    }

    pub fn with_bounding_disc(mut self, center: KElem, r2: Rational) -> Self {
        self.bounding_disc = Some((center, r2));
        self
    }

    /// The disc `|z - center|^2 <= r2` itself.
    pub fn disc(center: KElem, r2: Rational) -> Self {
        Region::new(vec![Constraint::le(vec![center.neg(), KElem::one()], vec![KElem::one()]).scaled(r2)])
            .with_bounding_disc(center, r2)
    }

    pub fn contains_exact(&self, ctx: &FieldContext, z: &KElem) -> bool {
        self.constraints.iter().all(|c| c.holds_exact(ctx, z))
    }

    pub fn contains_float(&self, w: Complex64, z: Complex64) -> bool {
        self.constraints.iter().all(|c| c.holds_float(w, z))
    }

    pub fn max_degree(&self) -> usize {
        self.constraints.iter().map(Constraint::degree).max().unwrap_or(0)
    }

    fn certificate(&self) -> Result<(KElem, Rational)> {
        self.bounding_disc.ok_or_else(|| Error::InvalidArgument("region has no boundedness certificate".into()))
    }

    /// Exact number of lattice points of `L` inside the region.
    pub fn count_lattice_points(&self, ctx: &FieldContext, lattice: &ComplexLattice) -> Result<u64> {
        let (center, r2) = self.certificate()?;
        let mut n = 0;
        lattice.visit_disc(ctx, &center, r2, |x| {
            if self.contains_exact(ctx, &x) {
                n += 1;
            }
        });
        Ok(n)
    }
}

#[derive(Clone, Copy, Debug)]
pub enum AreaMethod {
    MonteCarlo { samples: u64, seed: u64 },
    Grid { step: f64 },
}

/// Area of a bounded region with an error estimate: one standard error for
/// Monte Carlo, the total area of boundary cells for the grid.
pub fn region_area(ctx: &FieldContext, region: &Region, method: AreaMethod) -> Result<(f64, f64)> {
    let (center, r2) = region.certificate()?;
    let w = embed_w(&ctx.ring);
    let c = embed(&center, w);
    let radius = (*r2.numer() as f64 / *r2.denom() as f64).sqrt();
    match method {
        AreaMethod::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut hits = 0u64;
            for _ in 0..samples {
                // uniform in the bounding disc
                let rho = radius * rng.gen::<f64>().sqrt();
                let phi = std::f64::consts::TAU * rng.gen::<f64>();
                if region.contains_float(w, c + Complex64::from_polar(rho, phi)) {
                    hits += 1;
                }
            }
            let total = std::f64::consts::PI * radius * radius;
            let p = hits as f64 / samples as f64;
            Ok((total * p, total * (p * (1.0 - p) / samples as f64).sqrt()))
        }
        AreaMethod::Grid { step } => {
            let n = (2.0 * radius / step).ceil() as i64;
            let origin = c - Complex64::new(radius, radius);
            let inside = |i: f64, j: f64| region.contains_float(w, origin + Complex64::new(i * step, j * step));
            let (mut area, mut boundary) = (0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let (x, y) = (i as f64, j as f64);
                    let mid = inside(x + 0.5, y + 0.5);
                    if mid {
                        area += step * step;
                    }
                    let corners = [inside(x, y), inside(x + 1.0, y), inside(x, y + 1.0), inside(x + 1.0, y + 1.0)];
                    if corners.iter().any(|&k| k != mid) {
                        boundary += step * step;
                    }
                }
            }
            Ok((area, boundary))
        }
    }
}

/// `2 area / (sqrt|D| N(I))`, the expected number of points of `I` in a set of that area.
pub fn davenport_main_term(ctx: &FieldContext, area: f64, ideal: &FracIdeal) -> f64 {
    let n = ctx.norm(ideal);
    2.0 * area / ((-(ctx.disc as f64)).sqrt() * (*n.numer() as f64 / *n.denom() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::AlgInt;
    use crate::lattice::ideal_lattice;

    fn z(a: i128, b: i128) -> KElem {
        KElem::int(AlgInt::new(a, b))
    }

    #[test]
    fn unit_disc_area() {
        let k = FieldContext::quadratic(-1).unwrap();
        let disc = Region::disc(KElem::zero(), Rational::from_integer(1))
            .with_bounding_disc(KElem::zero(), Rational::from_integer(2));
        let (a, e) = region_area(&k, &disc, AreaMethod::MonteCarlo { samples: 200_000, seed: 1 }).unwrap();
        assert!((a - std::f64::consts::PI).abs() < 4.0 * e);
        let (g, ge) = region_area(&k, &disc, AreaMethod::Grid { step: 0.01 }).unwrap();
        assert!((g - std::f64::consts::PI).abs() < ge);
    }

    #[test]
    fn quadratic_constraint_methods_agree() {
        // |z^2 - 1|^2 <= 1 lies in |z|^2 <= 2
        let k = FieldContext::quadratic(-1).unwrap();
        let reg = Region::new(vec![Constraint::le(vec![z(-1, 0), z(0, 0), z(1, 0)], vec![z(1, 0)])])
            .with_bounding_disc(KElem::zero(), Rational::from_integer(2));
        let (mc, e) = region_area(&k, &reg, AreaMethod::MonteCarlo { samples: 400_000, seed: 5 }).unwrap();
        let (g, ge) = region_area(&k, &reg, AreaMethod::Grid { step: 0.005 }).unwrap();
        assert!((mc - g).abs() < 4.0 * e + ge, "mc {mc} grid {g}");
        // the lemniscate area is exactly 2
        assert!((g - 2.0).abs() < ge);
    }

    #[test]
    fn annulus_split_is_additive() {
        let k = FieldContext::quadratic(-1).unwrap();
        let outer = Region::new(vec![Constraint::le(vec![z(0, 0), z(1, 0)], vec![z(2, 0)])])
            .with_bounding_disc(KElem::zero(), Rational::from_integer(4));
        let inner = Region::new(vec![Constraint::le(vec![z(0, 0), z(1, 0)], vec![z(1, 0)])])
            .with_bounding_disc(KElem::zero(), Rational::from_integer(4));
        let ring = Region::new(vec![Constraint::le(vec![z(1, 0)], vec![z(0, 0), z(1, 0)]), outer.constraints[0].clone()])
            .with_bounding_disc(KElem::zero(), Rational::from_integer(4));
        let m = AreaMethod::Grid { step: 0.01 };
        let (o, oe) = region_area(&k, &outer, m).unwrap();
        let (i, ie) = region_area(&k, &inner, m).unwrap();
        let (r, re) = region_area(&k, &ring, m).unwrap();
        assert!((o - i - r).abs() <= oe + ie + re);
        let l = ideal_lattice(&k, &FracIdeal::UNIT, &KElem::zero()).unwrap();
        let (co, ci, cr) = (
            outer.count_lattice_points(&k, &l).unwrap(),
            inner.count_lattice_points(&k, &l).unwrap(),
            ring.count_lattice_points(&k, &l).unwrap(),
        );
        // the unit circle is in both inner and ring
        let on_circle = 4;
        assert_eq!(co + on_circle, ci + cr);
    }

    #[test]
    fn counting_examples() {
        let k = FieldContext::quadratic(-1).unwrap();
        let l = ideal_lattice(&k, &FracIdeal::UNIT, &KElem::zero()).unwrap();
        let disc = Region::disc(KElem::zero(), Rational::from_integer(100));
        assert_eq!(disc.count_lattice_points(&k, &l).unwrap(), 317);
        let main = davenport_main_term(&k, std::f64::consts::PI * 100.0, &FracIdeal::UNIT);
        assert!((main - 314.159_265).abs() < 1e-5);
        // |2z|^2 = |2|^2 is the unit circle; |z|^2 = 1/2 has no Gaussian integer on it
        let circle = Region::new(vec![Constraint::eq(vec![z(0, 0), z(2, 0)], vec![z(2, 0)])])
            .with_bounding_disc(KElem::zero(), Rational::from_integer(1));
        let half = Region::new(vec![Constraint::eq(vec![z(0, 0), z(1, 0)], vec![KElem::new(AlgInt::new(1, 1), 2)])])
            .with_bounding_disc(KElem::zero(), Rational::from_integer(1));
        assert_eq!(circle.count_lattice_points(&k, &l).unwrap(), 4);
        assert_eq!(half.count_lattice_points(&k, &l).unwrap(), 0);
        assert!(Region::new(vec![]).count_lattice_points(&k, &l).is_err());
    }

    #[test]
    fn unit_rotation_preserves_counts() {
        let k = FieldContext::quadratic(-3).unwrap();
        let l = ideal_lattice(&k, &k.principal_int(&AlgInt::new(2, 1)), &KElem::zero()).unwrap();
        // |z - 3|^2 <= 20 and its images |z - 3u|^2 <= 20
        let base = Region::disc(KElem::from_i128(3), Rational::from_integer(20));
        let n = base.count_lattice_points(&k, &l).unwrap();
        assert!(n > 0);
        for u in k.unit_group() {
            let c = KElem::int(k.ring.mul(&u, &AlgInt::new(3, 0)));
            let reg = Region::disc(c, Rational::from_integer(20));
            assert_eq!(reg.count_lattice_points(&k, &l).unwrap(), n);
        }
    }
}
