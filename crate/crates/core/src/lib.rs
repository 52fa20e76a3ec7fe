//! Rational points of bounded height on the A3 quartic del Pezzo surface
//!
//! `S : x0 x1 - x2 x3 = x0 x3 + x1 x3 + x2 x4 = 0` in `P^4`, over `Q` and over
//! imaginary quadratic fields. Points on the open set `U` (complement of the
//! five lines) are counted twice, once by direct height enumeration and once
//! through the universal torsor, and the two counts must agree exactly. The
//! [`peyre`] module computes the pieces of the conjectured leading constant.
//!
//! Numerical code is generic over [`Real`]; exact code uses `i128` and
//! [`Rational`].

#![allow(clippy::needless_range_loop)]

pub mod analytic;
pub mod arith;
pub mod error;
pub mod field;
pub mod lattice;
pub mod peyre;
pub mod poly;
pub mod scalar;
pub mod surface;
pub mod torsor;

pub use error::{Error, Result};
pub use field::{AlgInt, FieldContext, FieldMode, FieldSpec, FracIdeal, KElem};
pub use scalar::Real;

/// Exact rational numbers with machine-sized parts.
pub type Rational = num_rational::Ratio<i128>;
/// Exact rationals for the polytope volume, whose intermediates grow.
pub type BigRational = num_rational::BigRational;
/// Default floating scalar.
pub type Float = f64;

/// Serialize an exact rational as `"p/q"`.
pub fn serde_ratio<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

/// Outcome of a batch of randomized exact checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CheckTally {
    pub checked: u64,
    pub failures: u64,
}

impl CheckTally {
    pub fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.failures += u64::from(!ok);
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failures == 0
    }
}
