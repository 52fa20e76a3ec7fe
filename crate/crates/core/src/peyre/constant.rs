//! Assembly of the leading constant `c = alpha * prefactor * euler * omega_inf`.

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::euler::{euler_product, EulerProduct};
use super::omega::{omega_infinity, IntegrationConfig, OmegaEstimate, OmegaMethod};
use super::polytope::alpha_volume;
use crate::field::{FieldContext, FieldMode};
use crate::{BigRational, Rational, Real, Result};

/// Relation between `omega_inf` and the main volume term of the count, recorded for reference.
pub const VOLUME_RELATION: &str = "(1/4320) pi^6 omega_inf B (log B)^5 = 4 V0'(B)";

fn big_ratio<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prefactor<T> {
    /// `h^6 / (|D|^4 w^6)`; the full prefactor is this times `(2 pi)^6`, or 1 over `Q`
    #[serde(serialize_with = "crate::serde_ratio")]
    pub rational: Rational,
    pub two_pi_power: u32,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerSummary<T> {
    pub value: T,
    pub lo: T,
    pub hi: T,
    pub cutoff: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueWithError<T> {
    pub value: T,
    pub err: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantBreakdown<T> {
    pub field: String,
    #[serde(serialize_with = "big_ratio")]
    pub alpha: BigRational,
    pub prefactor: Prefactor<T>,
    pub euler: EulerSummary<T>,
    pub omega_inf: OmegaEstimate<T>,
    pub c: ValueWithError<T>,
    pub relation: &'static str,
}

pub fn prefactor<T: Real>(ctx: &FieldContext) -> Prefactor<T> {
    match ctx.mode {
        FieldMode::Rational => Prefactor { rational: Rational::from_integer(1), two_pi_power: 0, value: T::one() },
        FieldMode::Quadratic => {
            let h = (ctx.class_number as i128).pow(6);
            let den = (ctx.disc.unsigned_abs() as i128).pow(4) * (ctx.units as i128).pow(6);
            let rational = Rational::new(h, den);
            let two_pi = T::lit(2.0) * T::PI();
            let value = two_pi.powi(6) * T::lit(*rational.numer() as f64) / T::lit(*rational.denom() as f64);
            Prefactor { rational, two_pi_power: 6, value }
        }
    }
}

/// Every factor, with `c.err` propagated from the Euler bracket width and the
/// `omega_inf` error bar.
pub fn assemble_constant<T: Real>(
    ctx: &FieldContext,
    cutoff: u64,
    method: OmegaMethod,
    cfg: &IntegrationConfig,
) -> Result<ConstantBreakdown<T>> {
    let alpha = alpha_volume()?;
    let pre = prefactor::<T>(ctx);
    let e: EulerProduct<T> = euler_product(ctx, cutoff);
    let w = omega_infinity::<T>(ctx, method, cfg)?;
    let a = T::lit(alpha.to_f64().unwrap_or(f64::NAN));
    let k = a * pre.value;
    let value = k * e.value * w.value;
    let err = k * (e.value * w.err + (e.upper - e.lower) * w.value.abs());
    Ok(ConstantBreakdown {
        field: ctx.spec().to_string(),
        alpha,
        prefactor: pre,
        euler: EulerSummary { value: e.value, lo: e.lower, hi: e.upper, cutoff },
        omega_inf: w,
        c: ValueWithError { value, err },
        relation: VOLUME_RELATION,
    })
}
