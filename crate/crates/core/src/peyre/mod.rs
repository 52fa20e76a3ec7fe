//! Ingredients of the leading constant: the Euler product, `alpha` as a
//! polytope volume, and the archimedean density `omega_inf`.

pub mod constant;
pub mod euler;
pub mod integrate;
pub mod omega;
pub mod polytope;
pub mod theta8;

pub use constant::{assemble_constant, prefactor, ConstantBreakdown, VOLUME_RELATION};
pub use euler::{euler_product, local_factor, local_factor_poly, EulerProduct};
pub use omega::{omega_infinity, IntegrationConfig, OmegaEstimate, OmegaMethod};
pub use polytope::{alpha_monte_carlo, alpha_polytope, alpha_volume, Polytope};
pub use theta8::{theta8_average_identity, theta8_value, ThetaValue};
