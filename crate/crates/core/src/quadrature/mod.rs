//! Quadrature for the measure dμ_{α,β} and the inner product built on it.

mod function;
mod gauss;
mod monte_carlo;
mod rule;

pub(crate) use function::integrate_fn;
pub use function::{inner_product, integrate, norm_p, DiskFunction};
pub use gauss::{adaptive, adaptive_scalar, gauss_jacobi, gauss_legendre, unit_jacobi};
pub use monte_carlo::{mc_integrate, McEstimate};
pub use rule::{AngularRule, DiskRule, RadialRule};

/// Default rule size used by the verification suites.
pub const DEFAULT_RADIAL: usize = 200;
pub const DEFAULT_ANGULAR: usize = 256;

/// Builds the default-size rule for the given parameters.
pub fn default_rule(params: &crate::SpaceParams) -> crate::Result<DiskRule> {
    DiskRule::build(params, DEFAULT_RADIAL, DEFAULT_ANGULAR)
}
