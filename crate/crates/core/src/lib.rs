//! Numerics for β-modified weighted Bergman spaces on the punctured unit disc.
//!
//! The space 𝒜ᵖ_{α,β} consists of holomorphic functions on 𝔻∖{0} that are
//! p-integrable against `|z|^{2β}(1−|z|²)^α dA / ℬ(α+1, β+1)`.  Writing
//! β = β₀ + m with β₀ ∈ (−1, 0], its elements may have a pole of order up to
//! m at the origin.
//!
//! The crate evaluates the reproducing kernel, the orthogonal projection,
//! truncated Toeplitz operators and Berezin transforms, the conformal metric
//! derived from the kernel, and Carleson-measure diagnostics.  The
//! [`verify`] module collects the checks that tie these pieces together.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod operators;
pub mod params;
pub mod projection;
pub mod quadrature;
pub mod roots;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use params::SpaceParams;
pub use quadrature::{DiskFunction, DiskRule};

pub use num_complex::Complex64;
