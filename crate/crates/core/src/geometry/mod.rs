//! The conformal metric ρ_{α,β}|dz| derived from log 𝕂(z, z), its distance,
//! and the associated discs.

mod density;

pub use density::*;
mod curves;

pub use curves::*;
mod geodesic;

pub use geodesic::*;
mod graph;

pub use graph::*;
mod disc;

pub use disc::*;
