//! Truncated Toeplitz operators, Berezin transforms and compactness diagnostics.

mod berezin;
mod compact;
mod symbol;
mod toeplitz;

pub use berezin::{
    berezin, kernel_norm, normalized_kernel, weak_convergence_probe, BerezinSource, BerezinValue, NormalizedKernel,
    WeakProbe, WeakProbeRow, MAX_CENTER, PEAK_NODES,
};
pub use compact::*;
pub use symbol::{BorelMeasure, DensityBase, PolySymbol, SymbolFunction};
pub use toeplitz::{toeplitz_from_measure, toeplitz_matrix, toeplitz_poly_exact, TruncatedToeplitz, MAX_DENSE};

pub(crate) use berezin::ls_slope;
