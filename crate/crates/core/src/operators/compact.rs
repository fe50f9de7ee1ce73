use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::berezin::{berezin, BerezinSource, PEAK_NODES};
use super::symbol::{PolySymbol, SymbolFunction};
use super::toeplitz::{max_abs, toeplitz_matrix, toeplitz_poly_exact};
use crate::error::{Error, Result};
use crate::params::SpaceParams;
use crate::projection::inverse_weight_mass;
use crate::quadrature::DiskRule;

pub const DEFAULT_N_LIST: [usize; 3] = [16, 32, 48];
/// Radius of the Berezin boundary scan.
pub const SCAN_RADIUS: f64 = 0.99;
pub const BEREZIN_THRESHOLD: f64 = 0.05;
pub const TAIL_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompactnessVerdict {
    CompactConsistent,
    NonCompactConsistent,
    /// The two indicators disagree at the configured cutoffs.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub n: usize,
    /// σ_{N/2}, …, σ_N (decreasing).
    pub tail: Vec<f64>,
}

impl TailRow {
    pub fn max(&self) -> f64 {
        self.tail.first().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactnessReport {
    pub symbol: String,
    /// max |φ̃(z)| over |z| = 0.99.
    pub berezin_scan: f64,
    pub tails: Vec<TailRow>,
    /// max |φ| over sampled boundary points, when a trace is available.
    pub boundary_trace_max: Option<f64>,
    /// ∫ |w|^{−2β} dμ_{α,β}; the compactness estimate carries this constant
    /// with an unclear normalization, so it is only reported.
    pub inverse_weight_mass: f64,
    pub verdict: CompactnessVerdict,
}

/// Berezin boundary scan plus tail singular values of T_φ for each N.
pub fn compactness_diagnostic(
    phi: &SymbolFunction,
    params: &SpaceParams,
    n_list: &[usize],
    rule: &DiskRule,
) -> Result<CompactnessReport> {
    if !phi.continuous_to_boundary && phi.support_radius.is_none() {
        return Err(Error::Domain(
            "compactness diagnostic needs a symbol continuous to the boundary or compactly supported".into(),
        ));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("N list must be non-empty and increasing".into()));
    }
    let angles = if phi.radial { 1 } else { 16 };
    let mut scan = 0.0f64;
    for l in 0..angles {
        let z = Complex64::from_polar(SCAN_RADIUS, 2.0 * PI * l as f64 / angles as f64);
        scan = scan.max(berezin(BerezinSource::Symbol(phi), params, z, PEAK_NODES)?.value.norm());
    }
    let mut tails = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let s = toeplitz_matrix(phi, params, n, rule)?.singular_values()?;
        tails.push(TailRow { n, tail: s[n / 2..].to_vec() });
    }
    let boundary_trace_max = phi.boundary_trace(0.0).map(|_| {
        (0..64).map(|l| phi.boundary_trace(2.0 * PI * l as f64 / 64.0).expect("trace").norm()).fold(0.0, f64::max)
    });
    let last = tails.last().expect("non-empty").max();
    let verdict = match (scan < BEREZIN_THRESHOLD, last < TAIL_THRESHOLD) {
        (true, true) => CompactnessVerdict::CompactConsistent,
        (false, false) => CompactnessVerdict::NonCompactConsistent,
        _ => CompactnessVerdict::Inconclusive,
    };
    Ok(CompactnessReport {
        symbol: phi.label.clone(),
        berezin_scan: scan,
        tails,
        boundary_trace_max,
        inverse_weight_mass: inverse_weight_mass(params)?,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub n: usize,
    /// max |T_{φ₁+φ₂} − T_{φ₁} − T_{φ₂}|.
    pub additivity: f64,
    /// max |T_{conj φ₂} − T_{φ₂}ᴴ|.
    pub adjoint: f64,
    /// max |T_{conj φ₁} T_{φ₂} − T_{conj(φ₁) φ₂}| on the leading block.
    pub multiplicativity: f64,
    pub block: usize,
    /// max |T_1 T_{φ₂} − T_{φ₂}|.
    pub unit: f64,
    /// Quadrature matrix of φ₂ against the closed-form moments.
    pub exact_residual: f64,
}

fn block_residual(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, size: usize) -> f64 {
    max_abs(&(a.view((0, 0), (size, size)) - b.view((0, 0), (size, size))))
}

/// Residuals of the algebraic Toeplitz identities for φ₁ analytic.
pub fn toeplitz_algebra_checks(
    phi1: &PolySymbol,
    phi2: &PolySymbol,
    params: &SpaceParams,
    n: usize,
    rule: &DiskRule,
) -> Result<AlgebraReport> {
    if !phi1.is_analytic() {
        return Err(Error::Domain("the first symbol must be an analytic polynomial".into()));
    }
    let deg = (phi1.degree() + phi2.degree()) as usize;
    if 2 * deg > n {
        return Err(Error::TruncationGuard(format!("deg1 + deg2 = {deg} exceeds N/2 = {}", n / 2)));
    }
    let t = |p: &PolySymbol| toeplitz_matrix(&p.to_symbol(), params, n, rule).map(|t| t.matrix);
    let t1 = t(phi1)?;
    let t2 = t(phi2)?;
    let t1c = t(&phi1.conj())?;
    let additivity = max_abs(&(t(&phi1.add(phi2))? - &t1 - &t2));
    let adjoint = max_abs(&(t(&phi2.conj())? - t2.adjoint()));
    let product = &t1c * &t2;
    let block = n - deg;
    let multiplicativity = block_residual(&product, &t(&phi1.conj().mul(phi2))?, block);
    let t_one = t(&PolySymbol::one())?;
    let unit = max_abs(&(&t_one * &t2 - &t2));
    let exact_residual = max_abs(&(&t2 - toeplitz_poly_exact(phi2, params, n).matrix));
    Ok(AlgebraReport { n, additivity, adjoint, multiplicativity, block, unit, exact_residual })
}
