use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::SpaceParams;

type Map = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A bounded symbol φ on 𝔻 with the metadata the diagnostics rely on.
#[derive(Clone)]
pub struct SymbolFunction {
    f: Map,
    pub label: String,
    pub radial: bool,
    /// φ vanishes for |z| > support_radius.
    pub support_radius: Option<f64>,
    pub continuous_to_boundary: bool,
    trace: Option<Arc<dyn Fn(f64) -> Complex64 + Send + Sync>>,
}

impl fmt::Debug for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolFunction")
            .field("label", &self.label)
            .field("radial", &self.radial)
            .field("support_radius", &self.support_radius)
            .field("continuous_to_boundary", &self.continuous_to_boundary)
            .finish_non_exhaustive()
    }
}

impl SymbolFunction {
    /// A general symbol with no structural flags.
    pub fn new(label: impl Into<String>, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static) -> Self {
        SymbolFunction {
            f: Arc::new(f),
            label: label.into(),
            radial: false,
            support_radius: None,
            continuous_to_boundary: false,
            trace: None,
        }
    }

    /// A symbol of |z| only, continuous on the closed disc.
    pub fn radial(label: impl Into<String>, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let g = Arc::new(g);
        let g2 = g.clone();
        let mut s = Self::new(label, move |z: Complex64| Complex64::new(g(z.norm()), 0.0));
        s.radial = true;
        s.continuous_to_boundary = true;
        s.trace = Some(Arc::new(move |_| Complex64::new(g2(1.0), 0.0)));
        s
    }

    pub fn constant(c: f64) -> Self {
        Self::radial(format!("{c}"), move |_| c)
    }

    /// φ(z) = 1 − |z|², vanishing on the boundary.
    pub fn one_minus_r2() -> Self {
        Self::radial("1-|z|^2", |r| 1.0 - r * r)
    }

    /// Indicator of {|z| ≤ radius}.
    pub fn indicator(radius: f64) -> Self {
        let mut s = Self::radial(format!("1{{|z|<={radius}}}"), move |r| if r <= radius { 1.0 } else { 0.0 });
        s.support_radius = Some(radius);
        s.continuous_to_boundary = false;
        s.trace = Some(Arc::new(|_| Complex64::new(0.0, 0.0)));
        s
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support_radius = Some(radius);
        self
    }

    pub fn with_trace(mut self, trace: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.continuous_to_boundary = true;
        self.trace = Some(Arc::new(trace));
        self
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }

    /// Boundary values φ(e^{iθ}), when known.
    pub fn boundary_trace(&self, theta: f64) -> Option<Complex64> {
        self.trace.as_ref().map(|t| t(theta))
    }

    /// conj(φ).
    pub fn conj(&self) -> Self {
        let f = self.f.clone();
        let trace = self.trace.clone();
        SymbolFunction {
            f: Arc::new(move |z| f(z).conj()),
            label: format!("conj({})", self.label),
            radial: self.radial,
            support_radius: self.support_radius,
            continuous_to_boundary: self.continuous_to_boundary,
            trace: trace.map(|t| Arc::new(move |th| t(th).conj()) as Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
        }
    }

    /// Whether φ is real on a sampled grid (then T_φ is Hermitian).
    pub fn is_real_sampled(&self) -> bool {
        (1..10).all(|i| {
            (0..16).all(|j| {
                let z = Complex64::from_polar(i as f64 / 10.0, j as f64 * 0.39);
                self.eval(z).im.abs() <= 1e-14 * self.eval(z).re.abs().max(1.0)
            })
        })
    }
}

/// Σ c·conj(z)^s·z^t with ordinary (unshifted) powers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolySymbol {
    pub terms: Vec<(u32, u32, Complex64)>,
}

impl PolySymbol {
    pub fn new(terms: Vec<(u32, u32, Complex64)>) -> Self {
        PolySymbol { terms }.simplified()
    }

    /// Σ c_n zⁿ.
    pub fn analytic(coeffs: &[Complex64]) -> Self {
        Self::new(coeffs.iter().enumerate().map(|(n, &c)| (0, n as u32, c)).collect())
    }

    /// The monomial z.
    pub fn z() -> Self {
        Self::analytic(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    pub fn one() -> Self {
        Self::analytic(&[Complex64::new(1.0, 0.0)])
    }

    fn simplified(mut self) -> Self {
        self.terms.sort_by_key(|&(s, t, _)| (s, t));
        let mut out: Vec<(u32, u32, Complex64)> = Vec::new();
        for (s, t, c) in self.terms {
            match out.last_mut() {
                Some(last) if last.0 == s && last.1 == t => last.2 += c,
                _ => out.push((s, t, c)),
            }
        }
        out.retain(|t| t.2 != Complex64::new(0.0, 0.0));
        PolySymbol { terms: out }
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.iter().all(|t| t.0 == 0)
    }

    /// Total degree max(s + t).
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.terms.iter().map(|&(s, t, c)| (t, s, c.conj())).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).copied().collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for &(s1, t1, c1) in &self.terms {
            for &(s2, t2, c2) in &other.terms {
                terms.push((s1 + s2, t1 + t2, c1 * c2));
            }
        }
        Self::new(terms)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zc = z.conj();
        self.terms.iter().map(|&(s, t, c)| c * zc.powu(s) * z.powu(t)).sum()
    }

    pub fn to_symbol(&self) -> SymbolFunction {
        let p = self.clone();
        let q = self.clone();
        SymbolFunction::new(format!("poly{:?}", self.terms.iter().map(|t| (t.0, t.1)).collect::<Vec<_>>()), move |z| {
            p.eval(z)
        })
        .with_trace(move |th| q.eval(Complex64::from_polar(1.0, th)))
    }
}

/// Reference measure for a density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DensityBase {
    /// Against normalized area dA.
    Area,
    /// Against μ_{α,β} itself (dν = φ dμ).
    Mu,
}

/// A finite positive Borel measure on 𝔻.
#[derive(Clone)]
pub enum BorelMeasure {
    Density { density: Map, base: DensityBase, label: String },
    Atoms(Vec<(Complex64, f64)>),
}

impl fmt::Debug for BorelMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BorelMeasure::Density { base, label, .. } => {
                f.debug_struct("Density").field("label", label).field("base", base).finish_non_exhaustive()
            }
            BorelMeasure::Atoms(a) => f.debug_tuple("Atoms").field(a).finish(),
        }
    }
}

impl BorelMeasure {
    /// dν = φ dμ_{α,β}.
    pub fn from_symbol(phi: &SymbolFunction) -> Self {
        let f = phi.f.clone();
        BorelMeasure::Density { density: f, base: DensityBase::Mu, label: phi.label.clone() }
    }

    /// dν = g dA with g given against normalized area.
    pub fn area_density(label: impl Into<String>, g: impl Fn(Complex64) -> f64 + Send + Sync + 'static) -> Self {
        BorelMeasure::Density {
            density: Arc::new(move |z| Complex64::new(g(z), 0.0)),
            base: DensityBase::Area,
            label: label.into(),
        }
    }

    /// μ_{α,β} written as an area density, |z|^{2β}(1−|z|²)^α/ℬ(α+1,β+1).
    pub fn mu(params: &SpaceParams) -> Self {
        let p = *params;
        let c = 1.0 / p.mass();
        Self::area_density("mu", move |z| c * z.norm_sqr().powf(p.beta) * (1.0 - z.norm_sqr()).powf(p.alpha))
    }

    pub fn atoms(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        if atoms.iter().any(|a| !(a.1 >= 0.0) || !(a.0.norm() < 1.0)) {
            return Err(Error::Domain("atoms need mass >= 0 and a point inside the disc".into()));
        }
        Ok(BorelMeasure::Atoms(atoms))
    }

    /// λ·ν.
    pub fn scaled(&self, lambda: f64) -> Self {
        match self {
            BorelMeasure::Density { density, base, label } => {
                let d = density.clone();
                BorelMeasure::Density {
                    density: Arc::new(move |z| d(z) * lambda),
                    base: *base,
                    label: format!("{lambda}*{label}"),
                }
            }
            BorelMeasure::Atoms(a) => BorelMeasure::Atoms(a.iter().map(|&(z, m)| (z, m * lambda)).collect()),
        }
    }

    /// Density of ν relative to μ_{α,β} at z (densities only).
    pub(crate) fn relative_density(&self, params: &SpaceParams) -> Option<impl Fn(Complex64) -> Complex64 + '_> {
        match self {
            BorelMeasure::Density { density, base, .. } => {
                let c = params.mass();
                let p = *params;
                let base = *base;
                Some(move |z: Complex64| match base {
                    DensityBase::Mu => density(z),
                    DensityBase::Area => {
                        let t = z.norm_sqr();
                        density(z) * c / (t.powf(p.beta) * (1.0 - t).powf(p.alpha))
                    }
                })
            }
            BorelMeasure::Atoms(_) => None,
        }
    }
}
