use num_complex::Complex64;
use serde::Serialize;

use super::symbol::{BorelMeasure, SymbolFunction};
use super::toeplitz::TruncatedToeplitz;
use crate::error::{Error, Result};
use crate::kernel::KernelEval;
use crate::params::SpaceParams;
use crate::projection::{pole_order_bound, MonomialBasis};
use crate::quadrature::{integrate_fn, DiskRule};

/// Largest |z| at which kernel norms are trusted.
pub const MAX_CENTER: f64 = 0.995;
/// Per-panel resolution of the kernel-peaked rules.
pub const PEAK_NODES: usize = 32;

fn check_center(params: &SpaceParams, z: Complex64) -> Result<()> {
    if !(z.norm() <= MAX_CENTER) {
        return Err(Error::Accuracy(format!(
            "|z| = {} exceeds {MAX_CENTER}; kernel norm quadrature not trusted there",
            z.norm()
        )));
    }
    if params.m > 0 && z.norm() == 0.0 {
        return Err(Error::Pole("the kernel K(., 0) is undefined when beta >= 1".into()));
    }
    Ok(())
}

/// k^z = 𝕂(·, z)/‖𝕂(·, z)‖_p.
#[derive(Debug, Clone)]
pub struct NormalizedKernel {
    kernel: KernelEval,
    center: Complex64,
    norm: f64,
}

impl NormalizedKernel {
    pub fn params(&self) -> &SpaceParams {
        self.kernel.params()
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    /// ‖𝕂(·, z)‖_{α,β,p}.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        Ok(self.kernel.kernel(w, self.center)? / self.norm)
    }
}

/// Rule refined toward z, with optional extra radial breaks.
fn kernel_rule(params: &SpaceParams, z: Complex64, n: usize, breaks: &[f64]) -> Result<DiskRule> {
    DiskRule::peaked(params, z, n, breaks)
}

/// ∫ |𝕂(w, z)|^s g(w) dμ(w) on a z-peaked rule.
fn kernel_moment(
    ke: &KernelEval,
    z: Complex64,
    s: f64,
    g: impl Fn(Complex64) -> Complex64,
    rule: &DiskRule,
) -> Result<Complex64> {
    let pole = s * ke.params().m as f64;
    integrate_fn(
        |w| match ke.kernel(w, z) {
            Ok(k) => g(w) * k.norm().powf(s),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        },
        pole,
        rule,
    )
}

/// ‖𝕂(·, z)‖_p by quadrature on a rule peaked at z.
pub fn kernel_norm(params: &SpaceParams, p: f64, z: Complex64, n: usize) -> Result<f64> {
    check_center(params, z)?;
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("kernel norm needs 1 <= p < inf (got {p})")));
    }
    let ke = KernelEval::new(params)?;
    let rule = kernel_rule(params, z, n, &[])?;
    let v = kernel_moment(&ke, z, p, |_| Complex64::new(1.0, 0.0), &rule)?;
    Ok(v.re.powf(1.0 / p))
}

/// Normalized kernel at z in 𝒜^p (p = params.p), the norm computed by
/// quadrature with `n` nodes per panel.
pub fn normalized_kernel(params: &SpaceParams, z: Complex64, n: usize) -> Result<NormalizedKernel> {
    let norm = kernel_norm(params, params.p, z, n)?;
    Ok(NormalizedKernel { kernel: KernelEval::new(params)?, center: z, norm })
}

/// What a Berezin transform is taken of.
#[derive(Debug, Clone, Copy)]
pub enum BerezinSource<'a> {
    Symbol(&'a SymbolFunction),
    Measure(&'a BorelMeasure),
    Operator(&'a TruncatedToeplitz),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BerezinValue {
    pub value: Complex64,
    /// For operators: 1 − Σ_{k<N} |⟨k^z, e_k⟩|², the kernel mass outside the truncation.
    pub truncation_error: Option<f64>,
}

/// Factor turning the p = 2 pairing ⟨·, 𝕂/√𝕂(z,z)⟩ into the ⟨·k^z_p, k^z_q⟩ one.
fn pairing_factor(params: &SpaceParams, z: Complex64, kzz: f64, n: usize) -> Result<f64> {
    if params.p == 2.0 {
        return Ok(1.0);
    }
    if params.p == 1.0 {
        return Err(Error::Unsupported("Berezin pairing at p = 1 needs the sup norm of the kernel".into()));
    }
    let np = kernel_norm(params, params.p, z, n)?;
    let nq = kernel_norm(params, params.q, z, n)?;
    Ok(kzz / (np * nq))
}

/// Berezin transform of a symbol, measure or truncated operator at z.
pub fn berezin(source: BerezinSource, params: &SpaceParams, z: Complex64, n: usize) -> Result<BerezinValue> {
    check_center(params, z)?;
    let ke = KernelEval::new(params)?;
    let kzz = ke.diagonal(z)?;
    let factor = pairing_factor(params, z, kzz, n)?;
    let (raw, truncation_error) = match source {
        BerezinSource::Symbol(phi) => {
            let breaks: Vec<f64> = phi.support_radius.into_iter().collect();
            let rule = kernel_rule(params, z, n, &breaks)?;
            (kernel_moment(&ke, z, 2.0, |w| phi.eval(w), &rule)?, None)
        }
        BerezinSource::Measure(BorelMeasure::Atoms(atoms)) => {
            let mut s = Complex64::new(0.0, 0.0);
            for &(w, mass) in atoms {
                s += ke.kernel(w, z)?.norm_sqr() * mass;
            }
            (s, None)
        }
        BerezinSource::Measure(nu) => {
            let rule = kernel_rule(params, z, n, &[])?;
            let rel = nu.relative_density(params).expect("density variant");
            (kernel_moment(&ke, z, 2.0, rel, &rule)?, None)
        }
        BerezinSource::Operator(t) => {
            if t.params != *params {
                return Err(Error::Domain("operator was built for different parameters".into()));
            }
            let basis = MonomialBasis::new(params, t.size());
            let c: Vec<Complex64> = basis.eval_all(z).iter().map(|e| e.conj()).collect();
            let mut s = Complex64::new(0.0, 0.0);
            for (j, cj) in c.iter().enumerate() {
                for (k, ck) in c.iter().enumerate() {
                    s += t.matrix[(j, k)] * ck * cj.conj();
                }
            }
            let mass: f64 = c.iter().map(|v| v.norm_sqr()).sum::<f64>() / kzz;
            (s, Some(1.0 - mass))
        }
    };
    Ok(BerezinValue { value: raw / kzz * factor, truncation_error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakProbeRow {
    pub z: Complex64,
    /// ⟨g_h, k^z⟩.
    pub value: Complex64,
    /// |value| / (|z|^{m − m_q} (1−|z|²)^{(2+α)/q} |h(z)|).
    pub compensated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakProbe {
    pub pole_order: u32,
    pub rows: Vec<WeakProbeRow>,
    /// Least-squares slope of log|value| against log(1−|z|²).
    pub slope: f64,
}

/// Pairs g_h = h/z^{m_q} with k^z_p along a path toward the boundary; by the
/// reproducing property the pairing is g_h(z)/‖𝕂(·, z)‖_p.
pub fn weak_convergence_probe(
    params: &SpaceParams,
    h: impl Fn(Complex64) -> Complex64,
    path: &[Complex64],
    n: usize,
) -> Result<WeakProbe> {
    if params.p == 1.0 {
        return Err(Error::Unsupported("weak convergence probe needs p > 1".into()));
    }
    if path.len() < 2 {
        return Err(Error::Domain("probe path needs at least two points".into()));
    }
    let mq = pole_order_bound(params.q, params.beta)?;
    let expo = (2.0 + params.alpha) / params.q;
    let mut rows = Vec::with_capacity(path.len());
    for &z in path {
        if z.norm() == 0.0 {
            return Err(Error::Pole("probe path passes through the origin".into()));
        }
        let norm = kernel_norm(params, params.p, z, n)?;
        let hz = h(z);
        let value = hz / z.powi(mq as i32) / norm;
        let r = z.norm();
        let scale = r.powi(params.m as i32 - mq as i32) * (1.0 - r * r).powf(expo) * hz.norm();
        rows.push(WeakProbeRow { z, value, compensated: value.norm() / scale });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((1.0 - r.z.norm_sqr()).ln(), r.value.norm().ln())).collect();
    Ok(WeakProbe { pole_order: mq, rows, slope: ls_slope(&pts) })
}

pub(crate) fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::toeplitz_matrix;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hilbert_norm_is_diagonal_root() {
        for &(a, b) in &[(0.0, 0.0), (0.5, -0.5), (1.5, 1.3)] {
            let p = SpaceParams::new(a, b).unwrap();
            let ke = KernelEval::new(&p).unwrap();
            for &w in &[z(0.3, 0.1), z(-0.6, 0.7), z(0.0, 0.99)] {
                let nk = normalized_kernel(&p, w, PEAK_NODES).unwrap();
                let exact = ke.diagonal(w).unwrap().sqrt();
                assert!((nk.norm() / exact - 1.0).abs() < 1e-10, "{a} {b} {w}: {}", nk.norm() / exact - 1.0);
            }
        }
    }

    #[test]
    fn constant_symbol_and_mu() {
        let p = SpaceParams::new(0.5, 0.4).unwrap();
        let one = SymbolFunction::constant(1.0);
        for &w in &[z(0.2, 0.0), z(0.5, -0.5), z(-0.99, 0.0)] {
            let b = berezin(BerezinSource::Symbol(&one), &p, w, PEAK_NODES).unwrap();
            assert!((b.value - 1.0).norm() < 1e-8);
            let mu = BorelMeasure::mu(&p);
            let b = berezin(BerezinSource::Measure(&mu), &p, w, PEAK_NODES).unwrap();
            assert!((b.value - 1.0).norm() < 1e-8);
        }
    }

    #[test]
    fn operator_berezin_matches_symbol() {
        let p = SpaceParams::new(1.0, 0.5).unwrap();
        let rule = DiskRule::build(&p, 80, 160).unwrap();
        let phi = SymbolFunction::one_minus_r2();
        let t = toeplitz_matrix(&phi, &p, 64, &rule).unwrap();
        let w = z(0.3, 0.2);
        let a = berezin(BerezinSource::Operator(&t), &p, w, PEAK_NODES).unwrap();
        let b = berezin(BerezinSource::Symbol(&phi), &p, w, PEAK_NODES).unwrap();
        assert!(a.truncation_error.unwrap().abs() < 1e-12);
        assert!((a.value - b.value).norm() < 1e-10);
    }

    #[test]
    fn p1_unsupported() {
        let p = SpaceParams::with_p(0.0, 0.0, 1.0).unwrap();
        let one = SymbolFunction::constant(1.0);
        assert!(matches!(
            berezin(BerezinSource::Symbol(&one), &p, z(0.5, 0.0), PEAK_NODES),
            Err(Error::Unsupported(_))
        ));
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        assert!(berezin(BerezinSource::Symbol(&one), &p, z(0.999, 0.0), PEAK_NODES).is_err());
    }

    #[test]
    fn weak_probe_classical_slope() {
        let p = SpaceParams::new(0.0, 0.0).unwrap();
        let path: Vec<Complex64> = (0..10).map(|i| z(0.9 + 0.01 * i as f64, 0.0)).collect();
        let probe = weak_convergence_probe(&p, |_| z(1.0, 0.0), &path, PEAK_NODES).unwrap();
        assert!((probe.slope - 1.0).abs() < 1e-6);
        for r in &probe.rows {
            assert!((r.compensated - 1.0).abs() < 1e-8);
        }
    }
}
