use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;

use super::symbol::{BorelMeasure, PolySymbol, SymbolFunction};
use crate::error::{Error, Result};
use crate::params::SpaceParams;
use crate::projection::MonomialBasis;
use crate::quadrature::DiskRule;

/// Dense singular value decompositions are refused above this size.
pub const MAX_DENSE: usize = 128;

/// N×N section of T_φ (or T_ν) in the orthonormal monomial basis,
/// M_{jk} = ⟨φ e_k, e_j⟩.
#[derive(Debug, Clone)]
pub struct TruncatedToeplitz {
    pub params: SpaceParams,
    pub matrix: DMatrix<Complex64>,
}

impl TruncatedToeplitz {
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        if self.size() > MAX_DENSE {
            return Err(Error::TruncationGuard(format!("dense SVD limited to N <= {MAX_DENSE} (got {})", self.size())));
        }
        let mut s: Vec<f64> = self.matrix.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        Ok(s)
    }

    /// Eigenvalues of the Hermitian part (M + Mᴴ)/2, increasing.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut e: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    /// max |M − Mᴴ|.
    pub fn hermitian_defect(&self) -> f64 {
        max_abs(&(&self.matrix - self.matrix.adjoint()))
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal_max(&self) -> f64 {
        let n = self.size();
        let mut m = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                if j != k {
                    m = m.max(self.matrix[(j, k)].norm());
                }
            }
        }
        m
    }
}

pub(crate) fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.norm()))
}

fn check_rule(params: &SpaceParams, rule: &DiskRule) -> Result<()> {
    if rule.params() != params {
        return Err(Error::Domain("quadrature rule was built for different parameters".into()));
    }
    Ok(())
}

/// Assembles Σ_nodes W φ(z) z^{k−m} conj(z)^{j−m}/(‖·‖‖·‖) ring by ring: each
/// ring contributes its angular Fourier coefficients of φ.
fn assemble(
    eval: &(dyn Fn(Complex64) -> Complex64 + Sync),
    params: &SpaceParams,
    n: usize,
    rule: &DiskRule,
) -> Result<DMatrix<Complex64>> {
    check_rule(params, rule)?;
    if n == 0 {
        return Err(Error::Domain("basis size must be at least 1".into()));
    }
    let basis = MonomialBasis::new(params, n);
    let m = params.m as usize;
    let rings: Vec<(f64, f64)> = rule.rings(m).collect();
    let ang = rule.angular();
    let per_ring: Vec<Result<Vec<Complex64>>> = rings
        .par_iter()
        .map(|&(r, _)| {
            // F(ℓ) for ℓ = −(n−1)..(n−1), stored at index ℓ + n − 1.
            let mut f = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
            for (&t, &wt) in ang.nodes.iter().zip(&ang.weights) {
                let z = Complex64::from_polar(r, t);
                let v = eval(z) * wt;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::Evaluation { node: 0, re: z.re, im: z.im });
                }
                let step = Complex64::from_polar(1.0, t);
                let mut pos = v;
                let mut neg = v;
                f[n - 1] += v;
                for l in 1..n {
                    pos *= step;
                    neg *= step.conj();
                    f[n - 1 + l] += pos;
                    f[n - 1 - l] += neg;
                }
            }
            Ok(f)
        })
        .collect();

    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for ((r, w), f) in rings.iter().zip(per_ring) {
        let f = f?;
        // r^{k+j−2m}, guarded against underflow for tiny r and large k + j.
        let pows: Vec<f64> = (0..2 * n).map(|e| r.powi(e as i32 - 2 * m as i32)).collect();
        for j in 0..n {
            for k in 0..n {
                out[(j, k)] += f[n - 1 + k - j] * (w * pows[j + k]);
            }
        }
    }
    for j in 0..n {
        for k in 0..n {
            out[(j, k)] /= basis.norm(j) * basis.norm(k);
        }
    }
    Ok(out)
}

/// Matrix of T_φ in the orthonormal basis e_0..e_{N−1}.
pub fn toeplitz_matrix(
    phi: &SymbolFunction,
    params: &SpaceParams,
    n: usize,
    rule: &DiskRule,
) -> Result<TruncatedToeplitz> {
    let matrix = assemble(&|z| phi.eval(z), params, n, rule)?;
    Ok(TruncatedToeplitz { params: *params, matrix })
}

/// Matrix of T_ν: M_{jk} = ∫ e_k conj(e_j) dν.
pub fn toeplitz_from_measure(
    nu: &BorelMeasure,
    params: &SpaceParams,
    n: usize,
    rule: &DiskRule,
) -> Result<TruncatedToeplitz> {
    let matrix = match nu {
        BorelMeasure::Atoms(atoms) => {
            let basis = MonomialBasis::new(params, n);
            let mut out = DMatrix::<Complex64>::zeros(n, n);
            for &(w, mass) in atoms {
                if params.m > 0 && w.norm() == 0.0 {
                    return Err(Error::Domain("atom at the origin, where basis functions have poles".into()));
                }
                let e = basis.eval_all(w);
                for j in 0..n {
                    for k in 0..n {
                        out[(j, k)] += e[k] * e[j].conj() * mass;
                    }
                }
            }
            out
        }
        density => {
            let rel = density.relative_density(params).expect("density variant");
            assemble(&rel, params, n, rule)?
        }
    };
    Ok(TruncatedToeplitz { params: *params, matrix })
}

/// Exact matrix of T_φ for a polynomial symbol, from the monomial moments:
/// ⟨conj(z)^s z^t e_k, e_j⟩ = ‖z^{t+k−m}‖²/(‖z^{k−m}‖‖z^{j−m}‖) when t+k = s+j.
pub fn toeplitz_poly_exact(phi: &PolySymbol, params: &SpaceParams, n: usize) -> TruncatedToeplitz {
    let basis = MonomialBasis::new(params, n);
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for &(s, t, c) in &phi.terms {
        for k in 0..n {
            let top = k + t as usize;
            if top < s as usize {
                continue;
            }
            let j = top - s as usize;
            if j < n {
                out[(j, k)] += c * (params.monomial_norm_sq(top) / (basis.norm(j) * basis.norm(k)));
            }
        }
    }
    TruncatedToeplitz { params: *params, matrix: out }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_radial_moment() {
        for &(a, b) in &[(0.0, 0.0), (0.5, 1.5)] {
            let p = SpaceParams::new(a, b).unwrap();
            let rule = DiskRule::build(&p, 64, 96).unwrap();
            let t = toeplitz_matrix(&SymbolFunction::constant(1.0), &p, 16, &rule).unwrap();
            let id = DMatrix::<Complex64>::identity(16, 16);
            assert!(max_abs(&(&t.matrix - id)) < 1e-12);
            let r2 = SymbolFunction::radial("|z|^2", |r| r * r);
            let t = toeplitz_matrix(&r2, &p, 16, &rule).unwrap();
            assert!(t.off_diagonal_max() < 1e-14);
            for k in 0..16 {
                let expect = p.monomial_norm_sq(k + 1) / p.monomial_norm_sq(k);
                assert!((t.matrix[(k, k)].re / expect - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_matches_exact_polynomial_matrix() {
        let p = SpaceParams::new(2.0, 0.5).unwrap();
        let rule = DiskRule::build(&p, 48, 96).unwrap();
        let phi = PolySymbol::new(vec![
            (0, 1, Complex64::new(1.0, 0.0)),
            (2, 1, Complex64::new(0.0, 0.5)),
            (1, 3, Complex64::new(-0.3, 0.2)),
        ]);
        let q = toeplitz_matrix(&phi.to_symbol(), &p, 20, &rule).unwrap();
        let e = toeplitz_poly_exact(&phi, &p, 20);
        assert!(max_abs(&(&q.matrix - &e.matrix)) < 1e-12);
    }

    #[test]
    fn single_atom_is_rank_one() {
        let p = SpaceParams::new(1.0, -0.5).unwrap();
        let rule = DiskRule::build(&p, 16, 32).unwrap();
        let nu = BorelMeasure::atoms(vec![(Complex64::new(0.4, 0.2), 1.0)]).unwrap();
        let t = toeplitz_from_measure(&nu, &p, 12, &rule).unwrap();
        let s = t.singular_values().unwrap();
        assert!(s[1] < 1e-10 * s[0]);
        let p1 = SpaceParams::new(0.0, 1.0).unwrap();
        let rule1 = DiskRule::build(&p1, 16, 32).unwrap();
        let bad = BorelMeasure::atoms(vec![(Complex64::new(0.0, 0.0), 1.0)]).unwrap();
        assert!(toeplitz_from_measure(&bad, &p1, 4, &rule1).is_err());
    }

    #[test]
    fn mu_as_measure_gives_identity() {
        let p = SpaceParams::new(0.5, -0.5).unwrap();
        let rule = DiskRule::build(&p, 64, 64).unwrap();
        let t = toeplitz_from_measure(&BorelMeasure::mu(&p), &p, 12, &rule).unwrap();
        assert!(max_abs(&(&t.matrix - DMatrix::<Complex64>::identity(12, 12))) < 1e-10);
    }
}
