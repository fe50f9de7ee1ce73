//! One-dimensional Gauss rules and an adaptive Gauss–Kronrod integrator.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::specfun::beta;

/// Gauss–Jacobi nodes and weights on [−1, 1] for the weight (1−x)^a (1+x)^b.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let (u, w) = unit_jacobi(n, a, b)?;
    let scale = 2f64.powf(a + b + 1.0);
    Ok((u.iter().map(|&u| 2.0 * u - 1.0).collect(), w.iter().map(|&w| w * scale).collect()))
}

/// Gauss–Jacobi rule on [0, 1] for the weight (1−u)^a u^b.
///
/// Works directly in u so that nodes crowding the origin keep full relative
/// precision.  Golub–Welsch eigenvalues seed a Newton polish on the
/// orthonormal recurrence, and the weights are reciprocals of the
/// Christoffel sums Σ p_k(u)², which involve no cancellation.
pub fn unit_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || !(a > -1.0 && b > -1.0) {
        return Err(Error::Domain(format!("gauss_jacobi needs n >= 1 and a, b > -1 (got n={n}, a={a}, b={b})")));
    }
    let (diag, off) = recurrence(n, a, b);
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        jm[(k, k)] = diag[k];
        if k + 1 < n {
            jm[(k, k + 1)] = off[k + 1];
            jm[(k + 1, k)] = off[k + 1];
        }
    }
    let mut nodes: Vec<f64> = jm.symmetric_eigenvalues().iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    let mu0 = beta(a + 1.0, b + 1.0)?;
    let p0 = 1.0 / mu0.sqrt();
    let mut weights = Vec::with_capacity(n);
    for u in nodes.iter_mut() {
        let start = *u;
        for _ in 0..10 {
            let (p, dp, _) = orthonormal(&diag, &off, p0, *u);
            let du = p / dp;
            *u -= du;
            if du.abs() <= 2.0 * f64::EPSILON * u.abs() {
                break;
            }
        }
        if !(*u > 0.0 && *u < 1.0) || (*u - start).abs() > 1e-6 {
            return Err(Error::Convergence(format!("gauss_jacobi node polish drifted (n={n}, a={a}, b={b})")));
        }
        let (_, _, christoffel) = orthonormal(&diag, &off, p0, *u);
        weights.push(1.0 / christoffel);
    }

    let total: f64 = weights.iter().sum();
    if !((total / mu0 - 1.0).abs() < 1e-10) {
        return Err(Error::Convergence(format!(
            "gauss_jacobi weights lost accuracy (n={n}, a={a}, b={b}, rel {:e})",
            total / mu0 - 1.0
        )));
    }
    Ok((nodes, weights))
}

/// Recurrence coefficients of the monic orthogonal polynomials for
/// (1−u)^a u^b on [0, 1]: diagonal a_k and off-diagonal √b_k (index k ≥ 1).
fn recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let ab = a + b;
    let mut diag = Vec::with_capacity(n);
    let mut off = vec![0.0; n + 1];
    for k in 0..n {
        let kf = k as f64;
        let x_diag =
            if k == 0 { (b - a) / (ab + 2.0) } else { (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0)) };
        diag.push(0.5 * (1.0 + x_diag));
    }
    for (j, o) in off.iter_mut().enumerate().skip(1) {
        let jf = j as f64;
        let s = 2.0 * jf + ab;
        // j = 1 written out so that a + b = −1 does not produce 0/0.
        let x_off2 = if j == 1 {
            4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
        } else {
            4.0 * jf * (jf + a) * (jf + b) * (jf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        *o = 0.5 * x_off2.sqrt();
    }
    (diag, off)
}

/// p_n(u), p_n'(u) and Σ_{k<n} p_k(u)² for the orthonormal family.
fn orthonormal(diag: &[f64], off: &[f64], p0: f64, u: f64) -> (f64, f64, f64) {
    let n = diag.len();
    let (mut pm, mut p) = (0.0, p0);
    let (mut dpm, mut dp) = (0.0, 0.0);
    let mut sum = 0.0;
    for k in 0..n {
        sum += p * p;
        let next = ((u - diag[k]) * p - off[k] * pm) / off[k + 1];
        let dnext = ((u - diag[k]) * dp + p - off[k] * dpm) / off[k + 1];
        pm = p;
        p = next;
        dpm = dp;
        dp = dnext;
    }
    (p, dp, sum)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    gauss_jacobi(n, 0.0, 0.0)
}

const GK_X: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_W: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const G7_W: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_SEGMENTS: usize = 4000;

fn gk15<const K: usize>(f: &impl Fn(f64) -> [f64; K], a: f64, b: f64) -> ([f64; K], f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = [0.0; K];
    let mut gauss = [0.0; K];
    let center = f(c);
    for i in 0..K {
        kron[i] = GK_W[7] * center[i];
        gauss[i] = G7_W[3] * center[i];
    }
    for j in 0..7 {
        let dx = h * GK_X[j];
        let lo = f(c - dx);
        let hi = f(c + dx);
        for i in 0..K {
            let s = lo[i] + hi[i];
            kron[i] += GK_W[j] * s;
            if j % 2 == 1 {
                gauss[i] += G7_W[j / 2] * s;
            }
        }
    }
    let mut err: f64 = 0.0;
    for i in 0..K {
        kron[i] *= h;
        gauss[i] *= h;
        err = err.max((kron[i] - gauss[i]).abs());
    }
    (kron, err)
}

/// Globally adaptive 15-point Gauss–Kronrod integration of a vector-valued f.
///
/// Stops once the summed error estimate is below `max(abs_tol, rel_tol·|I|)`
/// in every component.
pub fn adaptive<const K: usize>(
    f: impl Fn(f64) -> [f64; K],
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<[f64; K]> {
    let mut segs = vec![(a, b, gk15(&f, a, b))];
    loop {
        let mut total = [0.0; K];
        let mut err = 0.0;
        for (_, _, (v, e)) in &segs {
            for i in 0..K {
                total[i] += v[i];
            }
            err += e;
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if err <= abs_tol.max(rel_tol * scale) || !err.is_finite() {
            if !err.is_finite() || total.iter().any(|v| !v.is_finite()) {
                return Err(Error::Convergence(format!("adaptive quadrature hit a non-finite value on [{a}, {b}]")));
            }
            return Ok(total);
        }
        if segs.len() >= MAX_SEGMENTS {
            return Err(Error::Convergence(format!("adaptive quadrature on [{a}, {b}] stalled at error {err:e}")));
        }
        let worst = segs.iter().enumerate().max_by(|x, y| (x.1 .2).1.total_cmp(&(y.1 .2).1)).map(|(i, _)| i).unwrap();
        let (lo, hi, _) = segs.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        segs.push((lo, mid, gk15(&f, lo, mid)));
        segs.push((mid, hi, gk15(&f, mid, hi)));
    }
}

/// Scalar convenience wrapper around [`adaptive`].
pub fn adaptive_scalar(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    adaptive(|x| [f(x)], a, b, abs_tol, rel_tol).map(|v| v[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_low_order() {
        let (x, w) = gauss_legendre(2).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_integrates_moments() {
        // ∫₀¹ u^k (1−u)^a u^b du = B(a+1, b+k+1)
        for &(a, b) in &[(0.0, 0.0), (0.5, -0.5), (2.0, -0.75), (-0.5, 1.5)] {
            let (u, w) = unit_jacobi(40, a, b).unwrap();
            for k in 0..30 {
                let q: f64 = u.iter().zip(&w).map(|(u, w)| w * u.powi(k)).sum();
                let exact = beta(a + 1.0, b + k as f64 + 1.0).unwrap();
                assert!((q / exact - 1.0).abs() < 1e-13, "a={a} b={b} k={k}");
            }
        }
    }

    #[test]
    fn large_rule_is_stable() {
        let (x, w) = gauss_jacobi(400, 0.5, -0.5).unwrap();
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert!(w.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn gk_adaptive_handles_endpoint_singularity() {
        let v = adaptive_scalar(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        let v = adaptive(|x| [x.sin(), x.cos()], 0.0, 1.0, 1e-14, 0.0).unwrap();
        assert!((v[0] - (1.0 - 1f64.cos())).abs() < 1e-14);
        assert!((v[1] - 1f64.sin()).abs() < 1e-14);
    }
}
