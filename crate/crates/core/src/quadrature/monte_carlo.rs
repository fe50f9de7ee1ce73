use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::Serialize;

use super::function::DiskFunction;
use crate::error::{Error, Result};
use crate::params::SpaceParams;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McEstimate {
    pub value: Complex64,
    pub std_error: f64,
    pub samples: usize,
}

/// Monte Carlo estimate of ∫ f dμ_{α,β}, sampling the measure exactly:
/// r² ~ Beta(β+1, α+1) and θ uniform.
pub fn mc_integrate(f: &DiskFunction, params: &SpaceParams, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 10_000 {
        return Err(Error::Domain(format!("mc_integrate needs at least 10^4 samples, got {samples}")));
    }
    let law =
        Beta::new(params.beta + 1.0, params.alpha + 1.0).map_err(|e| Error::Domain(format!("radial law: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0;
    for node in 0..samples {
        let u: f64 = law.sample(&mut rng);
        let theta: f64 = rng.random::<f64>() * 2.0 * PI;
        let z = Complex64::from_polar(u.sqrt(), theta);
        let v = f.eval(z);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Evaluation { node, re: z.re, im: z.im });
        }
        sum += v;
        sum_sq += v.norm_sqr();
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean.norm_sqr()) / (n - 1.0)).max(0.0);
    Ok(McEstimate { value: mean, std_error: (var / n).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_has_zero_error() {
        let params = SpaceParams::new(1.0, 0.5).unwrap();
        let one = DiskFunction::new(0, |_| Complex64::new(1.0, 0.0));
        let est = mc_integrate(&one, &params, 10_000, 1).unwrap();
        assert!((est.value - 1.0).norm() < 1e-12);
        assert!(est.std_error < 1e-6);
    }

    #[test]
    fn second_moment_within_three_sigma() {
        let params = SpaceParams::new(0.0, 0.0).unwrap();
        let f = DiskFunction::new(0, |z: Complex64| Complex64::new(z.norm_sqr(), 0.0));
        let est = mc_integrate(&f, &params, 40_000, 7).unwrap();
        assert!((est.value.re - 0.5).abs() < 3.0 * est.std_error);
        let g = DiskFunction::new(0, |z: Complex64| Complex64::new(z.re, 0.0));
        let est = mc_integrate(&g, &params, 40_000, 8).unwrap();
        assert!(est.value.re.abs() < 3.0 * est.std_error);
    }

    #[test]
    fn is_reproducible() {
        let params = SpaceParams::new(0.5, -0.5).unwrap();
        let f = DiskFunction::new(0, |z: Complex64| z * z.conj() + z);
        let a = mc_integrate(&f, &params, 10_000, 42).unwrap();
        let b = mc_integrate(&f, &params, 10_000, 42).unwrap();
        assert_eq!(a.value, b.value);
    }
}
