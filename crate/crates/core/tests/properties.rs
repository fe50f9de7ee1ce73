use mbergman::carleson::{averaging, carleson_ratio_sup, regime_fit, AverageSource};
use mbergman::geometry::{distance, mobius, poincare_distance, MetricDensityEval};
use mbergman::kernel::{h_prime_identity_residual, h_recurrence_residual, KernelEval};
use mbergman::operators::{toeplitz_poly_exact, BorelMeasure, PolySymbol, SymbolFunction};
use mbergman::projection::{project_monomial, projection_bounded, BoundednessQuery};
use mbergman::{Complex64, SpaceParams};
use proptest::prelude::*;

fn point(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_is_an_involution(z in point(0.95), w in point(0.95)) {
        let img = mobius(z, w).unwrap();
        prop_assert!((mobius(z, img).unwrap() - w).norm() < 1e-12);
        let lhs = 1.0 - img.norm_sqr();
        let rhs = (1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr()) / (1.0 - z.conj() * w).norm_sqr();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-3));
    }

    #[test]
    fn h_identities_hold(alpha in 0.0..3.0f64, beta in -0.9..2.0f64, t in -0.95..0.95f64) {
        prop_assert!(h_recurrence_residual(alpha, beta, t).unwrap().abs() < 1e-9);
        prop_assert!(h_prime_identity_residual(alpha, beta, t).unwrap().abs() < 1e-9);
    }

    #[test]
    fn kernel_is_hermitian(alpha in 0.0..3.0f64, beta in -0.9..2.5f64, w in point(0.9), z in point(0.9)) {
        let ke = KernelEval::new(&SpaceParams::new(alpha, beta).unwrap()).unwrap();
        prop_assume!(w.norm() > 1e-3 && z.norm() > 1e-3);
        let a = ke.kernel(w, z).unwrap();
        let b = ke.kernel(z, w).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-10 * a.norm().max(1.0));
        prop_assert!(ke.diagonal(z).unwrap() > 0.0);
    }

    #[test]
    fn density_sits_in_its_sandwich(alpha in 0.0..4.0f64, beta in -0.95..=0.0f64, r in 0.0..0.98f64) {
        let md = MetricDensityEval::new(&SpaceParams::new(alpha, beta).unwrap()).unwrap();
        let rho = md.rho_r(r).unwrap();
        let (lo, hi) = md.bounds_r(r);
        prop_assert!(lo * (1.0 - 1e-12) <= rho && rho <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn monomial_projection_vanishes_below_diagonal(alpha in 0.0..3.0f64, beta in -0.9..2.5f64, s in 1u32..6, dt in 1u32..6) {
        let p = SpaceParams::new(alpha, beta).unwrap();
        prop_assert_eq!(project_monomial(&p, s, s.saturating_sub(dt)).unwrap().0, 0.0);
        let (c, e) = project_monomial(&p, 0, s).unwrap();
        prop_assert_eq!((c, e), (1.0, s as i64 - p.m as i64));
    }

    #[test]
    fn unweighted_target_is_bounded_iff_p_above_one(alpha in 0.0..3.0f64, beta in -0.9..=0.0f64, p in 1.0..4.0f64) {
        let v = projection_bounded(&BoundednessQuery { p, alpha, beta, a: alpha, b: beta }).unwrap();
        prop_assert_eq!(v.bounded, p > 1.0);
    }

    #[test]
    fn toeplitz_adjoint_and_hermitian(
        alpha in 0.0..2.0f64,
        beta in -0.9..1.5f64,
        c1 in coeff(),
        c2 in coeff(),
    ) {
        let p = SpaceParams::new(alpha, beta).unwrap();
        let phi = PolySymbol::new(vec![(0, 1, c1), (1, 2, c2), (0, 0, Complex64::new(0.5, 0.0))]);
        let t = toeplitz_poly_exact(&phi, &p, 8);
        let ts = toeplitz_poly_exact(&phi.conj(), &p, 8);
        let adj = t.matrix.adjoint();
        prop_assert!((adj - &ts.matrix).camax() < 1e-12);
        let real = toeplitz_poly_exact(&phi.add(&phi.conj()), &p, 8);
        prop_assert!(real.hermitian_defect() < 1e-12);
    }

    #[test]
    fn regime_fit_recovers_power_exponent(e in 0.3..3.0f64, a in 0.1..10.0f64) {
        let radii: Vec<f64> = (0..8).map(|k| 1.0 - 0.1 * 0.1f64.powf(k as f64 / 7.0)).collect();
        let values: Vec<f64> = radii.iter().map(|r| a * (1.0 / (1.0 - r * r)).powf(e)).collect();
        let fit = regime_fit(&radii, &values, e).unwrap();
        prop_assert!((fit.exponent.unwrap() - e).abs() < 0.05 * e.max(1.0));
        prop_assert_eq!(fit.verdict, Some(true));
    }
}

proptest! {
    // Geodesic shooting and disc quadrature cost milliseconds per case.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn distance_is_symmetric_and_bracketed(alpha in 0.0..2.0f64, beta in -0.9..=0.0f64, a in point(0.9), b in point(0.9)) {
        let p = SpaceParams::new(alpha, beta).unwrap();
        let ab = distance(a, b, &p).unwrap();
        let ba = distance(b, a, &p).unwrap();
        prop_assert!((ab.distance - ba.distance).abs() <= 1e-9 * ab.distance.max(1e-9));
        let dp = poincare_distance(a, b).unwrap();
        let md = MetricDensityEval::new(&p).unwrap();
        let (lo, hi) = md.constants();
        prop_assert!(ab.distance >= lo * dp * (1.0 - 1e-9) && ab.distance <= hi * dp * (1.0 + 1e-9));
    }

    #[test]
    fn averaging_a_constant_returns_it(alpha in 0.0..2.0f64, beta in -0.9..=0.0f64, z in point(0.8), r in 0.2..1.5f64, c in 0.1..5.0f64) {
        let p = SpaceParams::new(alpha, beta).unwrap();
        let phi = SymbolFunction::constant(c);
        let v = averaging(AverageSource::Symbol(&phi), z, r, &p).unwrap();
        prop_assert!((v - c).abs() < 1e-8 * c);
    }

    #[test]
    fn carleson_ratio_is_homogeneous_and_dominated(alpha in 0.0..2.0f64, beta in -0.9..=0.0f64, lambda in 0.1..10.0f64) {
        let p = SpaceParams::new(alpha, beta).unwrap();
        let phi = SymbolFunction::one_minus_r2();
        let nu = BorelMeasure::from_symbol(&phi);
        let centers = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.2), Complex64::new(-0.3, -0.7)];
        let base = carleson_ratio_sup(&nu, 0.8, &p, &centers).unwrap();
        let scaled = carleson_ratio_sup(&nu.scaled(lambda), 0.8, &p, &centers).unwrap();
        prop_assert!((scaled.sup - lambda * base.sup).abs() <= 1e-9 * lambda * base.sup);
        // 0 ≤ 1 − |w|² ≤ 1, so every average lies in [0, 1].
        prop_assert!(base.rows.iter().all(|r| r.ratio > 0.0 && r.ratio <= 1.0 + 1e-9));
    }
}
