use std::fmt;

use num_complex::Complex64;

use super::rule::DiskRule;
use crate::error::{Error, Result};
use crate::params::SpaceParams;

type Eval<'a> = dyn Fn(Complex64) -> Complex64 + Send + Sync + 'a;

/// A function on the punctured disc together with its pole order at 0.
///
/// Integrands are never evaluated at the origin; the declared pole order
/// tells the quadrature how much of the origin weight to absorb.
pub struct DiskFunction<'a> {
    f: Box<Eval<'a>>,
    pole_order: u32,
}

impl<'a> DiskFunction<'a> {
    pub fn new(pole_order: u32, f: impl Fn(Complex64) -> Complex64 + Send + Sync + 'a) -> Self {
        DiskFunction { f: Box::new(f), pole_order }
    }

    /// z ↦ conj(z)^s · z^{t−m}, the mixed monomials acted on by the projection.
    pub fn mixed_monomial(params: &SpaceParams, s: u32, t: u32) -> Self {
        let e = t as i32 - params.m as i32;
        let pole = (-(e + s as i32)).max(0) as u32;
        DiskFunction::new(pole, move |z| z.conj().powi(s as i32) * z.powi(e))
    }

    /// The basis monomial z^{k−m}.
    pub fn monomial(params: &SpaceParams, k: u32) -> Self {
        Self::mixed_monomial(params, 0, k)
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }
}

impl fmt::Debug for DiskFunction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiskFunction").field("pole_order", &self.pole_order).finish_non_exhaustive()
    }
}

/// Weighted sum of `g` over the rule, `pole` being the (possibly fractional)
/// pole order of `g` at the origin.
pub(crate) fn integrate_fn<T>(g: impl Fn(Complex64) -> T, pole: f64, rule: &DiskRule) -> Result<T>
where
    T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Finite,
{
    rule.check_integrable(pole)?;
    let shift = rule.shift_for(pole);
    let ang = rule.angular();
    let mut acc = T::default();
    let mut comp = T::default();
    let mut node = 0;
    // Sum each ring first, then the rings with Neumaier compensation.
    for (r, wr) in rule.rings(shift) {
        let mut ring = T::default();
        for (&t, &wt) in ang.nodes.iter().zip(&ang.weights) {
            let z = Complex64::from_polar(r, t);
            let v = g(z);
            if !v.finite() {
                return Err(Error::Evaluation { node, re: z.re, im: z.im });
            }
            ring = ring + v * wt;
            node += 1;
        }
        let x = ring * wr;
        let sum = acc + x;
        comp = comp + x.correction(acc, sum);
        acc = sum;
    }
    Ok(acc + comp)
}

pub(crate) trait Finite: Sized {
    fn finite(&self) -> bool;
    /// Rounding error of `acc + self` given its computed value `sum`.
    fn correction(self, acc: Self, sum: Self) -> Self;
}

fn two_sum_err(x: f64, acc: f64, sum: f64) -> f64 {
    if acc.abs() >= x.abs() {
        (acc - sum) + x
    } else {
        (x - sum) + acc
    }
}

impl Finite for f64 {
    fn finite(&self) -> bool {
        self.is_finite()
    }
    fn correction(self, acc: f64, sum: f64) -> f64 {
        two_sum_err(self, acc, sum)
    }
}

impl Finite for Complex64 {
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn correction(self, acc: Complex64, sum: Complex64) -> Complex64 {
        Complex64::new(two_sum_err(self.re, acc.re, sum.re), two_sum_err(self.im, acc.im, sum.im))
    }
}

/// ∫_𝔻 f dμ_{α,β}.
pub fn integrate(f: &DiskFunction, rule: &DiskRule) -> Result<Complex64> {
    integrate_fn(|z| f.eval(z), f.pole_order as f64, rule)
}

/// ⟨f, g⟩ = ∫ f·conj(g) dμ_{α,β}.
pub fn inner_product(f: &DiskFunction, g: &DiskFunction, rule: &DiskRule) -> Result<Complex64> {
    let pole = (f.pole_order + g.pole_order) as f64;
    integrate_fn(|z| f.eval(z) * g.eval(z).conj(), pole, rule)
}

/// (∫ |f|^p dμ_{α,β})^{1/p} with p = params.p.
pub fn norm_p(f: &DiskFunction, params: &SpaceParams, rule: &DiskRule) -> Result<f64> {
    let p = params.p;
    let pole = f.pole_order as f64 * p;
    let v: f64 = integrate_fn(|z| f.eval(z).norm().powf(p), pole, rule)?;
    Ok(v.powf(1.0 / p))
}
