use num_complex::Complex64;

use super::torus::reduce;
use crate::error::Result;
use crate::lattice::{CanonicalMapping, ConvexBody, PolynomialMap};
use crate::radon::{build_kernel, IntBox, RadonKernel};

/// A bounded function on the torus T^d used as a Fourier multiplier.
pub trait Multiplier: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, xi: &[f64]) -> Complex64;
}

/// e(θ) = e^{2πiθ}.
pub fn e(theta: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * theta).sin_cos();
    Complex64::new(c, s)
}

/// m_N(ξ) = |Ω_N ∩ Z^k|⁻¹ Σ_y e(P(y)·ξ), stored as its frequency/weight list.
#[derive(Clone, Debug)]
pub struct ExponentialSum {
    terms: Vec<(Vec<i64>, f64)>,
    support: IntBox,
    pub n: f64,
}

impl ExponentialSum {
    pub fn from_kernel(kernel: &RadonKernel) -> Self {
        let terms = kernel.weights().map(|(z, w)| (z.clone(), w)).collect();
        ExponentialSum { terms, support: kernel.support(), n: kernel.t }
    }

    pub fn new(map: &PolynomialMap, body: ConvexBody, n: f64) -> Result<Self> {
        Ok(ExponentialSum::from_kernel(&build_kernel(map, body, n)?))
    }

    pub fn canonical(cm: &CanonicalMapping, body: ConvexBody, n: f64) -> Result<Self> {
        ExponentialSum::new(&cm.to_polynomial_map(), body, n)
    }

    /// Box containing every frequency z of the trigonometric polynomial.
    pub fn support(&self) -> &IntBox {
        &self.support
    }

    pub fn terms(&self) -> &[(Vec<i64>, f64)] {
        &self.terms
    }
}

impl Multiplier for ExponentialSum {
    fn dim(&self) -> usize {
        self.support.dim()
    }

    fn eval(&self, xi: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (z, w) in &self.terms {
            let mut theta = 0.0;
            for (&za, &xa) in z.iter().zip(xi) {
                theta += reduce(za as f64 * xa);
            }
            acc += e(theta) * *w;
        }
        acc
    }
}

/// Multiplier given by a closure.
pub struct FnMultiplier<F: Fn(&[f64]) -> Complex64 + Sync> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[f64]) -> Complex64 + Sync> Multiplier for FnMultiplier<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, xi: &[f64]) -> Complex64 {
        (self.f)(xi)
    }
}

pub fn exponential_sum_m(map: &PolynomialMap, body: ConvexBody, n: f64, xi: &[f64]) -> Result<Complex64> {
    Ok(ExponentialSum::new(map, body, n)?.eval(xi))
}
