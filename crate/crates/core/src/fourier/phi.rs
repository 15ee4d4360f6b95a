use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expsum::e;
use super::quad::integrate;
use crate::error::{Error, Result};
use crate::lattice::{dilate, CanonicalMapping, ConvexBody};

pub const PHI_ABS_TOL: f64 = 1e-10;

/// sin(2πz)/(2πz), with the removable singularity filled in.
pub fn sinc_2pi(z: f64) -> f64 {
    let x = 2.0 * std::f64::consts::PI * z;
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Φ_1(η) = |Ω|⁻¹ ∫_Ω e(η·(s)^Γ) ds.
pub fn phi_normalized(cm: &CanonicalMapping, body: ConvexBody, eta: &[f64]) -> Result<Complex64> {
    if eta.len() != cm.len() {
        return Err(Error::ArityMismatch { expected: cm.len(), got: eta.len() });
    }
    let k = cm.arity();
    if k == 1 && cm.degree() == 1 {
        return Ok(sinc_2pi(eta[0] * body.inner_radius(1)).into());
    }
    if eta.iter().all(|&v| v == 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let gamma = cm.gamma();
    let radius = match body {
        ConvexBody::Ball => 1.0,
        ConvexBody::Cube => body.inner_radius(k),
    };
    // |∇ phase| ≤ Σ |η_γ| |γ| R^{|γ|-1}; pieces resolve each oscillation
    let freq: f64 = gamma
        .iter()
        .zip(eta)
        .map(|(g, &v)| {
            let d: u32 = g.iter().sum();
            v.abs() * d as f64 * radius.powi(d as i32 - 1)
        })
        .sum();
    let pieces = ((2.0 * radius * freq).ceil() as usize + 1).min(4096);
    let volume = body.volume(k);
    let tol = PHI_ABS_TOL * volume;
    let phase = |s: &[f64]| -> f64 {
        gamma
            .iter()
            .zip(eta)
            .map(|(g, &v)| v * g.iter().zip(s).map(|(&e, &x)| x.powi(e as i32)).product::<f64>())
            .sum()
    };
    let mut s = vec![0.0; k];
    let (value, _) = nested(body, k, 0, &mut s, &phase, tol, pieces)?;
    Ok(value / volume)
}

fn nested(
    body: ConvexBody,
    k: usize,
    axis: usize,
    s: &mut Vec<f64>,
    phase: &dyn Fn(&[f64]) -> f64,
    tol: f64,
    pieces: usize,
) -> Result<(Complex64, f64)> {
    let half = match body.slice_half_width(&s[..axis], k) {
        Some(h) => h,
        None => return Ok((Complex64::new(0.0, 0.0), 0.0)),
    };
    let len = 2.0 * half;
    let mut inner = s.clone();
    integrate(
        |x| {
            inner[axis] = x;
            if axis + 1 == k {
                Ok(e(phase(&inner)))
            } else {
                let mut next = inner.clone();
                Ok(nested(body, k, axis + 1, &mut next, phase, tol / (4.0 * len.max(1e-300)), pieces)?.0)
            }
        },
        -half,
        half,
        tol,
        pieces,
    )
}

/// Φ_N(ξ) = |Ω_N|⁻¹ ∫_{Ω_N} e(ξ·(t)^Γ) dt, computed as Φ_1(N^A ξ).
pub fn oscillatory_integral_phi(cm: &CanonicalMapping, body: ConvexBody, n: f64, xi: &[f64]) -> Result<Complex64> {
    if !(n > 0.0) {
        return Err(Error::invalid(format!("N must be positive, got {n}")));
    }
    if xi.len() != cm.len() {
        return Err(Error::ArityMismatch { expected: cm.len(), got: xi.len() });
    }
    phi_normalized(cm, body, &dilate(n, &cm.dilation_exponents(), xi))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiDecayRow {
    pub n: f64,
    /// sup |Φ_N(ξ)|·|N^A ξ|_∞^{1/|Γ|} over nonzero grid points.
    pub decay_constant: f64,
    /// sup |Φ_N(ξ) − 1| / |N^A ξ|_∞ over nonzero grid points.
    pub lipschitz_constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiDecayReport {
    pub rows: Vec<PhiDecayRow>,
    /// Largest relative change of either constant between consecutive N.
    pub max_relative_change: f64,
}

pub fn decay_check_phi(
    cm: &CanonicalMapping,
    body: ConvexBody,
    ns: &[f64],
    grid: &[Vec<f64>],
) -> Result<PhiDecayReport> {
    if grid.iter().all(|x| x.iter().all(|&v| v == 0.0)) {
        return Err(Error::invalid("frequency grid has no nonzero point"));
    }
    let exps = cm.dilation_exponents();
    let inv = 1.0 / cm.len() as f64;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut row = PhiDecayRow { n, decay_constant: 0.0, lipschitz_constant: 0.0 };
        for xi in grid {
            let eta = dilate(n, &exps, xi);
            let size = eta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if size == 0.0 {
                continue;
            }
            let phi = phi_normalized(cm, body, &eta)?;
            row.decay_constant = row.decay_constant.max(phi.norm() * size.powf(inv));
            row.lipschitz_constant = row.lipschitz_constant.max((phi - 1.0).norm() / size);
        }
        rows.push(row);
    }
    let rel = |a: f64, b: f64| if a.max(b) > 0.0 { (a - b).abs() / a.max(b) } else { 0.0 };
    let max_relative_change = rows
        .windows(2)
        .map(|w| {
            rel(w[0].decay_constant, w[1].decay_constant).max(rel(w[0].lipschitz_constant, w[1].lipschitz_constant))
        })
        .fold(0.0, f64::max);
    Ok(PhiDecayReport { rows, max_relative_change })
}
