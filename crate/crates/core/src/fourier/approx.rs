use serde::{Deserialize, Serialize};

use super::bump::BumpProfile;
use super::expsum::{ExponentialSum, Multiplier};
use super::gauss::gauss_sum;
use super::phi::oscillatory_integral_phi;
use super::torus::{reduce, RationalFraction};
use crate::error::{Error, Result};
use crate::lattice::{CanonicalMapping, ConvexBody};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRow {
    pub offset: Vec<f64>,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub n: u32,
    pub fraction: RationalFraction,
    pub rows: Vec<ApproxRow>,
    pub max_error: f64,
    /// 2^{−n/2}
    pub target: f64,
}

/// Offsets δ_γ = t·2^{−n(|γ|−χ)}/(8|Γ|) for t on an evenly spaced grid of
/// `per_axis` points in [−1, 1], i.e. the bump support at level n.
pub fn near_zero_offsets(cm: &CanonicalMapping, n: u32, chi: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let outer = BumpProfile::new(cm.len()).outer;
    let exps = cm.dilation_exponents();
    let ts: Vec<f64> = if per_axis < 2 {
        vec![0.0]
    } else {
        (0..per_axis).map(|i| -1.0 + 2.0 * i as f64 / (per_axis - 1) as f64).collect()
    };
    let radius: Vec<f64> = exps.iter().map(|&e| outer * (-(n as f64) * (e as f64 - chi)).exp2()).collect();
    let mut out = vec![Vec::new()];
    for r in &radius {
        out = out.into_iter().flat_map(|p: Vec<f64>| ts.iter().map(move |t| [p.clone(), vec![t * r]].concat())).collect();
    }
    out
}

/// |m_{2^n}(a/q + δ) − G(a/q)·Φ_{2^n}(δ)| over the given offsets δ.
pub fn approximation_error(
    cm: &CanonicalMapping,
    body: ConvexBody,
    n: u32,
    fraction: &RationalFraction,
    offsets: &[Vec<f64>],
) -> Result<ApproxReport> {
    if fraction.dim() != cm.len() {
        return Err(Error::ArityMismatch { expected: cm.len(), got: fraction.dim() });
    }
    let big_n = (n as f64).exp2();
    let m = ExponentialSum::canonical(cm, body, big_n)?;
    let g = gauss_sum(cm, &fraction.a, fraction.q)?;
    let center = fraction.point();
    let mut rows = Vec::with_capacity(offsets.len());
    for delta in offsets {
        if delta.len() != cm.len() {
            return Err(Error::ArityMismatch { expected: cm.len(), got: delta.len() });
        }
        let xi: Vec<f64> = center.iter().zip(delta).map(|(c, d)| reduce(c + d)).collect();
        let phi = oscillatory_integral_phi(cm, body, big_n, delta)?;
        rows.push(ApproxRow { offset: delta.clone(), error: (m.eval(&xi) - g * phi).norm() });
    }
    let max_error = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    Ok(ApproxReport { n, fraction: fraction.clone(), rows, max_error, target: (-(n as f64) / 2.0).exp2() })
}
