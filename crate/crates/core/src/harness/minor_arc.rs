use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{
    for_each_fraction, reduce, BumpProfile, DenominatorFamily, ExponentialSum, InitialSegment, Multiplier,
    ProjectionParams, ProjectionVariant, Projector,
};
use crate::lattice::{CanonicalMapping, ConvexBody};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorArcOptions {
    /// Uniform grid points per coordinate of the torus.
    pub grid_per_axis: usize,
    /// Radii around each fraction, in units of the level-n bump support; the
    /// radius where η² = 1/2 is always added.
    pub arc_radii: Vec<f64>,
}

impl Default for MinorArcOptions {
    fn default() -> Self {
        MinorArcOptions { grid_per_axis: 128, arc_radii: vec![0.75, 0.875, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorArcRow {
    pub n: u32,
    /// sup |(1 − Ξ_n(ξ)) m_{2^n}(ξ)| over sampled ξ with 1 − Ξ_n(ξ) ≥ 1/2.
    pub sup: f64,
    pub argmax: Vec<f64>,
    pub samples: usize,
    /// (n + 1)^{−2}
    pub reference: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorArcTable {
    pub rows: Vec<MinorArcRow>,
    pub strictly_decreasing: bool,
    /// Overlapping bump supports among the fractions of Ξ_n, summed over n.
    pub overlaps: usize,
}

/// Unit directions: ±1 in one dimension, evenly spaced angles in two, axes and
/// diagonals otherwise.
fn directions(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..16)
            .map(|i| {
                let a = std::f64::consts::PI * i as f64 / 8.0;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        _ => {
            let mut out = Vec::new();
            for axis in 0..dim {
                for s in [1.0, -1.0] {
                    let mut v = vec![0.0; dim];
                    v[axis] = s;
                    out.push(v);
                }
            }
            let norm = (dim as f64).sqrt();
            for mask in 0..1u32 << dim {
                out.push((0..dim).map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 } / norm).collect());
            }
            out
        }
    }
}

/// Radius r (in units of the outer radius) with η(r)² = 1/2.
fn half_level_radius(bump: &BumpProfile) -> f64 {
    let (mut lo, mut hi) = (bump.inner, bump.outer);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bump.radial(mid).powi(2) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi / bump.outer
}

/// Candidate frequencies at level n: the uniform grid plus points at fixed
/// normalized distances from every fraction of Σ_{≤n^u}.
pub fn minor_arc_samples(cm: &CanonicalMapping, n: u32, params: &ProjectionParams, opts: &MinorArcOptions) -> Vec<Vec<f64>> {
    let dim = cm.len();
    let g = opts.grid_per_axis.max(1);
    let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| (0..g).map(move |i| [p.clone(), vec![-0.5 + (i as f64 + 0.5) / g as f64]].concat()))
            .collect();
    }
    let bump = BumpProfile::new(dim);
    let exps = cm.dilation_exponents();
    let scale: Vec<f64> =
        exps.iter().map(|&e| bump.outer * (-(n as f64) * (e as f64 - params.chi)).exp2()).collect();
    let mut radii = opts.arc_radii.clone();
    radii.push(half_level_radius(&bump) * (1.0 + 1e-9));
    let dirs = directions(dim);
    let dens = InitialSegment.members((n as u64).saturating_pow(params.u));
    for_each_fraction(&dens, dim, |f| {
        let c = f.point();
        for &rho in &radii {
            for d in &dirs {
                pts.push((0..dim).map(|i| reduce(c[i] + rho * d[i] * scale[i])).collect());
            }
        }
    });
    pts
}

/// sup |(1 − Ξ_n) m_{2^n}| over sampled minor-arc frequencies for each n.
pub fn minor_arc_decay(
    cm: &CanonicalMapping,
    body: ConvexBody,
    ns: &[u32],
    params: &ProjectionParams,
    opts: &MinorArcOptions,
) -> Result<MinorArcTable> {
    let projector = Projector::new(params.clone(), cm);
    let mut rows = Vec::with_capacity(ns.len());
    let mut overlaps = 0;
    for &n in ns {
        if n > 12 {
            return Err(Error::invalid(format!("n = {n} exceeds the direct-summation range n ≤ 12")));
        }
        overlaps += projector.overlap_count(&ProjectionVariant::Xi { n });
        let m = ExponentialSum::canonical(cm, body, (n as f64).exp2())?;
        let pts = minor_arc_samples(cm, n, params, opts);
        let vals: Vec<Option<f64>> = pts
            .par_iter()
            .map(|xi| {
                let w = 1.0 - projector.eval(&ProjectionVariant::Xi { n }, xi)?;
                Ok((w >= 0.5).then(|| w * m.eval(xi).norm()))
            })
            .collect::<Result<_>>()?;
        let mut best: Option<(f64, usize)> = None;
        let mut samples = 0;
        for (i, v) in vals.iter().enumerate() {
            if let Some(v) = *v {
                samples += 1;
                if best.map_or(true, |(b, _)| v > b) {
                    best = Some((v, i));
                }
            }
        }
        let (sup, idx) = best.ok_or(Error::NoMinorArcPoints(n))?;
        let reference = ((n + 1) as f64).powi(-2);
        rows.push(MinorArcRow { n, sup, argmax: pts[idx].clone(), samples, reference, ratio: sup / reference });
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].sup < w[0].sup);
    Ok(MinorArcTable { rows, strictly_decreasing, overlaps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_trend() {
        let cm = CanonicalMapping::new(1, 1).unwrap();
        let opts = MinorArcOptions { grid_per_axis: 512, ..Default::default() };
        let t = minor_arc_decay(&cm, ConvexBody::Ball, &[2, 3, 4, 5, 6], &ProjectionParams::default(), &opts).unwrap();
        assert!(t.strictly_decreasing, "{:?}", t.rows);
        assert_eq!(t.overlaps, 0);
    }

    #[test]
    fn fixed_far_point_decays() {
        let cm = CanonicalMapping::new(1, 2).unwrap();
        let xi = [0.5 * (5f64.sqrt() - 1.0) - 0.5, std::f64::consts::FRAC_1_SQRT_2 - 0.5];
        let vals: Vec<f64> = (3..=10)
            .map(|n| ExponentialSum::canonical(&cm, ConvexBody::Ball, (n as f64).exp2()).unwrap().eval(&xi).norm())
            .collect();
        assert!(vals.last().unwrap() < &vals[0]);
    }

    #[test]
    fn half_level() {
        let b = BumpProfile::new(2);
        let r = half_level_radius(&b) * b.outer;
        assert!((b.radial(r).powi(2) - 0.5).abs() < 1e-12);
    }
}
