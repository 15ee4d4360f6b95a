use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ConvexBody, Point, PolynomialMap};
use crate::radon::{build_kernel, lp_norm, GridFunction, IntBox};

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapConfig {
    pub map: PolynomialMap,
    pub body: ConvexBody,
    /// Indices k of the operators B_k = M_{2^{k+1}} − M_{2^k}.
    pub ks: Vec<u32>,
    pub q0: f64,
    pub q1: f64,
    pub samples: usize,
    pub box_radius: i64,
    pub seed: u64,
}

impl BootstrapConfig {
    pub fn new(map: PolynomialMap, ks: Vec<u32>, q0: f64, q1: f64) -> Self {
        BootstrapConfig { map, body: ConvexBody::Ball, ks, q0, q1, samples: 100, box_radius: 4, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapRow {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    /// 1/2 = (1 − θ)/q₀.
    pub theta: f64,
    /// 1/q_θ = (1 − θ)/q₀ + θ/q₁.
    pub q_theta: f64,
    /// Lower estimate of sup_k ‖B_k‖_{q₀→q₀}.
    pub norm_q0: f64,
    /// Lower estimate of ‖B_*‖_{q₁→q₁}.
    pub norm_bstar_q1: f64,
    pub rows: Vec<BootstrapRow>,
    pub max_ratio: f64,
}

type Weights = Vec<(Point, f64)>;

/// Kernel of M_{2^{k+1}} − M_{2^k}.
fn difference_kernel(map: &PolynomialMap, body: ConvexBody, k: u32) -> Result<Weights> {
    let mut w: BTreeMap<Point, f64> = BTreeMap::new();
    for (t, sign) in [((k + 1) as f64, 1.0), (k as f64, -1.0)] {
        for (z, v) in build_kernel(map, body, t.exp2())?.weights() {
            *w.entry(z.clone()).or_insert(0.0) += sign * v;
        }
    }
    Ok(w.into_iter().filter(|(_, v)| *v != 0.0).collect())
}

fn convolve(f: &GridFunction, weights: &Weights) -> Result<GridFunction> {
    let d = f.dim();
    let mut lo = vec![0i64; d];
    let mut hi = vec![0i64; d];
    for (z, _) in weights {
        for a in 0..d {
            lo[a] = lo[a].min(z[a]);
            hi[a] = hi[a].max(z[a]);
        }
    }
    let out_box = f.bbox.sum(&IntBox::new(lo, hi)?);
    let mut out = GridFunction::zeros(out_box.clone());
    let strides = out_box.strides();
    for (i, p) in f.bbox.points().enumerate() {
        let v = f.values[i];
        if v.norm_sqr() == 0.0 {
            continue;
        }
        for (z, w) in weights {
            let idx: usize = (0..d).map(|a| (p[a] + z[a] - out_box.lo[a]) as usize * strides[a]).sum();
            out.values[idx] += v * *w;
        }
    }
    Ok(out)
}

fn square_function(fs: &[GridFunction], q: f64) -> Result<f64> {
    let hull = fs.iter().skip(1).fold(fs[0].bbox.clone(), |h, g| h.hull(&g.bbox));
    let emb: Vec<GridFunction> = fs.iter().map(|g| g.embed(&hull)).collect::<Result<_>>()?;
    Ok(lp_norm((0..hull.len()).map(|c| emb.iter().map(|g| g.values[c].norm_sqr()).sum::<f64>().sqrt()), q))
}

fn probes(bbox: &IntBox, rng: &mut ChaCha8Rng) -> Vec<GridFunction> {
    let d = bbox.dim();
    let mut out = vec![GridFunction::delta(d).embed(bbox).expect("box contains the origin")];
    let w = bbox.hi[0];
    let mut r = 1;
    while r <= w {
        out.push(GridFunction::from_fn(bbox.clone(), |p| {
            Complex64::new(if p.iter().all(|v| v.abs() <= r) { 1.0 } else { 0.0 }, 0.0)
        }));
        r *= 2;
    }
    for _ in 0..4 {
        let vals: Vec<Complex64> = (0..bbox.len()).map(|_| Complex64::new(rng.gen_range(0.0..1.0), 0.0)).collect();
        out.push(GridFunction::new(bbox.clone(), vals).expect("sized to the box"));
    }
    out
}

/// Both sides of the square-function interpolation bound for the difference
/// operators B_k, with operator norms replaced by lower estimates. B_* f is
/// sup_k (K_k⁺ + K_k⁻) * |f|, the lattice supremum of |B_k g| over |g| ≤ |f|.
pub fn bootstrap_interpolation_check(cfg: &BootstrapConfig) -> Result<BootstrapReport> {
    if cfg.ks.is_empty() {
        return Err(Error::invalid("operator family is empty"));
    }
    if !(cfg.q0 >= 1.0 && cfg.q0 <= 2.0 && cfg.q1 >= cfg.q0 && cfg.q1.is_finite()) {
        return Err(Error::invalid(format!("need 1 ≤ q₀ ≤ 2 and q₀ ≤ q₁ < ∞, got q₀ = {}, q₁ = {}", cfg.q0, cfg.q1)));
    }
    if cfg.box_radius < 0 {
        return Err(Error::invalid("box_radius must be nonnegative"));
    }
    let theta = 1.0 - cfg.q0 / 2.0;
    let q_theta = 1.0 / ((1.0 - theta) / cfg.q0 + theta / cfg.q1);
    let kernels: Vec<Weights> = cfg.ks.iter().map(|&k| difference_kernel(&cfg.map, cfg.body, k)).collect::<Result<_>>()?;
    let abs_kernels: Vec<Weights> =
        kernels.iter().map(|w| w.iter().map(|(z, v)| (z.clone(), v.abs())).collect()).collect();
    let d = cfg.map.dim();
    let bbox = IntBox::centered(d, cfg.box_radius);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut norm_q0 = 0.0f64;
    let mut norm_bstar_q1 = abs_kernels.iter().map(|w| w.iter().map(|(_, v)| v).sum::<f64>()).fold(0.0, f64::max);
    for phi in probes(&bbox, &mut rng) {
        let n0 = phi.norm(cfg.q0);
        for w in &kernels {
            norm_q0 = norm_q0.max(convolve(&phi, w)?.norm(cfg.q0) / n0);
        }
        let abs_phi = phi.map(|v| Complex64::new(v.norm(), 0.0));
        let parts: Vec<GridFunction> = abs_kernels.iter().map(|w| convolve(&abs_phi, w)).collect::<Result<_>>()?;
        let hull = parts.iter().skip(1).fold(parts[0].bbox.clone(), |h, g| h.hull(&g.bbox));
        let emb: Vec<GridFunction> = parts.iter().map(|g| g.embed(&hull)).collect::<Result<_>>()?;
        let bstar = lp_norm((0..hull.len()).map(|c| emb.iter().map(|g| g.values[c].re).fold(0.0, f64::max)), cfg.q1);
        norm_bstar_q1 = norm_bstar_q1.max(bstar / phi.norm(cfg.q1));
    }

    let factor = norm_q0.powf(1.0 - theta) * norm_bstar_q1.powf(theta);
    let mut rows = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let gs: Vec<GridFunction> = kernels
            .iter()
            .map(|_| {
                let vals = (0..bbox.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
                GridFunction::new(bbox.clone(), vals)
            })
            .collect::<Result<_>>()?;
        let outs: Vec<GridFunction> = gs.iter().zip(&kernels).map(|(g, w)| convolve(g, w)).collect::<Result<_>>()?;
        let lhs = square_function(&outs, q_theta)?;
        let rhs = factor * square_function(&gs, q_theta)?;
        let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        rows.push(BootstrapRow { lhs, rhs, ratio });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(BootstrapReport { theta, q_theta, norm_q0, norm_bstar_q1, rows, max_ratio })
}

/// Both sides for one sample family `gs` (one function per operator).
pub fn bootstrap_sides(cfg: &BootstrapConfig, report: &BootstrapReport, gs: &[GridFunction]) -> Result<(f64, f64)> {
    if gs.len() != cfg.ks.len() {
        return Err(Error::ArityMismatch { expected: cfg.ks.len(), got: gs.len() });
    }
    let mut outs = Vec::with_capacity(gs.len());
    for (g, &k) in gs.iter().zip(&cfg.ks) {
        outs.push(convolve(g, &difference_kernel(&cfg.map, cfg.body, k)?)?);
    }
    let factor = report.norm_q0.powf(1.0 - report.theta) * report.norm_bstar_q1.powf(report.theta);
    Ok((square_function(&outs, report.q_theta)?, factor * square_function(gs, report.q_theta)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponents() {
        let cfg = BootstrapConfig { samples: 3, ..BootstrapConfig::new(PolynomialMap::identity(), vec![0, 1], 1.0, 2.0) };
        let rep = bootstrap_interpolation_check(&cfg).unwrap();
        assert_eq!(rep.theta, 0.5);
        assert!((rep.q_theta - 4.0 / 3.0).abs() < 1e-15);
        // ℓ¹ norm of the difference kernel at k = 0: |1/3 − 1| + 2/3
        assert!((rep.norm_q0 - 4.0 / 3.0).abs() < 1e-12);
        assert!(rep.rows.iter().all(|r| r.ratio.is_finite()));
    }

    #[test]
    fn single_operator_ratio_at_most_one() {
        let cfg = BootstrapConfig { samples: 20, ..BootstrapConfig::new(PolynomialMap::identity(), vec![2], 1.0, 2.0) };
        let rep = bootstrap_interpolation_check(&cfg).unwrap();
        assert!(rep.max_ratio <= 1.0, "{}", rep.max_ratio);
    }

    #[test]
    fn homogeneous_in_samples() {
        let cfg = BootstrapConfig { samples: 1, ..BootstrapConfig::new(PolynomialMap::identity(), vec![1, 1], 1.0, 2.0) };
        let rep = bootstrap_interpolation_check(&cfg).unwrap();
        let g = GridFunction::from_fn(IntBox::centered(1, 3), |p| Complex64::new((p[0] * 3 % 5) as f64 - 2.0, 0.0));
        let (l1, r1) = bootstrap_sides(&cfg, &rep, &[g.clone(), g.clone()]).unwrap();
        let g7 = g.scale(Complex64::new(7.5, 0.0));
        let (l2, r2) = bootstrap_sides(&cfg, &rep, &[g7.clone(), g7]).unwrap();
        assert!((l1 / r1 - l2 / r2).abs() < 1e-12);
    }
}
