use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::CanonicalMapping;

/// G(a/q) = q^{-k} Σ_{r ∈ [1, q]^k} e((a/q)·r^Γ), phases reduced exactly mod q.
pub fn gauss_sum(cm: &CanonicalMapping, a: &[i64], q: u64) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::invalid("denominator must be positive"));
    }
    if a.len() != cm.len() {
        return Err(Error::ArityMismatch { expected: cm.len(), got: a.len() });
    }
    let roots = roots_of_unity(q);
    Ok(gauss_sum_with(cm, a, q, &roots))
}

fn roots_of_unity(q: u64) -> Vec<Complex64> {
    (0..q)
        .map(|m| {
            let (s, c) = (2.0 * std::f64::consts::PI * m as f64 / q as f64).sin_cos();
            Complex64::new(c, s)
        })
        .collect()
}

fn gauss_sum_with(cm: &CanonicalMapping, a: &[i64], q: u64, roots: &[Complex64]) -> Complex64 {
    let k = cm.arity();
    let deg = cm.degree() as usize;
    let qq = q as u128;
    let am: Vec<u128> = a.iter().map(|&v| v.rem_euclid(q as i64) as u128).collect();
    let gamma = cm.gamma();
    let mut r = vec![1u64; k];
    // pw[axis][e] = r_axis^e mod q
    let mut pw = vec![vec![0u128; deg + 1]; k];
    let refresh = |pw: &mut Vec<Vec<u128>>, axis: usize, r: u64| {
        pw[axis][0] = 1 % qq;
        for e in 1..=deg {
            pw[axis][e] = pw[axis][e - 1] * (r as u128 % qq) % qq;
        }
    };
    for axis in 0..k {
        refresh(&mut pw, axis, 1);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let mut phase: u128 = 0;
        for (g, &ag) in gamma.iter().zip(&am) {
            let mut mono: u128 = 1;
            for (axis, &e) in g.iter().enumerate() {
                mono = mono * pw[axis][e as usize] % qq;
            }
            phase = (phase + ag * mono) % qq;
        }
        acc += roots[phase as usize];
        let mut axis = k;
        loop {
            if axis == 0 {
                return acc / (q as f64).powi(k as i32);
            }
            axis -= 1;
            if r[axis] < q {
                r[axis] += 1;
                refresh(&mut pw, axis, r[axis]);
                for b in axis + 1..k {
                    r[b] = 1;
                    refresh(&mut pw, b, 1);
                }
                break;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussFitOptions {
    /// Scan every numerator vector when q ≤ this and q^|Γ| ≤ `scan_budget`.
    pub full_scan_q: u64,
    pub scan_budget: u64,
    /// Random numerator draws for larger q.
    pub samples: usize,
    pub seed: u64,
}

impl Default for GaussFitOptions {
    fn default() -> Self {
        GaussFitOptions { full_scan_q: 50, scan_budget: 200_000, samples: 4096, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussRow {
    pub q: u64,
    pub max_abs: f64,
    pub argmax: Vec<i64>,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GaussFitOutcome {
    /// |G| ≈ constant · q^{-delta_hat}.
    Fitted { delta_hat: f64, constant: f64 },
    /// Every q ≥ 2 sums to zero; no exponent can be fitted.
    ExactCancellation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussFit {
    pub rows: Vec<GaussRow>,
    pub fit: GaussFitOutcome,
}

fn reduced(a: &[i64], q: u64) -> bool {
    a.iter().fold(q as i64, |acc, &v| acc.gcd(&v)) == 1
}

/// max over reduced a of |G(a/q)|, for each q ≤ q_max, then a least-squares
/// fit of log max|G| against log q over q ≥ 2.
pub fn gauss_decay_fit(cm: &CanonicalMapping, q_max: u64, opts: &GaussFitOptions) -> Result<GaussFit> {
    if q_max < 2 {
        return Err(Error::invalid("q_max must be at least 2"));
    }
    let dim = cm.len();
    let mut rows = Vec::new();
    for q in 1..=q_max {
        let roots = roots_of_unity(q);
        let total = (q as f64).powi(dim as i32);
        let exhaustive = q <= opts.full_scan_q && total <= opts.scan_budget as f64;
        let mut best = (-1.0f64, vec![0i64; dim]);
        let mut consider = |a: &[i64]| {
            if reduced(a, q) {
                let v = gauss_sum_with(cm, a, q, &roots).norm();
                if v > best.0 {
                    best = (v, a.to_vec());
                }
            }
        };
        if exhaustive {
            let mut a = vec![0i64; dim];
            loop {
                consider(&a);
                let mut i = dim;
                let done = loop {
                    if i == 0 {
                        break true;
                    }
                    i -= 1;
                    if a[i] + 1 < q as i64 {
                        a[i] += 1;
                        a[i + 1..].iter_mut().for_each(|v| *v = 0);
                        break false;
                    }
                };
                if done {
                    break;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ q.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            for _ in 0..opts.samples {
                let a: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..q as i64)).collect();
                consider(&a);
            }
        }
        if best.0 < 0.0 {
            continue;
        }
        rows.push(GaussRow { q, max_abs: best.0, argmax: best.1, exhaustive });
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.q >= 2 && r.max_abs > 1e-12)
        .map(|r| ((r.q as f64).ln(), r.max_abs.ln()))
        .collect();
    let fit = if pts.len() < 2 {
        GaussFitOutcome::ExactCancellation
    } else {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let slope = sxy / sxx;
        GaussFitOutcome::Fitted { delta_hat: -slope, constant: (my - slope * mx).exp() }
    };
    Ok(GaussFit { rows, fit })
}
