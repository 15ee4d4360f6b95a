use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::scalar::{sup_values, variation_values, ScalarSequence};
use crate::error::{Error, Result};
use crate::radon::{is_u_time, GridFunction, SampledFamily};

/// a ≤ b allowing for floating-point rounding in both sides.
pub fn le_with_slack(a: f64, b: f64) -> bool {
    a <= b * (1.0 + 1e-12) + 1e-15
}

/// sup_λ λ·|{|g| > λ}|^{1/p}, the weak ℓ^p quasi-norm.
pub fn weak_lp_norm(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    let mut v: Vec<f64> = values.map(f64::abs).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    if p.is_infinite() {
        return v.first().copied().unwrap_or(0.0);
    }
    v.iter().enumerate().map(|(i, &x)| x * ((i + 1) as f64).powf(1.0 / p)).fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RmReport {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// Both sides of V²(a_n : b ≤ n ≤ 2^s) ≤ √2 Σ_{i=0}^{s} (Σ_j |a_{(j+1)2^i} − a_{j2^i}|²)^{1/2},
/// the inner sum over dyadic intervals [j2^i, (j+1)2^i] ⊆ [b, 2^s].
/// `values[m]` is a_{b+m}.
pub fn rademacher_menshov_check(values: &[Complex64], b: u64, s: u32) -> Result<RmReport> {
    if s > 40 {
        return Err(Error::invalid("s too large"));
    }
    let top = 1u64 << s;
    if b > top {
        return Err(Error::invalid(format!("b = {b} exceeds 2^s = {top}")));
    }
    let expected = (top - b + 1) as usize;
    if values.len() != expected {
        return Err(Error::invalid(format!("expected {expected} values for indices {b}..={top}, got {}", values.len())));
    }
    let at = |n: u64| values[(n - b) as usize];
    let lhs = variation_values(values, 2.0);
    let mut rhs = 0.0;
    for i in 0..=s {
        let len = 1u64 << i;
        let j0 = b.div_ceil(len);
        let j1 = top / len;
        let mut level = 0.0;
        let mut j = j0;
        while j < j1 {
            level += (at((j + 1) * len) - at(j * len)).norm_sqr();
            j += 1;
        }
        rhs += level.sqrt();
    }
    let ratio = if rhs > 0.0 { lhs / rhs } else if lhs > 0.0 { f64::INFINITY } else { 0.0 };
    let holds = le_with_slack(lhs, std::f64::consts::SQRT_2 * rhs);
    Ok(RmReport { lhs, rhs, ratio, holds })
}

/// floor(log2 t) for positive normal t, exactly.
pub(crate) fn floor_log2(t: f64) -> i32 {
    ((t.to_bits() >> 52) & 0x7ff) as i32 - 1023
}

/// Half-open dyadic blocks [2^n, 2^{n+1}) of a time list, as (n, index range).
/// Every nonempty block must have its left endpoint sampled.
pub(crate) fn dyadic_blocks(times: &[f64]) -> Result<Vec<(i32, std::ops::Range<usize>)>> {
    if let Some(&t) = times.iter().find(|&&t| !is_u_time(t)) {
        return Err(Error::NotDyadicGrid(format!("time {t} is not a dyadic rational")));
    }
    let mut blocks: Vec<(i32, std::ops::Range<usize>)> = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        let n = floor_log2(t);
        match blocks.last_mut() {
            Some((m, r)) if *m == n => r.end = i + 1,
            _ => {
                let anchor = 2f64.powi(n);
                if t != anchor {
                    return Err(Error::MissingDyadicAnchor(anchor, anchor * 2.0));
                }
                blocks.push((n, i..i + 1));
            }
        }
    }
    Ok(blocks)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongShortSplit {
    /// (2^n, a_{2^n}) for every block.
    pub long: ScalarSequence,
    /// (n, V²(a_t : t ∈ [2^n, 2^{n+1}))) per block.
    pub short: Vec<(i32, f64)>,
    /// sup_n |a_{2^n} − a_{t₀}|.
    pub long_sup: f64,
    /// (Σ_n V²(block n)²)^{1/2}.
    pub short_norm: f64,
    /// sup_t |a_t − a_{t₀}|.
    pub full_sup: f64,
    /// full_sup ≤ long_sup + short_norm.
    pub holds: bool,
}

struct SplitParts {
    long_values: Vec<Complex64>,
    short: Vec<(i32, f64)>,
    long_sup: f64,
    short_norm: f64,
    full_sup: f64,
}

fn split_values(blocks: &[(i32, std::ops::Range<usize>)], values: &[Complex64]) -> SplitParts {
    let long_values: Vec<Complex64> = blocks.iter().map(|(_, r)| values[r.start]).collect();
    let short: Vec<(i32, f64)> =
        blocks.iter().map(|(n, r)| (*n, variation_values(&values[r.clone()], 2.0))).collect();
    let a0 = values[0];
    let long_sup = long_values.iter().map(|v| (v - a0).norm()).fold(0.0, f64::max);
    let short_norm = short.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
    SplitParts { long_values, short, long_sup, short_norm, full_sup: sup_values(values) }
}

/// Splits a U-indexed sequence into its values at the dyadic points 2^n and the
/// 2-variation inside each block [2^n, 2^{n+1}), and checks the constant-1 bound
/// for the sup seminorm.
pub fn long_short_split(seq: &ScalarSequence) -> Result<LongShortSplit> {
    let blocks = dyadic_blocks(seq.times())?;
    let parts = split_values(&blocks, seq.values());
    let long_times = blocks.iter().map(|(_, r)| seq.times()[r.start]).collect();
    let long = ScalarSequence::new(long_times, parts.long_values)?;
    Ok(LongShortSplit {
        long,
        short: parts.short,
        long_sup: parts.long_sup,
        short_norm: parts.short_norm,
        full_sup: parts.full_sup,
        holds: le_with_slack(parts.full_sup, parts.long_sup + parts.short_norm),
    })
}

/// [`long_short_split`] applied at every lattice point of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct LongShortField {
    pub long: SampledFamily<GridFunction>,
    /// (n, pointwise V² of block n).
    pub short: Vec<(i32, GridFunction)>,
    pub violations: usize,
    /// max over cells of full_sup / (long_sup + short_norm).
    pub max_ratio: f64,
}

pub fn long_short_split_field(family: &SampledFamily<GridFunction>) -> Result<LongShortField> {
    let bbox = family.common_box()?.clone();
    let blocks = dyadic_blocks(&family.times)?;
    let cells = bbox.len();
    let mut long_vals = vec![Vec::with_capacity(cells); blocks.len()];
    let mut short_vals = vec![Vec::with_capacity(cells); blocks.len()];
    let mut violations = 0;
    let mut max_ratio = 0.0f64;
    for c in 0..cells {
        let col: Vec<Complex64> = family.items.iter().map(|g| g.values[c]).collect();
        let parts = split_values(&blocks, &col);
        for (b, v) in parts.long_values.iter().enumerate() {
            long_vals[b].push(*v);
        }
        for (b, (_, v)) in parts.short.iter().enumerate() {
            short_vals[b].push(Complex64::new(*v, 0.0));
        }
        let rhs = parts.long_sup + parts.short_norm;
        if !le_with_slack(parts.full_sup, rhs) {
            violations += 1;
        }
        if rhs > 0.0 {
            max_ratio = max_ratio.max(parts.full_sup / rhs);
        }
    }
    let long_times = blocks.iter().map(|(_, r)| family.times[r.start]).collect();
    let long_items = long_vals.into_iter().map(|v| GridFunction::new(bbox.clone(), v)).collect::<Result<_>>()?;
    let short = blocks
        .iter()
        .zip(short_vals)
        .map(|((n, _), v)| Ok((*n, GridFunction::new(bbox.clone(), v)?)))
        .collect::<Result<_>>()?;
    Ok(LongShortField { long: SampledFamily::new(long_times, long_items)?, short, violations, max_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radon::IntBox;

    fn c(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn rm_examples() {
        let r = rademacher_menshov_check(&c(&[2.0; 8]), 1, 3).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.holds);
        let r = rademacher_menshov_check(&c(&[0.3, 1.7]), 1, 1).unwrap();
        assert!((r.lhs - 1.4).abs() < 1e-15 && (r.rhs - 1.4).abs() < 1e-15);
        assert!(r.holds);
        assert!(rademacher_menshov_check(&c(&[1.0; 3]), 1, 1).is_err());
        assert!(rademacher_menshov_check(&c(&[1.0]), 5, 2).is_err());
    }

    #[test]
    fn rm_alternating_signs() {
        let v: Vec<f64> = (1..=64).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = rademacher_menshov_check(&c(&v), 1, 6).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.lhs > 0.0);
    }

    #[test]
    fn weak_norm() {
        assert_eq!(weak_lp_norm([3.0, 1.0, 2.0].into_iter(), 1.0), 4.0);
        assert_eq!(weak_lp_norm(std::iter::empty(), 2.0), 0.0);
        let v = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(weak_lp_norm(v.into_iter(), 2.0), 2.0);
    }

    #[test]
    fn split_on_dyadic_times() {
        let seq = ScalarSequence::new(vec![1.0, 2.0, 4.0, 8.0], c(&[0.0, 1.5, -0.5, 2.0])).unwrap();
        let s = long_short_split(&seq).unwrap();
        assert_eq!(s.short_norm, 0.0);
        assert_eq!(s.long_sup, s.full_sup);
        assert!(s.holds);
        let flat = ScalarSequence::new((1..=16).map(|t| t as f64).collect(), c(&[0.7; 16])).unwrap();
        let s = long_short_split(&flat).unwrap();
        assert_eq!((s.long_sup, s.short_norm), (0.0, 0.0));
        assert_eq!(s.long.len(), 5);
    }

    #[test]
    fn split_requires_u_form_and_anchors() {
        let bad = ScalarSequence::new(vec![1.0, 1.1], c(&[0.0, 1.0])).unwrap();
        assert!(matches!(long_short_split(&bad), Err(Error::NotDyadicGrid(_))));
        let gap = ScalarSequence::new(vec![1.0, 3.0], c(&[0.0, 1.0])).unwrap();
        assert!(matches!(long_short_split(&gap), Err(Error::MissingDyadicAnchor(..))));
    }

    #[test]
    fn split_field_matches_scalar() {
        let times: Vec<f64> = (1..=8).map(|t| t as f64).collect();
        let items: Vec<GridFunction> = (0..8)
            .map(|i| GridFunction::from_real(IntBox::centered(1, 1), &[i as f64, (i * i % 5) as f64, -(i as f64)]).unwrap())
            .collect();
        let fam = SampledFamily::new(times.clone(), items).unwrap();
        let f = long_short_split_field(&fam).unwrap();
        assert_eq!(f.violations, 0);
        assert_eq!(f.long.times, vec![1.0, 2.0, 4.0, 8.0]);
        let col: Vec<Complex64> = (0..8).map(|i| ((i * i % 5) as f64).into()).collect();
        let s = long_short_split(&ScalarSequence::new(times, col).unwrap()).unwrap();
        for ((n, g), (m, v)) in f.short.iter().zip(&s.short) {
            assert_eq!(n, m);
            assert_eq!(g.values[1].re, *v);
        }
    }
}
