use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::torus::RationalFraction;
use crate::error::{Error, Result};

pub const DEFAULT_SIGMA_CAP: u64 = 1_000_000;

/// A nested family N ↦ P_{≤N} of denominator sets.
pub trait DenominatorFamily: Send + Sync {
    fn name(&self) -> String;
    /// Sorted members of P_{≤N}; empty for N = 0.
    fn members(&self, n: u64) -> Vec<u64>;
}

/// P_{≤N} = {1, …, N}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InitialSegment;

impl DenominatorFamily for InitialSegment {
    fn name(&self) -> String {
        "initial-segment".into()
    }

    fn members(&self, n: u64) -> Vec<u64> {
        (1..=n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenominatorSet {
    pub n: u64,
    pub members: Vec<u64>,
    pub lcm: BigUint,
}

impl DenominatorSet {
    pub fn contains(&self, q: u64) -> bool {
        self.members.binary_search(&q).is_ok()
    }
}

fn violation(property: &str, detail: String) -> Error {
    Error::PropertyViolation { property: property.into(), detail }
}

/// P_{≤N} from `family`, checked for {1..N} ⊆ P_{≤N} ⊆ {1..max(N, e^{N^ϱ})},
/// P_{≤N−1} ⊆ P_{≤N}, closure under divisors, and lcm(P_{≤N}) ≤ 3^N.
pub fn build_p_leq(n: u64, rho: f64, family: &dyn DenominatorFamily) -> Result<DenominatorSet> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let members = family.members(n);
    if members.windows(2).any(|w| w[0] >= w[1]) {
        return Err(violation("sorted", format!("{} returned unsorted or repeated members", family.name())));
    }
    let set: BTreeSet<u64> = members.iter().copied().collect();
    if let Some(q) = (1..=n).find(|q| !set.contains(q)) {
        return Err(violation("contains-initial-segment", format!("{q} ≤ N = {n} is missing")));
    }
    let upper = (n as f64).max((n as f64).powf(rho).exp());
    if let Some(&q) = members.iter().find(|&&q| q == 0 || q as f64 > upper) {
        return Err(violation("bounded", format!("{q} exceeds max(N, e^(N^ϱ)) = {upper}")));
    }
    if n > 1 {
        if let Some(q) = family.members(n - 1).into_iter().find(|q| !set.contains(q)) {
            return Err(violation("nested", format!("{q} ∈ P_≤{} but not P_≤{n}", n - 1)));
        }
    }
    for &q in &members {
        let mut d = 1;
        while d * d <= q {
            if q % d == 0 && (!set.contains(&d) || !set.contains(&(q / d))) {
                let missing = if set.contains(&d) { q / d } else { d };
                return Err(violation("factor-closed", format!("divisor {missing} of {q} is missing")));
            }
            d += 1;
        }
    }
    let lcm = members.iter().fold(BigUint::one(), |acc, &q| acc.lcm(&BigUint::from(q)));
    if lcm > BigUint::from(3u32).pow(n as u32) {
        return Err(violation("lcm", format!("lcm = {lcm} exceeds 3^{n}")));
    }
    Ok(DenominatorSet { n, members, lcm })
}

/// Jordan totient J_d(q) = #{a mod q ∈ (Z/q)^d : gcd(a, q) = 1}.
pub fn jordan_totient(q: u64, d: u32) -> f64 {
    let mut m = q;
    let mut result = (q as f64).powi(d as i32);
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            result *= 1.0 - (p as f64).powi(-(d as i32));
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        result *= 1.0 - (m as f64).powi(-(d as i32));
    }
    result
}

/// Number of reduced fractions with denominator in `denominators`.
pub fn sigma_size(denominators: &[u64], dim: usize) -> f64 {
    denominators.iter().map(|&q| jordan_totient(q, dim as u32)).sum()
}

/// Reduced fractions a/q with q in `denominators`, visited in order of q and then
/// lexicographically over numerators in [−⌊q/2⌋, ⌈q/2⌉ − 1].
pub fn for_each_fraction(denominators: &[u64], dim: usize, mut f: impl FnMut(&RationalFraction)) {
    for &q in denominators {
        let lo = -((q / 2) as i64);
        let hi = q.div_ceil(2) as i64 - 1;
        let mut a = vec![lo; dim];
        loop {
            if a.iter().fold(q as i64, |g, &v| g.gcd(&v)) == 1 {
                f(&RationalFraction { a: a.clone(), q });
            }
            let mut i = dim;
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                if a[i] < hi {
                    a[i] += 1;
                    a[i + 1..].iter_mut().for_each(|v| *v = lo);
                    break false;
                }
            };
            if done {
                break;
            }
        }
    }
}

/// Σ over the given denominators, refusing to materialize more than `cap` fractions.
pub fn build_sigma(denominators: &[u64], dim: usize, cap: u64) -> Result<Vec<RationalFraction>> {
    let size = sigma_size(denominators, dim).round();
    if size > cap as f64 {
        return Err(Error::SigmaCap { size: size as usize, cap: cap as usize });
    }
    let mut out = Vec::with_capacity(size as usize);
    for_each_fraction(denominators, dim, |f| out.push(f.clone()));
    Ok(out)
}

/// Materialized P_{≤N} and Σ_{≤N} for one N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IwFamily {
    pub u: u32,
    pub rho: f64,
    pub n: u64,
    pub dim: usize,
    pub denominators: DenominatorSet,
    pub sigma: Vec<RationalFraction>,
}

impl IwFamily {
    pub fn build(n: u64, u: u32, dim: usize, family: &dyn DenominatorFamily, cap: u64) -> Result<Self> {
        if u == 0 {
            return Err(Error::invalid("u must be at least 1"));
        }
        let rho = 1.0 / (10.0 * u as f64);
        let denominators = build_p_leq(n, rho, family)?;
        let sigma = build_sigma(&denominators.members, dim, cap)?;
        Ok(IwFamily { u, rho, n, dim, denominators, sigma })
    }

    /// |Σ_{≤N}| / e^{(d+1)N^ϱ}.
    pub fn size_ratio(&self) -> f64 {
        self.sigma.len() as f64 / ((self.dim as f64 + 1.0) * (self.n as f64).powf(self.rho)).exp()
    }

    /// Smallest ℓ^∞ torus distance between two distinct members of Σ.
    pub fn min_separation(&self) -> Option<f64> {
        let pts: Vec<Vec<f64>> = self.sigma.iter().map(|f| f.point()).collect();
        let mut best: Option<f64> = None;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let d = super::torus::torus_diff(&pts[i], &pts[j]).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_leq_examples() {
        assert_eq!(build_p_leq(1, 0.1, &InitialSegment).unwrap().members, vec![1]);
        let p = build_p_leq(10, 0.1, &InitialSegment).unwrap();
        assert_eq!(p.lcm, BigUint::from(2520u32));
        for n in 1..=200 {
            build_p_leq(n, 0.1, &InitialSegment).unwrap();
        }
        assert!(build_p_leq(0, 0.1, &InitialSegment).is_err());
    }

    struct Broken;
    impl DenominatorFamily for Broken {
        fn name(&self) -> String {
            "broken".into()
        }
        fn members(&self, n: u64) -> Vec<u64> {
            let mut v: Vec<u64> = (1..=n).collect();
            if n == 4 {
                v.push(10);
            }
            v
        }
    }

    #[test]
    fn custom_variant_checked() {
        let err = build_p_leq(4, 1.0, &Broken).unwrap_err();
        assert!(matches!(err, Error::PropertyViolation { ref property, .. } if property == "factor-closed"), "{err}");
    }

    #[test]
    fn sigma_examples() {
        let s = build_sigma(&[1], 3, 10).unwrap();
        assert_eq!(s, vec![RationalFraction::zero(3)]);
        let pts: Vec<Vec<f64>> = build_sigma(&[1, 2], 1, 10).unwrap().iter().map(|f| f.point()).collect();
        assert_eq!(pts, vec![vec![0.0], vec![-0.5]]);
        let s = build_sigma(&[1, 2, 3], 1, 10).unwrap();
        assert_eq!(s.len(), 4);
        assert!(matches!(build_sigma(&(1..=30).collect::<Vec<_>>(), 3, 1000), Err(Error::SigmaCap { .. })));
    }

    #[test]
    fn totient_counts_match_enumeration() {
        for dim in 1..=3 {
            for q in 1..=12u64 {
                let mut count = 0;
                for_each_fraction(&[q], dim, |_| count += 1);
                assert_eq!(count as f64, jordan_totient(q, dim as u32).round(), "q={q} d={dim}");
            }
        }
    }

    #[test]
    fn family_report() {
        let fam = IwFamily::build(6, 1, 2, &InitialSegment, DEFAULT_SIGMA_CAP).unwrap();
        let distinct: BTreeSet<_> = fam.sigma.iter().collect();
        assert_eq!(distinct.len(), fam.sigma.len());
        let sep = fam.min_separation().unwrap();
        assert!(sep >= 1.0 / 36.0 - 1e-15);
        assert!(fam.size_ratio() > 0.0);
    }
}
