use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fft::apply_fast;
use super::grid::{GridFunction, IntBox};
use super::kernel::{apply_direct, build_kernel, RadonKernel};
use crate::error::{Error, Result};
use crate::lattice::{ConvexBody, PolynomialMap};

/// Finest binary refinement accepted as a member of U = ⋃_n 2^n N.
pub const MAX_REFINEMENT: i32 = 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TimeGridKind {
    /// {2^a, …, 2^b}.
    Dyadic { from: i32, to: i32 },
    /// {m 2^{-r} : m ∈ N} ∩ [lo, hi].
    U { lo: f64, hi: f64, refinement: u32 },
    Explicit,
}

/// Strictly increasing positive sample times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub kind: TimeGridKind,
    pub times: Vec<f64>,
}

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

impl TimeGrid {
    pub fn dyadic(from: i32, to: i32) -> Result<Self> {
        if from > to {
            return Err(Error::invalid(format!("empty dyadic range {from}..{to}")));
        }
        if !(-1000..=1000).contains(&from) || !(-1000..=1000).contains(&to) {
            return Err(Error::invalid("dyadic exponents out of range"));
        }
        Ok(TimeGrid { kind: TimeGridKind::Dyadic { from, to }, times: (from..=to).map(pow2).collect() })
    }

    /// Times m·2^{-refinement} in [lo, hi].
    pub fn u_range(lo: f64, hi: f64, refinement: u32) -> Result<Self> {
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::invalid(format!("bad U range {lo}..{hi}")));
        }
        if refinement as i32 > MAX_REFINEMENT {
            return Err(Error::invalid("refinement too fine"));
        }
        let step = pow2(-(refinement as i32));
        let m0 = (lo / step).ceil() as u64;
        let m1 = (hi / step).floor() as u64;
        if m0 > m1 {
            return Err(Error::invalid(format!("no U points in {lo}..{hi}")));
        }
        if m1 - m0 > 10_000_000 {
            return Err(Error::invalid("U grid too large"));
        }
        let times = (m0..=m1).map(|m| m as f64 * step).collect();
        Ok(TimeGrid { kind: TimeGridKind::U { lo, hi, refinement }, times })
    }

    /// The dyadic block [2^l, 2^{l+1}] ∩ 2^{-refinement} N.
    pub fn u_block(l: i32, refinement: u32) -> Result<Self> {
        TimeGrid::u_range(pow2(l), pow2(l + 1), refinement)
    }

    pub fn explicit(mut times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::invalid("time grid must be nonempty"));
        }
        if times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::invalid("times must be positive and finite"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("times must be strictly increasing"));
        }
        times.shrink_to_fit();
        Ok(TimeGrid { kind: TimeGridKind::Explicit, times })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_time(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    /// Whether every time is m·2^{-r} with r ≤ [`MAX_REFINEMENT`].
    pub fn in_u(&self) -> bool {
        self.times.iter().all(|&t| is_u_time(t))
    }
}

pub fn is_u_time(t: f64) -> bool {
    t > 0.0 && t.is_finite() && (t * pow2(MAX_REFINEMENT)).fract() == 0.0
}

fn parse_range<T: FromStr>(s: &str) -> Result<(T, T)> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::invalid(format!("expected a..b, got '{s}'")))?;
    let pa = a.trim().parse().map_err(|_| Error::invalid(format!("bad range start '{a}'")))?;
    let pb = b.trim().parse().map_err(|_| Error::invalid(format!("bad range end '{b}'")))?;
    Ok((pa, pb))
}

impl FromStr for TimeGrid {
    type Err = Error;
    /// `dyadic:a..b`, `u:a..b` (integer refinement 0) or `u:a..b/r`,
    /// `list:t1,t2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid(format!("grid '{s}' lacks a kind prefix")))?;
        match kind.trim() {
            "dyadic" => {
                let (a, b) = parse_range::<i32>(rest)?;
                TimeGrid::dyadic(a, b)
            }
            "u" => {
                let (range, r) = match rest.split_once('/') {
                    Some((range, r)) => {
                        (range, r.trim().parse::<u32>().map_err(|_| Error::invalid("bad refinement"))?)
                    }
                    None => (rest, 0),
                };
                let (a, b) = parse_range::<f64>(range)?;
                TimeGrid::u_range(a, b, r)
            }
            "list" => {
                let times = rest
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| Error::invalid(format!("bad time '{v}'"))))
                    .collect::<Result<Vec<_>>>()?;
                TimeGrid::explicit(times)
            }
            other => Err(Error::invalid(format!("unknown grid kind '{other}'"))),
        }
    }
}

impl fmt::Display for TimeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            TimeGridKind::Dyadic { from, to } => write!(f, "dyadic:{from}..{to}"),
            TimeGridKind::U { lo, hi, refinement } => write!(f, "u:{lo}..{hi}/{refinement}"),
            TimeGridKind::Explicit => {
                let v: Vec<String> = self.times.iter().map(|t| format!("{t}")).collect();
                write!(f, "list:{}", v.join(","))
            }
        }
    }
}

/// One item per sampled time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFamily<T> {
    pub times: Vec<f64>,
    pub items: Vec<T>,
}

impl<T> SampledFamily<T> {
    pub fn new(times: Vec<f64>, items: Vec<T>) -> Result<Self> {
        if times.len() != items.len() || times.is_empty() {
            return Err(Error::invalid("family needs one item per time and at least one time"));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("family times must be strictly increasing"));
        }
        Ok(SampledFamily { times, items })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

impl SampledFamily<GridFunction> {
    /// The shared box, or [`Error::BoxMismatch`].
    pub fn common_box(&self) -> Result<&IntBox> {
        let b = &self.items[0].bbox;
        if self.items.iter().any(|g| &g.bbox != b) {
            return Err(Error::BoxMismatch);
        }
        Ok(b)
    }
}

/// Kernels of one (P, body) pair, keyed by the exact bits of t. Readers share
/// the lock; insertion is exclusive.
pub struct KernelCache {
    map: PolynomialMap,
    body: ConvexBody,
    kernels: RwLock<HashMap<u64, Arc<RadonKernel>>>,
}

impl KernelCache {
    pub fn new(map: PolynomialMap, body: ConvexBody) -> Self {
        KernelCache { map, body, kernels: RwLock::new(HashMap::new()) }
    }

    pub fn map(&self) -> &PolynomialMap {
        &self.map
    }

    pub fn body(&self) -> ConvexBody {
        self.body
    }

    pub fn get(&self, t: f64) -> Result<Arc<RadonKernel>> {
        let key = t.to_bits();
        if let Some(k) = self.kernels.read().expect("kernel cache poisoned").get(&key) {
            return Ok(k.clone());
        }
        let built = Arc::new(build_kernel(&self.map, self.body, t)?);
        let mut w = self.kernels.write().expect("kernel cache poisoned");
        Ok(w.entry(key).or_insert(built).clone())
    }

    pub fn len(&self) -> usize {
        self.kernels.read().expect("kernel cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Default cap on stored family cells (complex values across all times).
pub const DEFAULT_FAMILY_BUDGET: usize = 1 << 25;

/// Picks direct summation unless the FFT is clearly cheaper.
pub fn apply_auto(f: &GridFunction, kernel: &RadonKernel) -> Result<GridFunction> {
    let nnz = f.values.iter().filter(|v| v.norm_sqr() != 0.0).count();
    let direct = nnz as f64 * kernel.counts.len() as f64;
    let padded: f64 = f
        .bbox
        .widths()
        .iter()
        .zip(kernel.support().widths())
        .map(|(a, b)| (a + b).next_power_of_two() as f64)
        .product();
    let fast = 6.0 * padded * padded.log2().max(1.0);
    if direct <= fast {
        apply_direct(f, kernel)
    } else {
        apply_fast(f, kernel)
    }
}

/// (M_t f)_{t ∈ grid} on one common box.
pub fn average_family(
    f: &GridFunction,
    map: &PolynomialMap,
    body: ConvexBody,
    grid: &TimeGrid,
) -> Result<SampledFamily<GridFunction>> {
    let cache = KernelCache::new(map.clone(), body);
    average_family_cached(f, &cache, grid, DEFAULT_FAMILY_BUDGET)
}

pub fn average_family_cached(
    f: &GridFunction,
    cache: &KernelCache,
    grid: &TimeGrid,
    budget: usize,
) -> Result<SampledFamily<GridFunction>> {
    if grid.is_empty() {
        return Err(Error::invalid("time grid must be nonempty"));
    }
    if f.dim() != cache.map().dim() {
        return Err(Error::ArityMismatch { expected: cache.map().dim(), got: f.dim() });
    }
    let kernels: Vec<Arc<RadonKernel>> = grid.times.par_iter().map(|&t| cache.get(t)).collect::<Result<_>>()?;
    let mut common = f.bbox.clone();
    for (k, &t) in kernels.iter().zip(&grid.times) {
        common = common.hull(&f.bbox.sum(&k.support()));
        let cells = common.len().saturating_mul(grid.len());
        if cells > budget {
            return Err(Error::MemoryBudget { time: t, cells, budget });
        }
    }
    let items: Vec<GridFunction> = kernels
        .par_iter()
        .map(|k| apply_auto(f, k)?.embed(&common))
        .collect::<Result<_>>()?;
    SampledFamily::new(grid.times.clone(), items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: TimeGrid = "dyadic:0..4".parse().unwrap();
        assert_eq!(g.times, vec![1.0, 2.0, 4.0, 8.0, 16.0]);
        let u: TimeGrid = "u:1..4".parse().unwrap();
        assert_eq!(u.times, vec![1.0, 2.0, 3.0, 4.0]);
        let u2: TimeGrid = "u:1..2/2".parse().unwrap();
        assert_eq!(u2.times, vec![1.0, 1.25, 1.5, 1.75, 2.0]);
        let l: TimeGrid = "list:0.5,1,3".parse().unwrap();
        assert_eq!(l.times, vec![0.5, 1.0, 3.0]);
        assert!("list:2,1".parse::<TimeGrid>().is_err());
        assert!("dyadic:3..1".parse::<TimeGrid>().is_err());
        assert!("spiral:1..2".parse::<TimeGrid>().is_err());
        for g in [g, u, u2, l] {
            assert_eq!(g.to_string().parse::<TimeGrid>().unwrap().times, g.times);
            assert!(g.in_u());
        }
        assert!(!TimeGrid::explicit(vec![0.1]).unwrap().in_u());
    }

    #[test]
    fn family_masses_and_nesting() {
        let grid = TimeGrid::dyadic(0, 4).unwrap();
        let fam = average_family(&GridFunction::delta(1), &PolynomialMap::identity(), ConvexBody::Ball, &grid).unwrap();
        let b = fam.common_box().unwrap().clone();
        assert_eq!(b, IntBox::centered(1, 15));
        for g in &fam.items {
            assert!((g.sum().re - 1.0).abs() < 1e-12);
        }
        let cache = KernelCache::new(PolynomialMap::parse_expr("n^2").unwrap(), ConvexBody::Ball);
        for n in 0..6 {
            let a = cache.get(pow2(n)).unwrap();
            let bb = cache.get(pow2(n + 1)).unwrap();
            assert!(a.counts.keys().all(|z| bb.counts.contains_key(z)));
        }
        assert_eq!(cache.len(), 7);
    }

    #[test]
    fn singleton_grid_is_apply_direct() {
        let f = GridFunction::from_real(IntBox::centered(1, 2), &[1.0, -1.0, 2.0, 0.5, 3.0]).unwrap();
        let map = PolynomialMap::parse_expr("n^2 + n").unwrap();
        let fam = average_family(&f, &map, ConvexBody::Ball, &TimeGrid::explicit(vec![3.5]).unwrap()).unwrap();
        let direct = apply_direct(&f, &build_kernel(&map, ConvexBody::Ball, 3.5).unwrap()).unwrap();
        assert_eq!(fam.items[0], direct);
    }

    #[test]
    fn memory_budget_names_time() {
        let cache = KernelCache::new(PolynomialMap::identity(), ConvexBody::Ball);
        let grid = TimeGrid::dyadic(0, 10).unwrap();
        match average_family_cached(&GridFunction::delta(1), &cache, &grid, 200) {
            Err(Error::MemoryBudget { time, .. }) => assert_eq!(time, 16.0),
            other => panic!("unexpected {other:?}"),
        }
        match average_family_cached(&GridFunction::delta(1), &cache, &grid, 11 * 70) {
            Err(Error::MemoryBudget { time, .. }) => assert_eq!(time, 64.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
