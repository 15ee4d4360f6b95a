use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const VARIATION_BRUTEFORCE_CAP: usize = 14;
pub const JUMP_BRUTEFORCE_CAP: usize = 18;

/// Finite sample (t, a_t) with strictly increasing times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarSequence {
    times: Vec<f64>,
    values: Vec<Complex64>,
}

impl ScalarSequence {
    pub fn new(times: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid("times and values differ in length"));
        }
        if times.is_empty() {
            return Err(Error::invalid("sequence must have at least one element"));
        }
        if times.iter().any(|t| t.is_nan()) || times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("times must be strictly increasing"));
        }
        Ok(ScalarSequence { times, values })
    }

    /// Values indexed by 0, 1, 2, ….
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        let times = (0..values.len()).map(|i| i as f64).collect();
        ScalarSequence::new(times, values)
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        ScalarSequence::from_values(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.is_nan() || r < 1.0 {
        return Err(Error::invalid(format!("variation exponent r must be ≥ 1, got {r}")));
    }
    Ok(())
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || lambda.is_infinite() {
        return Err(Error::invalid(format!("jump size λ must be positive and finite, got {lambda}")));
    }
    Ok(())
}

/// sup_t |a_t − a_{t₀}|.
pub fn sup_values(values: &[Complex64]) -> f64 {
    let a0 = values[0];
    values.iter().map(|v| (v - a0).norm()).fold(0.0, f64::max)
}

/// Exact V^r by dynamic programming over path endpoints.
pub fn variation_values(values: &[Complex64], r: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    if r.is_infinite() {
        let mut best = 0.0f64;
        for j in 1..n {
            for i in 0..j {
                best = best.max((values[j] - values[i]).norm());
            }
        }
        return best;
    }
    // best[j]: max Σ|Δ|^r over increasing chains ending at j
    let mut best = vec![0.0f64; n];
    for j in 1..n {
        let mut m = 0.0f64;
        for i in 0..j {
            let d = (values[j] - values[i]).norm();
            let w = if r == 1.0 { d } else if r == 2.0 { d * d } else { d.powf(r) };
            m = m.max(best[i] + w);
        }
        best[j] = m;
    }
    let total = best.into_iter().fold(0.0, f64::max);
    if r == 1.0 {
        total
    } else if r == 2.0 {
        total.sqrt()
    } else {
        total.powf(1.0 / r)
    }
}

/// Exact N_λ: longest chain whose consecutive increments all reach λ.
pub fn jump_values(values: &[Complex64], lambda: f64) -> u64 {
    let n = values.len();
    let mut best = vec![0u64; n];
    let mut out = 0u64;
    for j in 1..n {
        let mut m = 0u64;
        for i in 0..j {
            if (values[j] - values[i]).norm() >= lambda {
                m = m.max(best[i] + 1);
            }
        }
        best[j] = m;
        out = out.max(m);
    }
    out
}

/// Value at the largest sampled time ≤ t (càdlàg reading); `None` before the first sample.
fn value_at(times: &[f64], values: &[Complex64], t: f64) -> Option<Complex64> {
    let idx = times.partition_point(|&s| s <= t);
    (idx > 0).then(|| values[idx - 1])
}

pub(crate) fn validate_anchors(times: &[f64], anchors: &[f64]) -> Result<()> {
    if anchors.len() < 2 {
        return Err(Error::invalid("oscillation needs at least two anchors (N ≥ 1)"));
    }
    if anchors.iter().any(|a| a.is_nan()) || anchors.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("oscillation anchors must be strictly increasing"));
    }
    let (first, last) = (times[0], times[times.len() - 1]);
    if anchors[0] < first || anchors[0] > last {
        return Err(Error::invalid(format!(
            "first anchor {} lies outside the sampled range [{first}, {last}]",
            anchors[0]
        )));
    }
    Ok(())
}

/// (Σ_j sup_{I_j ≤ t < I_{j+1}} |a_t − a_{I_j}|²)^{1/2}; anchors must be validated.
pub fn oscillation_values(times: &[f64], values: &[Complex64], anchors: &[f64]) -> f64 {
    let mut total = 0.0;
    for w in anchors.windows(2) {
        let Some(anchor) = value_at(times, values, w[0]) else { continue };
        let lo = times.partition_point(|&s| s < w[0]);
        let hi = times.partition_point(|&s| s < w[1]);
        let m = values[lo..hi].iter().map(|v| (v - anchor).norm()).fold(0.0, f64::max);
        total += m * m;
    }
    total.sqrt()
}

pub fn sup_seminorm(seq: &ScalarSequence) -> f64 {
    sup_values(&seq.values)
}

pub fn variation(seq: &ScalarSequence, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(variation_values(&seq.values, r))
}

/// Exhaustive maximum over all increasing subsequences.
pub fn variation_bruteforce(seq: &ScalarSequence, r: f64) -> Result<f64> {
    check_r(r)?;
    let n = seq.len();
    if n > VARIATION_BRUTEFORCE_CAP {
        return Err(Error::LengthCap { len: n, cap: VARIATION_BRUTEFORCE_CAP });
    }
    let v = &seq.values;
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let incs = idx.windows(2).map(|w| (v[w[1]] - v[w[0]]).norm());
        let s = if r.is_infinite() { incs.fold(0.0, f64::max) } else { incs.map(|d| d.powf(r)).sum() };
        best = best.max(s);
    }
    Ok(if r.is_infinite() { best } else { best.powf(1.0 / r) })
}

pub fn jump_count(seq: &ScalarSequence, lambda: f64) -> Result<u64> {
    check_lambda(lambda)?;
    Ok(jump_values(&seq.values, lambda))
}

/// Exhaustive maximum J over subsequences with every increment ≥ λ.
pub fn jump_bruteforce(seq: &ScalarSequence, lambda: f64) -> Result<u64> {
    check_lambda(lambda)?;
    let n = seq.len();
    if n > JUMP_BRUTEFORCE_CAP {
        return Err(Error::LengthCap { len: n, cap: JUMP_BRUTEFORCE_CAP });
    }
    let v = &seq.values;
    let mut best = 0u64;
    let mut idx = Vec::with_capacity(n);
    for mask in 1u32..(1 << n) {
        let j = mask.count_ones() as u64 - 1;
        if j <= best {
            continue;
        }
        idx.clear();
        idx.extend((0..n).filter(|i| mask >> i & 1 == 1));
        if idx.windows(2).all(|w| (v[w[1]] - v[w[0]]).norm() >= lambda) {
            best = j;
        }
    }
    Ok(best)
}

pub fn oscillation(seq: &ScalarSequence, anchors: &[f64]) -> Result<f64> {
    validate_anchors(&seq.times, anchors)?;
    Ok(oscillation_values(&seq.times, &seq.values, anchors))
}

/// The seminorm selected for S_p.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SeminormKind {
    Sup,
    /// Explicit anchors, or the default: every other sampled time plus an
    /// unbounded final anchor.
    Oscillation { anchors: Option<Vec<f64>> },
    Variation { r: f64 },
    /// Explicit λ grid, or the default logarithmic grid over the observed increments.
    Jump { lambdas: Option<Vec<f64>> },
}

impl SeminormKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            SeminormKind::Sup => Ok(()),
            SeminormKind::Oscillation { anchors } => {
                if let Some(a) = anchors {
                    if a.len() < 2 || a.iter().any(|v| v.is_nan()) || a.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(Error::invalid("oscillation anchors must be ≥ 2 and strictly increasing"));
                    }
                }
                Ok(())
            }
            SeminormKind::Variation { r } => check_r(*r),
            SeminormKind::Jump { lambdas } => {
                if let Some(l) = lambdas {
                    if l.is_empty() {
                        return Err(Error::invalid("λ grid must be nonempty"));
                    }
                    for &v in l {
                        check_lambda(v)?;
                    }
                }
                Ok(())
            }
        }
    }

    /// Anchors for a given time grid.
    pub fn anchors_for(&self, times: &[f64]) -> Option<Vec<f64>> {
        match self {
            SeminormKind::Oscillation { anchors: Some(a) } => Some(a.clone()),
            SeminormKind::Oscillation { anchors: None } => Some(default_anchors(times)),
            _ => None,
        }
    }
}

/// Every other sampled time, closed by +∞ so the last window reaches the end.
pub fn default_anchors(times: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = times.iter().step_by(2).copied().collect();
    a.push(f64::INFINITY);
    a
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| parse_real(v.trim()))
        .collect()
}

fn parse_real(s: &str) -> Result<f64> {
    match s {
        "inf" | "∞" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|_| Error::invalid(format!("bad number '{s}'"))),
    }
}

impl fmt::Display for SeminormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeminormKind::Sup => f.write_str("sup"),
            SeminormKind::Oscillation { anchors: None } => f.write_str("osc"),
            SeminormKind::Oscillation { anchors: Some(a) } => write!(f, "osc:{}", fmt_list(a)),
            SeminormKind::Variation { r } => write!(f, "var:{r}"),
            SeminormKind::Jump { lambdas: None } => f.write_str("jump"),
            SeminormKind::Jump { lambdas: Some(l) } => write!(f, "jump:{}", fmt_list(l)),
        }
    }
}

impl FromStr for SeminormKind {
    type Err = Error;
    /// `sup`, `osc[:a1,a2,…]`, `var:r` (r may be `inf`), `jump[:λ1,λ2,…]`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (s.trim(), None),
        };
        let kind = match (head, rest) {
            ("sup", None) => SeminormKind::Sup,
            ("osc", None) => SeminormKind::Oscillation { anchors: None },
            ("osc", Some(r)) => SeminormKind::Oscillation { anchors: Some(parse_list(r)?) },
            ("var", Some(r)) => SeminormKind::Variation { r: parse_real(r)? },
            ("jump", None) => SeminormKind::Jump { lambdas: None },
            ("jump", Some(r)) => SeminormKind::Jump { lambdas: Some(parse_list(r)?) },
            _ => return Err(Error::invalid(format!("unknown seminorm kind '{s}'"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl From<SeminormKind> for String {
    fn from(k: SeminormKind) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for SeminormKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}
