//! Convex bodies, integer polynomial maps and the canonical monomial lifting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = Vec<i64>;
pub type MultiIndex = Vec<u32>;

/// Bounded convex open body Ω with B(0, c) ⊆ Ω ⊆ B(0, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvexBody {
    /// Open euclidean unit ball, c = 1.
    Ball,
    /// Open max-norm cube of half side 1/√k, c = 1/√k.
    Cube,
}

impl ConvexBody {
    pub fn inner_radius(&self, k: usize) -> f64 {
        match self {
            ConvexBody::Ball => 1.0,
            ConvexBody::Cube => 1.0 / (k as f64).sqrt(),
        }
    }

    /// Membership of a real point in the unit body.
    pub fn contains(&self, x: &[f64]) -> bool {
        let k = x.len() as f64;
        match self {
            ConvexBody::Ball => x.iter().map(|v| v * v).sum::<f64>() < 1.0,
            ConvexBody::Cube => x.iter().all(|v| k * v * v < 1.0),
        }
    }

    /// Exact test for y/t ∈ Ω with y an integer point.
    pub fn contains_scaled(&self, y: &[i64], t: f64) -> bool {
        let t2 = t * t;
        match self {
            ConvexBody::Ball => {
                let s: i128 = y.iter().map(|&v| (v as i128) * (v as i128)).sum();
                (s as f64) < t2
            }
            ConvexBody::Cube => {
                let k = y.len() as i128;
                y.iter().all(|&v| ((k * (v as i128) * (v as i128)) as f64) < t2)
            }
        }
    }

    /// Lebesgue measure of the unit body in dimension k.
    pub fn volume(&self, k: usize) -> f64 {
        match self {
            ConvexBody::Ball => {
                // V_k = V_{k-2} · 2π / k
                let (mut v, start) = if k % 2 == 0 { (1.0, 2) } else { (2.0, 3) };
                let mut j = start;
                while j <= k {
                    v *= 2.0 * std::f64::consts::PI / j as f64;
                    j += 2;
                }
                v
            }
            ConvexBody::Cube => (2.0 / (k as f64).sqrt()).powi(k as i32),
        }
    }

    /// Half width of the slice {s : (prefix, s, 0, ..) ∈ Ω} along the next axis,
    /// or `None` when the slice is empty.
    pub fn slice_half_width(&self, prefix: &[f64], k: usize) -> Option<f64> {
        match self {
            ConvexBody::Ball => {
                let rem = 1.0 - prefix.iter().map(|v| v * v).sum::<f64>();
                (rem > 0.0).then(|| rem.sqrt())
            }
            ConvexBody::Cube => Some(1.0 / (k as f64).sqrt()),
        }
    }
}

impl fmt::Display for ConvexBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConvexBody::Ball => "ball",
            ConvexBody::Cube => "cube",
        })
    }
}

impl FromStr for ConvexBody {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ball" => Ok(ConvexBody::Ball),
            "cube" => Ok(ConvexBody::Cube),
            other => Err(Error::invalid(format!("unknown body '{other}' (expected ball or cube)"))),
        }
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::invalid(format!("scale t must be positive and finite, got {t}")));
    }
    Ok(())
}

/// Largest m ≥ 0 with scale·m² < bound, or `None` if even m = 0 fails.
fn max_abs_below(bound: f64, scale: i64) -> Option<i64> {
    if bound <= 0.0 {
        return None;
    }
    let sq = |m: i64| ((scale as i128) * (m as i128) * (m as i128)) as f64;
    let mut m = (bound / scale as f64).sqrt().floor() as i64;
    while m > 0 && sq(m) >= bound {
        m -= 1;
    }
    while sq(m + 1) < bound {
        m += 1;
    }
    Some(m)
}

/// All y ∈ Z^k with y/t ∈ Ω, in ascending lexicographic order.
///
/// Rows along the last axis are computed from the exact membership bound, which
/// is equivalent to scanning the box [-⌈t⌉, ⌈t⌉]^k.
pub fn enumerate_lattice_points(body: ConvexBody, k: usize, t: f64) -> Result<Vec<Point>> {
    check_t(t)?;
    if k == 0 {
        return Err(Error::invalid("arity k must be at least 1"));
    }
    let t2 = t * t;
    let r = match body {
        ConvexBody::Ball => t.ceil() as i64,
        ConvexBody::Cube => max_abs_below(t2, k as i64).unwrap_or(0),
    };
    let mut out = Vec::new();
    let mut prefix = vec![-r; k - 1];
    loop {
        let bound = match body {
            ConvexBody::Ball => {
                let s: i128 = prefix.iter().map(|&v| (v as i128) * (v as i128)).sum();
                max_abs_below(t2 - s as f64, 1)
            }
            ConvexBody::Cube => Some(r),
        };
        if let Some(m) = bound {
            for last in -m..=m {
                let mut y = prefix.clone();
                y.push(last);
                debug_assert!(body.contains_scaled(&y, t));
                out.push(y);
            }
        }
        // odometer over the prefix, last prefix axis fastest
        let mut axis = prefix.len();
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if prefix[axis] < r {
                prefix[axis] += 1;
                for v in prefix.iter_mut().skip(axis + 1) {
                    *v = -r;
                }
                break;
            }
        }
    }
}

/// Integer polynomial map P: Z^k → Z^d with P(0) = 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolynomialMap {
    k: usize,
    components: Vec<BTreeMap<MultiIndex, i64>>,
}

impl PolynomialMap {
    /// Builds a map from per-component monomial lists. Duplicate monomials are
    /// merged and zero coefficients dropped.
    pub fn new(k: usize, components: Vec<Vec<(MultiIndex, i64)>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("arity k must be at least 1"));
        }
        if components.is_empty() {
            return Err(Error::invalid("target dimension d must be at least 1"));
        }
        let mut comps = Vec::with_capacity(components.len());
        for (j, comp) in components.into_iter().enumerate() {
            let mut table: BTreeMap<MultiIndex, i64> = BTreeMap::new();
            for (gamma, c) in comp {
                if gamma.len() != k {
                    return Err(Error::ArityMismatch { expected: k, got: gamma.len() });
                }
                if gamma.iter().all(|&e| e == 0) && c != 0 {
                    return Err(Error::invalid(format!(
                        "component {j} has a constant term; P(0) = 0 is required"
                    )));
                }
                let entry = table.entry(gamma).or_insert(0);
                *entry = entry
                    .checked_add(c)
                    .ok_or_else(|| Error::Overflow("merging coefficients".into()))?;
            }
            table.retain(|_, c| *c != 0);
            comps.push(table);
        }
        Ok(PolynomialMap { k, components: comps })
    }

    /// The identity map n ↦ n on Z.
    pub fn identity() -> Self {
        PolynomialMap::new(1, vec![vec![(vec![1], 1)]]).expect("valid")
    }

    /// The one-dimensional monomial c·n^e.
    pub fn monomial(c: i64, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::invalid("exponent must be positive"));
        }
        PolynomialMap::new(1, vec![vec![(vec![e], c)]])
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .flat_map(|c| c.keys())
            .map(|g| g.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn components(&self) -> &[BTreeMap<MultiIndex, i64>] {
        &self.components
    }

    /// Exact evaluation with checked 64-bit arithmetic.
    pub fn evaluate(&self, y: &[i64]) -> Result<Point> {
        if y.len() != self.k {
            return Err(Error::ArityMismatch { expected: self.k, got: y.len() });
        }
        let overflow = || Error::Overflow(format!("evaluating the polynomial map at {y:?}"));
        let mut out = Vec::with_capacity(self.components.len());
        for comp in &self.components {
            let mut acc: i64 = 0;
            for (gamma, &c) in comp {
                let mut term = c;
                for (&yi, &e) in y.iter().zip(gamma) {
                    let p = yi.checked_pow(e).ok_or_else(overflow)?;
                    term = term.checked_mul(p).ok_or_else(overflow)?;
                }
                acc = acc.checked_add(term).ok_or_else(overflow)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: i64) -> Result<Self> {
        if c == 0 {
            return Err(Error::invalid("scaling by zero"));
        }
        let mut comps = Vec::with_capacity(self.components.len());
        for comp in &self.components {
            let mut table = BTreeMap::new();
            for (g, &v) in comp {
                let nv = v
                    .checked_mul(c)
                    .ok_or_else(|| Error::Overflow("scaling coefficients".into()))?;
                table.insert(g.clone(), nv);
            }
            comps.push(table);
        }
        Ok(PolynomialMap { k: self.k, components: comps })
    }

    /// Per-component gcd of the coefficients (1 for a zero component).
    pub fn content(&self) -> Vec<i64> {
        self.components
            .iter()
            .map(|comp| {
                let g = comp.values().fold(0i64, |acc, &c| acc.gcd(&c));
                if g == 0 { 1 } else { g }
            })
            .collect()
    }

    /// The map with each component divided by its content, together with the content.
    pub fn primitive_part(&self) -> (Self, Vec<i64>) {
        let content = self.content();
        let comps = self
            .components
            .iter()
            .zip(&content)
            .map(|(comp, &s)| comp.iter().map(|(g, &c)| (g.clone(), c / s)).collect())
            .collect();
        (PolynomialMap { k: self.k, components: comps }, content)
    }

    /// Plain-text form: header `d k deg`, then one `component multiindex coefficient`
    /// line per monomial with the multi-index comma-joined.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.dim(), self.k, self.degree());
        for (j, comp) in self.components.iter().enumerate() {
            for (g, c) in comp {
                let idx: Vec<String> = g.iter().map(|e| e.to_string()).collect();
                s.push_str(&format!("{} {} {}\n", j, idx.join(","), c));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let perr = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|v| v.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| perr(hline, "header must be `d k deg`"))?;
        if h.len() != 3 {
            return Err(perr(hline, "header must be `d k deg`"));
        }
        let (d, k, deg) = (h[0], h[1], h[2]);
        let mut comps: Vec<Vec<(MultiIndex, i64)>> = vec![Vec::new(); d];
        for (ln, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(perr(ln, "expected `component multiindex coefficient`"));
            }
            let j: usize = parts[0].parse().map_err(|_| perr(ln, "bad component index"))?;
            if j >= d {
                return Err(perr(ln, "component index out of range"));
            }
            let g: MultiIndex = parts[1]
                .split(',')
                .map(|v| v.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| perr(ln, "bad multi-index"))?;
            let c: i64 = parts[2].parse().map_err(|_| perr(ln, "bad coefficient"))?;
            comps[j].push((g, c));
        }
        let map = PolynomialMap::new(k, comps)?;
        if map.degree() as usize != deg {
            return Err(perr(hline, "declared degree does not match the monomials"));
        }
        Ok(map)
    }

    /// Parses the command-line grammar: components separated by `,` or `;`
    /// (optionally wrapped in parentheses), each a sum of integer multiples of
    /// monomials in `n` (k = 1) or `n1`, `n2`, … with `^` powers.
    pub fn parse_expr(src: &str) -> Result<Self> {
        expr::parse(src)
    }

    /// Inverse of [`PolynomialMap::parse_expr`].
    pub fn to_expr(&self) -> String {
        let var = |i: usize| if self.k == 1 { "n".to_string() } else { format!("n{}", i + 1) };
        let comps: Vec<String> = self
            .components
            .iter()
            .map(|comp| {
                if comp.is_empty() {
                    return "0".to_string();
                }
                let mut s = String::new();
                // highest degree first reads naturally
                let mut terms: Vec<(&MultiIndex, &i64)> = comp.iter().collect();
                terms.sort_by(|a, b| {
                    let da: u32 = a.0.iter().sum();
                    let db: u32 = b.0.iter().sum();
                    db.cmp(&da).then(b.0.cmp(a.0))
                });
                for (i, (g, &c)) in terms.into_iter().enumerate() {
                    let mut factors = Vec::new();
                    for (axis, &e) in g.iter().enumerate() {
                        match e {
                            0 => {}
                            1 => factors.push(var(axis)),
                            _ => factors.push(format!("{}^{}", var(axis), e)),
                        }
                    }
                    let mono = factors.join("*");
                    let abs = c.unsigned_abs();
                    let body = if abs == 1 { mono } else { format!("{abs}*{mono}") };
                    if i == 0 {
                        if c < 0 {
                            s.push('-');
                        }
                    } else {
                        s.push_str(if c < 0 { " - " } else { " + " });
                    }
                    s.push_str(&body);
                }
                s
            })
            .collect();
        if comps.len() == 1 {
            comps.into_iter().next().unwrap()
        } else {
            format!("({})", comps.join(", "))
        }
    }
}

impl fmt::Display for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}

impl FromStr for PolynomialMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PolynomialMap::parse_expr(s)
    }
}

mod expr {
    use super::*;

    #[derive(Clone, Debug, PartialEq)]
    enum Tok {
        Num(i64),
        Var(Option<usize>),
        Caret,
        Star,
        Plus,
        Minus,
        Sep,
        LParen,
        RParen,
    }

    fn err(msg: impl Into<String>) -> Error {
        Error::Parse { line: 1, msg: msg.into() }
    }

    fn lex(src: &str) -> Result<Vec<Tok>> {
        let cs: Vec<char> = src.chars().collect();
        let mut i = 0;
        let mut out = Vec::new();
        while i < cs.len() {
            let c = cs[i];
            match c {
                ' ' | '\t' => i += 1,
                '^' => { out.push(Tok::Caret); i += 1 }
                '*' => { out.push(Tok::Star); i += 1 }
                '+' => { out.push(Tok::Plus); i += 1 }
                '-' => { out.push(Tok::Minus); i += 1 }
                ',' | ';' => { out.push(Tok::Sep); i += 1 }
                '(' => { out.push(Tok::LParen); i += 1 }
                ')' => { out.push(Tok::RParen); i += 1 }
                '0'..='9' => {
                    let start = i;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = cs[start..i].iter().collect();
                    let v = s.parse::<i64>().map_err(|_| err(format!("integer '{s}' out of range")))?;
                    out.push(Tok::Num(v));
                }
                'n' => {
                    i += 1;
                    let start = i;
                    while i < cs.len() && cs[i].is_ascii_digit() {
                        i += 1;
                    }
                    if start == i {
                        out.push(Tok::Var(None));
                    } else {
                        let s: String = cs[start..i].iter().collect();
                        let idx: usize = s.parse().map_err(|_| err("bad variable index"))?;
                        if idx == 0 {
                            return Err(err("variables are numbered from n1"));
                        }
                        out.push(Tok::Var(Some(idx - 1)));
                    }
                }
                other => return Err(err(format!("unexpected character '{other}'"))),
            }
        }
        Ok(out)
    }

    type Term = (BTreeMap<usize, u32>, i64);

    struct Parser {
        toks: Vec<Tok>,
        pos: usize,
    }

    impl Parser {
        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos)
        }

        fn next(&mut self) -> Option<Tok> {
            let t = self.toks.get(self.pos).cloned();
            self.pos += 1;
            t
        }

        fn component(&mut self) -> Result<Vec<Term>> {
            let mut terms = Vec::new();
            let mut first = true;
            loop {
                let mut sign = 1i64;
                match self.peek() {
                    Some(Tok::Plus) => { self.pos += 1; }
                    Some(Tok::Minus) => { self.pos += 1; sign = -1; }
                    _ if !first => break,
                    _ => {}
                }
                first = false;
                let (mono, c) = self.term()?;
                let c = c.checked_mul(sign).ok_or_else(|| err("coefficient overflow"))?;
                terms.push((mono, c));
                match self.peek() {
                    Some(Tok::Plus) | Some(Tok::Minus) => continue,
                    _ => break,
                }
            }
            Ok(terms)
        }

        fn term(&mut self) -> Result<Term> {
            let mut coeff: i64 = 1;
            let mut mono: BTreeMap<usize, u32> = BTreeMap::new();
            let mut any = false;
            loop {
                match self.peek().cloned() {
                    Some(Tok::Num(v)) => {
                        self.pos += 1;
                        coeff = coeff.checked_mul(v).ok_or_else(|| err("coefficient overflow"))?;
                        any = true;
                    }
                    Some(Tok::Var(v)) => {
                        self.pos += 1;
                        let mut e: u32 = 1;
                        if self.peek() == Some(&Tok::Caret) {
                            self.pos += 1;
                            match self.next() {
                                Some(Tok::Num(p)) if p >= 0 => {
                                    e = u32::try_from(p).map_err(|_| err("exponent too large"))?
                                }
                                _ => return Err(err("expected a non-negative integer exponent after '^'")),
                            }
                        }
                        let key = v.map(|i| i + 1).unwrap_or(0);
                        let slot = mono.entry(key).or_insert(0);
                        *slot = slot.checked_add(e).ok_or_else(|| err("exponent too large"))?;
                        any = true;
                    }
                    Some(Tok::Star) if any => {
                        self.pos += 1;
                        continue;
                    }
                    _ => break,
                }
            }
            if !any {
                return Err(err("expected a term"));
            }
            mono.retain(|_, e| *e > 0);
            Ok((mono, coeff))
        }
    }

    pub(super) fn parse(src: &str) -> Result<PolynomialMap> {
        let mut toks = lex(src)?;
        if toks.first() == Some(&Tok::LParen) && toks.last() == Some(&Tok::RParen) {
            toks = toks[1..toks.len() - 1].to_vec();
        }
        if toks.is_empty() {
            return Err(err("empty expression"));
        }
        let mut p = Parser { toks, pos: 0 };
        let mut comps = Vec::new();
        loop {
            comps.push(p.component()?);
            match p.next() {
                None => break,
                Some(Tok::Sep) => continue,
                Some(t) => return Err(err(format!("unexpected token {t:?}"))),
            }
        }
        // key 0 is the bare `n`, key i ≥ 1 is `n{i}`
        let keys: Vec<usize> = comps.iter().flatten().flat_map(|(m, _)| m.keys().copied()).collect();
        let bare = keys.contains(&0);
        let indexed = keys.iter().copied().filter(|&k| k > 0).max();
        let k = match (bare, indexed) {
            (true, Some(_)) => return Err(err("cannot mix `n` with indexed variables")),
            (true, None) => 1,
            (false, Some(m)) => m,
            (false, None) => {
                return Err(err("constant term: P(0) = 0 is required"));
            }
        };
        let mut out = Vec::new();
        for comp in comps {
            let mut monos = Vec::new();
            for (mono, c) in comp {
                if mono.is_empty() {
                    return Err(err("constant term: P(0) = 0 is required"));
                }
                let mut g = vec![0u32; k];
                for (key, e) in mono {
                    g[if key == 0 { 0 } else { key - 1 }] = e;
                }
                monos.push((g, c));
            }
            out.push(monos);
        }
        PolynomialMap::new(k, out)
    }
}

/// The canonical map y ↦ (y^γ)_{γ∈Γ}, Γ = {γ ∈ N_0^k : 0 < |γ| ≤ degree}
/// in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalMapping {
    k: usize,
    degree: u32,
    gamma: Vec<MultiIndex>,
}

fn all_indices(k: usize, degree: u32) -> Vec<MultiIndex> {
    fn rec(k: usize, left: u32, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if cur.len() == k {
            if cur.iter().any(|&e| e > 0) {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(k, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, degree, &mut Vec::with_capacity(k), &mut out);
    out.sort();
    out
}

impl CanonicalMapping {
    pub fn new(k: usize, degree: u32) -> Result<Self> {
        if k == 0 || degree == 0 {
            return Err(Error::invalid("canonical mapping needs k ≥ 1 and degree ≥ 1"));
        }
        Ok(CanonicalMapping { k, degree, gamma: all_indices(k, degree) })
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn gamma(&self) -> &[MultiIndex] {
        &self.gamma
    }

    /// |Γ|.
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Diagonal of the dilation matrix A: |γ| per γ.
    pub fn dilation_exponents(&self) -> Vec<u32> {
        self.gamma.iter().map(|g| g.iter().sum()).collect()
    }

    pub fn to_polynomial_map(&self) -> PolynomialMap {
        let comps = self.gamma.iter().map(|g| vec![(g.clone(), 1)]).collect();
        PolynomialMap::new(self.k, comps).expect("canonical map is valid")
    }

    /// Soft desk-scale limits: k ≤ 3 and |Γ| ≤ 10.
    pub fn check_desk_limits(&self) -> Result<()> {
        if self.k > 3 || self.len() > 10 {
            return Err(Error::invalid(format!(
                "k = {} with |Γ| = {} is beyond the supported range (k ≤ 3, |Γ| ≤ 10)",
                self.k,
                self.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CanonicalMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.k, self.degree)
    }
}

impl FromStr for CanonicalMapping {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<&str> = s.split_whitespace().collect();
        if v.len() != 2 {
            return Err(Error::Parse { line: 1, msg: "expected `k degree`".into() });
        }
        let k = v[0].parse().map_err(|_| Error::Parse { line: 1, msg: "bad k".into() })?;
        let d = v[1].parse().map_err(|_| Error::Parse { line: 1, msg: "bad degree".into() })?;
        CanonicalMapping::new(k, d)
    }
}

pub fn canonical_gamma_set(k: usize, degree: u32) -> Result<CanonicalMapping> {
    CanonicalMapping::new(k, degree)
}

/// (y^γ)_{γ∈Γ} in arbitrary precision.
pub fn canonical_lift(y: &[i64], cm: &CanonicalMapping) -> Result<Vec<BigInt>> {
    if y.len() != cm.k {
        return Err(Error::ArityMismatch { expected: cm.k, got: y.len() });
    }
    Ok(cm
        .gamma
        .iter()
        .map(|g| {
            y.iter()
                .zip(g)
                .fold(BigInt::from(1), |acc, (&v, &e)| acc * Pow::pow(BigInt::from(v), e))
        })
        .collect())
}

/// [`canonical_lift`] narrowed to i64, reporting overflow.
pub fn canonical_lift_i64(y: &[i64], cm: &CanonicalMapping) -> Result<Vec<i64>> {
    canonical_lift(y, cm)?
        .into_iter()
        .map(|v| v.to_i64().ok_or_else(|| Error::Overflow(format!("lifting {y:?}"))))
        .collect()
}

/// t^A x: component γ scaled by t^{|γ|}.
pub fn dilate(t: f64, exponents: &[u32], x: &[f64]) -> Vec<f64> {
    assert!(t > 0.0, "dilation factor must be positive");
    assert_eq!(exponents.len(), x.len(), "exponent/point length mismatch");
    x.iter().zip(exponents).map(|(&v, &e)| v * t.powi(e as i32)).collect()
}
