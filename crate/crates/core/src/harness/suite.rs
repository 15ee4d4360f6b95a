use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::radon::{lp_norm, GridFunction, IntBox, SampledFamily, TimeGrid};
use crate::seminorm::{
    jump_values, le_with_slack, long_short_split_field, oscillation_values, rademacher_menshov_check,
    seminorm_field, sup_values, variation_values, weak_lp_norm, SeminormKind,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    /// Stated with an explicit constant (violations are failures) rather than
    /// as a finite-ratio report.
    pub explicit: bool,
    pub cases: usize,
    pub violations: usize,
    /// max lhs/rhs over the cases.
    pub max_ratio: f64,
    /// First violating sequence as (re, im) pairs.
    pub witness: Option<Vec<[f64; 2]>>,
}

impl CheckOutcome {
    fn new(name: &str, explicit: bool) -> Self {
        CheckOutcome { name: name.into(), explicit, cases: 0, violations: 0, max_ratio: 0.0, witness: None }
    }

    fn record(&mut self, lhs: f64, rhs: f64, witness: &[Complex64]) {
        self.cases += 1;
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        self.max_ratio = self.max_ratio.max(ratio);
        if self.explicit && !le_with_slack(lhs, rhs) {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness.iter().map(|v| [v.re, v.im]).collect());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn explicit_violations(&self) -> usize {
        self.checks.iter().filter(|c| c.explicit).map(|c| c.violations).sum()
    }

    pub fn first_violation(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.explicit && c.violations > 0)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn random_sequence(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
    match rng.gen_range(0..5) {
        0 => (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0)).collect(),
        // small integers: exact ties between increments and thresholds
        1 => (0..len).map(|_| Complex64::new(rng.gen_range(-3..=3) as f64, 0.0)).collect(),
        2 => vec![Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)); len],
        3 => {
            let mut acc = 0.0;
            (0..len)
                .map(|_| {
                    acc += rng.gen_range(0.0..1.0);
                    Complex64::new(acc, 0.0)
                })
                .collect()
        }
        _ => (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
    }
}

/// Random anchors drawn from the sample times, optionally closed by +∞.
fn random_anchors(rng: &mut ChaCha8Rng, times: &[f64]) -> Vec<f64> {
    let mut anchors: Vec<f64> = times.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
    if anchors.is_empty() || anchors[0] != times[0] && rng.gen_bool(0.5) {
        anchors.insert(0, times[0]);
    }
    if anchors.len() < 2 || rng.gen_bool(0.5) {
        anchors.push(f64::INFINITY);
    }
    anchors
}

fn jump_aggregate(values: &[Complex64]) -> f64 {
    // λ N_λ^{1/2} only changes at the pairwise increments
    let mut best = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let l = (values[j] - values[i]).norm();
            if l > 0.0 {
                best = best.max(l * (jump_values(values, l) as f64).sqrt());
            }
        }
    }
    best
}

/// Random instances of the seminorm relations. Relations with an explicit
/// constant count violations; the others report max lhs/rhs.
pub fn seminorm_inequality_suite(trials: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rs = [1.0, 2.0, 3.0];
    let mut jump_var: Vec<CheckOutcome> =
        rs.iter().map(|r| CheckOutcome::new(&format!("jump_le_variation_r{r}"), true)).collect();
    let mut osc_var: Vec<CheckOutcome> =
        [2.0, 3.0].iter().map(|r| CheckOutcome::new(&format!("oscillation_le_variation_r{r}"), true)).collect();
    let mut sup_var = CheckOutcome::new("sup_le_variation", true);
    let mut var_mono = CheckOutcome::new("variation_nonincreasing_in_r", true);
    let mut square = CheckOutcome::new("square_function", true);
    let mut split1 = CheckOutcome::new("split_interval", false);
    let mut split2 = CheckOutcome::new("split_truncation", false);
    let var_rs = [1.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY];

    for _ in 0..trials {
        let len = rng.gen_range(1..=14);
        let a = random_sequence(&mut rng, len);
        let times: Vec<f64> = (1..=len).map(|t| t as f64).collect();
        let vars: Vec<f64> = var_rs.iter().map(|&r| variation_values(&a, r)).collect();
        for (c, &r) in jump_var.iter_mut().zip(&rs) {
            let v = variation_values(&a, r);
            // worst thresholds are the increments themselves
            let mut lambdas: Vec<f64> = vec![rng.gen_range(1e-3..2.0)];
            if len >= 2 {
                let i = rng.gen_range(0..len - 1);
                let j = rng.gen_range(i + 1..len);
                lambdas.push((a[j] - a[i]).norm());
            }
            for l in lambdas.into_iter().filter(|&l| l > 0.0) {
                c.record(l * (jump_values(&a, l) as f64).powf(1.0 / r), v, &a);
            }
        }
        let anchors = random_anchors(&mut rng, &times);
        let osc = oscillation_values(&times, &a, &anchors);
        let windows = (anchors.len() - 1) as f64;
        for (c, r) in osc_var.iter_mut().zip([2.0, 3.0]) {
            c.record(osc, windows.powf(0.5 - 1.0 / r) * variation_values(&a, r), &a);
        }
        let sup = sup_values(&a);
        for &v in &vars {
            sup_var.record(sup, v, &a);
        }
        for w in vars.windows(2) {
            var_mono.record(w[1], w[0], &a);
        }
        let l2 = a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        for s in [sup, osc, vars[2], jump_aggregate(&a)] {
            square.record(s, 2.0 * l2, &a);
        }
        if len >= 3 {
            let u = rng.gen_range(0..len - 2);
            let v = rng.gen_range(u + 2..len);
            let w = rng.gen_range(u..v);
            let lhs = variation_values(&a[u..=v], 2.0);
            let rhs = variation_values(&a[u..=(w + 1).min(v)], 2.0) + variation_values(&a[w..=v], 2.0);
            split1.record(lhs, rhs, &a);
            let cut: Vec<Complex64> =
                a[..=v].iter().enumerate().map(|(t, &x)| if t > u { x } else { Complex64::new(0.0, 0.0) }).collect();
            split2.record(variation_values(&cut, 2.0), variation_values(&a[u..=v], 2.0) + a[u].norm(), &a);
        }
    }

    let mut rm = CheckOutcome::new("rademacher_menshov", true);
    for _ in 0..(trials / 10).max(1) {
        let s = rng.gen_range(1..=6u32);
        let top = 1u64 << s;
        let b = rng.gen_range(1..=top);
        let a = random_sequence(&mut rng, (top - b + 1) as usize);
        let rep = rademacher_menshov_check(&a, b, s)?;
        rm.record(rep.lhs, std::f64::consts::SQRT_2 * rep.rhs, &a);
    }

    let mut long_short = CheckOutcome::new("long_short_sup", true);
    let mut domsup2 = CheckOutcome::new("sup_by_oscillation", false);
    let mut domweak = CheckOutcome::new("weak_variation_by_jumps", false);
    for _ in 0..(trials / 50).max(1) {
        let l = rng.gen_range(1..=3);
        let refinement = rng.gen_range(0..=2);
        let grid = TimeGrid::u_range(1.0, (1u32 << l) as f64, refinement)?;
        let bbox = IntBox::centered(1, rng.gen_range(0..=2));
        let items: Vec<GridFunction> = grid
            .times
            .iter()
            .map(|_| GridFunction::new(bbox.clone(), random_sequence(&mut rng, bbox.len())))
            .collect::<Result<_>>()?;
        let family = SampledFamily::new(grid.times.clone(), items)?;
        let split = long_short_split_field(&family)?;
        let flat: Vec<Complex64> = family.items.iter().flat_map(|g| g.values.iter().copied()).collect();
        long_short.cases += bbox.len();
        long_short.violations += split.violations;
        long_short.max_ratio = long_short.max_ratio.max(split.max_ratio);
        if split.violations > 0 && long_short.witness.is_none() {
            long_short.witness = Some(flat.iter().map(|v| [v.re, v.im]).collect());
        }

        let p = 2.0;
        let n = family.len();
        let lhs = lp_norm(
            (0..bbox.len()).map(|c| family.items[..n.saturating_sub(1).max(1)].iter().map(|g| g.values[c].norm()).fold(0.0, f64::max)),
            p,
        );
        let sup_norm = family.items.iter().map(|g| g.norm(p)).fold(0.0, f64::max);
        let mut osc = 0.0f64;
        for _ in 0..4 {
            let anchors = random_anchors(&mut rng, &family.times);
            osc = osc.max(seminorm_field(&family, &SeminormKind::Oscillation { anchors: Some(anchors) }, p)?.aggregate);
        }
        domsup2.record(lhs, sup_norm + osc, &flat);

        let var3 = seminorm_field(&family, &SeminormKind::Variation { r: 3.0 }, p)?;
        let weak = weak_lp_norm(var3.pointwise.values.iter().map(|v| v.re), p);
        let jumps = seminorm_field(&family, &SeminormKind::Jump { lambdas: None }, p)?.aggregate;
        domweak.record(weak, jumps, &flat);
    }

    let mut checks = jump_var;
    checks.extend(osc_var);
    checks.extend([sup_var, var_mono, square, rm, long_short, split1, split2, domsup2, domweak]);
    Ok(SuiteReport { trials, seed, checks })
}
