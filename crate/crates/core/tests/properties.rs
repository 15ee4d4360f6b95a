use num_complex::Complex64;
use proptest::prelude::*;

use rsl_core::fourier::{
    build_sigma, e, oscillatory_integral_phi, ExponentialSum, Multiplier, ProjectionParams, ProjectionVariant,
    Projector,
};
use rsl_core::lattice::{canonical_lift_i64, enumerate_lattice_points, CanonicalMapping, ConvexBody, PolynomialMap};
use rsl_core::radon::{apply_direct, apply_fast, build_kernel, GridFunction, IntBox};
use rsl_core::seminorm::{
    jump_values, oscillation_values, sup_values, variation_values, le_with_slack,
};

fn body() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![Just(ConvexBody::Ball), Just(ConvexBody::Cube)]
}

fn values(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b)| Complex64::new(a, b)), 1..max_len)
}

fn map_1d() -> impl Strategy<Value = PolynomialMap> {
    prop::sample::select(vec!["n", "n^2", "2n^2 - n", "n^3", "-n^2"]).prop_map(|s| PolynomialMap::parse_expr(s).unwrap())
}

fn grid_fn(width: usize) -> impl Strategy<Value = GridFunction> {
    (-8i64..8, prop::collection::vec(-3.0f64..3.0, 1..width)).prop_map(|(lo, v)| {
        let bbox = IntBox::new(vec![lo], vec![lo + v.len() as i64 - 1]).unwrap();
        GridFunction::from_real(bbox, &v).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_counts_nondecreasing(b in body(), k in 1usize..=2, t in 0.1f64..6.0, dt in 0.0f64..2.0) {
        let a = enumerate_lattice_points(b, k, t).unwrap().len();
        let c = enumerate_lattice_points(b, k, t + dt).unwrap().len();
        prop_assert!(a <= c);
    }

    #[test]
    fn ball_counts_in_one_dimension(t in 0.01f64..40.0) {
        prop_assume!(t.fract() != 0.0);
        let n = enumerate_lattice_points(ConvexBody::Ball, 1, t).unwrap().len() as i64;
        prop_assert_eq!(n, 2 * t.ceil() as i64 - 1);
    }

    #[test]
    fn lift_scales_first_coordinate(y1 in -6i64..6, y2 in -6i64..6, m in -4i64..4, deg in 1u32..=3) {
        let cm = CanonicalMapping::new(2, deg).unwrap();
        let base = canonical_lift_i64(&[y1, y2], &cm).unwrap();
        let scaled = canonical_lift_i64(&[y1 * m, y2], &cm).unwrap();
        for (g, (b, s)) in cm.gamma().iter().zip(base.iter().zip(&scaled)) {
            prop_assert_eq!(*s, b * m.pow(g[0]));
        }
    }

    #[test]
    fn averages_conserve_mass_and_contract(map in map_1d(), t in 1.0f64..9.0, f in grid_fn(24)) {
        let kernel = build_kernel(&map, ConvexBody::Ball, t).unwrap();
        let g = apply_direct(&f, &kernel).unwrap();
        let (a, b) = (g.sum().re, f.sum().re);
        prop_assert!((a - b).abs() <= 1e-12 * f.norm(1.0).max(1.0));
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            prop_assert!(le_with_slack(g.norm(p), f.norm(p)));
        }
        let abs = f.map(|v| Complex64::new(v.norm(), 0.0));
        prop_assert!(apply_direct(&abs, &kernel).unwrap().values.iter().all(|v| v.re >= 0.0));
        prop_assert!(apply_fast(&f, &kernel).unwrap().max_abs_diff(&g) < 1e-10);
    }

    #[test]
    fn variation_nonincreasing_and_dominates(v in values(12), lambda in 0.01f64..6.0) {
        let rs = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
        let vr: Vec<f64> = rs.iter().map(|&r| variation_values(&v, r)).collect();
        for w in vr.windows(2) {
            prop_assert!(le_with_slack(w[1], w[0]));
        }
        let n = jump_values(&v, lambda) as f64;
        for (&r, &var) in rs.iter().zip(&vr) {
            let lhs = if r.is_infinite() { lambda * n.min(1.0) } else { lambda * n.powf(1.0 / r) };
            prop_assert!(le_with_slack(lhs, var));
            prop_assert!(le_with_slack(sup_values(&v), var));
        }
    }

    #[test]
    fn seminorms_are_subadditive(a in values(10), b in values(10)) {
        let n = a.len().min(b.len());
        let (a, b) = (&a[..n], &b[..n]);
        let s: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let times: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let anchors: Vec<f64> = times.iter().step_by(2).copied().chain([f64::INFINITY]).collect();
        prop_assert!(le_with_slack(sup_values(&s), sup_values(a) + sup_values(b)));
        for r in [1.0, 2.0, 3.0] {
            prop_assert!(le_with_slack(variation_values(&s, r), variation_values(a, r) + variation_values(b, r)));
        }
        let osc = |v: &[Complex64]| oscillation_values(&times, v, &anchors);
        prop_assert!(le_with_slack(osc(&s), osc(a) + osc(b)));
    }

    #[test]
    fn multipliers_bounded(x in -0.5f64..0.5, y in -0.5f64..0.5, n in 1.0f64..12.0) {
        let cm = CanonicalMapping::new(1, 2).unwrap();
        let m = ExponentialSum::canonical(&cm, ConvexBody::Ball, n).unwrap();
        prop_assert!(m.eval(&[x, y]).norm() <= 1.0 + 1e-12);
        let phi = oscillatory_integral_phi(&cm, ConvexBody::Ball, n, &[x, y]).unwrap();
        prop_assert!(phi.norm() <= 1.0 + 1e-9);
        prop_assert!((e(x).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn projections_in_unit_interval(x in -0.5f64..0.5, y in -0.5f64..0.5, n in 1u32..=6) {
        let cm = CanonicalMapping::new(1, 2).unwrap();
        let proj = Projector::new(ProjectionParams::default(), &cm);
        for v in [ProjectionVariant::Xi { n }, ProjectionVariant::ShortXi { l: n }, ProjectionVariant::XiShell { n, s: n - 1 }] {
            let val = proj.eval(&v, &[x, y]).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&val), "{:?} = {}", v, val);
            prop_assert!((val - proj.eval_bruteforce(&v, &[x, y])).abs() < 1e-12);
        }
    }
}

#[test]
fn sigma_points_distinct() {
    for dim in 1..=2 {
        let dens: Vec<u64> = (1..=6).collect();
        let fr = build_sigma(&dens, dim, 100_000).unwrap();
        let mut pts: Vec<Vec<i64>> =
            fr.iter().map(|f| f.point().iter().map(|v| (v * 720.0).round() as i64).collect()).collect();
        pts.sort();
        let before = pts.len();
        pts.dedup();
        assert_eq!(before, pts.len());
    }
}

#[test]
fn canonical_mapping_round_trips() {
    for (k, d) in [(1, 1), (1, 3), (2, 2), (3, 2)] {
        let cm = CanonicalMapping::new(k, d).unwrap();
        let back: CanonicalMapping = cm.to_string().parse().unwrap();
        assert_eq!(back.gamma(), cm.gamma());
        let json = serde_json::to_string(&cm).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalMapping>(&json).unwrap().gamma(), cm.gamma());
    }
}
