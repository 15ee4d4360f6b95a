use rsl_core::harness::{
    bootstrap_interpolation_check, estimate_constant, recompute_ratio, BootstrapConfig, ConstantEstimate,
    ExperimentConfig, RatioEvaluator,
};
use rsl_core::lattice::{ConvexBody, PolynomialMap};
use rsl_core::radon::{average_family, io, GridFunction, TimeGrid};
use rsl_core::report::{fmt_num, parse_num, CsvTable};
use rsl_core::seminorm::{seminorm_field, SeminormKind};

fn config(map: &str, kind: &str, grid: &str) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(PolynomialMap::parse_expr(map).unwrap(), kind.parse().unwrap(), 2.0, grid.parse().unwrap());
    c.budget.iterations = 120;
    c.budget.seed = 17;
    c
}

/// ‖sup_t |M_t δ − M_1 δ|‖₂ straight from the family.
fn dirac_sup_ratio(map: &PolynomialMap, grid: &TimeGrid) -> f64 {
    let fam = average_family(&GridFunction::delta(1), map, ConvexBody::Ball, grid).unwrap();
    let bbox = fam.common_box().unwrap().clone();
    let mut total = 0.0;
    for i in 0..bbox.len() {
        let m = fam.items.iter().map(|g| (g.values[i] - fam.items[0].values[i]).norm()).fold(0.0, f64::max);
        total += m * m;
    }
    total.sqrt()
}

#[test]
fn estimates_reproduce_from_witness() {
    for (map, kind) in [("n^2", "sup"), ("n", "var:2"), ("n^2 + n", "osc"), ("n", "jump")] {
        let cfg = config(map, kind, "dyadic:0..3");
        let est = estimate_constant(&cfg).unwrap();
        let again = recompute_ratio(&cfg, &est.witness).unwrap();
        assert!((again - est.value).abs() <= 1e-10 * est.value.max(1.0), "{map} {kind}");
        assert!(est.trace.windows(2).all(|w| w[1] >= w[0]));
        assert!(est.mass_defect < 1e-9);
        let json = serde_json::to_string(&est).unwrap();
        assert_eq!(serde_json::from_str::<ConstantEstimate>(&json).unwrap(), est);
    }
}

#[test]
fn sup_estimate_at_least_dirac_ratio() {
    let cfg = config("n^2", "sup", "dyadic:0..4");
    let est = estimate_constant(&cfg).unwrap();
    assert!(est.value >= dirac_sup_ratio(&cfg.map, &cfg.grid) - 1e-12);
}

#[test]
fn jump_aggregate_below_variation_on_same_witness() {
    let cfg = config("n^2", "var:2", "dyadic:0..4");
    let est = estimate_constant(&cfg).unwrap();
    let eval = |kind: &str| {
        RatioEvaluator::new(cfg.map.clone(), cfg.body, kind.parse().unwrap(), 2.0, cfg.grid.clone())
            .seminorm(&est.witness)
            .unwrap()
    };
    assert!(eval("jump") <= eval("var:2") * (1.0 + 1e-12));
}

#[test]
fn config_files_round_trip() {
    let mut cfg = config("n1^2 + n2", "osc:1,2,inf", "u:1..4/1");
    cfg.box_radius = Some(6);
    let back = ExperimentConfig::from_cfg(&cfg.to_cfg()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn field_outputs_round_trip_through_csv_and_grid_files() {
    let map = PolynomialMap::parse_expr("n^2").unwrap();
    let grid: TimeGrid = "dyadic:0..3".parse().unwrap();
    let f = GridFunction::from_real(rsl_core::radon::IntBox::centered(1, 3), &[0.5, -1.0, 2.0, 0.25, 1.0, -3.0, 0.125]).unwrap();
    let fam = average_family(&f, &map, ConvexBody::Ball, &grid).unwrap();
    let res = seminorm_field(&fam, &SeminormKind::Variation { r: 2.0 }, 2.0).unwrap();
    let mut t = CsvTable::new(["x1", "value"]);
    for (p, v) in res.pointwise.bbox.points().zip(&res.pointwise.values) {
        t.push(vec![p[0].to_string(), fmt_num(v.re)]).unwrap();
    }
    let back = CsvTable::from_csv(&t.to_csv().unwrap()).unwrap();
    assert_eq!(back, t);
    let vals: Vec<f64> = back.column("value").unwrap().iter().map(|s| parse_num(s).unwrap()).collect();
    assert!(vals.iter().zip(&res.pointwise.values).all(|(a, b)| *a == b.re));
    assert_eq!(io::read_text(&io::to_text(&res.pointwise)).unwrap(), res.pointwise);
    let mut bin = Vec::new();
    io::write_binary(&res.pointwise, &mut bin).unwrap();
    assert_eq!(io::read_any(&bin).unwrap(), res.pointwise);
}

#[test]
fn interpolation_check_on_linear_family() {
    let mut cfg = BootstrapConfig::new(PolynomialMap::identity(), vec![0, 1, 2, 3], 1.0, 2.0);
    cfg.samples = 100;
    cfg.box_radius = 8;
    let rep = bootstrap_interpolation_check(&cfg).unwrap();
    assert_eq!(rep.rows.len(), 100);
    assert!(rep.rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
    // the difference kernels have ℓ¹ mass below 2
    assert!(rep.norm_q0 > 1.0 && rep.norm_q0 <= 2.0);
}
