use ::boehmian::boehmian::{dirac, mollified};
use ::boehmian::bridge::{
    check_class_bridge, delta_cauchy, pj_upper, BridgeInstance, ConvergenceMode, ExtractOptions,
    extract_fundamental_subsequence,
};
use ::boehmian::geometry::compact_exhaustion_with;
use ::boehmian::mollifier::bump_value;
use ::boehmian::{CompactSet, DeltaSeq, EquivParams, Error, FundamentalSeq, GridFunction, OpenSet};

const H: f64 = 1e-3;

fn iv(a: f64, b: f64) -> OpenSet {
    OpenSet::interval(a, b).unwrap()
}

#[test]
fn pj_of_a_constant() {
    let u = iv(-1.0, 1.0);
    let ex = compact_exhaustion_with(&u, 3, 0.4, 0.4).unwrap();
    let f = GridFunction::constant(&u, H, -2.0).unwrap();
    let v = pj_upper(&f, 1, &ex, &[0.01, 0.1]).unwrap();
    assert!((v - 2.0).abs() < 1e-9);
    assert!(matches!(pj_upper(&f, 3, &ex, &[0.5]), Err(Error::InvalidArgument(_))));
}

#[test]
fn pj_of_a_delta_is_the_widest_bump_peak() {
    let u = iv(-1.0, 1.0);
    let ex = compact_exhaustion_with(&u, 2, 0.4, 0.4).unwrap();
    let d = dirac(0.0, &DeltaSeq::default(), &u, H).unwrap();
    let v = pj_upper(&d.term(20).unwrap(), 1, &ex, &[0.05, 0.1, 0.2]).unwrap();
    assert!((v - bump_value(0.2, 0.0)).abs() < 1e-3 * v);
}

#[test]
fn cauchy_test_separates_fixed_and_moving_deltas() {
    let u = iv(-1.0, 1.0);
    let k = CompactSet::interval(-0.5, 0.5).unwrap();
    let p = EquivParams::default();
    let seq = DeltaSeq::default();
    let d = dirac(0.0, &seq, &u, H).unwrap();
    let w = DeltaSeq::Geometric { s1: 0.5, ratio: 0.5f64.powf(0.25) };
    assert!(delta_cauchy(d.rep(), &w, &k, &p).unwrap().is_verified());
    let walking = FundamentalSeq::new(u.clone(), ::boehmian::boehmian::Tag::Custom, move |n| {
        let c = if n % 2 == 0 { 0.2 } else { -0.2 };
        dirac(c, &DeltaSeq::default(), &OpenSet::interval(-1.0, 1.0).unwrap(), H)?.term(n)
    });
    assert!(delta_cauchy(&walking, &w, &k, &p).unwrap().is_refuted());
}

#[test]
fn extraction_needs_enough_compacts() {
    let u = iv(-1.0, 1.0);
    let g = GridFunction::from_fn(&iv(-1.6, 1.6), H, |x| x.sin()).unwrap();
    let f = mollified(g, &DeltaSeq::default(), &u).unwrap();
    let ex = compact_exhaustion_with(&u, 4, 0.4, 0.4).unwrap();
    let opts = ExtractOptions::default();
    assert!(extract_fundamental_subsequence(f.rep(), &ex, &opts, &EquivParams::default()).is_err());
    let short = ExtractOptions { depth: 4, ..opts };
    assert!(extract_fundamental_subsequence(f.rep(), &ex, &short, &EquivParams::default()).is_err());
    let ex = compact_exhaustion_with(&u, 5, 0.4, 0.4).unwrap();
    let r = extract_fundamental_subsequence(f.rep(), &ex, &short, &EquivParams::default()).unwrap();
    assert_eq!(r.indices.len(), 5);
    assert!(r.certificates.iter().all(|c| c.holds(short.quad_tol)));
}

#[test]
fn class_bridge_battery() {
    let u = iv(-1.0, 1.0);
    let ex = compact_exhaustion_with(&u, 9, 0.4, 0.4).unwrap();
    let g = GridFunction::from_fn(&iv(-1.6, 1.6), H, |x| (2.0 * x).cos()).unwrap();
    let inst = vec![
        BridgeInstance {
            name: "mollified".into(),
            seq: mollified(g, &DeltaSeq::default(), &u).unwrap().rep().clone(),
            witness: DeltaSeq::default(),
        },
        BridgeInstance {
            name: "dirac".into(),
            seq: dirac(0.1, &DeltaSeq::default(), &u, H).unwrap().rep().clone(),
            witness: DeltaSeq::Geometric { s1: 0.5, ratio: 0.5f64.powf(0.25) },
        },
    ];
    let opts = ExtractOptions::default();
    let (all, rows) = check_class_bridge(&inst, &ex, &opts, &EquivParams::default()).unwrap();
    assert!(all.is_verified(), "{rows:?}");
    assert_eq!(rows.len(), 2);
}

#[test]
fn mode_names() {
    assert_eq!(serde_json::to_string(&ConvergenceMode::Fixed).unwrap(), "\"delta_lower\"");
    assert_eq!(serde_json::to_string(&ConvergenceMode::Diagonal).unwrap(), "\"Delta_upper\"");
}
