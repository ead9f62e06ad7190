use ::boehmian::geometry::{check_exhaustion, compact_exhaustion, is_compactly_contained, CompactSet, OpenSet};
use ::boehmian::Error;
use proptest::prelude::*;

fn open_set() -> impl Strategy<Value = OpenSet> {
    prop::collection::vec((-5.0..5.0f64, 0.05..2.0f64), 1..5)
        .prop_map(|v| OpenSet::new(v.into_iter().map(|(a, w)| (a, a + w))).unwrap())
}

fn components(u: &OpenSet) -> Vec<(f64, f64)> {
    u.intervals().iter().map(|iv| (iv.lo, iv.hi)).collect()
}

// distance from x to the complement, computed from the raw components
fn depth(parts: &[(f64, f64)], x: f64) -> f64 {
    parts
        .iter()
        .filter(|&&(a, b)| a < x && x < b)
        .map(|&(a, b)| (x - a).min(b - x))
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn components_are_disjoint_and_sorted(u in open_set()) {
        let c = components(&u);
        for w in c.windows(2) {
            prop_assert!(w[0].1 < w[1].0);
        }
    }

    #[test]
    fn erosion_matches_depth(u in open_set(), eps in 0.01..0.8f64, x in -6.0..8.0f64) {
        let e = u.erode(eps).unwrap();
        let d = depth(&components(&u), x);
        if (d - eps).abs() > 1e-9 {
            prop_assert_eq!(e.contains(x), d > eps);
        }
    }

    #[test]
    fn dilation_matches_distance(u in open_set(), eps in 0.01..0.8f64, x in -7.0..9.0f64) {
        let dil = u.dilate(eps).unwrap();
        let gap = components(&u)
            .iter()
            .map(|&(a, b)| if x <= a { a - x } else if x >= b { x - b } else { 0.0 })
            .fold(f64::INFINITY, f64::min);
        if (gap - eps).abs() > 1e-9 {
            prop_assert_eq!(dil.contains(x), gap < eps);
        }
    }

    #[test]
    fn opening_shrinks_and_closing_grows(u in open_set(), eps in 0.01..0.5f64) {
        let slack = 1e-12;
        prop_assert!(u.erode(eps).unwrap().dilate(eps).unwrap().is_subset_of(&u.dilate(slack).unwrap()));
        prop_assert!(u.erode(slack).unwrap().is_subset_of(&u.dilate(eps).unwrap().erode(eps).unwrap()));
    }

    #[test]
    fn lattice_ops_are_pointwise(u in open_set(), v in open_set(), x in -6.0..8.0f64) {
        prop_assert_eq!(u.union(&v).contains(x), u.contains(x) || v.contains(x));
        prop_assert_eq!(u.intersection(&v).contains(x), u.contains(x) && v.contains(x));
        prop_assert!(u.intersection(&v).is_subset_of(&u));
        prop_assert!(u.is_subset_of(&u.union(&v)));
    }

    #[test]
    fn json_round_trip(u in open_set()) {
        let s = serde_json::to_string(&u).unwrap();
        let back: OpenSet = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn exhaustions_pass_their_own_audit(u in open_set(), count in 1usize..10) {
        let ex = compact_exhaustion(&u, count).unwrap();
        prop_assert_eq!(ex.len(), count);
        let rep = check_exhaustion(&ex).unwrap();
        prop_assert!(rep.ok(), "{:?}", rep);
        for k in &ex.sets {
            prop_assert!(is_compactly_contained(k, &u));
        }
    }
}

#[test]
fn touching_intervals_merge() {
    let u = OpenSet::new([(0.0, 1.0), (1.0, 2.0)]).unwrap();
    assert_eq!(u.intervals().len(), 1);
    let v = OpenSet::new([(0.0, 1.0), (1.2, 2.0)]).unwrap();
    let d = v.dilate(0.15).unwrap();
    assert_eq!(components(&d), vec![(-0.15, 2.15)]);
}

#[test]
fn erosion_can_empty_a_component() {
    let u = OpenSet::new([(0.0, 0.1), (1.0, 3.0)]).unwrap();
    let e = u.erode(0.2).unwrap();
    assert_eq!(e.intervals().len(), 1);
    assert!(e.contains(2.0) && !e.contains(0.05));
}

#[test]
fn rejects_bad_input() {
    assert!(matches!(OpenSet::interval(1.0, 1.0), Err(Error::InvalidArgument(_))));
    assert!(matches!(OpenSet::interval(f64::NAN, 1.0), Err(Error::InvalidArgument(_))));
    let u = OpenSet::interval(0.0, 1.0).unwrap();
    assert!(u.erode(-0.1).is_err());
    assert!(matches!(OpenSet::real_line().closure(), Err(Error::Unsupported(_))));
    assert!(CompactSet::interval(2.0, 1.0).is_err());
}

#[test]
fn distance_to_complement() {
    let u = OpenSet::new([(0.0, 1.0), (2.0, 5.0)]).unwrap();
    let k = CompactSet::new([(0.3, 0.6), (3.0, 4.5)]).unwrap();
    assert!((u.distance_to_complement(&k).unwrap() - 0.3).abs() < 1e-15);
    let outside = CompactSet::interval(0.5, 2.5).unwrap();
    assert!(!is_compactly_contained(&outside, &u));
}

#[test]
fn unbounded_sets_keep_infinite_ends() {
    let u = OpenSet::new([(f64::NEG_INFINITY, 0.0), (1.0, f64::INFINITY)]).unwrap();
    assert!(!u.is_bounded());
    let e = u.erode(0.25).unwrap();
    assert!(e.contains(-1e9) && e.contains(1e9) && !e.contains(-0.1));
    let s = serde_json::to_string(&u).unwrap();
    assert_eq!(serde_json::from_str::<OpenSet>(&s).unwrap(), u);
}
