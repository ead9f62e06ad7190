use ::boehmian::{CompactSet, GridFunction, OpenSet};
use proptest::prelude::*;

const H: f64 = 1e-3;

fn iv(a: f64, b: f64) -> OpenSet {
    OpenSet::interval(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_functions_interpolate_exactly(a in -3.0..0.0f64, w in 0.3..3.0f64, m in -4.0..4.0f64, c in -2.0..2.0f64, t in 0.01..0.99f64) {
        let u = iv(a, a + w);
        let f = GridFunction::from_fn(&u, H, |x| m * x + c).unwrap();
        let x = a + t * w;
        prop_assert!((f.eval(x).unwrap() - (m * x + c)).abs() < 1e-12);
    }

    #[test]
    fn restriction_composes_bit_exactly(a in -2.0..-1.0f64, b in 1.0..2.0f64, s in 0.0..0.4f64, t in 0.4..0.9f64) {
        let u = iv(a, b);
        let f = GridFunction::from_fn(&u, H, |x| (3.0 * x).sin()).unwrap();
        let v = iv(a + s, b - s);
        let w = iv(a + t, b - t);
        let once = f.restrict(&w).unwrap();
        let twice = f.restrict(&v).unwrap().restrict(&w).unwrap();
        let p: Vec<_> = once.samples().collect();
        let q: Vec<_> = twice.samples().collect();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn cubic_integrals(a in -1.0..0.0f64, w in 0.5..2.0f64, c in prop::array::uniform4(-2.0..2.0f64)) {
        let u = iv(a, a + w);
        let p = |x: f64| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x;
        let anti = |x: f64| c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0 + c[3] * x.powi(4) / 4.0;
        let f = GridFunction::from_fn(&u, H, p).unwrap();
        prop_assert!((f.integral() - (anti(a + w) - anti(a))).abs() < 1e-9);
    }

    #[test]
    fn extension_keeps_values_and_continuity(s in 0.1..0.5f64) {
        let u = OpenSet::new([(-1.0, -s), (s, 1.0)]).unwrap();
        let f = GridFunction::from_fn(&u, H, |x| x.exp()).unwrap();
        let t = iv(-2.0, 2.0);
        let g = f.extend_continuously(&t).unwrap();
        for x in [-0.9, -0.5, 0.5, 0.9] {
            prop_assert!((g.eval(x).unwrap() - f.eval(x).unwrap()).abs() < 1e-12);
        }
        let samples: Vec<_> = g.samples().collect();
        for w in samples.windows(2) {
            prop_assert!((w[1].1 - w[0].1).abs() <= 3.0 * (w[1].0 - w[0].0) + 1e-12);
        }
        prop_assert!((g.eval(-1.9).unwrap() - (-1.0f64).exp()).abs() < 1e-9);
        prop_assert!((g.eval(1.9).unwrap() - 1.0f64.exp()).abs() < 1e-9);
    }
}

#[test]
fn sup_norm_on_a_compact() {
    let u = iv(-1.0, 1.0);
    let f = GridFunction::from_fn(&u, H, |x| x * x).unwrap();
    let k = CompactSet::interval(-0.5, 0.25).unwrap();
    assert!((f.sup_norm_on(&k).unwrap() - 0.25).abs() < 1e-12);
    assert!((f.sup_norm() - 1.0).abs() < 1e-3);
}

#[test]
fn pointwise_ops_require_equal_domains() {
    let f = GridFunction::constant(&iv(0.0, 1.0), H, 1.0).unwrap();
    let g = GridFunction::constant(&iv(0.0, 2.0), H, 1.0).unwrap();
    assert!(f.add(&g).is_err());
    assert!(f.restrict(&iv(0.5, 1.5)).is_err());
    assert!(GridFunction::constant(&iv(0.0, 1.0), -1.0, 0.0).is_err());
}

#[test]
fn components_missing_the_source_extend_by_zero() {
    let f = GridFunction::constant(&iv(0.0, 1.0), H, 2.0).unwrap();
    let t = OpenSet::new([(-1.0, 1.5), (3.0, 4.0)]).unwrap();
    let g = f.extend_continuously(&t).unwrap();
    assert_eq!(g.eval(3.5).unwrap(), 0.0);
    assert_eq!(g.eval(1.4).unwrap(), 2.0);
}

#[test]
fn l1_norm_of_a_sign_change() {
    let u = iv(-1.0, 1.0);
    let f = GridFunction::from_fn(&u, H, |x| x).unwrap();
    assert!(f.integral().abs() < 1e-12);
    assert!((f.l1_norm() - 1.0).abs() < 1e-6);
}
