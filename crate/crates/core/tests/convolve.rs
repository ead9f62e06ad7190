use ::boehmian::convolve::{convolve, convolve_onto, mollify_near, sup_diff_on, DecayRule, Status};
use ::boehmian::mollifier::standard_bump;
use ::boehmian::mollifier::TestFunction;
use ::boehmian::{CompactSet, Error, GridFunction, OpenSet};
use proptest::prelude::*;

const H: f64 = 1e-3;

fn iv(a: f64, b: f64) -> OpenSet {
    OpenSet::interval(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn young_bound(c in prop::array::uniform3(-2.0..2.0f64), eps in 0.02..0.4f64) {
        let u = iv(-1.0, 1.0);
        let f = GridFunction::from_fn(&u, H, |x| c[0] + c[1] * (4.0 * x).sin() + c[2] * x.abs()).unwrap();
        let g = convolve(&f, &standard_bump(eps).unwrap()).unwrap();
        prop_assert!(g.sup_norm() <= f.sup_norm() + 1e-9);
    }

    #[test]
    fn affine_functions_are_fixed(m in -3.0..3.0f64, c in -3.0..3.0f64, eps in 1e-4..0.3f64) {
        let u = iv(-1.0, 1.0);
        let f = GridFunction::from_fn(&u, H, |x| m * x + c).unwrap();
        let g = convolve(&f, &standard_bump(eps).unwrap()).unwrap();
        for (x, y) in g.samples() {
            prop_assert!((y - (m * x + c)).abs() < 1e-9);
        }
    }

    #[test]
    fn second_order_in_the_radius(eps in 1e-4..0.05f64) {
        // f * φ - f ≈ f'' ∫y²φ / 2; for sin that is -sin(x) m2 / 2
        let u = iv(-2.0, 2.0);
        let f = GridFunction::from_fn(&u, H, |x| (2.0 * x).sin()).unwrap();
        let phi = standard_bump(eps).unwrap();
        let m2 = phi.integrate_against(-eps, eps, |y| y * y);
        let g = convolve(&f, &phi).unwrap();
        let k = CompactSet::interval(-1.0, 1.0).unwrap();
        let expect = GridFunction::from_fn(g.domain(), H, |x| (2.0 * x).sin() * (1.0 - 2.0 * m2)).unwrap();
        prop_assert!(g.distance_on(&expect, &k).unwrap() < 1e-6 + 1e-3 * m2);
    }

    #[test]
    fn products_convolve_in_stages(a in 0.01..0.2f64, b in 0.01..0.2f64) {
        let u = iv(-1.0, 1.0);
        let f = GridFunction::from_fn(&u, H, |x| (x - 0.2).abs() + (3.0 * x).cos()).unwrap();
        let (pa, pb) = (standard_bump(a).unwrap(), standard_bump(b).unwrap());
        let once = convolve(&f, &TestFunction::product(vec![pa.clone(), pb.clone()])).unwrap();
        let staged = convolve(&convolve(&f, &pa).unwrap(), &pb).unwrap();
        let k = CompactSet::interval(-0.5, 0.5).unwrap();
        prop_assert!(sup_diff_on(&once, &staged, &k).unwrap() < 1e-9);
    }
}

// mass of the piecewise linear interpolant
fn hat_mass(f: &GridFunction) -> f64 {
    let s: Vec<(f64, f64)> = f.samples().collect();
    s.windows(2).map(|w| 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0)).sum()
}

#[test]
fn sub_grid_kernels_keep_mass() {
    // a spike of mass 1/h on one node
    let u = iv(-1.0, 1.0);
    let f = GridFunction::from_fn(&u, H, |x| if x.abs() < 0.5 * H { 1.0 / H } else { 0.0 }).unwrap();
    for eps in [0.5 * H, 0.25 * H, 0.05 * H] {
        let g = convolve(&f, &standard_bump(eps).unwrap()).unwrap();
        assert!((hat_mass(&g) - hat_mass(&f)).abs() < 1e-9, "eps {eps}");
        let change = (g.eval(0.0).unwrap() - f.eval(0.0).unwrap()).abs();
        assert!(change < 1.0 / H * (eps / H).powi(2), "eps {eps}: nodal change {change}");
    }
}

#[test]
fn targets_must_fit() {
    let u = iv(0.0, 1.0);
    let f = GridFunction::constant(&u, H, 1.0).unwrap();
    let phi = standard_bump(0.2).unwrap();
    assert!(matches!(convolve_onto(&f, &phi, &iv(0.1, 0.9)), Err(Error::InvalidArgument(_))));
    assert!(matches!(convolve(&f, &standard_bump(0.6).unwrap()), Err(Error::DomainCollapsed(_))));
    let k = CompactSet::interval(0.1, 0.9).unwrap();
    assert!(mollify_near(&f, &phi, &k).is_err());
    let k = CompactSet::interval(0.3, 0.7).unwrap();
    let g = mollify_near(&f, &phi, &k).unwrap();
    assert!((g.sup_norm_on(&k).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn decay_rule_reads_traces() {
    let rule = DecayRule::new(1e-3);
    let falling: Vec<f64> = (0..12).map(|n| 0.5f64.powi(n)).collect();
    assert_eq!(rule.judge(&falling), Status::Verified);
    assert_eq!(rule.judge(&[1.0; 12]), Status::Refuted);
    let slow: Vec<f64> = (1..=12).map(|n| 0.1 / n as f64).collect();
    assert_eq!(rule.judge(&slow), Status::Inconclusive);
}
