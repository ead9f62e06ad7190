use ::boehmian::boehmian::{dirac, equivalent, from_continuous, zero};
use ::boehmian::sheaf::{
    check_compatibility, common_regularizers, glue_finite, glue_pair, join_branches, split_compact, Cover,
    SectionAssignment,
};
use ::boehmian::{CompactSet, DeltaSeq, EquivParams, Error, GridFunction, OpenSet};
use proptest::prelude::*;

const H: f64 = 1e-3;

fn iv(a: f64, b: f64) -> OpenSet {
    OpenSet::interval(a, b).unwrap()
}

fn cont(u: &OpenSet, f: impl Fn(f64) -> f64) -> ::boehmian::Boehmian {
    from_continuous(GridFunction::from_fn(u, H, f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn split_pieces_cover_the_compact(cut in -0.4..0.4f64, w in 0.05..0.3f64, a in -0.9..-0.5f64, b in 0.5..0.9f64) {
        let cover = Cover::new(vec![iv(-1.0, cut + w), iv(cut - w, 1.0)]).unwrap();
        let k = CompactSet::interval(a, b).unwrap();
        let parts = split_compact(&k, &cover).unwrap();
        for (i, p) in &parts {
            for s in p.intervals() {
                prop_assert!(cover.pieces()[*i].contains(s.lo) && cover.pieces()[*i].contains(s.hi));
            }
        }
        for t in 0..=100 {
            let x = (a + (b - a) * t as f64 / 100.0).min(b);
            prop_assert!(parts.iter().any(|(_, p)| p.contains(x)));
        }
    }

    #[test]
    fn join_prefers_the_first_branch(s in 0.0..0.5f64) {
        let a = GridFunction::constant(&iv(-1.0, s), H, 1.0).unwrap();
        let b = GridFunction::constant(&iv(-s, 1.0), H, 2.0).unwrap();
        let j = join_branches(&a, &b).unwrap();
        prop_assert_eq!(j.domain(), &iv(-1.0, 1.0));
        prop_assert_eq!(j.eval(-0.9).unwrap(), 1.0);
        prop_assert_eq!(j.eval(0.9).unwrap(), 2.0);
    }
}

#[test]
fn disagreeing_sections_do_not_glue() {
    let f = cont(&iv(-1.0, 0.5), |x| x);
    let g = cont(&iv(-0.5, 1.0), |x| x + 1.0);
    let p = EquivParams::default();
    assert!(matches!(glue_pair(&f, &g, &p), Err(Error::SectionsDisagree(_))));
    let assign = SectionAssignment::from_sections(vec![f, g]).unwrap();
    let c = check_compatibility(&assign, &p).unwrap();
    assert!(c.iter().any(|r| r.is_refuted()));
}

#[test]
fn disjoint_pieces_glue_trivially() {
    let p = EquivParams::default();
    let f = cont(&iv(0.0, 1.0), |x| x);
    let g = cont(&iv(2.0, 3.0), |x| -x);
    let h = glue_finite(&SectionAssignment::from_sections(vec![f.clone(), g.clone()]).unwrap(), &p);
    // no overlap, so nothing ties the order of gluing down
    match h {
        Ok(out) => {
            assert_eq!(out.boehmian.domain(), &OpenSet::new([(0.0, 1.0), (2.0, 3.0)]).unwrap());
        }
        Err(e) => assert!(matches!(e, Error::InvalidArgument(_)), "{e}"),
    }
}

#[test]
fn common_regularizers_agree_on_equal_sections() {
    let p = EquivParams::default();
    let seq = DeltaSeq::default();
    let f = dirac(0.0, &seq, &iv(-1.0, 0.6), H).unwrap();
    let g = dirac(0.0, &seq, &iv(-0.6, 1.0), H).unwrap();
    let c = common_regularizers(&f, &g, 0.2, &p).unwrap();
    assert!(c.agreement.is_verified(), "{:?}", c.agreement);
    for n in 1..=p.horizon {
        assert!(c.seq.radius(n) < 0.2 * 0.5f64.powi(n as i32 - 1));
    }
    let z = zero(&iv(-0.6, 1.0), H).unwrap();
    let d = common_regularizers(&f, &z, 0.2, &p).unwrap();
    assert!(d.agreement.is_refuted());
}

#[test]
fn permutation_and_covers_validate() {
    assert!(Cover::new(vec![]).is_err());
    let a = cont(&iv(0.0, 1.0), |x| x);
    let assign = SectionAssignment::from_sections(vec![a.clone(), a]).unwrap();
    assert!(assign.permuted(&[0, 0]).is_err());
    assert!(assign.permuted(&[1]).is_err());
    assert!(assign.permuted(&[1, 0]).is_ok());
}

#[test]
fn glued_continuous_sections_match_the_oracle() {
    let p = EquivParams::default().with_tol(1e-4);
    let f = cont(&iv(-1.0, 0.3), |x| (4.0 * x).cos());
    let g = cont(&iv(0.1, 1.0), |x| (4.0 * x).cos());
    let h = glue_pair(&f, &g, &p).unwrap();
    let whole = cont(&iv(-1.0, 1.0), |x| (4.0 * x).cos());
    assert!(equivalent(&h.boehmian, &whole, &p).unwrap().is_verified());
    assert_eq!(h.radii.len(), p.horizon);
    assert!(h.radii.windows(2).all(|w| w[1] < w[0]));
}
