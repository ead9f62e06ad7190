//! The registered suites. Every row states whether the property named by its
//! case id holds; expected separations are reported as properties too.

use boehmian::boehmian::{
    add, check_fundamental, conv_boehmian, custom_expression, dirac, equivalent, from_continuous, mollified,
    rebuild_from_exhaustion, regularizing_mollifier, restrict, scale, sub, to_continuous_on, zero, Boehmian, Tag,
};
use boehmian::bridge::{
    check_delta_iff_pj, delta_cauchy, delta_converges, diagonal_converges, extract_fundamental_subsequence,
    ExtractOptions,
};
use boehmian::convolve::{
    check_mollifier_convergence, check_young_with, convolve, sup_diff_on, CheckResult, Status,
};
use boehmian::expr::Expr;
use boehmian::geometry::compact_exhaustion_with;
use boehmian::mollifier::{delta_sequence, infinite_convolution, standard_bump};
use boehmian::sheaf::{
    check_presheaf_laws, check_presheaf_laws_continuous, check_restrictions, glue_countable, glue_finite, glue_pair,
    verify_locality, Cover, NestedTriple, SectionAssignment,
};
use boehmian::{CompactSet, DeltaSeq, EquivParams, FundamentalSeq, GridFunction, OpenSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::report::Row;

pub type Suite = fn(&Ctx) -> Vec<Row>;

/// Registered suites, in report order.
pub const SUITES: &[(&str, Suite)] = &[
    ("young", young),
    ("mollify", mollify),
    ("infconv", infconv),
    ("fundamental", fundamental),
    ("equivalence", equivalence),
    ("vector", vector),
    ("restriction", restriction),
    ("convboehm", convboehm),
    ("regularize", regularize),
    ("rebuild", rebuild),
    ("glue2", glue2),
    ("gluefinite", gluefinite),
    ("gluecountable", gluecountable),
    ("locality", locality),
    ("presheaf", presheaf),
    ("sheaf-e2e", sheaf_e2e),
    ("delta-bridge", delta_bridge),
    ("pj", pj),
    ("extract", extract),
];

pub struct Ctx {
    pub cfg: RunConfig,
    /// Position of the running suite in [`SUITES`]; selects its PRNG stream.
    pub stream: u64,
}

impl Ctx {
    pub fn params(&self) -> EquivParams {
        EquivParams::default()
            .with_horizon(self.cfg.horizon)
            .with_tol(self.cfg.tol_sup)
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        r.set_stream(self.stream);
        r
    }

    fn h(&self) -> f64 {
        self.cfg.grid_h
    }

    fn sampled(&self, u: &OpenSet, f: impl Fn(f64) -> f64) -> boehmian::Result<GridFunction> {
        GridFunction::from_fn(u, self.h(), f)
    }

    fn cont(&self, u: &OpenSet, f: impl Fn(f64) -> f64) -> boehmian::Result<Boehmian> {
        Ok(from_continuous(self.sampled(u, f)?))
    }
}

type Check = boehmian::Result<CheckResult>;
type Named<'a, T> = Vec<(&'a str, T)>;

fn iv(a: f64, b: f64) -> OpenSet {
    OpenSet::interval(a, b).expect("literal interval")
}

fn kc(a: f64, b: f64) -> CompactSet {
    CompactSet::interval(a, b).expect("literal interval")
}

fn row(suite: &str, case_id: impl Into<String>, lemma_ref: &str, r: Check) -> Row {
    let id = case_id.into();
    match r {
        Ok(c) => Row::from_check(suite, id, lemma_ref, &c),
        Err(e) => Row::error(suite, id, lemma_ref, e.to_string()),
    }
}

/// A separation `F ≁ G` holds exactly when the equivalence check refutes.
fn distinct(r: CheckResult) -> CheckResult {
    let status = match r.status {
        Status::Refuted => Status::Verified,
        Status::Verified => Status::Refuted,
        Status::Inconclusive => Status::Inconclusive,
    };
    CheckResult { status, ..r }
}

/// Verified when `value <= bound`, refuted otherwise.
fn bounded(value: f64, bound: f64, horizon: usize) -> CheckResult {
    let status = if value <= bound { Status::Verified } else { Status::Refuted };
    CheckResult::new(status, value, bound, horizon)
}

fn poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn young(ctx: &Ctx) -> Vec<Row> {
    let mut rng = ctx.rng();
    let u = iv(-2.0, 2.0);
    (0..200)
        .map(|i| {
            let deg = rng.gen_range(0..=4);
            let c: Vec<f64> = (0..=deg).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let a = rng.gen_range(-1.8..0.0);
            let b = rng.gen_range(0.2..1.8);
            let eps = rng.gen_range(0.02..0.25f64).min(0.2 * (b - a));
            let r = eps * rng.gen_range(0.3..0.95);
            let check = (|| {
                let f = ctx.sampled(&u, |x| poly(&c, x))?;
                check_young_with(&f, &standard_bump(r)?, &kc(a, b), eps, ctx.cfg.tol_quad)
            })();
            row("young", format!("poly-{i:03}"), "young-inequality", check)
        })
        .collect()
}

fn mollify(ctx: &Ctx) -> Vec<Row> {
    let u = iv(-2.0, 2.0);
    let k = kc(-1.0, 1.0);
    let seq = DeltaSeq::default();
    let cases: [(&str, f64, fn(f64) -> f64); 3] = [
        ("sin-3x", 3.0, |x| (3.0 * x).sin()),
        ("abs-shifted", 1.0, |x| (x - 0.1).abs()),
        ("quadratic", 5.0, |x| x * x + x),
    ];
    let mut rows = Vec::new();
    for (name, lip, f) in cases {
        let conv = ctx
            .sampled(&u, f)
            .and_then(|g| check_mollifier_convergence(&g, &seq, &k, ctx.cfg.horizon, ctx.cfg.tol_sup));
        let rate = conv.as_ref().map_err(Clone::clone).map(|c| {
            let excess = c
                .residuals
                .iter()
                .enumerate()
                .map(|(i, r)| r - lip * seq.radius(i + 1))
                .fold(f64::NEG_INFINITY, f64::max);
            bounded(excess, 1e-4, c.horizon)
        });
        rows.push(row("mollify", format!("{name}/converges"), "mollifier-convergence", conv));
        rows.push(row("mollify", format!("{name}/lipschitz-rate"), "mollifier-convergence", rate));
    }
    rows
}

fn infconv(_ctx: &Ctx) -> Vec<Row> {
    [(0.5, 0.5), (0.25, 0.5), (0.3, 0.25)]
        .into_iter()
        .map(|(s1, ratio)| {
            let check = (|| {
                let seq = delta_sequence(s1, ratio)?;
                let ic = infinite_convolution(&seq, 1e-9, 1e-7)?;
                let worst = (ic.psi.mass() - 1.0).abs().max(ic.last_sup_change);
                let fits = ic.psi.radius() <= seq.radius_sum() * (1.0 + 1e-12);
                Ok(if fits {
                    bounded(worst, 1e-6, ic.terms)
                } else {
                    bounded(ic.psi.radius(), seq.radius_sum(), ic.terms)
                })
            })();
            row("infconv", format!("s1={s1}/ratio={ratio}"), "infinite-convolution", check)
        })
        .collect()
}

fn fundamental(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let u = iv(-1.0, 1.0);
    let h = ctx.h();
    let fading = Some((Expr::Sin { a: 7.0, b: 0.0 }, -3));
    let growing = Some((Expr::constant(1.0), 1));
    let cases: Vec<(&str, boehmian::Result<Boehmian>, bool)> = vec![
        ("dirac-0", dirac(0.0, &DeltaSeq::default(), &u, h), true),
        ("dirac-0.3-other-schedule", dirac(0.3, &DeltaSeq::Geometric { s1: 0.4, ratio: 0.5 }, &u, h), true),
        (
            "mollified-sin",
            ctx.sampled(&iv(-1.6, 1.6), |x| (2.0 * x).sin())
                .and_then(|g| mollified(g, &DeltaSeq::default(), &u)),
            true,
        ),
        ("constant-cos", ctx.cont(&u, |x| x.cos()), true),
        ("fading-drift", custom_expression(Expr::Poly(vec![0.0, 1.0]), fading, &u, h), true),
        ("growing-drift-not-fundamental", custom_expression(Expr::constant(0.0), growing, &u, h), false),
    ];
    cases
        .into_iter()
        .map(|(name, f, holds)| {
            let r = f.and_then(|f| check_fundamental(&f, &p));
            row("fundamental", name, "fundamental-sequence", if holds { r } else { r.map(distinct) })
        })
        .collect()
}

fn equivalence(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let u = iv(-1.0, 1.0);
    let h = ctx.h();
    let mut rows = Vec::new();
    let pairs: Named<Box<dyn Fn() -> Check>> = vec![
        (
            "dirac-schedule-independent",
            Box::new(|| {
                let a = dirac(0.1, &DeltaSeq::default(), &u, h)?;
                let b = dirac(0.1, &delta_sequence(0.3, 0.45)?, &u, h)?;
                equivalent(&a, &b, &p)
            }),
        ),
        (
            "mollified-equals-constant",
            Box::new(|| {
                let g = ctx.sampled(&iv(-1.6, 1.6), |x| (3.0 * x).cos())?;
                let a = mollified(g, &DeltaSeq::default(), &u)?;
                equivalent(&a, &ctx.cont(&u, |x| (3.0 * x).cos())?, &p)
            }),
        ),
        (
            "fading-drift-equals-base",
            Box::new(|| {
                let a = custom_expression(Expr::Poly(vec![0.0, 1.0]), Some((Expr::Sin { a: 9.0, b: 0.0 }, -3)), &u, h)?;
                equivalent(&a, &ctx.cont(&u, |x| x)?, &p)
            }),
        ),
        (
            "dirac-distinct-from-zero",
            Box::new(|| {
                let a = dirac(0.0, &DeltaSeq::default(), &u, h)?;
                equivalent(&a, &zero(&u, h)?, &p).map(distinct)
            }),
        ),
        (
            "dirac-distinct-from-shifted",
            Box::new(|| {
                let a = dirac(0.0, &DeltaSeq::default(), &u, h)?;
                let b = dirac(0.2, &DeltaSeq::default(), &u, h)?;
                equivalent(&a, &b, &p).map(distinct)
            }),
        ),
    ];
    for (name, f) in pairs {
        rows.push(row("equivalence", name, "equivalence", f()));
    }
    rows
}

fn vector(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let u = iv(-1.0, 1.0);
    let h = ctx.h();
    let build = || -> boehmian::Result<Vec<(&'static str, Boehmian, Boehmian)>> {
        let f = ctx.cont(&u, |x| (2.0 * x).sin())?;
        let g = ctx.cont(&u, |x| x * x - 0.3)?;
        let fg = ctx.cont(&u, |x| (2.0 * x).sin() + x * x - 0.3)?;
        let d = dirac(0.1, &DeltaSeq::default(), &u, h)?;
        let d2 = dirac(0.1, &delta_sequence(0.4, 0.6)?, &u, h)?;
        let d3 = dirac(0.1, &delta_sequence(0.3, 0.45)?, &u, h)?;
        let z = zero(&u, h)?;
        let (r, s) = (1.7, -0.6);
        Ok(vec![
            ("add-commutes", add(&f, &d)?, add(&d, &f)?),
            ("add-associates", add(&add(&f, &g)?, &d)?, add(&f, &add(&g, &d)?)?),
            ("zero-is-neutral", add(&d, &z)?, d.clone()),
            ("negatives-cancel", sub(&d, &d)?, z.clone()),
            ("scalar-distributes-over-sum", scale(r, &add(&d, &g)?), add(&scale(r, &d), &scale(r, &g))?),
            ("sum-of-scalars-distributes", scale(r + s, &d), add(&scale(r, &d), &scale(s, &d))?),
            ("scalars-compose", scale(r * s, &d), scale(r, &scale(s, &d))),
            ("unit-scalar", scale(1.0, &d), d.clone()),
            ("zero-scalar", scale(0.0, &d), z),
            ("cancel-across-schedules", sub(&add(&f, &d)?, &d2)?, f.clone()),
            ("embedding-is-additive", add(&f, &g)?, fg),
            ("schedules-agree", d2, d3),
        ])
    };
    match build() {
        Ok(cases) => cases
            .into_iter()
            .map(|(name, a, b)| row("vector", name, "vector-space", equivalent(&a, &b, &p)))
            .collect(),
        Err(e) => vec![Row::error("vector", "setup", "vector-space", e.to_string())],
    }
}

fn restriction(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let omega = iv(-1.0, 1.5);
    let h = ctx.h();
    let sections: Vec<(&str, boehmian::Result<Boehmian>)> = vec![
        ("dirac", dirac(0.2, &DeltaSeq::default(), &omega, h)),
        ("abs", ctx.cont(&omega, |x| (x - 0.3).abs())),
        (
            "drift",
            custom_expression(Expr::Cos { a: 4.0, b: 0.0 }, Some((Expr::Sin { a: 9.0, b: 0.0 }, -2)), &omega, h),
        ),
    ];
    let subsets = [("left", iv(-0.8, 0.9)), ("right", iv(-0.2, 1.4))];
    let eps = 0.1;
    let mut rows = Vec::new();
    for (name, f) in &sections {
        for (side, v) in &subsets {
            let check = (|| {
                let f = f.as_ref().map_err(Clone::clone)?;
                let phi = standard_bump(0.08)?;
                let w = v.erode(eps)?;
                let lhs = restrict(&conv_boehmian(f, &phi, eps)?, &w)?;
                let rhs = conv_boehmian(&restrict(f, v)?, &phi, eps)?;
                equivalent(&lhs, &rhs, &p)
            })();
            rows.push(row("restriction", format!("{name}/{side}"), "restriction-commutes", check));
        }
    }
    let chain = (|| {
        let f = dirac(0.2, &DeltaSeq::default(), &omega, h)?;
        let (v, w) = (iv(-0.5, 1.2), iv(-0.2, 0.8));
        equivalent(&restrict(&restrict(&f, &v)?, &w)?, &restrict(&f, &w)?, &p)
    })();
    rows.push(row("restriction", "dirac/composes", "restriction-commutes", chain));
    rows
}

fn convboehm(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let u = iv(-1.0, 1.0);
    let h = ctx.h();
    let mut rows = Vec::new();
    for (r, eps) in [(0.1, 0.15), (0.2, 0.25), (0.3, 0.35)] {
        let check = (|| {
            let d = dirac(0.0, &DeltaSeq::default(), &u, h)?;
            let phi = standard_bump(r)?;
            let lhs = conv_boehmian(&d, &phi, eps)?;
            let rhs = ctx.cont(lhs.domain(), |x| phi.eval(x))?;
            equivalent(&lhs, &rhs, &p)
        })();
        rows.push(row("convboehm", format!("dirac-times-bump-{r}"), "conv-test-function", check));
    }
    let smooth = (|| {
        let g = ctx.sampled(&u, |x| (3.0 * x).sin())?;
        let phi = standard_bump(0.15)?;
        let lhs = conv_boehmian(&from_continuous(g.clone()), &phi, 0.2)?;
        let direct = convolve(&g, &phi)?.restrict(lhs.domain())?;
        equivalent(&lhs, &from_continuous(direct), &p)
    })();
    rows.push(row("convboehm", "embedding-commutes", "conv-test-function", smooth));
    rows
}

fn regularize(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let u = iv(-1.0, 1.0);
    let h = ctx.h();
    let mut rows = Vec::new();
    let limit = (|| {
        let d = dirac(0.0, &DeltaSeq::default(), &u, h)?;
        let k = kc(-0.5, 0.5);
        let r = to_continuous_on(&d, &k, &p)?;
        let psi = ctx.sampled(r.g.domain(), |x| r.psi.eval(x))?;
        Ok(bounded(sup_diff_on(&r.g, &psi, &k)?, p.tol, p.horizon))
    })();
    rows.push(row("regularize", "dirac-limit-is-the-mollifier", "regularization", limit));
    let cases: Vec<(&str, f64, boehmian::Result<Boehmian>)> = vec![
        ("dirac", 0.1, dirac(0.0, &DeltaSeq::default(), &u, h)),
        (
            "mollified-abs",
            0.2,
            ctx.sampled(&iv(-1.6, 1.6), |x| x.abs()).and_then(|g| mollified(g, &DeltaSeq::default(), &u)),
        ),
        ("constant", 0.05, ctx.cont(&u, |x| x.exp())),
    ];
    for (name, eps, f) in cases {
        let check = f.and_then(|f| regularizing_mollifier(&f, eps, &p)).map(|r| r.check);
        rows.push(row("regularize", format!("{name}/eps={eps}"), "regularization", check));
    }
    rows
}

fn rebuild(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let u = iv(-1.0, 1.0);
    let h = ctx.h();
    let opens = vec![iv(-0.6, 0.6), iv(-0.8, 0.8), iv(-0.9, 0.9)];
    let radii = [0.2, 0.1, 0.05];
    let cases: Vec<(&str, boehmian::Result<Boehmian>)> = vec![
        ("dirac", dirac(0.0, &DeltaSeq::default(), &u, h)),
        ("cos", ctx.cont(&u, |x| (2.0 * x).cos())),
    ];
    cases
        .into_iter()
        .map(|(name, f)| {
            let check = f.and_then(|f| {
                let fs = rebuild_from_exhaustion(&f, &opens, &radii, &p)?;
                let b = Boehmian::new(fs, f.witness().clone());
                equivalent(&b, &f, &p)
            });
            row("rebuild", name, "exhaustion-rebuild", check)
        })
        .collect()
}

fn glue2(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let h = ctx.h();
    let (u, v) = (iv(-1.0, 0.6), iv(-0.6, 1.0));
    let mut rows = Vec::new();
    let oracle = |x: f64| (3.0 * x).sin() + 0.5 * x * x;
    let tight = p.clone().with_tol(1e-4);
    let scene = (|| {
        let f = ctx.cont(&u, oracle)?;
        let g = ctx.cont(&v, oracle)?;
        let glued = glue_pair(&f, &g, &tight)?;
        let whole = ctx.cont(&iv(-1.0, 1.0), oracle)?;
        let global = equivalent(&glued.boehmian, &whole, &tight)?;
        let contracts = check_restrictions(&glued.boehmian, &[f, g], &tight)?;
        Ok((global, contracts))
    })();
    push_scene(&mut rows, "continuous", scene);
    let scene = (|| {
        let seq = DeltaSeq::default();
        let f = dirac(0.0, &seq, &u, h)?;
        let g = dirac(0.0, &seq, &v, h)?;
        let glued = glue_pair(&f, &g, &p)?;
        let global = equivalent(&glued.boehmian, &dirac(0.0, &seq, &iv(-1.0, 1.0), h)?, &p)?;
        let contracts = check_restrictions(&glued.boehmian, &[f, g], &p)?;
        Ok((global, contracts))
    })();
    push_scene(&mut rows, "dirac", scene);
    rows
}

fn push_scene(rows: &mut Vec<Row>, name: &str, scene: boehmian::Result<(CheckResult, Vec<CheckResult>)>) {
    match scene {
        Ok((global, contracts)) => {
            rows.push(Row::from_check("glue2", format!("{name}/global"), "glue-pair", &global));
            for (c, side) in contracts.iter().zip(["H|U~F", "H|V~G"]) {
                rows.push(Row::from_check("glue2", format!("{name}/{side}"), "glue-pair", c));
            }
        }
        Err(e) => rows.push(Row::error("glue2", name, "glue-pair", e.to_string())),
    }
}

fn gluefinite(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let h = ctx.h();
    let seq = DeltaSeq::default();
    let run = || -> boehmian::Result<Vec<(String, CheckResult)>> {
        let mixed = vec![
            zero(&iv(0.0, 1.2), h)?,
            dirac(1.6, &seq, &iv(1.0, 2.2), h)?,
            zero(&iv(2.0, 3.0), h)?,
        ];
        let assign = SectionAssignment::from_sections(mixed.clone())?;
        let a = glue_finite(&assign, &p)?;
        let b = glue_finite(&assign.permuted(&[2, 0, 1])?, &p)?;
        let mut out = Vec::new();
        for (i, c) in check_restrictions(&a.boehmian, &mixed, &p)?.into_iter().enumerate() {
            out.push((format!("mixed/piece-{}", i + 1), c));
        }
        out.push(("mixed/global".into(), equivalent(&a.boehmian, &dirac(1.6, &seq, &iv(0.0, 3.0), h)?, &p)?));
        out.push(("mixed/permutation".into(), equivalent(&a.boehmian, &b.boehmian, &p)?));
        Ok(out)
    };
    rows_or_error("gluefinite", "glue-finite", run())
}

fn rows_or_error(suite: &str, lemma_ref: &str, r: boehmian::Result<Vec<(String, CheckResult)>>) -> Vec<Row> {
    match r {
        Ok(v) => v.into_iter().map(|(id, c)| Row::from_check(suite, id, lemma_ref, &c)).collect(),
        Err(e) => vec![Row::error(suite, "setup", lemma_ref, e.to_string())],
    }
}

fn gluecountable(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let run = || -> boehmian::Result<Vec<(String, CheckResult)>> {
        let oracle = |x: f64| (2.0 * x).cos() + x;
        let sections = (1..=8)
            .map(|i| ctx.cont(&iv(0.5f64.powi(i + 1), 1.0), oracle))
            .collect::<boehmian::Result<Vec<_>>>()?;
        let assign = SectionAssignment::from_sections(sections.clone())?;
        let glued = glue_countable(&assign, 8, &p)?;
        let mut out = Vec::new();
        for (i, c) in check_restrictions(&glued.boehmian, &sections, &p)?.into_iter().enumerate() {
            out.push((format!("dyadic/piece-{}", i + 1), c));
        }
        let forward = glue_finite(&assign, &p)?;
        let reversed = glue_finite(&assign.permuted(&[7, 6, 5, 4, 3, 2, 1, 0])?, &p)?;
        out.push(("dyadic/permutation".into(), equivalent(&forward.boehmian, &reversed.boehmian, &p)?));
        out.push(("dyadic/countable-equals-finite".into(), equivalent(&glued.boehmian, &forward.boehmian, &p)?));
        Ok(out)
    };
    rows_or_error("gluecountable", "glue-countable", run())
}

fn locality(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let h = ctx.h();
    let u = iv(-1.0, 1.0);
    let run = || -> boehmian::Result<Vec<(String, CheckResult)>> {
        let cover = Cover::new(vec![iv(-1.0, 0.1), iv(-0.1, 1.0)])?;
        let g = ctx.sampled(&iv(-1.6, 1.6), |x| (3.0 * x).sin())?;
        let a = from_continuous(g.restrict(&u)?);
        let b = mollified(g, &DeltaSeq::default(), &u)?;
        let same = verify_locality(&a, &b, &cover, &p)?;
        let d = dirac(0.0, &DeltaSeq::default(), &u, h)?;
        let diff = verify_locality(&d, &zero(&u, h)?, &cover, &p)?;
        let local_sep = diff
            .local
            .iter()
            .find(|c| c.is_refuted())
            .cloned()
            .map(distinct)
            .unwrap_or_else(|| CheckResult::new(Status::Refuted, 0.0, p.tol, p.horizon));
        Ok(vec![
            ("equal-sections/global".into(), same.verdict),
            ("dirac-vs-zero/separated-locally".into(), local_sep),
            ("dirac-vs-zero/separated-globally".into(), distinct(diff.verdict)),
        ])
    };
    rows_or_error("locality", "locality", run())
}

fn presheaf(ctx: &Ctx) -> Vec<Row> {
    let mut rng = ctx.rng();
    let h = ctx.h();
    let mut rows = Vec::new();
    let mut plain = Vec::new();
    for i in 0..10 {
        let (a0, b0) = (rng.gen_range(-1.0..-0.5), rng.gen_range(0.5..1.0));
        let (a1, b1) = (rng.gen_range(a0..-0.3), rng.gen_range(0.3..b0));
        let (a2, b2) = (rng.gen_range(a1..-0.1), rng.gen_range(0.1..b1));
        let c = rng.gen_range(-0.05..0.05);
        let check = (|| {
            let uu = OpenSet::interval(a0, b0)?;
            let (v, w) = (OpenSet::interval(a1, b1)?, OpenSet::interval(a2, b2)?);
            plain.push((ctx.sampled(&uu, |x| (5.0 * x).sin())?, v.clone(), w.clone()));
            let section = dirac(c, &DeltaSeq::default(), &uu, h)?;
            check_presheaf_laws(&[NestedTriple { section, v, w }], &[1, 7, ctx.cfg.horizon])
        })();
        rows.push(row("presheaf", format!("triple-{i:02}"), "presheaf", check));
    }
    rows.push(row("presheaf", "continuous", "presheaf", check_presheaf_laws_continuous(&plain)));
    rows
}

fn sheaf_e2e(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let h = ctx.h();
    let run = || -> boehmian::Result<Vec<(String, CheckResult)>> {
        let seq = DeltaSeq::default();
        let (u, v) = (iv(-1.0, 0.5), iv(-0.5, 1.0));
        let f = add(&dirac(-0.2, &seq, &u, h)?, &ctx.cont(&u, |x| x.cos())?)?;
        let g = add(&dirac(-0.2, &seq, &v, h)?, &ctx.cont(&v, |x| x.cos())?)?;
        let glued = glue_pair(&f, &g, &p)?.boehmian;
        let again = glue_pair(&restrict(&glued, &u)?, &restrict(&glued, &v)?, &p)?.boehmian;
        let whole = iv(-1.0, 1.0);
        let global = add(&dirac(-0.2, &seq, &whole, h)?, &ctx.cont(&whole, |x| x.cos())?)?;
        let cover = Cover::new(vec![u, v])?;
        Ok(vec![
            ("reglue-is-stable".into(), equivalent(&glued, &again, &p)?),
            ("glued-equals-global".into(), equivalent(&glued, &global, &p)?),
            ("locality-agrees".into(), verify_locality(&glued, &global, &cover, &p)?.verdict),
        ])
    };
    rows_or_error("sheaf-e2e", "sheaf", run())
}

fn battery(ctx: &Ctx, u: &OpenSet) -> boehmian::Result<Vec<(&'static str, FundamentalSeq, GridFunction)>> {
    let h = ctx.h();
    let seq = DeltaSeq::default();
    let gw = ctx.sampled(&iv(-1.6, 1.6), |x| (2.0 * x).sin() + x * x)?;
    let g = gw.restrict(u)?;
    let smooth = mollified(gw, &seq, u)?;
    let g2 = g.clone();
    let drift = FundamentalSeq::new(u.clone(), Tag::Custom, move |n| Ok(g2.map(|y| y + 0.5f64.powi(n as i32))));
    Ok(vec![
        ("constant", FundamentalSeq::constant(g.clone()), g.clone()),
        ("mollified", smooth.rep().clone(), g.clone()),
        ("geometric-drift", drift, g),
        ("dirac", dirac(0.0, &seq, u, h)?.rep().clone(), GridFunction::constant(u, h, 0.0)?),
    ])
}

fn delta_bridge(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let u = iv(-1.0, 1.0);
    let k = kc(-0.5, 0.5);
    let seq = DeltaSeq::default();
    let mut rows = Vec::new();
    match battery(ctx, &u) {
        Ok(b) => {
            for (name, fs, limit) in b {
                let check = (|| {
                    let fixed = delta_converges(&fs, &limit, &k, &seq, &p)?;
                    if !fixed.is_verified() {
                        // premise fails: the implication holds vacuously
                        return Ok(CheckResult { status: Status::Verified, ..fixed });
                    }
                    diagonal_converges(&fs, &limit, &k, &seq, &p)
                })();
                rows.push(row("delta-bridge", format!("{name}/fixed-implies-diagonal"), "delta-bridge", check));
            }
        }
        Err(e) => rows.push(Row::error("delta-bridge", "setup", "delta-bridge", e.to_string())),
    }
    let cauchy = (|| {
        let d = dirac(0.0, &seq, &u, ctx.h())?;
        let w = DeltaSeq::Geometric { s1: 0.5, ratio: 0.5f64.powf(0.25) };
        delta_cauchy(d.rep(), &w, &k, &p)
    })();
    rows.push(row("delta-bridge", "dirac/diagonal-cauchy", "delta-bridge", cauchy));
    rows
}

fn pj(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let h = ctx.h();
    let u = iv(-1.0, 1.0);
    let seq = DeltaSeq::default();
    let radii = [0.01, 0.02, 0.04, 0.06];
    let run = || -> boehmian::Result<Vec<(String, CheckResult)>> {
        let ex = compact_exhaustion_with(&u, 3, 0.4, 0.4)?;
        let gw = ctx.sampled(&iv(-1.6, 1.6), |x| (2.0 * x).sin() + x * x)?;
        let g = gw.restrict(&u)?;
        let smooth = mollified(gw, &seq, &u)?.rep().clone();
        let sine = ctx.sampled(&u, |x| (5.0 * x).sin())?;
        let bowl = ctx.sampled(&u, |x| x * x + 1.0)?;
        let instances: Vec<(&str, FundamentalSeq)> = vec![
            (
                "mollified-minus-limit",
                FundamentalSeq::new(u.clone(), Tag::Custom, move |n| smooth.get(n)?.sub(&g)),
            ),
            ("ones", FundamentalSeq::constant(GridFunction::constant(&u, h, 1.0)?)),
            ("dirac", dirac(0.0, &seq, &u, h)?.rep().clone()),
            (
                "damped-sine",
                FundamentalSeq::new(u.clone(), Tag::Custom, move |n| Ok(sine.scale(0.5f64.powi(n as i32)))),
            ),
            ("fixed-sine", FundamentalSeq::constant(ctx.sampled(&u, |x| x.sin() + 2.0)?)),
            (
                "slow-decay",
                FundamentalSeq::new(u.clone(), Tag::Custom, move |n| Ok(bowl.scale(0.7f64.powi(2 * n as i32)))),
            ),
        ];
        instances
            .into_iter()
            .map(|(name, fs)| Ok((format!("{name}/verdicts-agree"), check_delta_iff_pj(&fs, &ex, &radii, &seq, &p)?.0)))
            .collect()
    };
    rows_or_error("pj", "pj-characterization", run())
}

fn extract(ctx: &Ctx) -> Vec<Row> {
    let p = ctx.params();
    let h = ctx.h();
    let u = iv(-1.0, 1.0);
    let opts = ExtractOptions::default();
    let run = || -> boehmian::Result<Vec<(String, CheckResult)>> {
        let ex = compact_exhaustion_with(&u, opts.depth + 1, 0.4, 0.4)?;
        let g = ctx.sampled(&iv(-1.6, 1.6), |x| (2.0 * x).sin() + x * x)?;
        let cases = [
            ("mollified", mollified(g, &DeltaSeq::default(), &u)?.rep().clone()),
            ("dirac", dirac(0.0, &DeltaSeq::default(), &u, h)?.rep().clone()),
        ];
        let mut out = Vec::new();
        for (name, fs) in cases {
            let first = extract_fundamental_subsequence(&fs, &ex, &opts, &p)?;
            for c in &first.certificates {
                let exact = c.summable && c.radius_below && c.defined;
                let r = if exact {
                    bounded(c.residual, c.bound + opts.quad_tol, opts.depth)
                } else {
                    CheckResult::new(Status::Refuted, c.residual, c.bound, opts.depth)
                };
                out.push((format!("{name}/step-{}", c.n), r));
            }
            out.push((format!("{name}/subsequence-fundamental"), first.fundamental.clone()));
            let second_opts = ExtractOptions {
                start: first.indices[0] + 3,
                ..opts.clone()
            };
            let second = extract_fundamental_subsequence(&fs, &ex, &second_opts, &p)?;
            let a = Boehmian::new(first.subsequence(&fs)?, first.witness.clone());
            let b = Boehmian::new(second.subsequence(&fs)?, second.witness.clone());
            let same = equivalent(&a, &b, &p.clone().with_horizon(opts.depth))?;
            out.push((format!("{name}/extractions-equivalent"), same));
        }
        Ok(out)
    };
    rows_or_error("extract", "subsequence-extraction", run())
}
