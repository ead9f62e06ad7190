//! Restriction laws, locality and gluing of Boehmians over covers.
//!
//! Gluing follows the pairwise construction: sections `F` on `U` and `G` on
//! `V` are mollified by a common delta sequence, the two branches are joined
//! on `erode(U, ε_n) ∪ erode(V, ε_n)` (taking `F` where both apply) and the
//! result is extended continuously to `U ∪ V`.
//!
//! A mollified section `F ∗ δ_n` is realized from the representative term
//! with index `max(n, H)`, `H` the horizon of the parameters.

use serde::{Deserialize, Serialize};

use crate::boehmian::{equivalent, regularizing_mollifier, restrict, sub, zero, Boehmian, EquivParams, FundamentalSeq, Tag};
use crate::convolve::{convolve_onto, CheckResult, Status, Witness};
use crate::error::{invalid, Error, Result};
use crate::geometry::{is_compactly_contained, CompactSet, OpenSet};
use crate::gridfn::GridFunction;
use crate::mollifier::{DeltaSeq, TestFunction};

/// Regularizers are certified by a Cauchy test only at scales spanning at
/// least this many grid cells; finer ones cannot be resolved by the grid.
pub const RESOLVABLE_CELLS: f64 = 8.0;

/// A finite family of open sets with its union and pairwise overlaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pieces: Vec<OpenSet>,
    union: OpenSet,
    overlaps: Vec<Vec<OpenSet>>,
}

impl Cover {
    pub fn new(pieces: Vec<OpenSet>) -> Result<Self> {
        if pieces.is_empty() {
            return invalid("a cover needs at least one piece");
        }
        if pieces.iter().any(OpenSet::is_empty) {
            return invalid("cover pieces must be nonempty");
        }
        let union = pieces.iter().fold(OpenSet::empty(), |acc, p| acc.union(p));
        let overlaps = pieces
            .iter()
            .map(|a| pieces.iter().map(|b| a.intersection(b)).collect())
            .collect();
        Ok(Self {
            pieces,
            union,
            overlaps,
        })
    }

    pub fn pieces(&self) -> &[OpenSet] {
        &self.pieces
    }

    pub fn union(&self) -> &OpenSet {
        &self.union
    }

    pub fn overlap(&self, i: usize, j: usize) -> &OpenSet {
        &self.overlaps[i][j]
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

/// One section per cover piece.
#[derive(Debug, Clone)]
pub struct SectionAssignment {
    cover: Cover,
    sections: Vec<Boehmian>,
}

impl SectionAssignment {
    pub fn new(cover: Cover, sections: Vec<Boehmian>) -> Result<Self> {
        if cover.len() != sections.len() {
            return invalid("one section per cover piece is required");
        }
        for (p, s) in cover.pieces().iter().zip(&sections) {
            if s.domain() != p {
                return invalid("section domain differs from its cover piece");
            }
        }
        Ok(Self { cover, sections })
    }

    pub fn from_sections(sections: Vec<Boehmian>) -> Result<Self> {
        let cover = Cover::new(sections.iter().map(|s| s.domain().clone()).collect())?;
        Self::new(cover, sections)
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn sections(&self) -> &[Boehmian] {
        &self.sections
    }

    /// The same sections in the given order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.sections.len()];
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return invalid("not a permutation");
            }
        }
        if seen.iter().any(|s| !s) {
            return invalid("not a permutation");
        }
        Self::from_sections(order.iter().map(|&i| self.sections[i].clone()).collect())
    }
}

/// A glued section with the diagnostics gathered while building it.
#[derive(Debug, Clone)]
pub struct GlueOutcome {
    pub boehmian: Boehmian,
    /// Overlap equivalence checks that gated each gluing step.
    pub preconditions: Vec<CheckResult>,
    /// Agreement of the two mollified branches on eroded overlaps.
    pub branches: Vec<CheckResult>,
    /// Mollifier scales `ε_n` used up to the horizon, last step.
    pub radii: Vec<f64>,
    /// Indices `n <= H` whose regularizer was too fine to certify.
    pub uncertified: Vec<usize>,
    /// Set when a certifiable regularizer failed its Cauchy test.
    pub diagnostic: Option<String>,
}

impl GlueOutcome {
    fn trivial(b: Boehmian) -> Self {
        Self {
            boehmian: b,
            preconditions: Vec::new(),
            branches: Vec::new(),
            radii: Vec::new(),
            uncertified: Vec::new(),
            diagnostic: None,
        }
    }

    pub fn status(&self) -> Status {
        let s = self
            .preconditions
            .iter()
            .chain(&self.branches)
            .fold(Status::Verified, |acc, c| acc.and(c.status));
        if self.diagnostic.is_some() {
            s.and(Status::Inconclusive)
        } else {
            s
        }
    }
}

/// A regularizer with radius below a scale, and whether it passed the Cauchy test.
#[derive(Debug, Clone)]
pub struct Pick {
    pub psi: TestFunction,
    /// `None` when the scale is below the grid's resolution.
    pub certified: Option<bool>,
}

/// First witness term of `f` with radius below `eps`, certified through
/// [`regularizing_mollifier`] when `eps` spans at least [`RESOLVABLE_CELLS`] cells.
pub fn pick_regularizer(f: &Boehmian, eps: f64, params: &EquivParams) -> Result<Pick> {
    let w = params.witness.clone().unwrap_or_else(|| f.witness().clone());
    let fallback = |certified| -> Result<Pick> {
        let m = w
            .first_below(eps, 400)
            .ok_or_else(|| Error::NoRegularizerFound(format!("no witness radius below {eps}")))?;
        Ok(Pick {
            psi: w.get(m),
            certified,
        })
    };
    if eps < RESOLVABLE_CELLS * f.h()? {
        return fallback(None);
    }
    match regularizing_mollifier(f, eps, params) {
        Ok(r) => Ok(Pick {
            psi: r.psi,
            certified: Some(true),
        }),
        Err(Error::NoRegularizerFound(_)) => fallback(Some(false)),
        Err(e) => Err(e),
    }
}

fn realization_index(n: usize, params: &EquivParams) -> usize {
    n.max(params.horizon)
}

fn same_grid(f: &Boehmian, g: &Boehmian) -> Result<f64> {
    let h = f.h()?;
    if h != g.h()? {
        return invalid("sections use different grid spacings");
    }
    Ok(h)
}

/// A common delta sequence `δ_n = φ_n ∗ ψ_n` for two sections.
#[derive(Debug, Clone)]
pub struct CommonRegularizers {
    /// Certified head up to the horizon, then a plain geometric tail.
    pub seq: DeltaSeq,
    pub uncertified: Vec<usize>,
    /// `sup |F ∗ δ_n - G ∗ δ_n|` over the closure of `erode(U ∩ V, ε)`, per `n <= H`.
    pub agreement: CheckResult,
}

/// `φ_n` regularizes `F` and `ψ_n` regularizes `G` at scale `ε / 2^n`, so that
/// `s(δ_n) < ε / 2^(n-1)`.
pub fn common_regularizers(f: &Boehmian, g: &Boehmian, eps: f64, params: &EquivParams) -> Result<CommonRegularizers> {
    params.validate()?;
    let w = f.domain().intersection(g.domain());
    if w.is_empty() {
        return invalid("the two domains do not overlap");
    }
    let inner = w.erode(eps)?;
    if f.domain().erode(eps)?.is_empty() || g.domain().erode(eps)?.is_empty() || inner.is_empty() {
        return invalid(format!("eroding by {eps} leaves nothing"));
    }
    same_grid(f, g)?;
    let mut head = Vec::with_capacity(params.horizon);
    let mut uncertified = Vec::new();
    for n in 1..=params.horizon {
        let scale = eps * 0.5f64.powi(n as i32);
        let a = pick_regularizer(f, scale, params)?;
        let b = pick_regularizer(g, scale, params)?;
        for c in [a.certified, b.certified] {
            if c == Some(false) {
                return Err(Error::NoRegularizerFound(format!("no Cauchy regularizer at scale {scale:e}")));
            }
        }
        if a.certified.is_none() || b.certified.is_none() {
            uncertified.push(n);
        }
        head.push(TestFunction::product(vec![a.psi, b.psi]));
    }
    let tail = DeltaSeq::Geometric {
        s1: eps * 0.5f64.powi(params.horizon as i32 + 1),
        ratio: 0.5,
    };
    let seq = DeltaSeq::Explicit {
        head: head.clone(),
        tail: Box::new(tail),
    };
    let k = inner.closure()?;
    let fh = f.term(params.horizon)?;
    let gh = g.term(params.horizon)?;
    let mut r = Vec::with_capacity(head.len());
    for d in &head {
        let a = convolve_onto(&fh, d, &inner)?;
        let b = convolve_onto(&gh, d, &inner)?;
        r.push(a.sub(&b)?.sup_norm_on(&k)?);
    }
    Ok(CommonRegularizers {
        seq,
        uncertified,
        agreement: threshold_verdict(r, params),
    })
}

fn threshold_verdict(r: Vec<f64>, params: &EquivParams) -> CheckResult {
    let worst = r.iter().copied().fold(0.0, f64::max);
    let status = if worst < params.tol {
        Status::Verified
    } else if worst >= 10.0 * params.tol {
        Status::Refuted
    } else {
        Status::Inconclusive
    };
    CheckResult::new(status, worst, params.tol, params.horizon).with_residuals(r)
}

/// Joins `a` and `b` on the union of their domains, taking `a` where both are defined.
pub fn join_branches(a: &GridFunction, b: &GridFunction) -> Result<GridFunction> {
    let dom = a.domain().union(b.domain());
    GridFunction::from_fn(&dom, a.h(), |x| {
        if a.domain().contains(x) {
            a.eval(x).unwrap_or(f64::NAN)
        } else if b.domain().contains(x) {
            b.eval(x).unwrap_or(f64::NAN)
        } else {
            a.eval(x).or_else(|_| b.eval(x)).unwrap_or(f64::NAN)
        }
    })
}

/// Overlap equivalence gating a gluing step.
fn overlap_precondition(f: &Boehmian, g: &Boehmian, params: &EquivParams) -> Result<CheckResult> {
    let w = f.domain().intersection(g.domain());
    if w.is_empty() {
        return invalid("the two domains do not overlap");
    }
    let r = equivalent(&restrict(f, &w)?, &restrict(g, &w)?, &params.localized(&w))?;
    if !r.is_verified() {
        let at = r
            .witness
            .as_ref()
            .map_or(String::new(), |w| format!(" near {}", w.location));
        return Err(Error::SectionsDisagree(format!(
            "overlap check {} with residual {:e}{at}",
            r.status, r.max_residual
        )));
    }
    Ok(r)
}

/// A Boehmian `H` on `U ∪ V` with `H|_U ∼ F` and `H|_V ∼ G`.
pub fn glue_pair(f: &Boehmian, g: &Boehmian, params: &EquivParams) -> Result<GlueOutcome> {
    let pre = overlap_precondition(f, g, params)?;
    let (u, v) = (f.domain().clone(), g.domain().clone());
    let w = u.intersection(&v);
    let eps1 = 0.25 * u.min_component_len().min(v.min_component_len()).min(w.min_component_len());
    let common = common_regularizers(f, g, eps1, params)?;
    let horizon = params.horizon;
    let radii: Vec<f64> = (1..=horizon).map(|n| eps1 * 0.5f64.powi(n as i32 - 1)).collect();
    let union = u.union(&v);
    let (fr, gr, seq) = (f.rep().clone(), g.rep().clone(), common.seq.clone());
    let p = params.clone();
    let dom = union.clone();
    let rep = FundamentalSeq::new(union, Tag::Glued, move |n| {
        let r = realization_index(n, &p);
        let eps = eps1 * 0.5f64.powi(n as i32 - 1);
        let delta = seq.get(n);
        let a = convolve_onto(&fr.get(r)?, &delta, &u.erode(eps)?)?;
        let b = convolve_onto(&gr.get(r)?, &delta, &v.erode(eps)?)?;
        join_branches(&a, &b)?.extend_continuously(&dom)
    });
    let witness = DeltaSeq::Product(Box::new(f.witness().clone()), Box::new(g.witness().clone()));
    Ok(GlueOutcome {
        boehmian: Boehmian::new(rep, witness),
        preconditions: vec![pre],
        branches: vec![common.agreement],
        radii,
        uncertified: common.uncertified,
        diagnostic: None,
    })
}

fn append(acc: &mut GlueOutcome, step: GlueOutcome) {
    acc.boehmian = step.boehmian;
    acc.preconditions.extend(step.preconditions);
    acc.branches.extend(step.branches);
    acc.radii = step.radii;
    acc.uncertified = step.uncertified;
    if step.diagnostic.is_some() {
        acc.diagnostic = step.diagnostic;
    }
}

/// Checks every pair of sections on its nonempty overlap.
pub fn check_compatibility(assign: &SectionAssignment, params: &EquivParams) -> Result<Vec<CheckResult>> {
    let s = assign.sections();
    let mut out = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let w = assign.cover().overlap(i, j);
            if !w.is_empty() {
                out.push(equivalent(&restrict(&s[i], w)?, &restrict(&s[j], w)?, &params.localized(w))?);
            }
        }
    }
    Ok(out)
}

/// Left fold of [`glue_pair`] over the pieces. A piece that does not yet
/// meet the glued part is deferred until it does.
pub fn glue_finite(assign: &SectionAssignment, params: &EquivParams) -> Result<GlueOutcome> {
    let pairwise = check_compatibility(assign, params)?;
    if let Some(bad) = pairwise.iter().find(|r| !r.is_verified()) {
        return Err(Error::SectionsDisagree(format!(
            "pairwise overlap check {} with residual {:e}",
            bad.status, bad.max_residual
        )));
    }
    let mut pending: Vec<&Boehmian> = assign.sections().iter().collect();
    let mut out = GlueOutcome::trivial(pending.remove(0).clone());
    out.preconditions = pairwise;
    while !pending.is_empty() {
        let before = pending.len();
        let mut deferred = Vec::new();
        for s in pending {
            let acc = &out.boehmian;
            if s.domain().is_subset_of(acc.domain()) {
                out.preconditions.push(overlap_precondition(acc, s, params)?);
            } else if acc.domain().intersection(s.domain()).is_empty() {
                deferred.push(s);
            } else {
                let step = glue_pair(acc, s, params)?;
                append(&mut out, step);
            }
        }
        if deferred.len() == before {
            return invalid("cover pieces do not connect to the glued part");
        }
        pending = deferred;
    }
    Ok(out)
}

/// Gluing along partial unions `V_k = U_1 ∪ … ∪ U_k` up to depth `n_max`.
/// The result is `[(g_n)]` with `g_n` the continuous extension of
/// `G_n ∗ φ_n` from `erode(V_n, ε_n)`; past depth `n_max` the last partial
/// glue is reused.
pub fn glue_countable(assign: &SectionAssignment, n_max: usize, params: &EquivParams) -> Result<GlueOutcome> {
    params.validate()?;
    let s = assign.sections();
    if n_max == 0 || n_max > s.len() {
        return invalid(format!("depth must lie in 1..={}", s.len()));
    }
    if n_max == 1 {
        return Ok(GlueOutcome::trivial(s[0].clone()));
    }
    let mut out = GlueOutcome::trivial(s[0].clone());
    let mut partial = vec![s[0].clone()];
    for sk in &s[1..n_max] {
        let acc = partial.last().expect("nonempty").clone();
        if sk.domain().is_subset_of(acc.domain()) {
            out.preconditions.push(overlap_precondition(&acc, sk, params)?);
            partial.push(acc);
        } else {
            let step = glue_pair(&acc, sk, params)?;
            out.preconditions.extend(step.preconditions);
            out.branches.extend(step.branches);
            partial.push(step.boehmian);
        }
    }
    let union = partial.last().expect("nonempty").domain().clone();
    if !union.is_bounded() {
        return Err(Error::Unsupported("countable gluing needs a bounded union".into()));
    }
    let eps1 = 0.25 * partial[0].domain().min_component_len();
    let radius = |n: usize| {
        let v = partial[(n - 1).min(n_max - 1)].domain();
        (eps1 * 0.5f64.powi(n as i32 - 1)).min(0.25 * v.min_component_len())
    };
    let mut head = Vec::with_capacity(params.horizon);
    let mut radii = Vec::with_capacity(params.horizon);
    for n in 1..=params.horizon {
        let eps = radius(n);
        let pick = pick_regularizer(&partial[(n - 1).min(n_max - 1)], eps, params)?;
        match pick.certified {
            None => out.uncertified.push(n),
            Some(false) => {
                out.diagnostic
                    .get_or_insert_with(|| format!("regularizer search failed at n = {n}"));
            }
            Some(true) => {}
        }
        head.push(pick.psi);
        radii.push(eps);
    }
    out.radii = radii.clone();
    let last_eps = radii[radii.len() - 1];
    let witness = params.witness.clone().unwrap_or_default();
    let p = params.clone();
    let dom = union.clone();
    let rep = FundamentalSeq::new(union, Tag::Glued, move |n| {
        let k = (n - 1).min(n_max - 1);
        let g = &partial[k];
        let (eps, phi) = if n <= head.len() {
            (radii[n - 1], head[n - 1].clone())
        } else {
            let eps = last_eps * 0.5f64.powi((n - head.len()) as i32);
            let m = witness
                .first_below(eps, 400)
                .ok_or_else(|| Error::NoRegularizerFound(format!("no witness radius below {eps}")))?;
            (eps, witness.get(m))
        };
        let inner = g.domain().erode(eps)?;
        let c = convolve_onto(&g.term(realization_index(n, &p))?, &phi, &inner)?;
        c.extend_continuously(&dom)
    });
    out.boehmian = Boehmian::new(rep, params.witness.clone().unwrap_or_default());
    Ok(out)
}

/// `equivalent(restrict(H, piece), section)` for every listed pair.
pub fn check_restrictions(h: &Boehmian, sections: &[Boehmian], params: &EquivParams) -> Result<Vec<CheckResult>> {
    sections
        .iter()
        .map(|s| equivalent(&restrict(h, s.domain())?, s, &params.localized(s.domain())))
        .collect()
}

/// Local and global halves of a locality check.
#[derive(Debug, Clone)]
pub struct LocalityReport {
    /// `F - G ∼ 0` on each piece.
    pub local: Vec<CheckResult>,
    /// `F ∼ G` on the global compacts under the product witness.
    pub global: CheckResult,
    /// The common status when both halves agree, inconclusive otherwise.
    pub verdict: CheckResult,
}

fn intersect_compacts(a: &CompactSet, b: &CompactSet) -> Result<CompactSet> {
    let mut out = Vec::new();
    for x in a.intervals() {
        for y in b.intervals() {
            let (lo, hi) = (x.lo.max(y.lo), x.hi.min(y.hi));
            if lo <= hi {
                out.push((lo, hi));
            }
        }
    }
    CompactSet::new(out)
}

/// Splits `k` into compacts `k_j` with `k_j` inside piece `j`, using the
/// largest halving of a quarter of the shortest piece for which the eroded
/// pieces still cover `k`.
pub fn split_compact(k: &CompactSet, cover: &Cover) -> Result<Vec<(usize, CompactSet)>> {
    let mut r = 0.25 * cover.pieces().iter().map(OpenSet::min_component_len).fold(f64::INFINITY, f64::min);
    for _ in 0..60 {
        let eroded: Vec<OpenSet> = cover.pieces().iter().map(|p| p.erode(r)).collect::<Result<_>>()?;
        let covered = eroded.iter().fold(OpenSet::empty(), |acc, e| acc.union(e));
        if is_compactly_contained(k, &covered) {
            let mut parts = Vec::new();
            for (j, e) in eroded.iter().enumerate() {
                if e.is_empty() {
                    continue;
                }
                let kj = intersect_compacts(k, &e.closure()?)?;
                if !kj.is_empty() {
                    parts.push((j, kj));
                }
            }
            return Ok(parts);
        }
        r *= 0.5;
    }
    invalid("the cover does not cover the compact")
}

/// `F|_{U_α} = G|_{U_α}` for every piece implies `F = G`: both sides are checked.
pub fn verify_locality(f: &Boehmian, g: &Boehmian, cover: &Cover, params: &EquivParams) -> Result<LocalityReport> {
    if cover.union() != f.domain() || cover.union() != g.domain() {
        return invalid("the cover does not match the domain");
    }
    let d = sub(f, g)?;
    let h = d.h()?;
    let mut local = Vec::with_capacity(cover.len());
    for p in cover.pieces() {
        let z = zero(p, h)?;
        local.push(equivalent(&restrict(&d, p)?, &z, &params.localized(p))?);
    }
    let ks = params.compacts_for(f.domain())?;
    let base = params.witness.clone().unwrap_or_else(|| d.witness().clone());
    let mut parts = Vec::with_capacity(ks.len());
    for k in ks {
        let count = split_compact(&k, cover)?.len().max(1);
        let mut w = base.clone();
        for _ in 1..count {
            w = DeltaSeq::Product(Box::new(w), Box::new(base.clone()));
        }
        let p = params.clone().with_compacts(vec![k]).with_witness(w);
        parts.push(equivalent(f, g, &p)?);
    }
    let global = CheckResult::combine(&parts);
    let local_all = CheckResult::combine(&local);
    let mut verdict = CheckResult::combine(&[local_all.clone(), global.clone()]);
    if local_all.status != global.status {
        verdict.status = Status::Inconclusive;
    }
    Ok(LocalityReport { local, global, verdict })
}

/// `F` with nested opens `W ⊆ V ⊆ U = domain(F)`.
#[derive(Debug, Clone)]
pub struct NestedTriple {
    pub section: Boehmian,
    pub v: OpenSet,
    pub w: OpenSet,
}

fn exact_verdict(mismatch: Option<(f64, String)>, horizon: usize) -> CheckResult {
    match mismatch {
        None => CheckResult::new(Status::Verified, 0.0, 0.0, horizon),
        Some((x, note)) => CheckResult::new(Status::Refuted, 1.0, 0.0, horizon).with_witness(Witness {
            location: x,
            value: 1.0,
            note,
        }),
    }
}

/// Identity and composition of restrictions, compared bit for bit on the
/// listed representative indices.
pub fn check_presheaf_laws(cases: &[NestedTriple], indices: &[usize]) -> Result<CheckResult> {
    for c in cases {
        let u = c.section.domain();
        if !c.v.is_subset_of(u) || !c.w.is_subset_of(&c.v) {
            return invalid("restriction triple is not nested");
        }
        let same = restrict(&c.section, u)?;
        let via_v = restrict(&restrict(&c.section, &c.v)?, &c.w)?;
        let direct = restrict(&c.section, &c.w)?;
        for &n in indices {
            if same.term(n)? != c.section.term(n)? {
                return Ok(exact_verdict(Some((n as f64, "identity law".into())), n));
            }
            if via_v.term(n)? != direct.term(n)? {
                return Ok(exact_verdict(Some((n as f64, "composition law".into())), n));
            }
        }
    }
    Ok(exact_verdict(None, indices.iter().copied().max().unwrap_or(0)))
}

/// The same laws for plain continuous functions.
pub fn check_presheaf_laws_continuous(cases: &[(GridFunction, OpenSet, OpenSet)]) -> Result<CheckResult> {
    for (f, v, w) in cases {
        if f.restrict(f.domain())? != *f {
            return Ok(exact_verdict(Some((0.0, "identity law".into())), 1));
        }
        if f.restrict(v)?.restrict(w)? != f.restrict(w)? {
            return Ok(exact_verdict(Some((0.0, "composition law".into())), 1));
        }
    }
    Ok(exact_verdict(None, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boehmian::{dirac, from_continuous};

    fn iv(a: f64, b: f64) -> OpenSet {
        OpenSet::interval(a, b).unwrap()
    }

    fn params() -> EquivParams {
        EquivParams::default().with_horizon(8)
    }

    #[test]
    fn cover_overlaps() {
        let c = Cover::new(vec![iv(0.0, 2.0), iv(1.0, 3.0), iv(5.0, 6.0)]).unwrap();
        assert_eq!(c.union(), &OpenSet::new([(0.0, 3.0), (5.0, 6.0)]).unwrap());
        assert_eq!(c.overlap(0, 1), &iv(1.0, 2.0));
        assert_eq!(c.overlap(1, 0), c.overlap(0, 1));
        assert!(c.overlap(0, 2).is_empty());
        assert!(Cover::new(vec![]).is_err());
    }

    #[test]
    fn join_prefers_first_branch() {
        let a = GridFunction::constant(&iv(0.0, 1.0), 0.1, 1.0).unwrap();
        let b = GridFunction::constant(&iv(0.5, 2.0), 0.1, 2.0).unwrap();
        let j = join_branches(&a, &b).unwrap();
        assert_eq!(j.eval(0.7).unwrap(), 1.0);
        assert_eq!(j.eval(1.5).unwrap(), 2.0);
    }

    #[test]
    fn disjoint_pair_is_rejected() {
        let f = zero(&iv(0.0, 1.0), 0.01).unwrap();
        let g = zero(&iv(2.0, 3.0), 0.01).unwrap();
        assert!(matches!(glue_pair(&f, &g, &params()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn disagreeing_pair_is_rejected() {
        let f = from_continuous(GridFunction::constant(&iv(0.0, 2.0), 0.01, 0.0).unwrap());
        let g = from_continuous(GridFunction::constant(&iv(1.0, 3.0), 0.01, 1.0).unwrap());
        assert!(matches!(glue_pair(&f, &g, &params()), Err(Error::SectionsDisagree(_))));
    }

    #[test]
    fn constant_glue() {
        let f = from_continuous(GridFunction::constant(&iv(0.0, 2.0), 0.01, 3.0).unwrap());
        let g = from_continuous(GridFunction::constant(&iv(1.0, 3.0), 0.01, 3.0).unwrap());
        let out = glue_pair(&f, &g, &params()).unwrap();
        assert_eq!(out.status(), Status::Verified);
        let h = out.boehmian.term(8).unwrap();
        assert_eq!(h.domain(), &iv(0.0, 3.0));
        for (_, y) in h.samples() {
            assert!((y - 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn split_covers_compact() {
        let c = Cover::new(vec![iv(-1.0, 0.1), iv(-0.1, 1.0)]).unwrap();
        let k = CompactSet::interval(-0.5, 0.5).unwrap();
        let parts = split_compact(&k, &c).unwrap();
        assert_eq!(parts.len(), 2);
        for (j, kj) in &parts {
            assert!(is_compactly_contained(kj, &c.pieces()[*j]));
        }
    }

    #[test]
    fn presheaf_laws_on_dirac() {
        let seq = DeltaSeq::default();
        let d = dirac(0.05, &seq, &iv(-1.0, 1.0), 0.01).unwrap();
        let cases = vec![NestedTriple {
            section: d,
            v: iv(-0.7, 0.9),
            w: iv(-0.3, 0.35),
        }];
        assert!(check_presheaf_laws(&cases, &[1, 4, 9]).unwrap().is_verified());
    }
}
