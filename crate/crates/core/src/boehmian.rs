//! Fundamental sequences, the equivalence relation between them, and the
//! operations of the Boehmian space: sums, scalar multiples, restriction,
//! convolution with a test function and regularization.
//!
//! A [`Boehmian`] is one representative sequence plus a witness delta
//! sequence. Class membership is never materialized; it is decided by
//! [`equivalent`], a finite-horizon numeric procedure with a three-valued
//! verdict.
//!
//! Both checkers look at the last quarter of indices `n <= horizon` and at
//! `m_count` witness indices `m`, starting from the first `m` whose radius
//! fits inside `d(K, U^c)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::convolve::{argmax_on, convolve_onto, mollify_near, stalled, CheckResult, Status, Witness};
use crate::error::{invalid, Error, Result};
use crate::expr::Expr;
use crate::geometry::{compact_exhaustion, is_compactly_contained, CompactSet, OpenSet};
use crate::gridfn::GridFunction;
use crate::mollifier::{DeltaSeq, TestFunction};
use crate::quad::gl3;

/// How a representative sequence was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Constant,
    Dirac,
    Mollified,
    Glued,
    Extended,
    Custom,
}

type Generator = Arc<dyn Fn(usize) -> Result<GridFunction> + Send + Sync>;

/// A deterministic rule `n ↦ f_n` of continuous functions on a fixed domain.
/// Generated terms are memoized.
#[derive(Clone)]
pub struct FundamentalSeq {
    domain: OpenSet,
    tag: Tag,
    generator: Generator,
    cache: Arc<Mutex<HashMap<usize, GridFunction>>>,
}

impl fmt::Debug for FundamentalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FundamentalSeq")
            .field("domain", &self.domain)
            .field("tag", &self.tag)
            .finish()
    }
}

impl FundamentalSeq {
    pub fn new(
        domain: OpenSet,
        tag: Tag,
        generator: impl Fn(usize) -> Result<GridFunction> + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            tag,
            generator: Arc::new(generator),
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// The constant sequence `(f)`.
    pub fn constant(f: GridFunction) -> Self {
        Self::new(f.domain().clone(), Tag::Constant, move |_| Ok(f.clone()))
    }

    pub fn domain(&self) -> &OpenSet {
        &self.domain
    }

    pub fn tag(&self) -> Tag {
        self.tag
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tag = tag;
        self
    }

    /// `f_n` for `n >= 1`.
    pub fn get(&self, n: usize) -> Result<GridFunction> {
        if n == 0 {
            return invalid("sequences are indexed from 1");
        }
        if let Some(f) = self.cache.lock().expect("sequence cache").get(&n) {
            return Ok(f.clone());
        }
        let f = (self.generator)(n)?;
        if f.domain() != &self.domain {
            return Err(Error::Domain(format!("term {n} has the wrong domain")));
        }
        self.cache
            .lock()
            .expect("sequence cache")
            .insert(n, f.clone());
        Ok(f)
    }

    /// `(f_{p_n})` for an increasing index list; beyond the list the last index is repeated.
    pub fn subsequence(&self, indices: Vec<usize>) -> Result<FundamentalSeq> {
        if indices.is_empty() || indices.windows(2).any(|w| w[0] >= w[1]) || indices[0] == 0 {
            return invalid("subsequence indices must increase from 1");
        }
        let base = self.clone();
        Ok(FundamentalSeq::new(self.domain.clone(), self.tag, move |n| {
            let p = indices.get(n - 1).copied().unwrap_or(indices[indices.len() - 1]);
            base.get(p)
        }))
    }
}

/// A representative fundamental sequence plus a witness delta sequence.
#[derive(Debug, Clone)]
pub struct Boehmian {
    rep: FundamentalSeq,
    witness: DeltaSeq,
}

/// Finite-horizon parameters for [`equivalent`] and [`is_fundamental`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EquivParams {
    pub horizon: usize,
    pub tol: f64,
    /// Witness schedule; `None` uses the witnesses carried by the operands.
    pub witness: Option<DeltaSeq>,
    /// Compacts to test on; empty means one default compact per domain.
    pub compacts: Vec<CompactSet>,
    /// Number of witness indices `m` examined per compact.
    pub m_count: usize,
    /// Increases below this do not break monotonicity of a residual tail.
    pub noise: f64,
    /// Largest admissible regularizer radius for [`to_continuous_on`].
    pub max_radius: Option<f64>,
}

impl Default for EquivParams {
    fn default() -> Self {
        Self {
            horizon: 20,
            tol: 1e-3,
            witness: None,
            compacts: Vec::new(),
            m_count: 3,
            noise: 1e-6,
            max_radius: None,
        }
    }
}

impl EquivParams {
    pub fn with_compacts(mut self, k: Vec<CompactSet>) -> Self {
        self.compacts = k;
        self
    }

    pub fn with_witness(mut self, w: DeltaSeq) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 4 {
            return invalid("horizon must be at least 4");
        }
        if !(self.tol > 0.0) || !(self.noise >= 0.0) {
            return invalid("tolerances must be positive");
        }
        if self.m_count == 0 {
            return invalid("at least one witness index is needed");
        }
        if let Some(w) = &self.witness {
            w.validate()?;
        }
        Ok(())
    }

    /// Indices of the last quarter of `1..=horizon`, at least three of them.
    pub fn tail(&self) -> Vec<usize> {
        let q = (self.horizon / 4).max(3);
        (self.horizon + 1 - q..=self.horizon).collect()
    }

    /// The same parameters with only the compacts that sit inside `u`.
    pub fn localized(&self, u: &OpenSet) -> EquivParams {
        let mut p = self.clone();
        p.compacts.retain(|k| is_compactly_contained(k, u));
        p
    }

    /// The configured compacts, or a default compact of `u`.
    pub fn compacts_for(&self, u: &OpenSet) -> Result<Vec<CompactSet>> {
        let ks = if self.compacts.is_empty() {
            vec![default_compact(u)?]
        } else {
            self.compacts.clone()
        };
        for k in &ks {
            if !is_compactly_contained(k, u) {
                return invalid("test compact is not compactly contained in the domain");
            }
        }
        Ok(ks)
    }
}

/// Second set of the default exhaustion of `u`.
pub fn default_compact(u: &OpenSet) -> Result<CompactSet> {
    Ok(compact_exhaustion(u, 2)?.sets.remove(1))
}

/// Witness indices `m` used on `k`: the first `count` whose radius is below `d(k, U^c)`.
pub fn witness_indices(w: &DeltaSeq, u: &OpenSet, k: &CompactSet, count: usize) -> Result<Vec<usize>> {
    let d = u.distance_to_complement(k)?;
    let start = w
        .first_below(d, 200)
        .ok_or_else(|| Error::InvalidArgument("no witness radius fits the compact".into()))?;
    Ok((start..start + count).collect())
}

impl Boehmian {
    pub fn new(rep: FundamentalSeq, witness: DeltaSeq) -> Self {
        Self { rep, witness }
    }

    pub fn rep(&self) -> &FundamentalSeq {
        &self.rep
    }

    pub fn witness(&self) -> &DeltaSeq {
        &self.witness
    }

    pub fn domain(&self) -> &OpenSet {
        self.rep.domain()
    }

    pub fn tag(&self) -> Tag {
        self.rep.tag()
    }

    pub fn term(&self, n: usize) -> Result<GridFunction> {
        self.rep.get(n)
    }

    pub fn with_witness(mut self, w: DeltaSeq) -> Self {
        self.witness = w;
        self
    }

    /// Grid spacing of the representative.
    pub fn h(&self) -> Result<f64> {
        Ok(self.term(1)?.h())
    }
}

/// The class of the constant sequence `(f)`.
pub fn from_continuous(f: GridFunction) -> Boehmian {
    Boehmian::new(FundamentalSeq::constant(f), DeltaSeq::default())
}

/// The zero Boehmian on `u`.
pub fn zero(u: &OpenSet, h: f64) -> Result<Boehmian> {
    Ok(from_continuous(GridFunction::constant(u, h, 0.0)?))
}

/// `∫ hat_j(x) (x - c)^k dx` for the hat of node `j` of a piece, `k <= 2`.
fn hat_moment(xs: &[f64], j: usize, c: f64, k: i32) -> f64 {
    let mut m = 0.0;
    if j > 0 {
        let (l, r) = (xs[j - 1], xs[j]);
        m += gl3(l, r, |x| (x - l) / (r - l) * (x - c).powi(k));
    }
    if j + 1 < xs.len() {
        let (l, r) = (xs[j], xs[j + 1]);
        m += gl3(l, r, |x| (r - x) / (r - l) * (x - c).powi(k));
    }
    m
}

/// Weights on nodes `j-1, j, j+1` that leave the mass and first moment of
/// the interpolant unchanged and raise its second moment about `c` by one.
fn second_moment_stencil(xs: &[f64], j: usize, c: f64) -> Option<[f64; 3]> {
    let mut a = [[0.0; 3]; 3];
    for (col, node) in (j - 1..=j + 1).enumerate() {
        for (k, row) in a.iter_mut().enumerate() {
            row[col] = hat_moment(xs, node, c, k as i32);
        }
    }
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d.abs() < f64::MIN_POSITIVE {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, o) in out.iter_mut().enumerate() {
        let mut m = a;
        for (k, row) in m.iter_mut().enumerate() {
            row[col] = if k == 2 { 1.0 } else { 0.0 };
        }
        *o = det(&m) / d;
    }
    Some(out)
}

/// Nodal values representing `x ↦ φ(x - c)` on the grid of `u`.
///
/// Starts from the hat-function projection `f_i = ∫ φ(x - c) hat_i / ∫ hat_i`,
/// which keeps the mass and first moment of the interpolant exact, then
/// corrects three nodes around `c` so that the interpolant's second moment
/// about `c` equals `∫ y² φ(y) dy`. Below the grid spacing this makes the
/// neighbours of `c` slightly negative. Representatives of narrower bumps
/// then differ only at second order in the radius, and convolving the
/// interpolant with a smooth kernel matches the kernel to the same order.
pub fn project_bump(phi: &TestFunction, c: f64, u: &OpenSet, h: f64) -> Result<GridFunction> {
    let s = phi.radius();
    let zero = GridFunction::constant(u, h, 0.0)?;
    let target = phi.integrate_against(-s, s, |y| y * y);
    let mut pieces = Vec::with_capacity(zero.pieces().len());
    for mut p in zero.pieces().to_vec() {
        let n = p.xs.len();
        let a = p.xs.partition_point(|&t| t < c - s).saturating_sub(1);
        let b = (p.xs.partition_point(|&t| t <= c + s) + 1).min(n);
        for i in a..b {
            let mut num = 0.0;
            let mut den = 0.0;
            if i > 0 {
                let (l, m) = (p.xs[i - 1], p.xs[i]);
                let w = m - l;
                num += phi.integrate_against(l - c, m - c, |u| (u + c - l) / w);
                den += 0.5 * w;
            }
            if i + 1 < n {
                let (m, r) = (p.xs[i], p.xs[i + 1]);
                let w = r - m;
                num += phi.integrate_against(m - c, r - c, |u| (r - u - c) / w);
                den += 0.5 * w;
            }
            p.ys[i] = num / den;
        }
        if b > a && n >= 3 && p.lo() < c && c < p.hi() {
            let near = p.xs.partition_point(|&t| t < c);
            let j = if near > 0 && (c - p.xs[near - 1]) <= (p.xs[near.min(n - 1)] - c) {
                near - 1
            } else {
                near.min(n - 1)
            };
            let j = j.clamp(1, n - 2);
            if let Some(w) = second_moment_stencil(&p.xs, j, c) {
                let current: f64 = (a..b).map(|i| p.ys[i] * hat_moment(&p.xs, i, c, 2)).sum();
                let beta = target - current;
                for (k, wk) in w.iter().enumerate() {
                    p.ys[j - 1 + k] += beta * wk;
                }
            }
        }
        p.anchor_lo[1] = p.ys[0];
        p.anchor_hi[1] = p.ys[n - 1];
        pieces.push(p);
    }
    GridFunction::from_pieces(u.clone(), h, pieces)
}

/// The delta Boehmian at `center`: `f_n = δ_n(· - center)` projected on the grid.
pub fn dirac(center: f64, seq: &DeltaSeq, u: &OpenSet, h: f64) -> Result<Boehmian> {
    if !u.contains(center) {
        return invalid(format!("center {center} lies outside the domain"));
    }
    seq.validate()?;
    GridFunction::constant(u, h, 0.0)?;
    let s = seq.clone();
    let dom = u.clone();
    let rep = FundamentalSeq::new(u.clone(), Tag::Dirac, move |n| {
        project_bump(&s.get(n), center, &dom, h)
    });
    Ok(Boehmian::new(rep, DeltaSeq::default()))
}

/// `f_n = g ∗ δ_n` on `u`, for `g` defined on a neighbourhood of `u` wide
/// enough for every `δ_n`.
pub fn mollified(g: GridFunction, seq: &DeltaSeq, u: &OpenSet) -> Result<Boehmian> {
    seq.validate()?;
    if !u.is_subset_of(&g.domain().erode(seq.radius(1))?) {
        return invalid("the mollified function must be defined around the domain");
    }
    let s = seq.clone();
    let dom = u.clone();
    let rep = FundamentalSeq::new(u.clone(), Tag::Mollified, move |n| convolve_onto(&g, &s.get(n), &dom));
    Ok(Boehmian::new(rep, DeltaSeq::default()))
}

/// `f_n = expr + n^power · drift`, sampled on `u`.
pub fn custom_expression(expr: Expr, drift: Option<(Expr, i32)>, u: &OpenSet, h: f64) -> Result<Boehmian> {
    GridFunction::from_fn(u, h, |x| expr.eval(x))?;
    let dom = u.clone();
    let rep = FundamentalSeq::new(u.clone(), Tag::Custom, move |n| {
        let scale = drift.as_ref().map(|(_, p)| (n as f64).powi(*p));
        GridFunction::from_fn(&dom, h, |x| {
            let base = expr.eval(x);
            match (&drift, scale) {
                (Some((d, _)), Some(c)) => base + c * d.eval(x),
                _ => base,
            }
        })
    });
    Ok(Boehmian::new(rep, DeltaSeq::default()))
}

fn same_domain(f: &Boehmian, g: &Boehmian) -> Result<()> {
    if f.domain() != g.domain() {
        return invalid("Boehmians live on different domains");
    }
    Ok(())
}

/// `[(f_n)] + [(g_n)] = [(f_n + g_n)]`, witnessed by the product of witnesses.
pub fn add(f: &Boehmian, g: &Boehmian) -> Result<Boehmian> {
    same_domain(f, g)?;
    let (a, b) = (f.rep.clone(), g.rep.clone());
    let rep = FundamentalSeq::new(f.domain().clone(), Tag::Custom, move |n| a.get(n)?.add(&b.get(n)?));
    let w = DeltaSeq::Product(Box::new(f.witness.clone()), Box::new(g.witness.clone()));
    Ok(Boehmian::new(rep, w))
}

/// `r [(f_n)] = [(r f_n)]`.
pub fn scale(r: f64, f: &Boehmian) -> Boehmian {
    let a = f.rep.clone();
    let rep = FundamentalSeq::new(f.domain().clone(), Tag::Custom, move |n| Ok(a.get(n)?.scale(r)));
    Boehmian::new(rep, f.witness.clone())
}

/// `F - G`.
pub fn sub(f: &Boehmian, g: &Boehmian) -> Result<Boehmian> {
    add(f, &scale(-1.0, g))
}

/// `F|_V = [(f_n|_V)]`.
pub fn restrict(f: &Boehmian, v: &OpenSet) -> Result<Boehmian> {
    if !v.is_subset_of(f.domain()) {
        return invalid("restriction target is not a subset of the domain");
    }
    if v.is_empty() {
        return invalid("restriction to the empty set");
    }
    let a = f.rep.clone();
    let dom = v.clone();
    let rep = FundamentalSeq::new(v.clone(), f.tag(), move |n| a.get(n)?.restrict(&dom));
    Ok(Boehmian::new(rep, f.witness.clone()))
}

/// `F ∗ φ = [(f_n ∗ φ)]` on `erode(U, eps)`, for `s(φ) < eps`.
pub fn conv_boehmian(f: &Boehmian, phi: &TestFunction, eps: f64) -> Result<Boehmian> {
    if !(phi.radius() < eps) {
        return Err(Error::PreconditionViolated(format!(
            "support radius {} must be below {eps}",
            phi.radius()
        )));
    }
    let target = f.domain().erode(eps)?;
    if target.is_empty() {
        return Err(Error::DomainCollapsed(format!("eroding by {eps} leaves nothing")));
    }
    let a = f.rep.clone();
    let phi = phi.clone();
    let dom = target.clone();
    let rep = FundamentalSeq::new(target, f.tag(), move |n| convolve_onto(&a.get(n)?, &phi, &dom));
    Ok(Boehmian::new(rep, f.witness.clone()))
}

fn tail_settled(r: &[f64], noise: f64) -> bool {
    r.windows(2).all(|w| w[1] <= w[0] + noise)
}

/// `(f_n - g_n) ∗ φ_m → 0` uniformly on each compact, for each examined `m`.
///
/// Verified when every tail residual at the horizon is below `tol` and the
/// tails are nonincreasing (up to `noise`); refuted when some tail has
/// stalled at or above `10 tol`; inconclusive otherwise.
pub fn equivalent(f: &Boehmian, g: &Boehmian, params: &EquivParams) -> Result<CheckResult> {
    same_domain(f, g)?;
    params.validate()?;
    let u = f.domain();
    let w = params
        .witness
        .clone()
        .unwrap_or_else(|| DeltaSeq::Product(Box::new(f.witness.clone()), Box::new(g.witness.clone())));
    let tail = params.tail();
    let diffs = tail
        .iter()
        .map(|&n| f.term(n)?.sub(&g.term(n)?))
        .collect::<Result<Vec<_>>>()?;
    let mut parts = Vec::new();
    for k in params.compacts_for(u)? {
        for m in witness_indices(&w, u, &k, params.m_count)? {
            let phi = w.get(m);
            let mut r = Vec::with_capacity(tail.len());
            let mut last_conv = None;
            for d in &diffs {
                let c = mollify_near(d, &phi, &k)?;
                r.push(c.sup_norm_on(&k)?);
                last_conv = Some(c);
            }
            let last = *r.last().expect("nonempty tail");
            let status = if last < params.tol && tail_settled(&r, params.noise) {
                Status::Verified
            } else if r.iter().all(|&x| x >= 10.0 * params.tol) && stalled(&r) {
                Status::Refuted
            } else {
                Status::Inconclusive
            };
            let mut part = CheckResult::new(status, last, params.tol, params.horizon).with_residuals(r);
            if let Some((x, y)) = last_conv.as_ref().and_then(|c| argmax_on(c, &k)) {
                part = part.with_witness(Witness {
                    location: x,
                    value: y,
                    note: format!("m = {m}, radius {:e}", phi.radius()),
                });
            }
            parts.push(part);
        }
    }
    Ok(CheckResult::combine(&parts))
}

/// Uniform Cauchy test of `(f_n ∗ φ_m)` on each compact over the tail indices.
///
/// Verified when the largest pairwise tail difference is below `tol`;
/// refuted when it is at least `10 tol` and successive differences have
/// stopped shrinking; inconclusive otherwise.
pub fn is_fundamental(s: &FundamentalSeq, witness: &DeltaSeq, params: &EquivParams) -> Result<CheckResult> {
    params.validate()?;
    let u = s.domain();
    let w = params.witness.clone().unwrap_or_else(|| witness.clone());
    let tail = params.tail();
    let terms = tail.iter().map(|&n| s.get(n)).collect::<Result<Vec<_>>>()?;
    let mut parts = Vec::new();
    for k in params.compacts_for(u)? {
        for m in witness_indices(&w, u, &k, params.m_count)? {
            let phi = w.get(m);
            let convs = terms
                .iter()
                .map(|f| mollify_near(f, &phi, &k))
                .collect::<Result<Vec<_>>>()?;
            parts.push(cauchy_verdict(&convs, &k, params, m)?);
        }
    }
    Ok(CheckResult::combine(&parts))
}

pub(crate) fn cauchy_verdict(
    convs: &[GridFunction],
    k: &CompactSet,
    params: &EquivParams,
    m: usize,
) -> Result<CheckResult> {
    let mut pair_max: f64 = 0.0;
    let mut witness = None;
    for i in 0..convs.len() {
        for j in i + 1..convs.len() {
            let d = convs[j].sub(&convs[i])?;
            let r = d.sup_norm_on(k)?;
            if r >= pair_max {
                pair_max = r;
                witness = argmax_on(&d, k);
            }
        }
    }
    let successive = convs
        .windows(2)
        .map(|p| p[1].sub(&p[0])?.sup_norm_on(k))
        .collect::<Result<Vec<_>>>()?;
    let status = if pair_max < params.tol {
        Status::Verified
    } else if pair_max >= 10.0 * params.tol && stalled(&successive) {
        Status::Refuted
    } else {
        Status::Inconclusive
    };
    let mut out = CheckResult::new(status, pair_max, params.tol, params.horizon).with_residuals(successive);
    if let Some((x, y)) = witness {
        out = out.with_witness(Witness {
            location: x,
            value: y,
            note: format!("m = {m}"),
        });
    }
    Ok(out)
}

/// `is_fundamental` on the representative of `f` with its own witness.
pub fn check_fundamental(f: &Boehmian, params: &EquivParams) -> Result<CheckResult> {
    is_fundamental(&f.rep, &f.witness, params)
}

/// A continuous realization `g ≈ F ∗ ψ` on a compact.
#[derive(Debug, Clone)]
pub struct Regularized {
    pub psi: TestFunction,
    /// `f_H ∗ ψ` on a neighbourhood of the compact, `H` the horizon.
    pub g: GridFunction,
    pub m: usize,
    pub check: CheckResult,
}

pub(crate) fn regularize_on(
    f: &Boehmian,
    k: &CompactSet,
    margin: f64,
    params: &EquivParams,
) -> Result<Regularized> {
    params.validate()?;
    let w = params.witness.clone().unwrap_or_else(|| f.witness.clone());
    let cap = params.max_radius.unwrap_or(f64::INFINITY).min(margin);
    let start = w
        .first_below(cap, 200)
        .ok_or_else(|| Error::NoRegularizerFound(format!("no witness radius below {cap}")))?;
    let tail = params.tail();
    let terms = tail.iter().map(|&n| f.term(n)).collect::<Result<Vec<_>>>()?;
    let mut last_check = None;
    for m in start..start + params.m_count {
        let psi = w.get(m);
        let convs = terms
            .iter()
            .map(|t| mollify_near(t, &psi, k))
            .collect::<Result<Vec<_>>>()?;
        let check = cauchy_verdict(&convs, k, params, m)?;
        if check.is_verified() {
            let g = convs.into_iter().last().expect("nonempty tail");
            return Ok(Regularized { psi, g, m, check });
        }
        last_check = Some(check);
    }
    Err(Error::NoRegularizerFound(format!(
        "no Cauchy regularizer among {} candidates (last residual {:e})",
        params.m_count,
        last_check.map_or(f64::NAN, |c| c.max_residual)
    )))
}

/// Picks `ψ` from the witness with `s(ψ) < d(K, U^c) / 2` such that
/// `(f_n ∗ ψ)` is uniformly Cauchy on `K`, and returns the horizon term.
pub fn to_continuous_on(f: &Boehmian, k: &CompactSet, params: &EquivParams) -> Result<Regularized> {
    if !is_compactly_contained(k, f.domain()) {
        return invalid("K is not compactly contained in the domain");
    }
    let d = f.domain().distance_to_complement(k)?;
    regularize_on(f, k, 0.5 * d, params)
}

/// A test function `φ` with `s(φ) < eps` for which `F ∗ φ` is continuous on
/// the closure of `erode(U, eps)` (bounded `U` only).
pub fn regularizing_mollifier(f: &Boehmian, eps: f64, params: &EquivParams) -> Result<Regularized> {
    let u = f.domain();
    if !u.is_bounded() {
        return Err(Error::Unsupported("regularization on unbounded sets".into()));
    }
    let inner = u.erode(eps)?;
    if inner.is_empty() {
        return Err(Error::DomainCollapsed(format!("eroding by {eps} leaves nothing")));
    }
    let k = inner.closure()?;
    regularize_on(f, &k, eps, params)
}

/// Extends `F ∗ φ_n` from `U_n` to `U`, where `φ_n` is the first witness
/// term with radius below `ε_n`. Past the end of the lists `U_n` stays at
/// the last set and `ε_n` keeps halving. `F ∗ φ_n` is realized from the
/// horizon term.
pub fn rebuild_from_exhaustion(
    f: &Boehmian,
    opens: &[OpenSet],
    radii: &[f64],
    params: &EquivParams,
) -> Result<FundamentalSeq> {
    let u = f.domain().clone();
    if opens.is_empty() || opens.len() != radii.len() {
        return invalid("one radius per open set is required");
    }
    for (i, o) in opens.iter().enumerate() {
        if o.is_empty() || !o.is_subset_of(&u) {
            return invalid("cover sets must be nonempty subsets of the domain");
        }
        let c = o.closure()?;
        let next = opens.get(i + 1).unwrap_or(&u);
        if !is_compactly_contained(&c, next) {
            return invalid("closure of each set must be compactly inside the next");
        }
        let d = u.distance_to_complement(&c)?;
        if !(radii[i] > 0.0 && radii[i] < d) {
            return invalid("each radius must lie below the margin of its set");
        }
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return invalid("radii must decrease");
    }
    let w = params.witness.clone().unwrap_or_else(|| f.witness.clone());
    let horizon = params.horizon;
    let fh = f.clone();
    let opens = opens.to_vec();
    let radii = radii.to_vec();
    let dom = u.clone();
    Ok(FundamentalSeq::new(u, Tag::Extended, move |n| {
        let i = (n - 1).min(opens.len() - 1);
        let eps = radii[i] * 0.5f64.powi((n - 1 - i) as i32);
        let m = w
            .first_below(eps, 400)
            .ok_or_else(|| Error::NoRegularizerFound(format!("no witness radius below {eps}")))?;
        let c = convolve_onto(&fh.term(horizon)?, &w.get(m), &opens[i])?;
        c.extend_continuously(&dom)
    }))
}

/// JSON description of a Boehmian on a domain given by context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoehmianDescriptor {
    Constant {
        expr: Expr,
    },
    Dirac {
        center: f64,
        #[serde(default)]
        schedule: Option<DeltaSeq>,
    },
    Mollified {
        expr: Expr,
        #[serde(default)]
        schedule: Option<DeltaSeq>,
    },
    CustomExpression {
        expr: Expr,
        #[serde(default)]
        drift: Option<Expr>,
        #[serde(default)]
        power: i32,
    },
}

impl BoehmianDescriptor {
    pub fn build(&self, u: &OpenSet, h: f64) -> Result<Boehmian> {
        match self {
            BoehmianDescriptor::Constant { expr } => {
                Ok(from_continuous(GridFunction::from_fn(u, h, |x| expr.eval(x))?))
            }
            BoehmianDescriptor::Dirac { center, schedule } => {
                dirac(*center, &schedule.clone().unwrap_or_default(), u, h)
            }
            BoehmianDescriptor::Mollified { expr, schedule } => {
                let seq = schedule.clone().unwrap_or_default();
                let wide = u.dilate(seq.radius(1) * 1.01)?;
                let g = GridFunction::from_fn(&wide, h, |x| expr.eval(x))?;
                mollified(g, &seq, u)
            }
            BoehmianDescriptor::CustomExpression { expr, drift, power } => {
                custom_expression(expr.clone(), drift.clone().map(|d| (d, *power)), u, h)
            }
        }
    }
}
