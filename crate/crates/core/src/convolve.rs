//! Convolution of grid functions with test functions, and checkers for the
//! basic mollification estimates.
//!
//! `f ∗ φ` is computed exactly for the piecewise-linear interpolant of `f`:
//! on a cell `[t_i, t_{i+1}]` the integrand is a linear function times `φ`,
//! so each cell contributes `f_i m1 + f_{i+1} (m0 - m1)` with the cell moments
//! of `φ` over `[x - t_{i+1}, x - t_i]`. Lattice outputs whose window only
//! meets lattice cells use a cached stencil; everything else integrates the
//! moments directly. Products are applied one bump factor at a time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{is_compactly_contained, CompactSet, OpenSet};
use crate::gridfn::{component_nodes, lattice_index, GridFunction, Piece};
use crate::mollifier::{bump_stencil, DeltaSeq, TestFunction};

/// Three-valued outcome of a finite-horizon check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Refuted,
    Inconclusive,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        }
    }

    /// Conjunction: any refutation wins, then any inconclusive.
    pub fn and(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Refuted, _) | (_, Refuted) => Refuted,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Verified,
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a residual was observed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub location: f64,
    pub value: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub status: Status,
    pub max_residual: f64,
    pub bound: f64,
    pub witness: Option<Witness>,
    pub horizon: usize,
    /// Residual trace behind the verdict, in index order.
    pub residuals: Vec<f64>,
}

impl CheckResult {
    pub fn new(status: Status, max_residual: f64, bound: f64, horizon: usize) -> Self {
        Self {
            status,
            max_residual,
            bound,
            witness: None,
            horizon,
            residuals: Vec::new(),
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_residuals(mut self, r: Vec<f64>) -> Self {
        self.residuals = r;
        self
    }

    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn is_refuted(&self) -> bool {
        self.status == Status::Refuted
    }

    /// Folds several results into one: worst status, largest residual,
    /// and the witness of the first refuted part.
    pub fn combine(parts: &[CheckResult]) -> CheckResult {
        let mut out = CheckResult::new(Status::Verified, 0.0, 0.0, 0);
        for p in parts {
            out.status = out.status.and(p.status);
            out.max_residual = out.max_residual.max(p.max_residual);
            out.bound = out.bound.max(p.bound);
            out.horizon = out.horizon.max(p.horizon);
        }
        out.witness = parts
            .iter()
            .find(|p| p.is_refuted() && p.witness.is_some())
            .or_else(|| parts.iter().find(|p| p.witness.is_some()))
            .and_then(|p| p.witness.clone());
        out
    }
}

/// `f ∗ φ` on `erode(domain(f), s(φ))`.
pub fn convolve(f: &GridFunction, phi: &TestFunction) -> Result<GridFunction> {
    let target = f.domain().erode(phi.radius())?;
    if target.is_empty() {
        return Err(Error::DomainCollapsed(format!(
            "eroding the domain by {} leaves nothing",
            phi.radius()
        )));
    }
    convolve_onto(f, phi, &target)
}

/// `f ∗ φ` on an open `target ⊆ erode(domain(f), s(φ))`.
pub fn convolve_onto(f: &GridFunction, phi: &TestFunction, target: &OpenSet) -> Result<GridFunction> {
    let s = phi.radius();
    let u = f.domain();
    if target.is_empty() {
        return Err(Error::DomainCollapsed("empty convolution target".into()));
    }
    if !target.is_subset_of(&u.erode(s)?) {
        return Err(Error::InvalidArgument(
            "convolution target leaves the eroded domain".into(),
        ));
    }
    let radii = phi.sorted_radii();
    let total: f64 = radii.iter().sum();
    let exact = (s - total).abs() <= 1e-12 * s;
    // only the part of f that the windows can reach
    let reach = target.dilate(s)?.intersection(u);
    let mut g = if reach == *u { f.clone() } else { f.restrict(&reach)? };
    let mut used = 0.0;
    for (i, &r) in radii.iter().enumerate() {
        used += r;
        let last = i + 1 == radii.len();
        let dom = if last && exact {
            target.clone()
        } else {
            let rest = s - used;
            let widened = if rest > 0.0 { target.dilate(rest)? } else { target.clone() };
            u.erode(used)?.intersection(&widened)
        };
        if dom.is_empty() {
            return Err(Error::DomainCollapsed("intermediate convolution domain is empty".into()));
        }
        g = convolve_bump_onto(&g, r, &dom);
    }
    if !exact {
        g = g.restrict(target)?;
    }
    Ok(g)
}

struct PieceIndex<'a> {
    piece: &'a Piece,
    lat: Vec<Option<i64>>,
    // prefix count of irregular cells: irregular[i] = #irregular among cells < i
    irregular: Vec<usize>,
}

impl<'a> PieceIndex<'a> {
    fn new(piece: &'a Piece, h: f64) -> Self {
        let lat: Vec<Option<i64>> = piece.xs.iter().map(|&x| lattice_index(x, h)).collect();
        let mut irregular = Vec::with_capacity(lat.len());
        let mut acc = 0;
        irregular.push(0);
        for w in lat.windows(2) {
            let regular = matches!((w[0], w[1]), (Some(a), Some(b)) if b == a + 1);
            acc += usize::from(!regular);
            irregular.push(acc);
        }
        Self {
            piece,
            lat,
            irregular,
        }
    }

    fn cells_regular(&self, ia: usize, ib: usize) -> bool {
        self.irregular[ib + 1] == self.irregular[ia]
    }
}

fn convolve_bump_onto(f: &GridFunction, eps: f64, target: &OpenSet) -> GridFunction {
    let h = f.h();
    let st = bump_stencil(eps, h);
    let phi = crate::mollifier::standard_bump(eps).expect("positive radius");
    let m2 = phi.integrate_against(-eps, eps, |y| y * y);
    let indexes: Vec<PieceIndex> = f.pieces().iter().map(|p| PieceIndex::new(p, h)).collect();
    let mut nodes = Vec::with_capacity(target.intervals().len());
    for iv in target.intervals() {
        let mid = 0.5 * (iv.lo + iv.hi);
        let idx = indexes
            .iter()
            .find(|ix| ix.piece.lo() <= mid && mid <= ix.piece.hi())
            .expect("target component inside a piece");
        let xs = component_nodes(*iv, h);
        let ys = xs
            .iter()
            .map(|&x| subgrid_at(idx.piece, eps, m2, x).unwrap_or_else(|| convolve_at(idx, &phi, &st, eps, h, x)))
            .collect();
        nodes.push((xs, ys));
    }
    GridFunction::from_node_lists(target.clone(), h, nodes)
}

/// A bump narrower than both cells around a node only sees the kink there.
/// Sampling the exact convolution would charge the kink's first-order peak
/// to a whole hat; instead the node receives the kink correction's true mass
/// `Δslope · ∫ y² φ / 2` spread over the hat, which is second order in `eps`.
fn subgrid_at(p: &Piece, eps: f64, m2: f64, x: f64) -> Option<f64> {
    let i = p.xs.binary_search_by(|t| t.total_cmp(&x)).ok()?;
    if i == 0 || i + 1 >= p.xs.len() {
        return None;
    }
    let (l, c, r) = (p.xs[i - 1], p.xs[i], p.xs[i + 1]);
    if c - l <= eps || r - c <= eps {
        return None;
    }
    let kink = (p.ys[i + 1] - p.ys[i]) / (r - c) - (p.ys[i] - p.ys[i - 1]) / (c - l);
    Some(p.ys[i] + 0.5 * kink * m2 / (0.5 * (r - l)))
}

fn convolve_at(
    ix: &PieceIndex,
    phi: &TestFunction,
    st: &crate::mollifier::Stencil,
    eps: f64,
    h: f64,
    x: f64,
) -> f64 {
    let p = ix.piece;
    let lo_w = (x - eps).max(p.lo());
    let hi_w = (x + eps).min(p.hi());
    let n = p.xs.len();
    let ia = p.xs.partition_point(|&t| t <= lo_w).saturating_sub(1).min(n - 2);
    let ib = p.xs.partition_point(|&t| t < hi_w).saturating_sub(1).min(n - 2).max(ia);
    let k = lattice_index(x, h);
    if let Some(k) = k {
        if ix.cells_regular(ia, ib) {
            let mut acc = 0.0;
            for i in ia..=ib + 1 {
                let ki = ix.lat[i].expect("regular node");
                acc += p.ys[i] * st.weight(k - ki);
            }
            return acc;
        }
    }
    let mut acc = 0.0;
    for i in ia..=ib {
        let (t0, t1) = (p.xs[i], p.xs[i + 1]);
        let (m0, m1) = match (k, ix.lat[i], ix.lat[i + 1]) {
            (Some(k), Some(a), Some(b)) if b == a + 1 => st.moments(k - a),
            _ => phi.cell_moments(x - t1, x - t0),
        };
        acc += p.ys[i] * m1 + p.ys[i + 1] * (m0 - m1);
    }
    acc
}

/// `f ∗ φ` on an open neighbourhood of `k`. Requires `s(φ) < d(k, U^c)`.
pub fn mollify_near(f: &GridFunction, phi: &TestFunction, k: &CompactSet) -> Result<GridFunction> {
    let u = f.domain();
    let s = phi.radius();
    let d = u.distance_to_complement(k)?;
    if !(s < d) {
        return Err(Error::PreconditionViolated(format!(
            "support radius {s} does not fit inside margin {d}"
        )));
    }
    let pad = if d.is_finite() { 0.5 * (d - s) } else { f.h() };
    let target = k.neighborhood(pad)?.intersection(&u.erode(s)?);
    convolve_onto(f, phi, &target)
}

/// `sup_K |f - g|` for functions whose domains both contain `K`.
pub fn sup_diff_on(f: &GridFunction, g: &GridFunction, k: &CompactSet) -> Result<f64> {
    if f.domain() == g.domain() {
        return f.sub(g)?.sup_norm_on(k);
    }
    let common = f.domain().intersection(g.domain());
    let a = f.restrict(&common)?;
    let b = g.restrict(&common)?;
    a.sub(&b)?.sup_norm_on(k)
}

/// Location and value of the largest `|f|` on `k`.
pub fn argmax_on(f: &GridFunction, k: &CompactSet) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for (x, y) in f.samples() {
        if k.contains(x) && best.is_none_or(|b| y.abs() > b.1.abs()) {
            best = Some((x, y));
        }
    }
    best
}

/// Default quadrature slack for inequality checks.
pub const TOL_QUAD: f64 = 1e-6;

/// `‖f ∗ φ‖ on K^{-ε}` against `‖f‖_K ‖φ‖_1`.
pub fn check_young(f: &GridFunction, phi: &TestFunction, k: &CompactSet, eps: f64) -> Result<CheckResult> {
    check_young_with(f, phi, k, eps, TOL_QUAD)
}

pub fn check_young_with(
    f: &GridFunction,
    phi: &TestFunction,
    k: &CompactSet,
    eps: f64,
    tol_quad: f64,
) -> Result<CheckResult> {
    if !(phi.radius() < eps) {
        return Err(Error::PreconditionViolated(format!(
            "support radius {} must be below {eps}",
            phi.radius()
        )));
    }
    let inner = k.erode(eps)?;
    if inner.is_empty() {
        return Err(Error::DomainCollapsed("K eroded by eps is empty".into()));
    }
    let interior = OpenSet::new(k.intervals().iter().map(|iv| (iv.lo, iv.hi)))?;
    let fk = f.restrict(&interior)?;
    let conv = convolve_onto(&fk, phi, &inner)?;
    let closure = inner.closure()?;
    let lhs = conv.sup_norm_on(&closure)?;
    let rhs = f.sup_norm_on(k)? * phi.mass();
    let status = if lhs <= rhs + tol_quad {
        Status::Verified
    } else {
        Status::Refuted
    };
    let mut out = CheckResult::new(status, lhs, rhs + tol_quad, 1);
    if status == Status::Refuted {
        if let Some((x, y)) = argmax_on(&conv, &closure) {
            out = out.with_witness(Witness {
                location: x,
                value: y,
                note: "mollified value exceeds the bound".into(),
            });
        }
    }
    Ok(out)
}

/// Settings for turning a residual trace into a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRule {
    pub tol: f64,
    /// Leading entries exempt from the monotonicity requirement.
    pub grace: usize,
    /// Increases smaller than this do not count as growth.
    pub noise: f64,
}

impl DecayRule {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            grace: 2,
            noise: 1e-6,
        }
    }

    /// Verified: final residual below `tol` and nonincreasing after the
    /// grace prefix. Refuted: final residual at least `10 tol` and the
    /// trace has stopped decreasing. Otherwise inconclusive.
    pub fn judge(&self, r: &[f64]) -> Status {
        let Some(&last) = r.last() else {
            return Status::Inconclusive;
        };
        let settled = r
            .windows(2)
            .skip(self.grace)
            .all(|w| w[1] <= w[0] + self.noise);
        if last < self.tol && settled {
            return Status::Verified;
        }
        if last >= 10.0 * self.tol && stalled(r) {
            return Status::Refuted;
        }
        Status::Inconclusive
    }
}

/// The last quarter of the trace has lost less than half of its value.
pub fn stalled(r: &[f64]) -> bool {
    if r.len() < 2 {
        return false;
    }
    let q = (r.len() / 4).max(2).min(r.len());
    let tail = &r[r.len() - q..];
    tail[tail.len() - 1] >= 0.5 * tail[0]
}

/// `‖f_n - f_n ∗ φ_n‖_K` for `n` up to `horizon`, judged by [`DecayRule`].
/// Indices whose radius does not fit inside `d(K, U^c)` are skipped.
pub fn check_diagonal_convergence(
    fs: impl Fn(usize) -> Result<GridFunction>,
    seq: &DeltaSeq,
    k: &CompactSet,
    horizon: usize,
    rule: DecayRule,
) -> Result<CheckResult> {
    let mut residuals = Vec::with_capacity(horizon);
    let mut worst: Option<Witness> = None;
    let mut first = None;
    for n in 1..=horizon {
        let f = fs(n)?;
        if !is_compactly_contained(k, f.domain()) {
            return Err(Error::InvalidArgument("K is not compactly contained in the domain".into()));
        }
        let d = f.domain().distance_to_complement(k)?;
        if !(seq.radius(n) < d) {
            continue;
        }
        first.get_or_insert(n);
        let g = mollify_near(&f, &seq.get(n), k)?;
        let diff = f.restrict(g.domain())?.sub(&g)?;
        let r = diff.sup_norm_on(k)?;
        if let Some((x, y)) = argmax_on(&diff, k) {
            worst = Some(Witness {
                location: x,
                value: y,
                note: format!("n = {n}"),
            });
        }
        residuals.push(r);
    }
    let status = rule.judge(&residuals);
    let max = residuals.last().copied().unwrap_or(f64::INFINITY);
    let mut out = CheckResult::new(status, max, rule.tol, horizon).with_residuals(residuals);
    if status == Status::Refuted {
        out.witness = worst;
    }
    Ok(out)
}

/// `‖f - f ∗ φ_n‖_K → 0` for a single continuous `f`.
pub fn check_mollifier_convergence(
    f: &GridFunction,
    seq: &DeltaSeq,
    k: &CompactSet,
    horizon: usize,
    tol: f64,
) -> Result<CheckResult> {
    check_diagonal_convergence(|_| Ok(f.clone()), seq, k, horizon, DecayRule::new(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mollifier::standard_bump;

    fn open(a: f64, b: f64) -> OpenSet {
        OpenSet::interval(a, b).unwrap()
    }

    #[test]
    fn constants_are_preserved() {
        let f = GridFunction::constant(&open(-1.0, 1.0), 0.01, 3.0).unwrap();
        let g = convolve(&f, &standard_bump(0.3).unwrap()).unwrap();
        assert_eq!(g.domain(), &open(-0.7, 0.7));
        for (_, y) in g.samples() {
            assert!((y - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_functions_are_preserved() {
        let f = GridFunction::from_fn(&open(-1.0, 1.0), 0.01, |x| x).unwrap();
        let g = convolve(&f, &standard_bump(0.25).unwrap()).unwrap();
        for (x, y) in g.samples() {
            assert!((y - x).abs() < 1e-12, "{x}: {y}");
        }
    }

    #[test]
    fn collapsed_domain() {
        let f = GridFunction::constant(&open(0.0, 0.4), 0.01, 1.0).unwrap();
        assert!(matches!(
            convolve(&f, &standard_bump(0.25).unwrap()),
            Err(Error::DomainCollapsed(_))
        ));
    }

    #[test]
    fn product_domain_is_exact_erosion() {
        let f = GridFunction::from_fn(&open(-1.0, 1.0), 0.01, f64::sin).unwrap();
        let phi = crate::mollifier::convolve_test(&standard_bump(0.1).unwrap(), &standard_bump(0.2).unwrap());
        let g = convolve(&f, &phi).unwrap();
        assert_eq!(g.domain(), &f.domain().erode(phi.radius()).unwrap());
    }

    #[test]
    fn young_constant() {
        let f = GridFunction::constant(&open(-2.0, 2.0), 0.01, 1.0).unwrap();
        let k = CompactSet::interval(-1.0, 1.0).unwrap();
        let r = check_young(&f, &standard_bump(0.1).unwrap(), &k, 0.2).unwrap();
        assert!(r.is_verified());
        assert!((r.max_residual - 1.0).abs() < 1e-12);
        assert!(matches!(
            check_young(&f, &standard_bump(0.3).unwrap(), &k, 0.2),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn decay_rule_verdicts() {
        let rule = DecayRule::new(1e-3);
        assert_eq!(rule.judge(&[1.0, 0.1, 0.01, 1e-4]), Status::Verified);
        assert_eq!(rule.judge(&[1.0, 1.0, 1.0, 1.0]), Status::Refuted);
        assert_eq!(rule.judge(&[1.0, 0.5, 0.25, 0.12]), Status::Inconclusive);
    }
}
