//! Exact algebra of finite interval unions on the real line.
//!
//! [`OpenSet`] is a finite union of open intervals, [`CompactSet`] a finite
//! union of closed bounded intervals. Both are kept in a canonical form
//! (sorted, disjoint, non-touching) so that set equality is structural.
//! Dilation and erosion are exact endpoint arithmetic: in one dimension the
//! Euclidean ball is an interval, so `U + B_eps` widens every component by
//! `eps` and the erosion `(closure(U^c + B_eps))^c` shrinks it by `eps`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Dimension of the ambient space. Everything in this crate lives on the line.
pub const DIMENSION: usize = 1;

/// A pair of endpoints. Openness or closedness is decided by the owning set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

/// Sets that are finite unions of intervals, open or closed.
pub trait Spans {
    fn spans(&self) -> &[Interval];
}

/// A finite union of open intervals in canonical form.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "SetRepr", try_from = "SetRepr")]
pub struct OpenSet {
    intervals: Vec<Interval>,
}

/// A finite union of closed bounded intervals in canonical form.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "SetRepr", try_from = "SetRepr")]
pub struct CompactSet {
    intervals: Vec<Interval>,
}

impl Spans for OpenSet {
    fn spans(&self) -> &[Interval] {
        &self.intervals
    }
}

impl Spans for CompactSet {
    fn spans(&self) -> &[Interval] {
        &self.intervals
    }
}

// Sorts and merges overlapping or touching intervals.
fn normalize(mut v: Vec<Interval>) -> Vec<Interval> {
    v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::with_capacity(v.len());
    for iv in v {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}

impl OpenSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a set from raw intervals; overlapping or touching ones are merged.
    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v = Vec::new();
        for (lo, hi) in intervals {
            if lo.is_nan() || hi.is_nan() || !(lo < hi) {
                return invalid(format!("open interval ({lo}, {hi}) is empty or malformed"));
            }
            if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
                return invalid("interval endpoints out of range");
            }
            v.push(Interval::new(lo, hi));
        }
        Ok(Self {
            intervals: normalize(v),
        })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new([(lo, hi)])
    }

    /// The whole real line.
    pub fn real_line() -> Self {
        Self {
            intervals: vec![Interval::new(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.intervals.iter().all(Interval::is_bounded)
    }

    pub fn dimension(&self) -> usize {
        DIMENSION
    }

    pub fn contains(&self, x: f64) -> bool {
        self.component_of(x).is_some()
    }

    /// Index of the component containing `x`.
    pub fn component_of(&self, x: f64) -> Option<usize> {
        let i = self.intervals.partition_point(|iv| iv.hi <= x);
        match self.intervals.get(i) {
            Some(iv) if iv.lo < x => Some(i),
            _ => None,
        }
    }

    /// Shortest component length (infinite for the empty set).
    pub fn min_component_len(&self) -> f64 {
        self.intervals
            .iter()
            .map(Interval::len)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        let mut v = self.intervals.clone();
        v.extend_from_slice(&other.intervals);
        OpenSet {
            intervals: normalize(v),
        }
    }

    pub fn intersection(&self, other: &OpenSet) -> OpenSet {
        let mut out = Vec::new();
        for a in &self.intervals {
            for b in &other.intervals {
                let lo = a.lo.max(b.lo);
                let hi = a.hi.min(b.hi);
                if lo < hi {
                    out.push(Interval::new(lo, hi));
                }
            }
        }
        OpenSet {
            intervals: normalize(out),
        }
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &OpenSet) -> bool {
        self.intervals.iter().all(|a| {
            other
                .intervals
                .iter()
                .any(|b| b.lo <= a.lo && a.hi <= b.hi)
        })
    }

    /// `U^{+eps} = U + B_eps`.
    pub fn dilate(&self, eps: f64) -> Result<OpenSet> {
        check_radius(eps)?;
        let v = self
            .intervals
            .iter()
            .map(|iv| Interval::new(iv.lo - eps, iv.hi + eps))
            .collect();
        Ok(OpenSet {
            intervals: normalize(v),
        })
    }

    /// `U^{-eps} = (closure(U^c + B_eps))^c`. Components of length `<= 2 eps` vanish.
    pub fn erode(&self, eps: f64) -> Result<OpenSet> {
        check_radius(eps)?;
        Ok(self.erode_unchecked(eps))
    }

    pub(crate) fn erode_unchecked(&self, eps: f64) -> OpenSet {
        let intervals = self
            .intervals
            .iter()
            .filter_map(|iv| {
                let lo = iv.lo + eps;
                let hi = iv.hi - eps;
                (lo < hi).then(|| Interval::new(lo, hi))
            })
            .collect();
        OpenSet { intervals }
    }

    /// Closure of a bounded open set.
    pub fn closure(&self) -> Result<CompactSet> {
        if !self.is_bounded() {
            return Err(Error::Unsupported("closure of an unbounded set is not compact".into()));
        }
        Ok(CompactSet {
            intervals: normalize(self.intervals.clone()),
        })
    }

    /// `d(A, U^c)`: distance from a compact set to the complement of `self`.
    /// Zero when `A` is not contained in `self`.
    pub fn distance_to_complement(&self, a: &CompactSet) -> Result<f64> {
        if a.is_empty() {
            return invalid("distance to an empty set is undefined");
        }
        if self.intervals.len() == 1 && !self.intervals[0].lo.is_finite() && !self.intervals[0].hi.is_finite() {
            return invalid("complement of the real line is empty");
        }
        let mut d = f64::INFINITY;
        for k in a.spans() {
            let host = self
                .intervals
                .iter()
                .find(|u| u.lo <= k.lo && k.hi <= u.hi);
            match host {
                None => return Ok(0.0),
                Some(u) => {
                    d = d.min(k.lo - u.lo).min(u.hi - k.hi);
                }
            }
        }
        // a component of U^c lies between consecutive components of U;
        // those are always at least as far as the host endpoints.
        Ok(d.max(0.0))
    }
}

impl CompactSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(intervals: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v = Vec::new();
        for (lo, hi) in intervals {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return invalid(format!("closed interval [{lo}, {hi}] is malformed or unbounded"));
            }
            v.push(Interval::new(lo, hi));
        }
        Ok(Self {
            intervals: normalize(v),
        })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new([(lo, hi)])
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.lo <= x && x <= iv.hi)
    }

    /// `self ⊆ other` for compact sets.
    pub fn is_subset_of(&self, other: &CompactSet) -> bool {
        self.intervals.iter().all(|a| {
            other
                .intervals
                .iter()
                .any(|b| b.lo <= a.lo && a.hi <= b.hi)
        })
    }

    /// `self ⊆ closure(u)`.
    pub fn is_within_closure_of(&self, u: &OpenSet) -> bool {
        self.intervals.iter().all(|a| {
            u.intervals()
                .iter()
                .any(|b| b.lo <= a.lo && a.hi <= b.hi)
        })
    }

    /// Open `r`-neighbourhood `K + B_r`.
    pub fn neighborhood(&self, r: f64) -> Result<OpenSet> {
        check_radius(r)?;
        let v = self
            .intervals
            .iter()
            .map(|iv| Interval::new(iv.lo - r, iv.hi + r))
            .collect();
        Ok(OpenSet {
            intervals: normalize(v),
        })
    }

    /// `K^{-eps}` for a compact set: the open set of points whose closed
    /// `eps`-ball stays inside `K`, i.e. `(K^c + B_eps)^c` shrunk to its interior.
    pub fn erode(&self, eps: f64) -> Result<OpenSet> {
        check_radius(eps)?;
        let intervals = self
            .intervals
            .iter()
            .filter_map(|iv| {
                let lo = iv.lo + eps;
                let hi = iv.hi - eps;
                (lo < hi).then(|| Interval::new(lo, hi))
            })
            .collect();
        Ok(OpenSet { intervals })
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(self.intervals.first()?.lo, self.intervals.last()?.hi))
    }
}

fn check_radius(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        invalid(format!("radius must be positive and finite, got {eps}"))
    }
}

/// `K ⋐ U`: the compact `K` lies inside the open `U`.
pub fn is_compactly_contained(k: &CompactSet, u: &OpenSet) -> bool {
    k.spans()
        .iter()
        .all(|a| u.intervals().iter().any(|b| b.lo < a.lo && a.hi < b.hi))
}

/// `d(A, B) = inf |x - y|`, computed exactly from interval endpoints.
pub fn distance(a: &impl Spans, b: &impl Spans) -> Result<f64> {
    let (sa, sb) = (a.spans(), b.spans());
    if sa.is_empty() || sb.is_empty() {
        return invalid("distance to an empty set is undefined");
    }
    let mut d = f64::INFINITY;
    for x in sa {
        for y in sb {
            let gap = (y.lo - x.hi).max(x.lo - y.hi).max(0.0);
            d = d.min(gap);
        }
    }
    Ok(d)
}

/// A nested sequence of compacts `K_1 ⊂ K_2 ⊂ ...` inside `ambient` with
/// geometrically shrinking margins `d(K_j, U^c)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exhaustion {
    pub sets: Vec<CompactSet>,
    pub ambient: OpenSet,
    pub margins: Vec<f64>,
}

impl Exhaustion {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Default first margin of [`compact_exhaustion`].
pub const DEFAULT_FIRST_MARGIN: f64 = 0.4;
/// Default margin ratio of [`compact_exhaustion`].
pub const DEFAULT_MARGIN_RATIO: f64 = 0.4;

pub fn compact_exhaustion(u: &OpenSet, count: usize) -> Result<Exhaustion> {
    compact_exhaustion_with(u, count, DEFAULT_FIRST_MARGIN, DEFAULT_MARGIN_RATIO)
}

/// `K_j = closure(U^{-m_j})` with `m_{j+1} = ratio * m_j`.
///
/// If `U^{-m_1}` would be empty the first margin is shrunk to a quarter of
/// the longest component, so every `K_j` is nonempty.
pub fn compact_exhaustion_with(
    u: &OpenSet,
    count: usize,
    first_margin: f64,
    ratio: f64,
) -> Result<Exhaustion> {
    if u.is_empty() {
        return invalid("cannot exhaust the empty set");
    }
    if !u.is_bounded() {
        return Err(Error::Unsupported("exhaustion of unbounded open sets".into()));
    }
    if count == 0 {
        return invalid("exhaustion needs at least one compact");
    }
    if !(first_margin > 0.0 && first_margin < 0.5) {
        return invalid(format!("first margin must lie in (0, 1/2), got {first_margin}"));
    }
    if !(ratio > 0.0 && ratio < 0.5) {
        return invalid(format!("margin ratio must lie in (0, 1/2), got {ratio}"));
    }
    let longest = u.intervals().iter().map(Interval::len).fold(0.0, f64::max);
    let mut m = if first_margin < longest / 2.0 {
        first_margin
    } else {
        longest / 4.0
    };
    let scale = u
        .intervals()
        .iter()
        .map(|iv| iv.lo.abs().max(iv.hi.abs()))
        .fold(1.0, f64::max);
    let mut sets = Vec::with_capacity(count);
    let mut margins = Vec::with_capacity(count);
    for _ in 0..count {
        if m <= scale * f64::EPSILON * 16.0 {
            return invalid(format!("{count} compacts exceed representable margins"));
        }
        sets.push(u.erode_unchecked(m).closure()?);
        margins.push(m);
        m *= ratio;
    }
    Ok(Exhaustion {
        sets,
        ambient: u.clone(),
        margins,
    })
}

/// Outcome of [`check_exhaustion`], one flag per structural condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustionReport {
    pub nested: bool,
    pub contained: bool,
    pub margins_match: bool,
    pub halving: bool,
    pub first_below_half: bool,
}

impl ExhaustionReport {
    pub fn ok(&self) -> bool {
        self.nested && self.contained && self.margins_match && self.halving && self.first_below_half
    }
}

/// Re-derives nesting, containment and the margin conditions from distances
/// alone, without going through erosion.
pub fn check_exhaustion(ex: &Exhaustion) -> Result<ExhaustionReport> {
    let u = &ex.ambient;
    let nested = ex.sets.windows(2).all(|w| w[0].is_subset_of(&w[1]));
    let contained = ex.sets.iter().all(|k| is_compactly_contained(k, u));
    let mut measured = Vec::with_capacity(ex.sets.len());
    for k in &ex.sets {
        measured.push(u.distance_to_complement(k)?);
    }
    let margins_match = measured.len() == ex.margins.len()
        && measured
            .iter()
            .zip(&ex.margins)
            .all(|(a, b)| (a - b).abs() <= 8.0 * f64::EPSILON * (1.0 + b.abs().max(1.0)));
    let halving = measured.windows(2).all(|w| w[1] < 0.5 * w[0]);
    let first_below_half = measured.first().is_some_and(|&m| m < 0.5);
    Ok(ExhaustionReport {
        nested,
        contained,
        margins_match,
        halving,
        first_below_half,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetKind {
    Open,
    Compact,
}

/// JSON shape shared by both set types: `{"kind": "open", "intervals": [[lo, hi], ...]}`.
/// Infinite endpoints are written as `null`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetRepr {
    pub kind: SetKind,
    pub intervals: Vec<[Option<f64>; 2]>,
}

fn to_repr(kind: SetKind, v: &[Interval]) -> SetRepr {
    let fin = |x: f64| x.is_finite().then_some(x);
    SetRepr {
        kind,
        intervals: v.iter().map(|iv| [fin(iv.lo), fin(iv.hi)]).collect(),
    }
}

impl From<OpenSet> for SetRepr {
    fn from(s: OpenSet) -> Self {
        to_repr(SetKind::Open, &s.intervals)
    }
}

impl From<CompactSet> for SetRepr {
    fn from(s: CompactSet) -> Self {
        to_repr(SetKind::Compact, &s.intervals)
    }
}

impl TryFrom<SetRepr> for OpenSet {
    type Error = Error;
    fn try_from(r: SetRepr) -> Result<Self> {
        if r.kind != SetKind::Open {
            return Err(Error::Descriptor("expected an open set".into()));
        }
        OpenSet::new(r.intervals.iter().map(|[lo, hi]| {
            (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))
        }))
    }
}

impl TryFrom<SetRepr> for CompactSet {
    type Error = Error;
    fn try_from(r: SetRepr) -> Result<Self> {
        if r.kind != SetKind::Compact {
            return Err(Error::Descriptor("expected a compact set".into()));
        }
        let mut v = Vec::new();
        for [lo, hi] in r.intervals {
            match (lo, hi) {
                (Some(lo), Some(hi)) => v.push((lo, hi)),
                _ => return Err(Error::Descriptor("compact sets are bounded".into())),
            }
        }
        CompactSet::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open(v: &[(f64, f64)]) -> OpenSet {
        OpenSet::new(v.iter().copied()).unwrap()
    }

    fn compact(v: &[(f64, f64)]) -> CompactSet {
        CompactSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn dilation_examples() {
        assert_eq!(open(&[(0.0, 1.0)]).dilate(0.5).unwrap(), open(&[(-0.5, 1.5)]));
        assert_eq!(
            open(&[(0.0, 1.0), (1.2, 2.0)]).dilate(0.15).unwrap(),
            open(&[(-0.15, 2.15)])
        );
        assert!(OpenSet::empty().dilate(1.0).unwrap().is_empty());
        assert!(matches!(open(&[(0.0, 1.0)]).dilate(0.0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn erosion_examples() {
        assert_eq!(open(&[(0.0, 1.0)]).erode(0.25).unwrap(), open(&[(0.25, 0.75)]));
        assert!(open(&[(0.0, 0.4)]).erode(0.25).unwrap().is_empty());
        let u = open(&[(0.0, 1.0), (1.2, 2.0)]);
        let closed = u.dilate(0.15).unwrap().erode(0.15).unwrap();
        assert_eq!(closed, open(&[(0.0, 2.0)]));
        assert_ne!(closed, u);
        assert!(u.erode(-1.0).is_err());
    }

    #[test]
    fn containment_examples() {
        let u = open(&[(0.0, 1.0)]);
        assert!(is_compactly_contained(&compact(&[(0.2, 0.8)]), &u));
        assert!(!is_compactly_contained(&compact(&[(0.0, 0.8)]), &u));
        assert!(is_compactly_contained(&CompactSet::empty(), &u));
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&compact(&[(0.0, 1.0)]), &compact(&[(2.0, 3.0)])).unwrap(), 1.0);
        assert_eq!(distance(&compact(&[(0.0, 1.0)]), &compact(&[(0.5, 2.0)])).unwrap(), 0.0);
        let d = open(&[(0.0, 1.0)])
            .distance_to_complement(&compact(&[(0.4, 0.6)]))
            .unwrap();
        assert!((d - 0.4).abs() < 1e-15);
        assert!(distance(&CompactSet::empty(), &compact(&[(0.0, 1.0)])).is_err());
    }

    #[test]
    fn exhaustion_example() {
        let ex = compact_exhaustion_with(&open(&[(0.0, 1.0)]), 2, 0.4, 0.4).unwrap();
        assert_eq!(ex.sets[0], compact(&[(0.4, 0.6)]));
        let k2 = ex.sets[1].intervals()[0];
        assert!((k2.lo - 0.16).abs() < 1e-15 && (k2.hi - 0.84).abs() < 1e-15);
        let report = check_exhaustion(&ex).unwrap();
        assert!(report.ok(), "{report:?}");
        assert!(ex.margins[0] < 0.5 && ex.margins[1] < 0.5 * ex.margins[0]);
    }

    #[test]
    fn exhaustion_of_two_components() {
        let u = open(&[(0.0, 1.0), (2.0, 3.0)]);
        let ex = compact_exhaustion(&u, 1).unwrap();
        assert_eq!(ex.sets[0].intervals().len(), 2);
        assert!(is_compactly_contained(&ex.sets[0], &u));
    }

    #[test]
    fn exhaustion_errors() {
        assert!(matches!(
            compact_exhaustion(&OpenSet::real_line(), 2),
            Err(Error::Unsupported(_))
        ));
        assert!(compact_exhaustion(&open(&[(0.0, 1.0)]), 2000).is_err());
    }

    #[test]
    fn json_round_trip_with_infinity() {
        let u = open(&[(f64::NEG_INFINITY, 0.0), (1.0, 2.0)]);
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"{"kind":"open","intervals":[[null,0.0],[1.0,2.0]]}"#);
        let back: OpenSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, u);
        assert!(serde_json::from_str::<CompactSet>(&s).is_err());
    }
}
