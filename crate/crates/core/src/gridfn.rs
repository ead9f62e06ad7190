//! Continuous functions sampled on a global lattice `k * h`.
//!
//! Each component `(lo, hi)` of the domain carries its own node list: the
//! endpoint `lo`, every lattice point strictly inside, optional breakpoints,
//! and `hi`. Values are interpolated linearly between nodes and the endpoint
//! values are the one-sided limits.
//!
//! A piece also stores the two points that define its first and last cell
//! (its anchors). After a restriction the new endpoint sits inside an old
//! cell, and evaluating through the anchors instead of the freshly computed
//! endpoint value keeps `restrict(restrict(f, V), W) == restrict(f, W)`
//! bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{CompactSet, Interval, OpenSet};
use crate::quad;

/// Lattice indices `k` with `lo < k * h < hi`, as an inclusive range.
pub(crate) fn lattice_inside(lo: f64, hi: f64, h: f64) -> (i64, i64) {
    let mut a = (lo / h).floor() as i64;
    while (a as f64) * h <= lo {
        a += 1;
    }
    while ((a - 1) as f64) * h > lo {
        a -= 1;
    }
    let mut b = (hi / h).ceil() as i64;
    while (b as f64) * h >= hi {
        b -= 1;
    }
    while ((b + 1) as f64) * h < hi {
        b += 1;
    }
    (a, b)
}

/// The lattice index of `x`, if `x` is exactly a lattice point.
pub(crate) fn lattice_index(x: f64, h: f64) -> Option<i64> {
    let k = (x / h).round() as i64;
    ((k as f64) * h == x).then_some(k)
}

fn lerp(p: [f64; 2], q: [f64; 2], x: f64) -> f64 {
    if q[0] == p[0] {
        return p[1];
    }
    p[1] + (q[1] - p[1]) * ((x - p[0]) / (q[0] - p[0]))
}

/// Samples of one domain component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub anchor_lo: [f64; 2],
    pub anchor_hi: [f64; 2],
}

impl Piece {
    fn from_nodes(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        Self {
            anchor_lo: [xs[0], ys[0]],
            anchor_hi: [xs[n - 1], ys[n - 1]],
            xs,
            ys,
        }
    }

    pub fn lo(&self) -> f64 {
        self.xs[0]
    }

    pub fn hi(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    fn cell_points(&self, j: usize) -> ([f64; 2], [f64; 2]) {
        let last = self.xs.len() - 1;
        let left = if j == 0 {
            self.anchor_lo
        } else {
            [self.xs[j], self.ys[j]]
        };
        let right = if j + 1 == last {
            self.anchor_hi
        } else {
            [self.xs[j + 1], self.ys[j + 1]]
        };
        (left, right)
    }

    // Cell j with xs[j] <= x < xs[j+1] (last cell for x == hi).
    fn cell_left_of(&self, x: f64) -> usize {
        let i = self.xs.partition_point(|&t| t <= x);
        i.saturating_sub(1).min(self.xs.len() - 2)
    }

    // Cell j with xs[j] < x <= xs[j+1] (first cell for x == lo).
    fn cell_right_of(&self, x: f64) -> usize {
        let i = self.xs.partition_point(|&t| t < x);
        i.saturating_sub(1).min(self.xs.len() - 2)
    }

    fn eval(&self, x: f64) -> f64 {
        let j = self.cell_left_of(x);
        if self.xs[j] == x {
            return self.ys[j];
        }
        if self.xs[j + 1] == x {
            return self.ys[j + 1];
        }
        let (p, q) = self.cell_points(j);
        lerp(p, q, x)
    }

    fn restrict(&self, a: f64, b: f64) -> Piece {
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        let anchor_lo = if a == self.lo() {
            xs.push(self.xs[0]);
            ys.push(self.ys[0]);
            self.anchor_lo
        } else {
            let j = self.cell_left_of(a);
            let (p, q) = self.cell_points(j);
            xs.push(a);
            ys.push(if self.xs[j] == a { self.ys[j] } else { lerp(p, q, a) });
            p
        };
        let start = self.xs.partition_point(|&t| t <= a);
        let stop = self.xs.partition_point(|&t| t < b);
        for i in start..stop {
            xs.push(self.xs[i]);
            ys.push(self.ys[i]);
        }
        let anchor_hi = if b == self.hi() {
            xs.push(self.hi());
            ys.push(self.ys[self.ys.len() - 1]);
            self.anchor_hi
        } else {
            let j = self.cell_right_of(b);
            let (p, q) = self.cell_points(j);
            xs.push(b);
            ys.push(if self.xs[j + 1] == b {
                self.ys[j + 1]
            } else {
                lerp(p, q, b)
            });
            q
        };
        Piece {
            xs,
            ys,
            anchor_lo,
            anchor_hi,
        }
    }

    fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        let n = self.xs.len();
        let w = |i: usize| self.xs[i + 1] - self.xs[i];
        let v = |i: usize| g(self.ys[i]);
        let ncell = n - 1;
        if ncell == 1 {
            return 0.5 * w(0) * (v(0) + v(1));
        }
        let mut acc = 0.0;
        let mut i = 0;
        while i < ncell {
            if i + 1 < ncell && (w(i + 1) - w(i)).abs() <= 1e-9 * w(i) {
                let hh = 0.5 * (w(i) + w(i + 1));
                acc += hh / 3.0 * (v(i) + 4.0 * v(i + 1) + v(i + 2));
                i += 2;
                continue;
            }
            // quadratic through this cell and the far node of its wider neighbour
            let third = match (i > 0, i + 1 < ncell) {
                (true, true) if w(i - 1) >= w(i + 1) => i - 1,
                (true, false) => i - 1,
                _ => i + 2,
            };
            let nodes = [
                (self.xs[i], v(i)),
                (self.xs[i + 1], v(i + 1)),
                (self.xs[third], v(third)),
            ];
            acc += quad::gl3(self.xs[i], self.xs[i + 1], |x| lagrange3(&nodes, x));
            i += 1;
        }
        acc
    }
}

fn lagrange3(n: &[(f64, f64); 3], x: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let mut l = n[i].1;
        for j in 0..3 {
            if i != j {
                l *= (x - n[j].0) / (n[i].0 - n[j].0);
            }
        }
        acc += l;
    }
    acc
}

/// A continuous function on a bounded open set, piecewise linear between
/// lattice samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct GridFunction {
    domain: OpenSet,
    h: f64,
    pieces: Vec<Piece>,
}

#[derive(Deserialize)]
struct GridRepr {
    domain: OpenSet,
    h: f64,
    pieces: Vec<Piece>,
}

impl TryFrom<GridRepr> for GridFunction {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        GridFunction::from_pieces(r.domain, r.h, r.pieces)
    }
}

impl GridFunction {
    /// Assembles a function from explicit pieces after validating them.
    pub fn from_pieces(domain: OpenSet, h: f64, pieces: Vec<Piece>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return invalid(format!("grid spacing must be positive, got {h}"));
        }
        if pieces.len() != domain.intervals().len() {
            return invalid("one piece per domain component is required");
        }
        for (p, iv) in pieces.iter().zip(domain.intervals()) {
            if p.xs.len() < 2 || p.xs.len() != p.ys.len() {
                return invalid("a piece needs at least two samples");
            }
            if p.lo() != iv.lo || p.hi() != iv.hi {
                return invalid("piece endpoints must match the domain");
            }
            if p.xs.windows(2).any(|w| !(w[0] < w[1])) {
                return invalid("sample positions must increase strictly");
            }
            if p.ys.iter().any(|y| !y.is_finite()) {
                return invalid("sample values must be finite");
            }
        }
        Ok(Self { domain, h, pieces })
    }

    pub(crate) fn from_node_lists(domain: OpenSet, h: f64, nodes: Vec<(Vec<f64>, Vec<f64>)>) -> Self {
        let pieces = nodes
            .into_iter()
            .map(|(xs, ys)| Piece::from_nodes(xs, ys))
            .collect();
        Self { domain, h, pieces }
    }

    /// Samples `f` at every lattice point of `u` and at the component endpoints.
    pub fn from_fn(u: &OpenSet, h: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return invalid(format!("grid spacing must be positive, got {h}"));
        }
        if !u.is_bounded() {
            return Err(Error::Unsupported("grid functions need a bounded domain".into()));
        }
        if h > u.min_component_len() {
            return invalid(format!(
                "grid spacing {h} exceeds the shortest component {}",
                u.min_component_len()
            ));
        }
        let nodes = u
            .intervals()
            .iter()
            .map(|iv| {
                let xs = component_nodes(*iv, h);
                let ys = xs.iter().map(|&x| f(x)).collect();
                (xs, ys)
            })
            .collect();
        let g = Self::from_node_lists(u.clone(), h, nodes);
        if g.pieces.iter().flat_map(|p| &p.ys).any(|y| !y.is_finite()) {
            return Err(Error::Domain("evaluator returned a non-finite value".into()));
        }
        Ok(g)
    }

    pub fn constant(u: &OpenSet, h: f64, c: f64) -> Result<Self> {
        Self::from_fn(u, h, |_| c)
    }

    pub fn domain(&self) -> &OpenSet {
        &self.domain
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// All `(x, f(x))` samples in order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.pieces
            .iter()
            .flat_map(|p| p.xs.iter().copied().zip(p.ys.iter().copied()))
    }

    fn piece_index(&self, x: f64) -> Option<usize> {
        let i = self.pieces.partition_point(|p| p.hi() < x);
        (i < self.pieces.len() && self.pieces[i].lo() <= x).then_some(i)
    }

    /// Value at `x` in the closure of the domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.piece_index(x) {
            Some(i) => Ok(self.pieces[i].eval(x)),
            None => Err(Error::Domain(format!("{x} lies outside the closure of the domain"))),
        }
    }

    /// Maximum of `|f|` over `k`, exact for the piecewise-linear interpolant.
    pub fn sup_norm_on(&self, k: &CompactSet) -> Result<f64> {
        let mut m: f64 = 0.0;
        for iv in k.intervals() {
            let i = self
                .piece_index(iv.lo)
                .filter(|&i| iv.hi <= self.pieces[i].hi())
                .ok_or_else(|| {
                    Error::Domain(format!("[{}, {}] is not inside the domain closure", iv.lo, iv.hi))
                })?;
            let p = &self.pieces[i];
            m = m.max(p.eval(iv.lo).abs()).max(p.eval(iv.hi).abs());
            let a = p.xs.partition_point(|&t| t < iv.lo);
            let b = p.xs.partition_point(|&t| t <= iv.hi);
            for y in &p.ys[a..b] {
                m = m.max(y.abs());
            }
        }
        Ok(m)
    }

    /// Maximum of `|f|` over every sample.
    pub fn sup_norm(&self) -> f64 {
        self.samples().map(|(_, y)| y.abs()).fold(0.0, f64::max)
    }

    /// `∫ |f|`: composite Simpson on uniform runs, local quadratics elsewhere.
    pub fn l1_norm(&self) -> f64 {
        self.pieces.iter().map(|p| p.integrate(f64::abs)).sum()
    }

    /// `∫ f` with the same rule as [`GridFunction::l1_norm`].
    pub fn integral(&self) -> f64 {
        self.pieces.iter().map(|p| p.integrate(|y| y)).sum()
    }

    /// Restriction to an open subset of the domain.
    pub fn restrict(&self, v: &OpenSet) -> Result<GridFunction> {
        if !v.is_subset_of(&self.domain) {
            return invalid("restriction target is not a subset of the domain");
        }
        if *v == self.domain {
            return Ok(self.clone());
        }
        let pieces = v
            .intervals()
            .iter()
            .map(|iv| {
                let i = self.piece_index(iv.lo).expect("subset component lies in a piece");
                self.pieces[i].restrict(iv.lo, iv.hi)
            })
            .collect();
        Ok(GridFunction {
            domain: v.clone(),
            h: self.h,
            pieces,
        })
    }

    /// Continuous extension to `t ⊇ domain`: linear across gaps bounded on
    /// both sides, constant towards the ends of a component, zero on
    /// components of `t` that miss the domain entirely.
    pub fn extend_continuously(&self, t: &OpenSet) -> Result<GridFunction> {
        if !self.domain.is_subset_of(t) {
            return invalid("extension target does not contain the domain");
        }
        if !t.is_bounded() {
            return Err(Error::Unsupported("extension to an unbounded set".into()));
        }
        if *t == self.domain {
            return Ok(self.clone());
        }
        let h = self.h;
        let mut pieces = Vec::with_capacity(t.intervals().len());
        let mut next = 0;
        for iv in t.intervals() {
            let mut inner = Vec::new();
            while next < self.pieces.len() && self.pieces[next].hi() <= iv.hi {
                inner.push(&self.pieces[next]);
                next += 1;
            }
            if inner.is_empty() {
                let xs = component_nodes(*iv, h);
                let ys = vec![0.0; xs.len()];
                pieces.push(Piece::from_nodes(xs, ys));
                continue;
            }
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            let first = inner[0];
            let anchor_lo = if iv.lo < first.lo() {
                push_gap(&mut xs, &mut ys, iv.lo, first.lo(), h, |_| first.ys[0]);
                [iv.lo, first.ys[0]]
            } else {
                first.anchor_lo
            };
            for (idx, p) in inner.iter().enumerate() {
                xs.extend_from_slice(&p.xs);
                ys.extend_from_slice(&p.ys);
                if let Some(q) = inner.get(idx + 1) {
                    let (a, b) = (p.hi(), q.lo());
                    let (ya, yb) = (p.ys[p.len() - 1], q.ys[0]);
                    let (k0, k1) = lattice_inside(a, b, h);
                    for k in k0..=k1 {
                        let x = k as f64 * h;
                        xs.push(x);
                        ys.push(lerp([a, ya], [b, yb], x));
                    }
                }
            }
            let last = inner[inner.len() - 1];
            let yl = last.ys[last.len() - 1];
            let anchor_hi = if last.hi() < iv.hi {
                let (k0, k1) = lattice_inside(last.hi(), iv.hi, h);
                for k in k0..=k1 {
                    xs.push(k as f64 * h);
                    ys.push(yl);
                }
                xs.push(iv.hi);
                ys.push(yl);
                [iv.hi, yl]
            } else {
                last.anchor_hi
            };
            pieces.push(Piece {
                xs,
                ys,
                anchor_lo,
                anchor_hi,
            });
        }
        Ok(GridFunction {
            domain: t.clone(),
            h,
            pieces,
        })
    }

    /// Applies `op` to every sample value.
    pub fn map(&self, op: impl Fn(f64) -> f64) -> GridFunction {
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                xs: p.xs.clone(),
                ys: p.ys.iter().map(|&y| op(y)).collect(),
                anchor_lo: [p.anchor_lo[0], op(p.anchor_lo[1])],
                anchor_hi: [p.anchor_hi[0], op(p.anchor_hi[1])],
            })
            .collect();
        GridFunction {
            domain: self.domain.clone(),
            h: self.h,
            pieces,
        }
    }

    pub fn scale(&self, r: f64) -> GridFunction {
        self.map(|y| r * y)
    }

    /// Pointwise combination of two functions on the same domain. Node sets
    /// are merged when they differ.
    pub fn zip_with(&self, other: &GridFunction, op: impl Fn(f64, f64) -> f64) -> Result<GridFunction> {
        if self.domain != other.domain {
            return invalid("pointwise operations need equal domains");
        }
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (p, q) in self.pieces.iter().zip(&other.pieces) {
            if p.xs == q.xs {
                let ys = p.ys.iter().zip(&q.ys).map(|(&a, &b)| op(a, b)).collect();
                let anchors_match =
                    p.anchor_lo[0] == q.anchor_lo[0] && p.anchor_hi[0] == q.anchor_hi[0];
                let mut piece = Piece::from_nodes(p.xs.clone(), ys);
                if anchors_match {
                    piece.anchor_lo = [p.anchor_lo[0], op(p.anchor_lo[1], q.anchor_lo[1])];
                    piece.anchor_hi = [p.anchor_hi[0], op(p.anchor_hi[1], q.anchor_hi[1])];
                }
                pieces.push(piece);
            } else {
                let mut xs: Vec<f64> = p.xs.iter().chain(&q.xs).copied().collect();
                xs.sort_by(f64::total_cmp);
                xs.dedup();
                let ys = xs.iter().map(|&x| op(p.eval(x), q.eval(x))).collect();
                pieces.push(Piece::from_nodes(xs, ys));
            }
        }
        Ok(GridFunction {
            domain: self.domain.clone(),
            h: self.h.min(other.h),
            pieces,
        })
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `sup_K |f - g|` for two functions on the same domain.
    pub fn distance_on(&self, other: &GridFunction, k: &CompactSet) -> Result<f64> {
        self.sub(other)?.sup_norm_on(k)
    }
}

/// `lo`, the lattice points strictly inside, and `hi`.
pub(crate) fn component_nodes(iv: Interval, h: f64) -> Vec<f64> {
    let (k0, k1) = lattice_inside(iv.lo, iv.hi, h);
    let mut xs = Vec::with_capacity((k1 - k0 + 3).max(2) as usize);
    xs.push(iv.lo);
    for k in k0..=k1 {
        xs.push(k as f64 * h);
    }
    xs.push(iv.hi);
    xs
}

fn push_gap(xs: &mut Vec<f64>, ys: &mut Vec<f64>, a: f64, b: f64, h: f64, f: impl Fn(f64) -> f64) {
    xs.push(a);
    ys.push(f(a));
    let (k0, k1) = lattice_inside(a, b, h);
    for k in k0..=k1 {
        let x = k as f64 * h;
        xs.push(x);
        ys.push(f(x));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn open(v: &[(f64, f64)]) -> OpenSet {
        OpenSet::new(v.iter().copied()).unwrap()
    }

    #[test]
    fn identity_samples() {
        let f = GridFunction::from_fn(&open(&[(0.0, 1.0)]), 0.5, |x| x).unwrap();
        let ys: Vec<f64> = f.samples().map(|s| s.1).collect();
        assert_eq!(ys, vec![0.0, 0.5, 1.0]);
        assert!(GridFunction::from_fn(&open(&[(0.0, 0.1)]), 0.5, |x| x).is_err());
    }

    #[test]
    fn affine_is_reproduced() {
        let f = GridFunction::from_fn(&open(&[(-0.33, 1.7)]), 0.01, |x| 3.0 * x - 1.0).unwrap();
        for i in 0..=200 {
            let x = -0.33 + 2.03 * i as f64 / 200.0;
            assert!((f.eval(x).unwrap() - (3.0 * x - 1.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn sup_norm_examples() {
        let f = GridFunction::from_fn(&open(&[(-2.0, 2.0)]), 0.1, |x| x).unwrap();
        let k = CompactSet::interval(-1.0, 0.5).unwrap();
        assert!((f.sup_norm_on(&k).unwrap() - 1.0).abs() < 1e-15);
        let z = GridFunction::constant(&open(&[(0.0, 1.0)]), 0.1, 0.0).unwrap();
        assert_eq!(z.sup_norm_on(&CompactSet::interval(0.0, 1.0).unwrap()).unwrap(), 0.0);
        assert!(matches!(
            f.sup_norm_on(&CompactSet::interval(1.0, 3.0).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn l1_examples() {
        let one = GridFunction::constant(&open(&[(0.0, 2.0)]), 0.01, 1.0).unwrap();
        assert!((one.l1_norm() - 2.0).abs() < 1e-12);
        let id = GridFunction::from_fn(&open(&[(0.0, 1.0)]), 0.01, |x| x).unwrap();
        assert!((id.l1_norm() - 0.5).abs() < 1e-12);
        // off-lattice endpoints exercise the irregular cells
        let q = GridFunction::from_fn(&open(&[(0.0123, 0.9871)]), 0.01, |x| x * x).unwrap();
        let exact = (0.9871f64.powi(3) - 0.0123f64.powi(3)) / 3.0;
        assert!((q.l1_norm() - exact).abs() < 1e-13);
    }

    #[test]
    fn restriction_examples() {
        let f = GridFunction::from_fn(&open(&[(0.0, 1.0)]), 0.01, |x| (3.0 * x).sin()).unwrap();
        let v = open(&[(0.2, 0.8)]);
        let g = f.restrict(&v).unwrap();
        for (x, y) in g.samples() {
            assert_eq!(y, f.eval(x).unwrap());
        }
        assert_eq!(f.restrict(f.domain()).unwrap(), f);
        assert!(f.restrict(&open(&[(0.5, 1.5)])).is_err());
    }

    #[test]
    fn restriction_composes_exactly() {
        let f = GridFunction::from_fn(&open(&[(0.0, 1.0)]), 0.01, |x| (7.0 * x).cos()).unwrap();
        let v = open(&[(0.1234, 0.9)]);
        let w = open(&[(0.12345, 0.3), (0.5, 0.89999)]);
        let twice = f.restrict(&v).unwrap().restrict(&w).unwrap();
        assert_eq!(twice, f.restrict(&w).unwrap());
    }

    #[test]
    fn extension_examples() {
        let u = open(&[(0.0, 1.0), (2.0, 3.0)]);
        let f = GridFunction::from_fn(&u, 0.1, |x| if x < 1.5 { x } else { x + 1.0 }).unwrap();
        let g = f.extend_continuously(&open(&[(0.0, 3.0)])).unwrap();
        assert!((g.eval(1.5).unwrap() - 2.0).abs() < 1e-12);
        assert!((g.eval(1.25).unwrap() - 1.5).abs() < 1e-12);

        let f = GridFunction::from_fn(&open(&[(0.25, 0.75)]), 0.05, |x| if x < 0.5 { 2.0 } else { 5.0 })
            .unwrap();
        let g = f.extend_continuously(&open(&[(0.0, 1.0)])).unwrap();
        assert_eq!(g.eval(0.1).unwrap(), 2.0);
        assert_eq!(g.eval(0.9).unwrap(), 5.0);
        assert_eq!(f.extend_continuously(f.domain()).unwrap(), f);
        assert!(f.extend_continuously(&open(&[(0.3, 1.0)])).is_err());
    }

    #[test]
    fn extension_restricts_back() {
        let s = open(&[(0.1, 0.4), (0.6, 0.9)]);
        let f = GridFunction::from_fn(&s, 0.01, |x| x.exp()).unwrap();
        let g = f.extend_continuously(&open(&[(0.0, 1.0)])).unwrap();
        let back = g.restrict(&s).unwrap();
        let a: Vec<_> = back.samples().collect();
        let b: Vec<_> = f.samples().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip() {
        let f = GridFunction::from_fn(&open(&[(0.0, 1.0)]), 0.25, |x| x * x).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let g: GridFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
