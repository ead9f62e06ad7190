//! Nonnegative unit-mass test functions: scaled standard bumps, their
//! convolution products, and delta sequences built from them.
//!
//! A bump is evaluated analytically. A product is realized on demand as
//! samples on a fine lattice over `[-s, s]`, computed by convolving the
//! piecewise-linear interpolant of the widest factor with every other factor
//! in turn (exact product integration, see [`bump_stencil`]).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad;

/// Lattice cells per half-width used when realizing a product.
pub const REALIZE_CELLS: usize = 2048;

fn unit_bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| {
        quad::gl10_composite(-1.0, 1.0, 1.0 / 64.0, |y| (-1.0 / (1.0 - y * y)).exp())
    })
}

/// `∫ exp(-1/(1-y^2)) dy` over `(-1, 1)`.
pub fn bump_normalizer() -> f64 {
    unit_bump_mass()
}

/// The standard bump of radius `eps`, normalized to unit mass.
pub fn bump_value(eps: f64, x: f64) -> f64 {
    let t = x / eps;
    if t.abs() >= 1.0 {
        return 0.0;
    }
    (-1.0 / (1.0 - t * t)).exp() / (unit_bump_mass() * eps)
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Bump(f64),
    Product {
        factors: Vec<TestFunction>,
        truncated: bool,
        radius: f64,
    },
}

/// Samples of a product on the lattice `k * eta`, `|k| <= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realized {
    pub eta: f64,
    pub values: Vec<f64>,
}

impl Realized {
    fn half(&self) -> i64 {
        (self.values.len() / 2) as i64
    }

    pub fn at_index(&self, k: i64) -> f64 {
        let i = k + self.half();
        if i < 0 || i as usize >= self.values.len() {
            0.0
        } else {
            self.values[i as usize]
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = x / self.eta;
        let k = t.floor();
        let frac = t - k;
        let k = k as i64;
        let a = self.at_index(k);
        let b = self.at_index(k + 1);
        a + (b - a) * frac
    }
}

/// A nonnegative test function of unit mass with a tracked support radius.
#[derive(Debug, Clone)]
pub struct TestFunction {
    shape: Arc<Shape>,
    realized: Arc<OnceLock<Realized>>,
}

impl PartialEq for TestFunction {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape
    }
}

/// `φ_ε(x) = C/ε · exp(-1/(1-(x/ε)^2))` on `(-ε, ε)`.
pub fn standard_bump(eps: f64) -> Result<TestFunction> {
    if !(eps > 0.0 && eps.is_finite()) {
        return invalid(format!("bump radius must be positive, got {eps}"));
    }
    Ok(TestFunction::from_shape(Shape::Bump(eps)))
}

/// `φ ∗ ψ`, with support radius `s(φ) + s(ψ)`.
pub fn convolve_test(phi: &TestFunction, psi: &TestFunction) -> TestFunction {
    TestFunction::product(vec![phi.clone(), psi.clone()])
}

impl TestFunction {
    fn from_shape(shape: Shape) -> Self {
        Self {
            shape: Arc::new(shape),
            realized: Arc::new(OnceLock::new()),
        }
    }

    /// Finite convolution product of the given factors.
    pub fn product(factors: Vec<TestFunction>) -> Self {
        let radius = factors.iter().map(TestFunction::radius).sum();
        Self::from_shape(Shape::Product {
            factors,
            truncated: false,
            radius,
        })
    }

    /// A truncation of an infinite product, keeping the radius of the full series.
    pub fn truncated_product(factors: Vec<TestFunction>, radius: f64) -> Result<Self> {
        let partial: f64 = factors.iter().map(TestFunction::radius).sum();
        if !(radius >= partial) || !radius.is_finite() {
            return invalid("declared radius is smaller than the sum of factor radii");
        }
        Ok(Self::from_shape(Shape::Product {
            factors,
            truncated: true,
            radius,
        }))
    }

    /// `s(φ)`: exact descriptor-level support radius.
    pub fn radius(&self) -> f64 {
        match &*self.shape {
            Shape::Bump(e) => *e,
            Shape::Product { radius, .. } => *radius,
        }
    }

    pub fn is_bump(&self) -> bool {
        matches!(*self.shape, Shape::Bump(_))
    }

    pub fn is_truncated(&self) -> bool {
        matches!(*self.shape, Shape::Product { truncated: true, .. })
    }

    /// Radii of all bump factors, depth first.
    pub fn bump_radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_radii(&mut out);
        out
    }

    fn collect_radii(&self, out: &mut Vec<f64>) {
        match &*self.shape {
            Shape::Bump(e) => out.push(*e),
            Shape::Product { factors, .. } => {
                for f in factors {
                    f.collect_radii(out);
                }
            }
        }
    }

    /// Bump radii sorted from widest to narrowest.
    pub(crate) fn sorted_radii(&self) -> Vec<f64> {
        let mut r = self.bump_radii();
        r.sort_by(|a, b| b.total_cmp(a));
        r
    }

    /// Lattice realization of a product; `None` for a plain bump.
    pub fn realization(&self) -> Option<&Realized> {
        match &*self.shape {
            Shape::Bump(_) => None,
            Shape::Product { .. } => Some(self.realized.get_or_init(|| self.realize())),
        }
    }

    fn realize(&self) -> Realized {
        let eta = self.radius() / REALIZE_CELLS as f64;
        let radii = self.sorted_radii();
        let mut values: Vec<f64> = (-(REALIZE_CELLS as i64)..=REALIZE_CELLS as i64)
            .map(|k| bump_value(radii[0], k as f64 * eta))
            .collect();
        for &r in &radii[1..] {
            values = convolve_zero_padded(&values, &bump_stencil(r, eta));
        }
        Realized { eta, values }
    }

    /// Pointwise value.
    pub fn eval(&self, x: f64) -> f64 {
        match &*self.shape {
            Shape::Bump(e) => bump_value(*e, x),
            Shape::Product { .. } => {
                if x.abs() >= self.radius() {
                    0.0
                } else {
                    self.realization().expect("product").eval(x)
                }
            }
        }
    }

    /// `∫ φ(u) g(u) du` over `[a, b]`.
    pub fn integrate_against(&self, a: f64, b: f64, g: impl Fn(f64) -> f64) -> f64 {
        let s = self.radius();
        let (lo, hi) = (a.max(-s), b.min(s));
        if !(lo < hi) {
            return 0.0;
        }
        match &*self.shape {
            Shape::Bump(e) => {
                let e = *e;
                quad::gl10_composite(lo, hi, e / 32.0, |u| bump_value(e, u) * g(u))
            }
            Shape::Product { .. } => {
                let r = self.realization().expect("product");
                let eta = r.eta;
                let k0 = (lo / eta).floor() as i64;
                let k1 = (hi / eta).ceil() as i64;
                let mut acc = 0.0;
                for k in k0..k1 {
                    let c0 = (k as f64 * eta).max(lo);
                    let c1 = ((k + 1) as f64 * eta).min(hi);
                    if c0 < c1 {
                        let (ya, yb) = (r.at_index(k), r.at_index(k + 1));
                        let x0 = k as f64 * eta;
                        acc += quad::gl3(c0, c1, |u| (ya + (yb - ya) * ((u - x0) / eta)) * g(u));
                    }
                }
                acc
            }
        }
    }

    /// `(∫ φ, ∫ ((u-a)/(b-a)) φ)` over the cell `[a, b]`.
    pub fn cell_moments(&self, a: f64, b: f64) -> (f64, f64) {
        let d = b - a;
        let m0 = self.integrate_against(a, b, |_| 1.0);
        let m1 = self.integrate_against(a, b, |u| (u - a) / d);
        (m0, m1)
    }

    /// Total mass (should be one).
    pub fn mass(&self) -> f64 {
        let s = self.radius();
        self.integrate_against(-s, s, |_| 1.0)
    }

    pub fn descriptor(&self) -> Descriptor {
        match &*self.shape {
            Shape::Bump(e) => Descriptor::Bump { bump: *e },
            Shape::Product {
                factors,
                truncated,
                radius,
            } => Descriptor::Product {
                product: factors.iter().map(TestFunction::descriptor).collect(),
                truncated: *truncated,
                radius: truncated.then_some(*radius),
            },
        }
    }

    pub fn from_descriptor(d: &Descriptor) -> Result<Self> {
        match d {
            Descriptor::Bump { bump } => standard_bump(*bump),
            Descriptor::Product {
                product,
                truncated,
                radius,
            } => {
                if product.is_empty() {
                    return Err(Error::Descriptor("empty product".into()));
                }
                let factors = product
                    .iter()
                    .map(TestFunction::from_descriptor)
                    .collect::<Result<Vec<_>>>()?;
                match (truncated, radius) {
                    (true, Some(r)) => TestFunction::truncated_product(factors, *r),
                    (true, None) => Err(Error::Descriptor("truncated product needs a radius".into())),
                    (false, _) => Ok(TestFunction::product(factors)),
                }
            }
        }
    }
}

/// JSON form of a test function: `{"bump": ε}` or
/// `{"product": [...], "truncated": bool, "radius": s}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Descriptor {
    Bump {
        bump: f64,
    },
    Product {
        product: Vec<Descriptor>,
        #[serde(default)]
        truncated: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radius: Option<f64>,
    },
}

impl Serialize for TestFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TestFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = Descriptor::deserialize(d)?;
        TestFunction::from_descriptor(&desc).map_err(serde::de::Error::custom)
    }
}

/// Product-integration weights of a bump on a lattice of spacing `h`.
///
/// For the piecewise-linear interpolant `f` of lattice samples `f_i`,
/// `(f ∗ φ)(k h) = Σ_i f_i w[k - i]`. Cell `c_j = [(j-1)h, jh]` has moments
/// `m0_j = ∫_{c_j} φ` and `m1_j = ∫_{c_j} ((u - (j-1)h)/h) φ`, and
/// `w_j = m1_j + m0_{j+1} - m1_{j+1}`.
#[derive(Debug, Clone)]
pub struct Stencil {
    /// Smallest `j` with a stored moment; `w` and the moments start here.
    pub j0: i64,
    pub m0: Vec<f64>,
    pub m1: Vec<f64>,
    pub w: Vec<f64>,
}

impl Stencil {
    pub fn weight(&self, j: i64) -> f64 {
        let i = j - self.j0;
        if i < 0 || i as usize >= self.w.len() {
            0.0
        } else {
            self.w[i as usize]
        }
    }

    /// Moments of cell `c_j`.
    pub fn moments(&self, j: i64) -> (f64, f64) {
        let i = j - self.j0;
        if i < 0 || i as usize >= self.m0.len() {
            (0.0, 0.0)
        } else {
            (self.m0[i as usize], self.m1[i as usize])
        }
    }

    pub fn j_max(&self) -> i64 {
        self.j0 + self.w.len() as i64 - 1
    }
}

type StencilKey = (u64, u64);

fn stencil_cache() -> &'static Mutex<HashMap<StencilKey, Arc<Stencil>>> {
    static CACHE: OnceLock<Mutex<HashMap<StencilKey, Arc<Stencil>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached product-integration stencil of `bump(eps)` at spacing `h`.
pub fn bump_stencil(eps: f64, h: f64) -> Arc<Stencil> {
    let key = (eps.to_bits(), h.to_bits());
    if let Some(s) = stencil_cache().lock().expect("stencil cache").get(&key) {
        return s.clone();
    }
    let phi = TestFunction::from_shape(Shape::Bump(eps));
    let big_j = (eps / h).ceil() as i64;
    let j0 = -big_j;
    let (mut m0, mut m1) = (Vec::new(), Vec::new());
    for j in j0..=big_j + 1 {
        let a = (j - 1) as f64 * h;
        let (x, y) = phi.cell_moments(a, a + h);
        m0.push(x);
        m1.push(y);
    }
    let w = (0..m0.len() - 1)
        .map(|i| m1[i] + m0[i + 1] - m1[i + 1])
        .collect();
    let st = Arc::new(Stencil { j0, m0, m1, w });
    let mut cache = stencil_cache().lock().expect("stencil cache");
    if cache.len() > 4096 {
        cache.clear();
    }
    cache.insert(key, st.clone());
    st
}

/// Full-line convolution of lattice samples (zero outside) with a stencil;
/// the output keeps the input length.
pub(crate) fn convolve_zero_padded(v: &[f64], st: &Stencil) -> Vec<f64> {
    let n = v.len() as i64;
    (0..n)
        .map(|k| {
            let lo = (k - st.j_max()).max(0);
            let hi = (k - st.j0).min(n - 1);
            (lo..=hi).map(|i| v[i as usize] * st.weight(k - i)).sum()
        })
        .collect()
}

/// A rule `n ↦ δ_n` of test functions with radii tending to zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaSeq {
    /// `δ_n = bump(s1 · ratio^(n-1))`.
    Geometric { s1: f64, ratio: f64 },
    /// `δ_n = a_n ∗ b_n`.
    Product(Box<DeltaSeq>, Box<DeltaSeq>),
    /// `δ_n = base_(n + skip)`.
    Tail { base: Box<DeltaSeq>, skip: usize },
    /// The listed functions first, then `tail_1, tail_2, ...`.
    Explicit { head: Vec<TestFunction>, tail: Box<DeltaSeq> },
}

impl Default for DeltaSeq {
    fn default() -> Self {
        DeltaSeq::Geometric { s1: 0.5, ratio: 0.5 }
    }
}

/// Geometric bump schedule `s1, s1·ratio, s1·ratio², ...`.
pub fn delta_sequence(s1: f64, ratio: f64) -> Result<DeltaSeq> {
    if !(s1 > 0.0 && s1.is_finite()) {
        return invalid(format!("first radius must be positive, got {s1}"));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return invalid(format!("ratio must lie in (0, 1), got {ratio}"));
    }
    Ok(DeltaSeq::Geometric { s1, ratio })
}

impl DeltaSeq {
    /// Checks parameters recursively.
    pub fn validate(&self) -> Result<()> {
        match self {
            DeltaSeq::Geometric { s1, ratio } => delta_sequence(*s1, *ratio).map(|_| ()),
            DeltaSeq::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            DeltaSeq::Tail { base, .. } => base.validate(),
            DeltaSeq::Explicit { tail, .. } => tail.validate(),
        }
    }

    /// `δ_n` for `n >= 1`.
    pub fn get(&self, n: usize) -> TestFunction {
        assert!(n >= 1, "delta sequences are indexed from 1");
        match self {
            DeltaSeq::Geometric { s1, ratio } => {
                TestFunction::from_shape(Shape::Bump(s1 * ratio.powi(n as i32 - 1)))
            }
            DeltaSeq::Product(a, b) => convolve_test(&a.get(n), &b.get(n)),
            DeltaSeq::Tail { base, skip } => base.get(n + skip),
            DeltaSeq::Explicit { head, tail } => match head.get(n - 1) {
                Some(f) => f.clone(),
                None => tail.get(n - head.len()),
            },
        }
    }

    /// `s(δ_n)`.
    pub fn radius(&self, n: usize) -> f64 {
        match self {
            DeltaSeq::Geometric { s1, ratio } => s1 * ratio.powi(n as i32 - 1),
            DeltaSeq::Product(a, b) => a.radius(n) + b.radius(n),
            DeltaSeq::Tail { base, skip } => base.radius(n + skip),
            DeltaSeq::Explicit { head, tail } => match head.get(n - 1) {
                Some(f) => f.radius(),
                None => tail.radius(n - head.len()),
            },
        }
    }

    /// Every family here has geometric radii eventually, hence a finite sum.
    pub fn summable(&self) -> bool {
        self.validate().is_ok()
    }

    /// `Σ_{k >= n} s(δ_k)`.
    pub fn radius_tail_sum(&self, n: usize) -> f64 {
        match self {
            DeltaSeq::Geometric { s1, ratio } => s1 * ratio.powi(n as i32 - 1) / (1.0 - ratio),
            DeltaSeq::Product(a, b) => a.radius_tail_sum(n) + b.radius_tail_sum(n),
            DeltaSeq::Tail { base, skip } => base.radius_tail_sum(n + skip),
            DeltaSeq::Explicit { head, tail } => {
                if n <= head.len() {
                    head[n - 1..].iter().map(TestFunction::radius).sum::<f64>()
                        + tail.radius_tail_sum(1)
                } else {
                    tail.radius_tail_sum(n - head.len())
                }
            }
        }
    }

    /// `Σ_n s(δ_n)`.
    pub fn radius_sum(&self) -> f64 {
        self.radius_tail_sum(1)
    }

    /// First index whose radius is strictly below `r`, if any within `limit`.
    pub fn first_below(&self, r: f64, limit: usize) -> Option<usize> {
        (1..=limit).find(|&n| self.radius(n) < r)
    }
}

/// Result of [`infinite_convolution`].
#[derive(Debug, Clone)]
pub struct InfiniteConvolution {
    pub psi: TestFunction,
    pub terms: usize,
    pub radius_tail: f64,
    pub last_sup_change: f64,
}

/// Upper limit on factors tried by [`infinite_convolution`].
pub const MAX_FACTORS: usize = 60;

/// `ψ = φ_1 ∗ φ_2 ∗ ...`, truncated once the remaining radius is below
/// `tail_tol` and consecutive partial products differ by less than
/// `sup_tol`. The declared radius is the full series sum.
pub fn infinite_convolution(seq: &DeltaSeq, tail_tol: f64, sup_tol: f64) -> Result<InfiniteConvolution> {
    if !(tail_tol > 0.0 && sup_tol > 0.0) {
        return invalid("tolerances must be positive");
    }
    if !seq.summable() {
        return invalid("radii of the schedule are not summable");
    }
    let total = seq.radius_sum();
    let eta = total / REALIZE_CELLS as f64;
    let first = seq.get(1);
    if !first.is_bump() {
        return invalid("infinite products are built from bump schedules");
    }
    let mut factors = vec![first.clone()];
    let mut values: Vec<f64> = (-(REALIZE_CELLS as i64)..=REALIZE_CELLS as i64)
        .map(|k| first.eval(k as f64 * eta))
        .collect();
    let mut sorted = true;
    let mut change = f64::INFINITY;
    for n in 2..=MAX_FACTORS {
        let phi = seq.get(n);
        if !phi.is_bump() {
            return invalid("infinite products are built from bump schedules");
        }
        sorted &= phi.radius() <= factors[factors.len() - 1].radius();
        let next = convolve_zero_padded(&values, &bump_stencil(phi.radius(), eta));
        change = next
            .iter()
            .zip(&values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        values = next;
        factors.push(phi);
        let tail = seq.radius_tail_sum(n + 1);
        if tail < tail_tol && change < sup_tol {
            let psi = TestFunction::truncated_product(factors, total)?;
            if sorted {
                // same operation order as a fresh realization
                let _ = psi.realized.set(Realized { eta, values });
            }
            return Ok(InfiniteConvolution {
                psi,
                terms: n,
                radius_tail: tail,
                last_sup_change: change,
            });
        }
    }
    Err(Error::InvalidArgument(format!(
        "no truncation within {MAX_FACTORS} factors (last change {change:e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_basics() {
        let phi = standard_bump(1.0).unwrap();
        assert!((phi.mass() - 1.0).abs() < 1e-12);
        assert_eq!(phi.eval(1.0), 0.0);
        assert_eq!(phi.eval(-1.0), 0.0);
        assert_eq!(phi.eval(0.3), phi.eval(-0.3));
        assert!((phi.eval(0.0) - 0.8286).abs() < 1e-4);
        let half = standard_bump(0.5).unwrap();
        assert!((half.eval(0.0) - 2.0 * phi.eval(0.0)).abs() < 1e-14);
        assert!(standard_bump(0.0).is_err());
    }

    #[test]
    fn radii() {
        let a = standard_bump(0.1).unwrap();
        let b = standard_bump(0.2).unwrap();
        assert_eq!(standard_bump(0.3).unwrap().radius(), 0.3);
        assert!((convolve_test(&a, &b).radius() - 0.3).abs() < 1e-16);
    }

    #[test]
    fn geometric_schedule() {
        let d = delta_sequence(0.5, 0.5).unwrap();
        assert_eq!(d.radius(1), 0.5);
        assert_eq!(d.radius(2), 0.25);
        assert_eq!(d.radius(3), 0.125);
        assert!((d.radius_sum() - 1.0).abs() < 1e-15);
        assert!(delta_sequence(0.5, 1.0).is_err());
        assert!(delta_sequence(-1.0, 0.5).is_err());
    }

    #[test]
    fn stencil_weights_sum_to_one() {
        for (eps, h) in [(0.5, 0.01), (0.001, 0.01), (0.37, 0.0123)] {
            let st = bump_stencil(eps, h);
            let s: f64 = st.w.iter().sum();
            assert!((s - 1.0).abs() < 1e-13, "{eps} {h}: {s}");
        }
    }

    #[test]
    fn product_mass_and_symmetry() {
        let a = standard_bump(0.2).unwrap();
        let b = standard_bump(0.3).unwrap();
        let ab = convolve_test(&a, &b);
        assert!((ab.mass() - 1.0).abs() < 1e-7);
        let ba = convolve_test(&b, &a);
        for i in 0..50 {
            let x = -0.5 + i as f64 * 0.02;
            assert!((ab.eval(x) - ba.eval(x)).abs() < 1e-8);
            assert!(ab.eval(x) >= 0.0);
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let a = standard_bump(0.2).unwrap();
        let p = convolve_test(&a, &standard_bump(0.1).unwrap());
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"product":[{"bump":0.2},{"bump":0.1}],"truncated":false}"#);
        let back: TestFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<TestFunction>(r#"{"bump":-1}"#).is_err());
    }

    #[test]
    fn infinite_product_of_dyadic_bumps() {
        let seq = delta_sequence(0.5, 0.5).unwrap();
        let out = infinite_convolution(&seq, 1e-6, 1e-6).unwrap();
        assert!(out.psi.radius() <= 1.0);
        assert!(out.psi.is_truncated());
        assert!((out.psi.mass() - 1.0).abs() < 1e-6);
        assert!(out.last_sup_change < 1e-6);
    }
}
