//! Convergence of sequences of continuous functions under mollification.
//!
//! δ-convergence fixes the mollifier index: `‖(f_n - f) ∗ δ_m‖_K → 0` for
//! each `m`. Δ-convergence is diagonal: `‖(f_n - f) ∗ δ_n‖_K → 0`. The
//! functional `P_j(f)` is the infimum of `‖f ∗ φ‖_{K_j}` over admissible
//! mollifiers; here it is minimized over a grid of bump radii only, which
//! gives an upper bound.

use serde::{Deserialize, Serialize};

use crate::boehmian::{equivalent, is_fundamental, witness_indices, Boehmian, EquivParams, FundamentalSeq};
use crate::convolve::{mollify_near, CheckResult, DecayRule, Status, Witness};
use crate::error::{invalid, Error, Result};
use crate::geometry::{check_exhaustion, CompactSet, Exhaustion};
use crate::gridfn::GridFunction;
use crate::mollifier::{standard_bump, DeltaSeq, TestFunction};

/// Which notion of convergence a check certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConvergenceMode {
    /// Fixed mollifier index, `n → ∞` for each `m`.
    #[serde(rename = "delta_lower")]
    Fixed,
    /// Diagonal mollifier `δ_n`.
    #[serde(rename = "Delta_upper")]
    Diagonal,
}

/// Index pairs `(n, n + stride)` sampled by the Δ-Cauchy test.
pub const CAUCHY_STRIDES: [usize; 3] = [1, 2, 4];

fn rule(params: &EquivParams) -> DecayRule {
    DecayRule {
        tol: params.tol,
        grace: 2,
        noise: params.noise,
    }
}

fn judged(r: Vec<f64>, params: &EquivParams, note: String, at: Option<(f64, f64)>) -> CheckResult {
    let status = rule(params).judge(&r);
    let last = r.last().copied().unwrap_or(f64::NAN);
    let mut out = CheckResult::new(status, last, params.tol, params.horizon).with_residuals(r);
    if let Some((x, y)) = at {
        out = out.with_witness(Witness {
            location: x,
            value: y,
            note,
        });
    }
    out
}

fn sup_with_location(g: &GridFunction, k: &CompactSet) -> Result<(f64, Option<(f64, f64)>)> {
    Ok((g.sup_norm_on(k)?, crate::convolve::argmax_on(g, k)))
}

/// δ-convergence of `f_n` to `f` on `k`: for each examined `m`, the trace
/// `‖(f_n - f) ∗ δ_m‖_K`, `n = 1..=H`, is judged by the decay rule.
pub fn delta_converges(
    fs: &FundamentalSeq,
    f: &GridFunction,
    k: &CompactSet,
    witness: &DeltaSeq,
    params: &EquivParams,
) -> Result<CheckResult> {
    params.validate()?;
    let u = fs.domain();
    let mut parts = Vec::new();
    for m in witness_indices(witness, u, k, params.m_count)? {
        let phi = witness.get(m);
        let mut r = Vec::with_capacity(params.horizon);
        let mut at = None;
        for n in 1..=params.horizon {
            let c = mollify_near(&fs.get(n)?.sub(f)?, &phi, k)?;
            let (s, loc) = sup_with_location(&c, k)?;
            r.push(s);
            at = loc;
        }
        parts.push(judged(r, params, format!("m = {m}"), at));
    }
    Ok(CheckResult::combine(&parts))
}

/// Δ-convergence of `f_n` to `f` on `k`: the trace `‖(f - f_n) ∗ δ_n‖_K`
/// over the indices whose radius fits inside `d(K, U^c)`.
pub fn diagonal_converges(
    fs: &FundamentalSeq,
    f: &GridFunction,
    k: &CompactSet,
    witness: &DeltaSeq,
    params: &EquivParams,
) -> Result<CheckResult> {
    params.validate()?;
    let d = fs.domain().distance_to_complement(k)?;
    let mut r = Vec::with_capacity(params.horizon);
    let mut at = None;
    for n in 1..=params.horizon {
        let phi = witness.get(n);
        if phi.radius() >= d {
            continue;
        }
        let c = mollify_near(&f.sub(&fs.get(n)?)?, &phi, k)?;
        let (s, loc) = sup_with_location(&c, k)?;
        r.push(s);
        at = loc;
    }
    Ok(judged(r, params, "diagonal".into(), at))
}

/// Δ-Cauchy test on `k`: for each stride `t` in [`CAUCHY_STRIDES`], the
/// trace `‖(f_{n+t} - f_n) ∗ ψ_n‖_K` is judged by the decay rule.
pub fn delta_cauchy(fs: &FundamentalSeq, witness: &DeltaSeq, k: &CompactSet, params: &EquivParams) -> Result<CheckResult> {
    params.validate()?;
    let d = fs.domain().distance_to_complement(k)?;
    let mut parts = Vec::with_capacity(CAUCHY_STRIDES.len());
    for t in CAUCHY_STRIDES {
        let mut r = Vec::with_capacity(params.horizon);
        let mut at = None;
        for n in 1..=params.horizon {
            let psi = witness.get(n);
            if psi.radius() >= d {
                continue;
            }
            let c = mollify_near(&fs.get(n + t)?.sub(&fs.get(n)?)?, &psi, k)?;
            let (s, loc) = sup_with_location(&c, k)?;
            r.push(s);
            at = loc;
        }
        parts.push(judged(r, params, format!("stride {t}"), at));
    }
    Ok(CheckResult::combine(&parts))
}

/// Radii of the family admissible on `K_j` (1-based `j`).
fn admissible(ex: &Exhaustion, j: usize, radii: &[f64]) -> Result<Vec<f64>> {
    if j == 0 || j > ex.len() {
        return invalid(format!("compact index {j} outside 1..={}", ex.len()));
    }
    let margin = ex.margins[j - 1];
    let ok: Vec<f64> = radii.iter().copied().filter(|&r| r > 0.0 && r < margin).collect();
    if ok.is_empty() {
        return invalid(format!("no family radius below the margin {margin}"));
    }
    Ok(ok)
}

/// `min_ε ‖f ∗ bump(ε)‖_{K_j}` over the admissible radii: an upper bound for `P_j(f)`.
pub fn pj_upper(f: &GridFunction, j: usize, ex: &Exhaustion, radii: &[f64]) -> Result<f64> {
    let family = admissible(ex, j, radii)?;
    let k = &ex.sets[j - 1];
    let mut best = f64::INFINITY;
    for r in family {
        let c = mollify_near(f, &standard_bump(r)?, k)?;
        best = best.min(c.sup_norm_on(k)?);
    }
    Ok(best)
}

/// Per-compact comparison between Δ-convergence to zero and decay of `pj_upper`.
#[derive(Debug, Clone)]
pub struct PjComparison {
    pub j: usize,
    pub diagonal: CheckResult,
    pub pj: CheckResult,
}

/// Cross-checks Δ-convergence to zero on each `K_j` against decay of
/// `pj_upper(f_n, j)`. Verified when both verdicts agree and are decisive
/// for every `j`; refuted when some `j` has opposite decisive verdicts.
///
/// Since `pj_upper >= P_j`, decay of `pj_upper` implies decay of `P_j`,
/// but a stalled `pj_upper` does not by itself show that `P_j` stalls.
pub fn check_delta_iff_pj(
    fs: &FundamentalSeq,
    ex: &Exhaustion,
    radii: &[f64],
    witness: &DeltaSeq,
    params: &EquivParams,
) -> Result<(CheckResult, Vec<PjComparison>)> {
    params.validate()?;
    if ex.ambient != *fs.domain() {
        return invalid("the exhaustion belongs to another domain");
    }
    let h = fs.get(1)?.h();
    let zero = GridFunction::constant(fs.domain(), h, 0.0)?;
    let mut rows = Vec::with_capacity(ex.len());
    let mut status = Status::Verified;
    let mut gaps = Vec::with_capacity(ex.len());
    for j in 1..=ex.len() {
        let diagonal = diagonal_converges(fs, &zero, &ex.sets[j - 1], witness, params)?;
        let trace = (1..=params.horizon)
            .map(|n| pj_upper(&fs.get(n)?, j, ex, radii))
            .collect::<Result<Vec<_>>>()?;
        let pj = judged(trace, params, format!("j = {j}"), None);
        let s = match (diagonal.status, pj.status) {
            (a, b) if a == b && a != Status::Inconclusive => Status::Verified,
            (Status::Verified, Status::Refuted) | (Status::Refuted, Status::Verified) => Status::Refuted,
            _ => Status::Inconclusive,
        };
        status = status.and(s);
        gaps.push((diagonal.max_residual - pj.max_residual).abs());
        rows.push(PjComparison { j, diagonal, pj });
    }
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    Ok((
        CheckResult::new(status, worst, params.tol, params.horizon).with_residuals(gaps),
        rows,
    ))
}

/// Settings for [`extract_fundamental_subsequence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExtractOptions {
    /// Number of certified steps `n`.
    pub depth: usize,
    /// Largest index `p` that may be examined.
    pub max_index: usize,
    /// Smallest admissible `p_1`.
    pub start: usize,
    /// Candidate bump radii as fractions of `ε_n`, tried in order.
    pub family: Vec<f64>,
    /// `ε_n` as a fraction of `d(K_{n+1}, U^c)`.
    pub eps_fraction: f64,
    /// Slack allowed on the `2^{-n}` step bound.
    pub quad_tol: f64,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        Self {
            depth: 8,
            max_index: 64,
            start: 1,
            family: vec![0.99, 0.5, 0.25],
            eps_fraction: 0.5,
            quad_tol: 1e-6,
        }
    }
}

/// Per-step evidence for the extraction conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    /// `ε_{n+1} < ε_n / 2`, so that `Σ ε_n < 2 ε_1`.
    pub summable: bool,
    /// `s(φ_n) < ε_n`.
    pub radius_below: bool,
    /// `s(φ_n) < d(K_n, U^c)`, so the mollified difference is defined on `K_n`.
    pub defined: bool,
    /// `‖(f_{p_{n+1}} - f_{p_n}) ∗ φ_n‖_{K_{n+1}}`.
    pub residual: f64,
    /// `2^{-n}`.
    pub bound: f64,
}

impl Certificate {
    pub fn holds(&self, quad_tol: f64) -> bool {
        self.summable && self.radius_below && self.defined && self.residual < self.bound + quad_tol
    }
}

#[derive(Debug, Clone)]
pub struct ExtractionResult {
    /// `p_1 < p_2 < … < p_{depth+1}`.
    pub indices: Vec<usize>,
    pub radii: Vec<f64>,
    pub mollifiers: Vec<TestFunction>,
    pub certificates: Vec<Certificate>,
    /// Verdict of the fundamentality test on `(f_{p_n})`.
    pub fundamental: CheckResult,
    /// Witness `δ_k = φ_k ∗ φ_{k+1} ∗ …`, truncated at the certified depth.
    pub witness: DeltaSeq,
    pub status: Status,
    /// First step whose certification failed.
    pub failed_at: Option<usize>,
}

impl ExtractionResult {
    /// The extracted subsequence of `fs`.
    pub fn subsequence(&self, fs: &FundamentalSeq) -> Result<FundamentalSeq> {
        fs.subsequence(self.indices.clone())
    }
}

/// `p` certified for step `n` when `‖(f_{p+t} - f_p) ∗ φ‖_{K_{n+1}} < 2^{-n}`
/// for every stride, with `φ` the first family member that achieves it.
fn certify_step(
    fs: &FundamentalSeq,
    p: usize,
    eps: f64,
    k: &CompactSet,
    bound: f64,
    opts: &ExtractOptions,
) -> Result<Option<TestFunction>> {
    'family: for &frac in &opts.family {
        let phi = standard_bump(frac * eps)?;
        for t in CAUCHY_STRIDES {
            let c = mollify_near(&fs.get(p + t)?.sub(&fs.get(p)?)?, &phi, k)?;
            if c.sup_norm_on(k)? >= bound {
                continue 'family;
            }
        }
        return Ok(Some(phi));
    }
    Ok(None)
}

/// Greedy extraction of a subsequence `(f_{p_n})` with mollifiers `φ_n`
/// satisfying the four extraction conditions up to `opts.depth`, followed
/// by a fundamentality test of the subsequence under `δ_k = φ_k ∗ φ_{k+1} ∗ …`.
///
/// `ε_n` is taken below `d(K_{n+1}, U^c)` so that the step residual, measured on
/// `K_{n+1}`, is defined.
pub fn extract_fundamental_subsequence(
    fs: &FundamentalSeq,
    ex: &Exhaustion,
    opts: &ExtractOptions,
    params: &EquivParams,
) -> Result<ExtractionResult> {
    let report = check_exhaustion(ex)?;
    if !report.ok() {
        return invalid(format!("exhaustion fails its conditions: {report:?}"));
    }
    if ex.ambient != *fs.domain() {
        return invalid("the exhaustion belongs to another domain");
    }
    if opts.depth < 4 || ex.len() < opts.depth + 1 {
        return invalid("depth must be at least 4 with one more compact than steps");
    }
    if opts.family.is_empty() || opts.family.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
        return invalid("family fractions must lie in (0, 1)");
    }
    if !(opts.eps_fraction > 0.0 && opts.eps_fraction < 1.0) {
        return invalid("eps_fraction must lie in (0, 1)");
    }
    let eps: Vec<f64> = (1..=opts.depth).map(|n| opts.eps_fraction * ex.margins[n]).collect();
    let mut indices = Vec::with_capacity(opts.depth + 1);
    let mut mollifiers = Vec::with_capacity(opts.depth);
    let mut failed_at = None;
    let mut p = opts.start.max(1);
    for n in 1..=opts.depth {
        let k = &ex.sets[n];
        let bound = 0.5f64.powi(n as i32);
        let mut found = None;
        while p + CAUCHY_STRIDES[2] <= opts.max_index {
            if let Some(phi) = certify_step(fs, p, eps[n - 1], k, bound, opts)? {
                found = Some(phi);
                break;
            }
            p += 1;
        }
        match found {
            Some(phi) => {
                indices.push(p);
                mollifiers.push(phi);
                p += 1;
            }
            None => {
                failed_at = Some(n);
                break;
            }
        }
    }
    if let Some(n) = failed_at {
        let out = CheckResult::new(Status::Inconclusive, f64::NAN, 0.5f64.powi(n as i32), opts.depth);
        return Ok(ExtractionResult {
            indices,
            radii: eps,
            mollifiers,
            certificates: Vec::new(),
            fundamental: out,
            witness: DeltaSeq::default(),
            status: Status::Inconclusive,
            failed_at,
        });
    }
    indices.push(p);
    let mut certificates = Vec::with_capacity(opts.depth);
    for n in 1..=opts.depth {
        let phi = &mollifiers[n - 1];
        let k = &ex.sets[n];
        let diff = fs.get(indices[n])?.sub(&fs.get(indices[n - 1])?)?;
        let residual = mollify_near(&diff, phi, k)?.sup_norm_on(k)?;
        certificates.push(Certificate {
            n,
            summable: n == opts.depth || eps[n] < 0.5 * eps[n - 1],
            radius_below: phi.radius() < eps[n - 1],
            defined: phi.radius() < ex.margins[n - 1],
            residual,
            bound: 0.5f64.powi(n as i32),
        });
    }
    let last = eps[opts.depth - 1];
    let head = (0..opts.depth)
        .map(|k| TestFunction::truncated_product(mollifiers[k..].to_vec(), eps[k..].iter().sum::<f64>() + last))
        .collect::<Result<Vec<_>>>()?;
    let witness = DeltaSeq::Explicit {
        head,
        tail: Box::new(DeltaSeq::Geometric {
            s1: 0.5 * last,
            ratio: 0.5,
        }),
    };
    let sub = fs.subsequence(indices.clone())?;
    let check_params = EquivParams {
        horizon: opts.depth,
        witness: Some(witness.clone()),
        ..params.clone()
    };
    let fundamental = is_fundamental(&sub, &witness, &check_params)?;
    let certified = certificates.iter().all(|c| c.holds(opts.quad_tol));
    let status = if certified {
        fundamental.status
    } else {
        Status::Refuted.and(fundamental.status)
    };
    Ok(ExtractionResult {
        indices,
        radii: eps,
        mollifiers,
        certificates,
        fundamental,
        witness,
        status,
        failed_at: None,
    })
}

/// One member of the bridge battery.
#[derive(Debug, Clone)]
pub struct BridgeInstance {
    pub name: String,
    pub seq: FundamentalSeq,
    /// Mollifiers for the Δ-Cauchy test.
    pub witness: DeltaSeq,
}

/// The three bridge properties for one instance.
#[derive(Debug, Clone)]
pub struct BridgeRow {
    pub name: String,
    /// The fundamental sequence passes the Δ-Cauchy test.
    pub cauchy: CheckResult,
    /// Extraction yields a fundamental subsequence.
    pub extraction: CheckResult,
    /// Two extractions with different starting indices are equivalent.
    pub uniqueness: CheckResult,
}

/// Runs the three bridge properties over a battery. The Δ-Cauchy test uses
/// the exhaustion's second compact.
pub fn check_class_bridge(
    instances: &[BridgeInstance],
    ex: &Exhaustion,
    opts: &ExtractOptions,
    params: &EquivParams,
) -> Result<(CheckResult, Vec<BridgeRow>)> {
    let k = ex
        .sets
        .get(1)
        .ok_or_else(|| Error::InvalidArgument("exhaustion needs two compacts".into()))?;
    let mut rows = Vec::with_capacity(instances.len());
    let mut parts = Vec::new();
    for inst in instances {
        let cauchy = delta_cauchy(&inst.seq, &inst.witness, k, params)?;
        let first = extract_fundamental_subsequence(&inst.seq, ex, opts, params)?;
        let second_opts = ExtractOptions {
            start: first.indices.first().copied().unwrap_or(1) + 1,
            ..opts.clone()
        };
        let second = extract_fundamental_subsequence(&inst.seq, ex, &second_opts, params)?;
        let mut extraction = first.fundamental.clone();
        extraction.status = first.status;
        let uniqueness = if first.failed_at.is_none() && second.failed_at.is_none() {
            let a = Boehmian::new(first.subsequence(&inst.seq)?, first.witness.clone());
            let b = Boehmian::new(second.subsequence(&inst.seq)?, second.witness.clone());
            let p = EquivParams {
                horizon: opts.depth,
                witness: None,
                ..params.clone()
            };
            equivalent(&a, &b, &p)?
        } else {
            CheckResult::new(Status::Inconclusive, f64::NAN, params.tol, opts.depth)
        };
        parts.extend([cauchy.clone(), extraction.clone(), uniqueness.clone()]);
        rows.push(BridgeRow {
            name: inst.name.clone(),
            cauchy,
            extraction,
            uniqueness,
        });
    }
    Ok((CheckResult::combine(&parts), rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{compact_exhaustion, OpenSet};

    fn unit() -> OpenSet {
        OpenSet::interval(-1.0, 1.0).unwrap()
    }

    fn params() -> EquivParams {
        EquivParams::default().with_horizon(8)
    }

    #[test]
    fn constant_sequence_converges_both_ways() {
        let f = GridFunction::from_fn(&unit(), 0.01, |x| x * x).unwrap();
        let fs = FundamentalSeq::constant(f.clone());
        let k = CompactSet::interval(-0.5, 0.5).unwrap();
        let w = DeltaSeq::default();
        assert!(delta_converges(&fs, &f, &k, &w, &params()).unwrap().is_verified());
        assert!(diagonal_converges(&fs, &f, &k, &w, &params()).unwrap().is_verified());
    }

    #[test]
    fn shifted_sequence_is_refuted() {
        let f = GridFunction::from_fn(&unit(), 0.01, |x| x).unwrap();
        let fs = FundamentalSeq::constant(f.map(|y| y + 1.0));
        let k = CompactSet::interval(-0.5, 0.5).unwrap();
        let r = diagonal_converges(&fs, &f, &k, &DeltaSeq::default(), &params()).unwrap();
        assert!(r.is_refuted());
        assert!((r.max_residual - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pj_of_constants() {
        let ex = compact_exhaustion(&unit(), 3).unwrap();
        let radii = [0.01, 0.02, 0.05];
        let zero = GridFunction::constant(&unit(), 0.01, 0.0).unwrap();
        let one = GridFunction::constant(&unit(), 0.01, 1.0).unwrap();
        assert_eq!(pj_upper(&zero, 2, &ex, &radii).unwrap(), 0.0);
        assert!((pj_upper(&one, 2, &ex, &radii).unwrap() - 1.0).abs() < 1e-9);
        assert!(pj_upper(&one, 2, &ex, &[0.5]).is_err());
    }

    #[test]
    fn equal_terms_extract_consecutively() {
        let f = GridFunction::from_fn(&unit(), 0.01, |x| x).unwrap();
        let fs = FundamentalSeq::constant(f);
        let ex = compact_exhaustion(&unit(), 5).unwrap();
        let opts = ExtractOptions {
            depth: 4,
            ..Default::default()
        };
        let r = extract_fundamental_subsequence(&fs, &ex, &opts, &params()).unwrap();
        assert_eq!(r.indices, vec![1, 2, 3, 4, 5]);
        assert!(r.certificates.iter().all(|c| c.residual == 0.0 && c.holds(0.0)));
        assert!(r.fundamental.is_verified(), "{:?}", r.fundamental);
    }
}
