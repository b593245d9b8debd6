//! The non-cyclic problems on the simplex.
//!
//! For `x` in the simplex `Δ_N` (entries indexed `1-N..=0`, nonnegative,
//! summing to one) and `p > 0`:
//!
//! ```text
//! T(x, p)  = sum_{i<=-1} x_i / m_i^+(x) + x_0 / p    (windows inside 1-N..=0)
//! T~(x, p) = sum_{i<=-1} x_i / x_{i+1}  + x_0 / p
//! ```
//!
//! Both have the same minimum over `Δ_N`, and at `p = 1/n` that minimum is
//! the infimum of the cyclic maximal-average sum over n-tuples.
//!
//! The minimizer of `T~` is supported on a suffix, so [`minimize_chain`]
//! enumerates support sizes `k` and solves each smooth subproblem with a
//! damped Newton method in log coordinates.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `Δ_N`, stored as its suffix after the leading zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexVector {
    len: usize,
    tail: Vec<f64>,
}

const SIMPLEX_SUM_TOL: f64 = 1e-12;

impl SimplexVector {
    /// Entries ordered from `x_{1-N}` to `x_0`.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("simplex vector must be nonempty".into()));
        }
        if let Some(k) = entries.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput(format!("entry {} is not finite and nonnegative", k + 1)));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::InvalidInput(format!("entries sum to {sum}, not 1")));
        }
        Ok(Self::from_entries(entries))
    }

    /// Scales nonnegative entries to sum one.
    pub fn normalized(entries: Vec<f64>) -> Result<Self> {
        let sum: f64 = entries.iter().sum();
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidInput("entries must have a positive finite sum".into()));
        }
        Self::new(entries.into_iter().map(|v| v / sum).collect())
    }

    /// `len - tail.len()` zeros followed by `tail`.
    pub fn from_tail(len: usize, tail: Vec<f64>) -> Result<Self> {
        if tail.len() > len {
            return Err(Error::InvalidInput("support longer than the vector".into()));
        }
        let mut entries = vec![0.0; len - tail.len()];
        entries.extend(tail);
        Self::new(entries)
    }

    fn from_entries(entries: Vec<f64>) -> Self {
        let len = entries.len();
        let first = entries.iter().position(|&v| v != 0.0).unwrap_or(len - 1);
        Self { len, tail: entries[first..].to_vec() }
    }

    /// `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entries from the first nonzero one through `x_0`.
    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    /// Number of entries from the first nonzero one through `x_0`.
    pub fn support(&self) -> usize {
        self.tail.len()
    }

    /// Dense entries `x_{1-N}, ..., x_0`.
    pub fn entries(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.len - self.tail.len()];
        v.extend_from_slice(&self.tail);
        v
    }

    /// Entry `x_i` for `i` in `1-N..=0`.
    pub fn get(&self, i: i64) -> f64 {
        let pos = (self.len as i64 - 1 + i) as usize;
        let lead = self.len - self.tail.len();
        if pos < lead { 0.0 } else { self.tail[pos - lead] }
    }

    fn position_of(&self, tail_pos: usize) -> usize {
        self.len - self.tail.len() + tail_pos + 1
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("p must be positive and finite, got {p}")))
    }
}

/// `T(x, p)` with forward maximal averages restricted to the vector.
pub fn t_noncyclic(x: &SimplexVector, p: f64) -> Result<f64> {
    check_p(p)?;
    let tail = x.tail();
    let last = tail.len() - 1;
    let mut total = 0.0;
    for j in 0..last {
        if tail[j] == 0.0 {
            continue;
        }
        let mut sum = 0.0;
        let mut best: f64 = 0.0;
        for (r, v) in tail[j + 1..].iter().enumerate() {
            sum += v;
            best = best.max(sum / (r + 1) as f64);
        }
        if best == 0.0 {
            return Err(Error::InadmissiblePair { index: x.position_of(j) });
        }
        total += tail[j] / best;
    }
    Ok(total + tail[last] / p)
}

/// `T~(x, p)`; terms `0/0` in front of the support are dropped.
pub fn t_chain(x: &SimplexVector, p: f64) -> Result<f64> {
    check_p(p)?;
    chain_value(x.tail(), p).map_err(|j| Error::InadmissiblePair { index: x.position_of(j) })
}

fn chain_value(tail: &[f64], p: f64) -> std::result::Result<f64, usize> {
    let mut total = 0.0;
    for (j, w) in tail.windows(2).enumerate() {
        match (w[0] == 0.0, w[1] == 0.0) {
            (true, _) => {}
            (false, true) => return Err(j),
            (false, false) => total += w[0] / w[1],
        }
    }
    Ok(total + tail[tail.len() - 1] / p)
}

/// Partial derivatives of `T~` with respect to the entries of a strictly
/// positive support `(x_{1-k}, ..., x_0)`.
pub fn chain_gradient(support: &[f64], p: f64) -> Vec<f64> {
    let k = support.len();
    let mut g = vec![0.0; k];
    for j in 0..k {
        if j + 1 < k {
            g[j] += 1.0 / support[j + 1];
        }
        if j > 0 {
            g[j] -= support[j - 1] / (support[j] * support[j]);
        }
    }
    g[k - 1] += 1.0 / p;
    g
}

/// Euclidean norm of the gradient projected onto the tangent space of the
/// sum constraint (restricted to the support), and the scale of the terms
/// that were summed to produce it.
pub fn projected_residual(support: &[f64], p: f64) -> (f64, f64) {
    let g = chain_gradient(support, p);
    let mean = g.iter().sum::<f64>() / g.len() as f64;
    let norm = g.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt();
    let k = support.len();
    let mut scale = 1.0f64.max(1.0 / p);
    for j in 0..k {
        if j + 1 < k {
            scale = scale.max(1.0 / support[j + 1]);
        }
        if j > 0 {
            scale = scale.max(support[j - 1] / (support[j] * support[j]));
        }
    }
    (norm, scale)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    /// Projected-gradient tolerance, relative to the magnitude of the
    /// gradient terms (at least 1).
    pub stationarity_tol: f64,
    /// Relative value change below which Newton iterations stop.
    pub value_rtol: f64,
    pub max_iter: usize,
    /// Geometric start profiles `x_j ∝ ratio^j`, leftmost entry largest.
    pub start_ratios: Vec<f64>,
    /// Stop enumerating support sizes after this many non-improving sizes.
    pub patience: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            stationarity_tol: 1e-10,
            value_rtol: 1e-12,
            max_iter: 500,
            start_ratios: vec![0.25, (-1.0f64).exp(), 0.45],
            patience: 3,
        }
    }
}

impl OptimizerConfig {
    pub fn with_tolerance(tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { stationarity_tol: tol, ..Self::default() })
    }
}

/// Minimizer of the chain problem for one `(N, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSolution {
    pub n: usize,
    pub p: f64,
    pub value: f64,
    pub minimizer: SimplexVector,
    pub support: usize,
    /// Norm of the projected gradient at the minimizer.
    pub residual: f64,
    /// Oracle value minus `value`, when an oracle was run.
    pub oracle_gap: Option<f64>,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedSolutionJson {
    pub n: usize,
    pub p: f64,
    pub value: f64,
    pub support: usize,
    pub minimizer: Vec<f64>,
    pub residual: f64,
    pub oracle_gap: Option<f64>,
}

impl ReducedSolution {
    pub fn to_json(&self) -> ReducedSolutionJson {
        ReducedSolutionJson {
            n: self.n,
            p: self.p,
            value: self.value,
            support: self.support,
            minimizer: self.minimizer.entries(),
            residual: self.residual,
            oracle_gap: self.oracle_gap,
        }
    }

    /// Violations of the minimizer structure: suffix support, entries
    /// nonincreasing after the leftmost one, last entry at least `p`.
    pub fn structure_violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let tail = self.minimizer.tail();
        if tail.iter().any(|&v| v <= 0.0) {
            out.push("support is not a contiguous suffix".to_string());
        }
        for j in 1..tail.len().saturating_sub(1) {
            if tail[j + 1] > tail[j] * (1.0 + tol) {
                out.push(format!("entries {} < {} increase", tail[j], tail[j + 1]));
            }
        }
        if self.p < 1.0 && tail[tail.len() - 1] < self.p - tol {
            out.push(format!("last entry {} below p = {}", tail[tail.len() - 1], self.p));
        }
        out
    }
}

/// Smooth subproblem for a fixed support size `k >= 2`: free variables are
/// `u_0..u_{k-2}` with `u_{k-1} = 0` and `x = exp(u) / sum exp(u)`, so
///
/// ```text
/// f(u) = sum_j exp(u_j - u_{j+1}) + 1 / (p * sum_j exp(u_j)).
/// ```
struct LogChain {
    k: usize,
    p: f64,
}

impl LogChain {
    fn full(&self, v: &DVector<f64>) -> Vec<f64> {
        let mut u: Vec<f64> = v.iter().copied().collect();
        u.push(0.0);
        u
    }

    fn value(&self, v: &DVector<f64>) -> f64 {
        let u = self.full(v);
        let ratios: f64 = u.windows(2).map(|w| (w[0] - w[1]).exp()).sum();
        let s: f64 = u.iter().map(|a| a.exp()).sum();
        ratios + 1.0 / (self.p * s)
    }

    fn derivatives(&self, v: &DVector<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let k = self.k;
        let u = self.full(v);
        let mut g = DVector::zeros(k);
        let mut h = DMatrix::zeros(k, k);
        for j in 0..k - 1 {
            let t = (u[j] - u[j + 1]).exp();
            g[j] += t;
            g[j + 1] -= t;
            h[(j, j)] += t;
            h[(j + 1, j + 1)] += t;
            h[(j, j + 1)] -= t;
            h[(j + 1, j)] -= t;
        }
        let e: Vec<f64> = u.iter().map(|a| a.exp()).collect();
        let s: f64 = e.iter().sum();
        let c = 1.0 / (self.p * s);
        for a in 0..k {
            let wa = e[a] / s;
            g[a] -= wa * c;
            h[(a, a)] -= wa * c;
            for b in 0..k {
                h[(a, b)] += 2.0 * wa * (e[b] / s) * c;
            }
        }
        (g.rows(0, k - 1).into_owned(), h.view((0, 0), (k - 1, k - 1)).into_owned())
    }

    fn support(&self, v: &DVector<f64>) -> Vec<f64> {
        let u = self.full(v);
        let top = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = u.iter().map(|a| (a - top).exp()).collect();
        let s: f64 = e.iter().sum();
        e.into_iter().map(|a| a / s).collect()
    }

    fn start_from_profile(&self, profile: &[f64]) -> DVector<f64> {
        let last = profile[self.k - 1].ln();
        DVector::from_iterator(self.k - 1, profile[..self.k - 1].iter().map(|v| v.ln() - last))
    }

    fn geometric_start(&self, ratio: f64) -> DVector<f64> {
        let step = -ratio.ln();
        DVector::from_iterator(self.k - 1, (0..self.k - 1).map(|j| (self.k - 1 - j) as f64 * step))
    }

    /// Damped Newton with a diagonal shift whenever the Hessian is not
    /// positive definite, and Armijo backtracking.
    fn newton(&self, mut v: DVector<f64>, cfg: &OptimizerConfig) -> (DVector<f64>, f64) {
        let mut f = self.value(&v);
        let mut quiet = 0;
        for _ in 0..cfg.max_iter {
            let (g, h) = self.derivatives(&v);
            if g.amax() <= 1e-15 {
                break;
            }
            let mut shift = 0.0;
            let mut dir = loop {
                let shifted = &h + DMatrix::identity(h.nrows(), h.ncols()) * shift;
                if let Some(ch) = shifted.cholesky() {
                    break ch.solve(&(-&g));
                }
                shift = if shift == 0.0 { 1e-10 * h.amax().max(1.0) } else { shift * 10.0 };
            };
            let mut slope = g.dot(&dir);
            if !(slope < 0.0) {
                dir = -&g;
                slope = -g.norm_squared();
            }
            let mut t = 1.0;
            let mut accepted = None;
            while t > 1e-16 {
                let trial = &v + &dir * t;
                let ft = self.value(&trial);
                if ft.is_finite() && ft <= f + 1e-4 * t * slope {
                    accepted = Some((trial, ft));
                    break;
                }
                t *= 0.5;
            }
            let Some((next, fnext)) = accepted else { break };
            let change = (f - fnext).abs();
            v = next;
            f = fnext;
            if change <= cfg.value_rtol * f.abs() * 1e-3 {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        (v, f)
    }
}

const VALUE_TIE_RTOL: f64 = 1e-13;

struct Candidate {
    support: Vec<f64>,
    value: f64,
    stationarity: f64,
    converged: bool,
}

fn solve_support(k: usize, p: f64, cfg: &OptimizerConfig, warm: Option<&[f64]>) -> Candidate {
    if k == 1 {
        return Candidate { support: vec![1.0], value: 1.0 / p, stationarity: 0.0, converged: true };
    }
    let problem = LogChain { k, p };
    let mut starts: Vec<DVector<f64>> =
        cfg.start_ratios.iter().map(|&r| problem.geometric_start(r)).collect();
    if let Some(profile) = warm.and_then(|w| warm_profile(w, k)) {
        starts.push(problem.start_from_profile(&profile));
    }
    let mut best: Option<Candidate> = None;
    for start in starts {
        let (v, _) = problem.newton(start, cfg);
        let support = problem.support(&v);
        let Ok(value) = chain_value(&support, p) else { continue };
        let (residual, scale) = projected_residual(&support, p);
        let converged = residual <= cfg.stationarity_tol * scale;
        let stationarity = residual / scale;
        // Starts that land within rounding of each other are ranked by stationarity.
        let better = match &best {
            None => true,
            Some(b) if (value - b.value).abs() <= VALUE_TIE_RTOL * b.value.abs() => stationarity < b.stationarity,
            Some(b) => value < b.value,
        };
        if better && value.is_finite() {
            best = Some(Candidate { support, value, stationarity, converged });
        }
    }
    best.unwrap_or(Candidate {
        support: vec![1.0],
        value: f64::INFINITY,
        stationarity: f64::INFINITY,
        converged: false,
    })
}

/// Reshapes a previous minimizer profile to length `k`: truncate on the
/// left, or extend it leftwards with ratio `e`.
fn warm_profile(prev: &[f64], k: usize) -> Option<Vec<f64>> {
    if prev.len() < 2 || prev.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    let mut profile = if prev.len() >= k {
        prev[prev.len() - k..].to_vec()
    } else {
        let mut pad: Vec<f64> = (1..=k - prev.len())
            .rev()
            .map(|m| prev[0] * std::f64::consts::E.powi(m as i32))
            .collect();
        pad.extend_from_slice(prev);
        pad
    };
    let s: f64 = profile.iter().sum();
    profile.iter_mut().for_each(|v| *v /= s);
    Some(profile)
}

/// Largest support size worth trying: `min(N, ceil(1/p))`.
pub fn support_bound(n: usize, p: f64) -> usize {
    let bound = ((1.0 / p) * (1.0 - 1e-12)).ceil().max(1.0);
    if bound >= n as f64 { n } else { bound as usize }
}

/// Minimizes `T~_N(·, p)` over the simplex.
pub fn minimize_chain(n: usize, p: f64, cfg: &OptimizerConfig) -> Result<ReducedSolution> {
    minimize_chain_warm(n, p, cfg, None)
}

/// As [`minimize_chain`], adding `warm` (a previous minimizer support) as an
/// extra start for every support size.
pub fn minimize_chain_warm(
    n: usize,
    p: f64,
    cfg: &OptimizerConfig,
    warm: Option<&[f64]>,
) -> Result<ReducedSolution> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    check_p(p)?;
    let kmax = support_bound(n, p);
    let mut best = solve_support(1, p, cfg, None);
    let mut misses = 0;
    for k in 2..=kmax {
        let cand = solve_support(k, p, cfg, warm);
        if cand.value < best.value * (1.0 - cfg.value_rtol) {
            best = cand;
            misses = 0;
        } else {
            misses += 1;
            if misses >= cfg.patience {
                break;
            }
        }
    }

    let minimizer = SimplexVector::from_tail(n, renormalize(best.support))?;
    let value = t_chain(&minimizer, p)?;
    let (residual, _) = projected_residual(minimizer.tail(), p);
    let solution = ReducedSolution {
        n,
        p,
        value,
        support: minimizer.support(),
        minimizer,
        residual,
        oracle_gap: None,
        converged: best.converged,
    };
    if solution.converged {
        Ok(solution)
    } else {
        Err(Error::NonConvergence { best: Box::new(solution) })
    }
}

fn renormalize(mut v: Vec<f64>) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|a| *a /= s);
    v
}

/// The chain minimizer re-evaluated under `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoncyclicSolution {
    /// Same minimizer, with `value = T(x*, p)`.
    pub solution: ReducedSolution,
    pub chain_value: f64,
    /// `|T - T~| / T~` at the minimizer.
    pub discrepancy: f64,
}

pub const CONSISTENCY_TOL: f64 = 1e-9;

pub fn minimize_noncyclic(n: usize, p: f64, cfg: &OptimizerConfig) -> Result<NoncyclicSolution> {
    let chain = minimize_chain(n, p, cfg)?;
    let value = t_noncyclic(&chain.minimizer, p)?;
    let discrepancy = (value - chain.value).abs() / chain.value.abs();
    if discrepancy > CONSISTENCY_TOL {
        return Err(Error::ConsistencyViolation { chain: chain.value, noncyclic: value });
    }
    let chain_value = chain.value;
    Ok(NoncyclicSolution { solution: ReducedSolution { value, ..chain }, chain_value, discrepancy })
}
