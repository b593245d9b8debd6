//! Growth of `inf S_n^max` and extraction of the constant in
//! `inf S_n^max = e ln n - A + O(1 / ln n)`.

use std::f64::consts::E;
use std::io::Write;

use crate::error::{Error, Result};
use crate::periodic::PeriodicTuple;
use crate::reduced::{minimize_chain, minimize_chain_warm, OptimizerConfig};

/// Reference value of the additive constant.
pub const A_REFERENCE: f64 = 1.70465603718;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    /// `inf S_n^max`.
    pub s_star: f64,
    /// `e ln n - s_star`.
    pub deficit: f64,
    pub support: usize,
    pub residual: f64,
    pub converged: bool,
    /// Support of the minimizer, kept for warm starts and gradient checks.
    pub minimizer_support: Vec<f64>,
}

/// `inf S_n^max`, computed as the chain minimum at `N = n`, `p = 1/n`.
pub fn inf_s(n: usize, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(minimize_chain(n, 1.0 / n as f64, cfg)?.value)
}

/// One record per `n`; non-convergence is flagged per record.
pub fn sweep(n_values: &[usize], cfg: &OptimizerConfig) -> Result<Vec<SweepRecord>> {
    if n_values.is_empty() {
        return Err(Error::InvalidInput("empty n grid".into()));
    }
    if n_values[0] == 0 || n_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("n grid must be positive and strictly increasing".into()));
    }
    let mut records: Vec<SweepRecord> = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let warm = records.last().map(|r| r.minimizer_support.as_slice());
        let (solution, converged) = match minimize_chain_warm(n, 1.0 / n as f64, cfg, warm) {
            Ok(s) => (s, true),
            Err(Error::NonConvergence { best }) => (*best, false),
            Err(e) => return Err(e),
        };
        records.push(SweepRecord {
            n,
            s_star: solution.value,
            deficit: E * (n as f64).ln() - solution.value,
            support: solution.support,
            residual: solution.residual,
            converged,
            minimizer_support: solution.minimizer.tail().to_vec(),
        });
    }
    Ok(records)
}

/// `points` geometrically spaced integers in `[from, to]`, rounded and deduplicated.
pub fn geometric_grid(from: f64, to: f64, points: usize) -> Result<Vec<usize>> {
    if !(from >= 1.0 && to >= from && to.is_finite()) || points == 0 {
        return Err(Error::InvalidInput(format!(
            "empty range: from {from}, to {to}, points {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![from.round() as usize]);
    }
    let ratio = (to / from).ln() / (points - 1) as f64;
    let mut grid: Vec<usize> =
        (0..points).map(|k| (from * (ratio * k as f64).exp()).round() as usize).collect();
    grid.dedup();
    Ok(grid)
}

/// Least-squares fit of `deficit = a - c / ln n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantFit {
    pub a_hat: f64,
    pub c: f64,
    pub residual_norm: f64,
    pub points: usize,
}

pub const FIT_MIN_N: usize = 100;
const MIN_REGRESSOR_SPREAD: f64 = 1e-6;

pub fn estimate_constant_a(records: &[SweepRecord]) -> Result<ConstantFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.n >= FIT_MIN_N)
        .map(|r| (1.0 / (r.n as f64).ln(), r.deficit))
        .collect();
    if pts.len() < 4 {
        return Err(Error::IllConditionedFit(format!(
            "need at least 4 records with n >= {FIT_MIN_N}, got {}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let d_mean = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.0), hi.max(p.0))
    });
    if hi - lo < MIN_REGRESSOR_SPREAD {
        return Err(Error::IllConditionedFit(format!("1/ln n spread {} too small", hi - lo)));
    }
    let stt: f64 = pts.iter().map(|p| (p.0 - t_mean).powi(2)).sum();
    let std: f64 = pts.iter().map(|p| (p.0 - t_mean) * (p.1 - d_mean)).sum();
    let slope = std / stt;
    let a_hat = d_mean - slope * t_mean;
    let residual_norm = pts
        .iter()
        .map(|p| (p.1 - (a_hat + slope * p.0)).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ConstantFit { a_hat, c: -slope, residual_norm, points: pts.len() })
}

/// Intercept of the line through two `(1/ln n, deficit)` points.
pub fn two_point_estimate(first: &SweepRecord, second: &SweepRecord) -> Result<f64> {
    let t1 = 1.0 / (first.n as f64).ln();
    let t2 = 1.0 / (second.n as f64).ln();
    if (t1 - t2).abs() < MIN_REGRESSOR_SPREAD {
        return Err(Error::IllConditionedFit("records too close in 1/ln n".into()));
    }
    Ok((first.deficit * t2 - second.deficit * t1) / (t2 - t1))
}

/// Consecutive grid pairs where the deficit drops by more than `tol`.
pub fn deficit_decreases(records: &[SweepRecord], tol: f64) -> Vec<(usize, usize, f64)> {
    records
        .windows(2)
        .filter(|w| w[1].deficit < w[0].deficit - tol)
        .map(|w| (w[0].n, w[1].n, w[0].deficit - w[1].deficit))
        .collect()
}

/// Geometric tuple `x_i ∝ e^{-(i-1)}` for `i <= ceil(ln n)`, zero beyond.
pub fn witness_tuple(n: usize) -> Result<PeriodicTuple> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    let k = ((n as f64).ln().ceil() as usize).clamp(1, n);
    let mut values: Vec<f64> = (0..n).map(|i| if i < k { (-(i as f64)).exp() } else { 0.0 }).collect();
    let s: f64 = values.iter().sum();
    values.iter_mut().for_each(|v| *v /= s);
    PeriodicTuple::new(values)
}

/// Formats with 17 significant digits in positional notation.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.16}");
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

pub const CSV_HEADER: &str = "n,s_star,deficit,support,residual";

pub fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.n,
            format_sig17(r.s_star),
            format_sig17(r.deficit),
            r.support,
            format!("{:.16e}", r.residual)
        )?;
    }
    Ok(())
}
