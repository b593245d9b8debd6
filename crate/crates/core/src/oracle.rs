//! Independent checks for the optimizer: uniform-grid searches over the
//! simplex and finite-difference gradients evaluated in exact arithmetic.
//!
//! Nothing here calls into the Newton solver or the analytic gradient.

use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};

use crate::error::{Error, Result};
use crate::periodic::PeriodicTuple;
use crate::sums::max_avg_sum;

/// Minimizes `f` over the simplex `{y >= 0, sum y = 1}` in `dim` coordinates
/// by grid search on the first `dim - 1` coordinates, then re-grids a box of
/// two cells around the incumbent `refinements` times.
///
/// `f` returns `None` where the objective is undefined.
pub fn simplex_grid_minimize<F>(dim: usize, steps: usize, refinements: usize, f: F) -> (f64, Vec<f64>)
where
    F: Fn(&[f64]) -> Option<f64>,
{
    assert!(dim >= 1 && steps >= 1);
    if dim == 1 {
        return (f(&[1.0]).unwrap_or(f64::INFINITY), vec![1.0]);
    }
    let free = dim - 1;
    let mut lo = vec![0.0; free];
    let mut hi = vec![1.0; free];
    let mut best = (f64::INFINITY, vec![0.0; dim]);
    let mut point = vec![0.0; dim];
    for round in 0..=refinements {
        let spacing: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| (b - a) / steps as f64).collect();
        scan(0, 0.0, &lo, &spacing, steps, &mut point, &f, &mut best);
        if round == refinements {
            break;
        }
        for j in 0..free {
            let h = 2.0 * spacing[j];
            lo[j] = (best.1[j] - h).max(0.0);
            hi[j] = (best.1[j] + h).min(1.0);
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn scan<F>(
    j: usize,
    partial: f64,
    lo: &[f64],
    spacing: &[f64],
    steps: usize,
    point: &mut Vec<f64>,
    f: &F,
    best: &mut (f64, Vec<f64>),
) where
    F: Fn(&[f64]) -> Option<f64>,
{
    let free = lo.len();
    if j == free {
        let last = 1.0 - partial;
        if last < -1e-15 {
            return;
        }
        point[free] = last.max(0.0);
        if let Some(v) = f(point) {
            if v < best.0 {
                best.0 = v;
                best.1.clone_from(point);
            }
        }
        return;
    }
    for s in 0..=steps {
        let y = lo[j] + s as f64 * spacing[j];
        if partial + y > 1.0 + 1e-15 {
            break;
        }
        point[j] = y;
        scan(j + 1, partial + y, lo, spacing, steps, point, f, best);
    }
}

fn chain_objective(x: &[f64], p: f64) -> Option<f64> {
    let mut total = 0.0;
    for w in x.windows(2) {
        if w[0] == 0.0 {
            continue;
        }
        if w[1] == 0.0 {
            return None;
        }
        total += w[0] / w[1];
    }
    Some(total + x[x.len() - 1] / p)
}

pub const ORACLE_MAX_N: usize = 6;

/// Grid upper bound for the chain minimum over `Δ_N`, `N <= 6`.
pub fn brute_force_oracle(n: usize, p: f64, grid_steps: usize, refinements: usize) -> Result<f64> {
    if n == 0 || n > ORACLE_MAX_N {
        return Err(Error::InvalidInput(format!("oracle supports 1 <= N <= {ORACLE_MAX_N}, got {n}")));
    }
    if !(p > 0.0) {
        return Err(Error::InvalidInput(format!("p must be positive, got {p}")));
    }
    if n == 1 {
        return Ok(1.0 / p);
    }
    let (value, _) =
        simplex_grid_minimize(n, grid_steps.max(1), refinements, |x| chain_objective(x, p));
    Ok(value)
}

pub const CYCLIC_MAX_N: usize = 4;

/// Grid upper bound for `inf_x S^max(x)` over n-tuples, `n <= 4`.
pub fn cyclic_bruteforce(n: usize, grid_steps: usize, refinements: usize) -> Result<f64> {
    if n == 0 || n > CYCLIC_MAX_N {
        return Err(Error::InvalidInput(format!("cyclic search supports 1 <= n <= {CYCLIC_MAX_N}, got {n}")));
    }
    let (value, _) = simplex_grid_minimize(n, grid_steps.max(1), refinements, |x| {
        PeriodicTuple::new(x.to_vec()).ok().map(|t| max_avg_sum(&t).value)
    });
    Ok(value)
}

fn exact(v: f64) -> BigRational {
    BigRational::from_f64(v).expect("finite value")
}

fn chain_exact(x: &[BigRational], p: &BigRational) -> BigRational {
    let mut total = BigRational::zero();
    for w in x.windows(2) {
        total += &w[0] / &w[1];
    }
    total + &x[x.len() - 1] / p
}

/// Finite-difference step per coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FdStep {
    /// `h_j = h`.
    Absolute(f64),
    /// `h_j = h * x_j`, for points with entries of very different sizes.
    Relative(f64),
}

/// Central differences of `T~` on a positive support, computed without rounding.
pub fn fd_gradient_exact(support: &[f64], p: f64, step: FdStep) -> Vec<f64> {
    let base: Vec<BigRational> = support.iter().map(|&v| exact(v)).collect();
    let p = exact(p);
    (0..support.len())
        .map(|j| {
            let h = match step {
                FdStep::Absolute(h) => exact(h),
                FdStep::Relative(r) => &base[j] * exact(r),
            };
            let mut plus = base.clone();
            plus[j] += &h;
            let mut minus = base.clone();
            minus[j] -= &h;
            let d = (chain_exact(&plus, &p) - chain_exact(&minus, &p)) / (h * BigRational::from_integer(2.into()));
            crate::scalar::Scalar::to_f64(&d)
        })
        .collect()
}

/// `||analytic - fd|| / ||analytic||` for the chain gradient at a positive support.
pub fn gradient_relative_error(analytic: &[f64], support: &[f64], p: f64, step: FdStep) -> f64 {
    let fd = fd_gradient_exact(support, p, step);
    let diff: f64 = analytic.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt();
    diff / norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_closed_forms() {
        let v = brute_force_oracle(2, 0.5, 1000, 3).unwrap();
        assert!((v - (2.0 * 2f64.sqrt() - 1.0)).abs() < 1e-4);
        assert_eq!(brute_force_oracle(1, 0.37, 10, 0).unwrap(), 1.0 / 0.37);
        let v = brute_force_oracle(3, 1.0 / 3.0, 300, 4).unwrap();
        assert!((v - (2.0 * 3f64.sqrt() - 1.0)).abs() < 1e-4);
        assert!(brute_force_oracle(7, 0.1, 2, 0).is_err());
    }

    #[test]
    fn cyclic_closed_forms() {
        assert_eq!(cyclic_bruteforce(1, 10, 0).unwrap(), 1.0);
        let v = cyclic_bruteforce(2, 2000, 0).unwrap();
        assert!((v - (2.0 * 2f64.sqrt() - 1.0)).abs() < 1e-3);
        assert!(cyclic_bruteforce(5, 10, 0).is_err());
    }

    #[test]
    fn fd_of_quadratic_like_point() {
        // T~((a, b), p) = a/b + b/p: dT/da = 1/b, dT/db = -a/b^2 + 1/p.
        for step in [FdStep::Absolute(1e-6), FdStep::Relative(1e-6)] {
            let g = fd_gradient_exact(&[0.25, 0.75], 0.5, step);
            assert!((g[0] - 1.0 / 0.75).abs() < 1e-10);
            assert!((g[1] - (-0.25 / 0.5625 + 2.0)).abs() < 1e-10);
        }
    }
}
