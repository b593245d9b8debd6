//! Seeded property suites behind `maxavg verify`.
//!
//! Every check returns a [`CheckOutcome`]; a suite passes iff all its checks do.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::oracle::{cyclic_bruteforce, gradient_relative_error, FdStep};
use crate::periodic::PeriodicTuple;
use crate::reduced::{
    chain_gradient, minimize_chain, minimize_noncyclic, t_chain, t_noncyclic, OptimizerConfig,
    SimplexVector,
};
use crate::scalar::{parse_rational, Scalar};
use crate::structure::{
    build_poset, full_maximal_start, has_distinct_averages, m_intervals, rotation_majorizes,
};
use crate::sums::{generalized_max_sum, max_avg_sum, sum_with_radii, RadiusTuple, SubsetCollectionSystem};
use crate::table::{analyze, round3};

pub const DEFAULT_SEED: u64 = 20_240_611;

/// The ten-entry worked example.
pub const EXAMPLE_TUPLE: [&str; 10] = ["1.2", "2.3", "3.5", "1.8", "1.6", "2.4", "3", "3.2", "1.1", "2.5"];

/// Its averages table as printed, rows `r = 1..9`, columns `i = 1..10`.
pub const EXAMPLE_TABLE: [[&str; 10]; 9] = [
    ["1.2", "2.3", "3.5", "1.8", "1.6", "2.4", "3", "3.2", "1.1", "2.5"],
    ["1.75", "2.9", "2.65", "1.7", "2", "2.7", "3.1", "2.15", "1.8", "1.85"],
    ["2.333", "2.533", "2.3", "1.933", "2.333", "2.867", "2.433", "2.267", "1.6", "2"],
    ["2.2", "2.3", "2.325", "2.2", "2.55", "2.425", "2.45", "2", "1.775", "2.375"],
    ["2.08", "2.32", "2.46", "2.4", "2.26", "2.44", "2.2", "2.06", "2.12", "2.26"],
    ["2.133", "2.433", "2.583", "2.183", "2.3", "2.233", "2.217", "2.3", "2.067", "2.15"],
    ["2.257", "2.543", "2.371", "2.229", "2.143", "2.243", "2.4", "2.229", "2", "2.186"],
    ["2.375", "2.363", "2.388", "2.1", "2.163", "2.4", "2.325", "2.15", "2.05", "2.288"],
    ["2.233", "2.378", "2.256", "2.12", "2.311", "2.333", "2.244", "2.178", "2.156", "2.389"],
];

/// Printed cells that disagree with the tuple, with their exact value.
/// `(r, i) = (9, 4)` covers `x_4 + ... + x_12 = 19.1`, printed as 2.12 instead of 2.122.
pub const EXAMPLE_MISPRINTS: [(usize, usize, &str); 1] = [(9, 4, "191/90")];

/// M-interval at each `i = 1..10` as `(r, i)`, `r = kappa + 1`.
pub const EXAMPLE_M_INTERVALS: [(usize, usize); 10] =
    [(8, 1), (2, 2), (1, 3), (5, 4), (4, 5), (3, 6), (2, 7), (1, 8), (10, 9), (1, 10)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Periodic,
    Poset,
    Sums,
    Reduction,
    Gradient,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Periodic, Suite::Poset, Suite::Sums, Suite::Reduction, Suite::Gradient];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Periodic => "periodic",
            Suite::Poset => "poset",
            Suite::Sums => "sums",
            Suite::Reduction => "reduction",
            Suite::Gradient => "gradient",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, failures: Vec<String>, cases: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{cases} cases")
        } else {
            format!("{} of {cases} cases failed; first: {}", failures.len(), failures[0])
        };
        Self { name: name.into(), passed, detail }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let checks = match suite {
        Suite::Periodic => vec![range_sufficiency(seed, 1000), min_equals_mean(seed, 1000, 200)],
        Suite::Poset => vec![example_reproduction(), poset_lemmas(seed, 200), majorizing_rotations(seed, 200)],
        Suite::Sums => vec![subset_system_bounds(seed, 200), sum_consistency(seed, 300)],
        Suite::Reduction => vec![
            exact_values(),
            reduction_lemmas(&[0.5, 0.2, 0.1, 0.05, 0.01], seed),
            cyclic_matches_reduced(&[1, 2, 3], 1e-3),
        ],
        Suite::Gradient => vec![gradient_agreement(seed, 100, FdStep::Absolute(1e-6), 1e-6)],
    };
    SuiteReport { suite, checks }
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    Suite::ALL.into_iter().map(|s| run_suite(s, seed)).collect()
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Nonnegative floats, about one in ten zero, `n` in `1..=max_n`.
pub fn random_float_tuple(rng: &mut impl Rng, max_n: usize) -> PeriodicTuple<f64> {
    let n = rng.random_range(1..=max_n);
    loop {
        let values: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..10.0) })
            .collect();
        if let Ok(t) = PeriodicTuple::new(values) {
            return t;
        }
    }
}

/// Rationals `a / b` with `a` in `0..=max_num`, `b` in `1..=12`.
pub fn random_rational_tuple(rng: &mut impl Rng, min_n: usize, max_n: usize, max_num: i64) -> PeriodicTuple<BigRational> {
    let n = rng.random_range(min_n..=max_n);
    loop {
        let values: Vec<BigRational> = (0..n)
            .map(|_| {
                BigRational::new(BigInt::from(rng.random_range(0..=max_num)), BigInt::from(rng.random_range(1..=12i64)))
            })
            .collect();
        if let Ok(t) = PeriodicTuple::new(values) {
            return t;
        }
    }
}

/// Rational tuples satisfying the distinct-averages condition.
pub fn random_generic_tuples(seed: u64, count: usize) -> Vec<PeriodicTuple<BigRational>> {
    let mut rng = rng_for(seed, 3);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let t = random_rational_tuple(&mut rng, 1, 10, 1_000_000);
        if has_distinct_averages(&t) {
            out.push(t);
        }
    }
    out
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Windows longer than `n` never beat the best window of length `<= n`.
pub fn range_sufficiency(seed: u64, count: usize) -> CheckOutcome {
    let mut rng = rng_for(seed, 1);
    let mut failures = Vec::new();
    for case in 0..count {
        let x = random_float_tuple(&mut rng, 50);
        let n = x.len();
        for i in 1..=n as i64 {
            let m = x.right_maximal(i);
            let long = (n + 1..=3 * n).map(|r| x.window_average(i, r)).fold(f64::NEG_INFINITY, f64::max);
            if long > m * (1.0 + 1e-12) {
                failures.push(format!("case {case}, i = {i}: window average {long} > {m}"));
                break;
            }
        }
    }
    CheckOutcome::new("right maximal range r <= n suffices", failures, count)
}

/// `min_i M^r x(i)` is the period average.
pub fn min_equals_mean(seed: u64, float_count: usize, rational_count: usize) -> CheckOutcome {
    let mut rng = rng_for(seed, 2);
    let mut failures = Vec::new();
    for case in 0..float_count {
        let x = random_float_tuple(&mut rng, 50);
        let lo = (1..=x.len() as i64).map(|i| x.right_maximal(i)).fold(f64::INFINITY, f64::min);
        if rel_gap(lo, x.mean()) > 1e-12 {
            failures.push(format!("float case {case}: min {lo} vs mean {}", x.mean()));
        }
    }
    for case in 0..rational_count {
        let x = random_rational_tuple(&mut rng, 1, 30, 100);
        let lo = (1..=x.len() as i64)
            .map(|i| x.right_maximal(i))
            .reduce(|a, b| if b < a { b } else { a })
            .expect("nonempty");
        if lo != x.mean() {
            failures.push(format!("rational case {case}: min {lo} vs mean {}", x.mean()));
        }
    }
    CheckOutcome::new("min of right maximal function equals the average", failures, float_count + rational_count)
}

fn example_exact() -> PeriodicTuple<BigRational> {
    PeriodicTuple::new(EXAMPLE_TUPLE.iter().map(|s| parse_rational(s).expect("literal")).collect()).expect("valid")
}

/// Table cells, M-intervals, average, root and chains of the worked example.
pub fn example_reproduction() -> CheckOutcome {
    let x = example_exact();
    let a = analyze(&x, false);
    let mut failures = Vec::new();
    for (r0, row) in EXAMPLE_TABLE.iter().enumerate() {
        for (i0, printed) in row.iter().enumerate() {
            let (r, i) = (r0 + 1, i0 + 1);
            let ours = round3(a.rows[r0][i0].to_f64());
            if let Some(&(_, _, exact)) = EXAMPLE_MISPRINTS.iter().find(|m| (m.0, m.1) == (r, i)) {
                if a.rows[r0][i0] != parse_rational(exact).expect("literal") || !ours.starts_with(printed) {
                    failures.push(format!("misprinted cell r = {r}, i = {i}: {ours} vs exact {exact}"));
                }
                continue;
            }
            let ours_v: f64 = ours.parse().expect("formatted number");
            let printed_v: f64 = printed.parse().expect("literal");
            if ours_v != printed_v {
                failures.push(format!("cell r = {}, i = {}: {ours} vs {printed}", r0 + 1, i0 + 1));
            }
        }
    }
    let mut marked = a.marked_cells();
    marked.sort_by_key(|&(_, i)| i);
    if marked != EXAMPLE_M_INTERVALS {
        failures.push(format!("M-interval cells {marked:?}"));
    }
    if x.mean() != parse_rational("2.26").expect("literal") {
        failures.push(format!("average {}", x.mean()));
    }
    if a.full_maximal_start != 9 {
        failures.push(format!("full maximal start {}", a.full_maximal_start));
    }
    match &a.poset {
        Ok(p) => {
            let starts = |nodes: Vec<usize>| nodes.into_iter().map(|k| p.nodes[k].start).collect::<Vec<_>>();
            if p.root.map(|r| p.nodes[r].interval().to_string()) != Some("[9:18]".into()) {
                failures.push("root is not [9:18]".into());
            }
            let mut minimal = starts(p.minimal_elements());
            minimal.sort_unstable();
            if minimal != [3, 8, 10] {
                failures.push(format!("minimal elements start at {minimal:?}"));
            }
            let chain = p.node_by_start(8).map(|k| starts(p.chain_from(k)));
            if chain != Some(vec![8, 7, 6, 5, 4, 1, 9]) {
                failures.push(format!("chain from [8:8]: {chain:?}"));
            }
        }
        Err(e) => failures.push(format!("poset: {e:?}")),
    }
    CheckOutcome::new("worked example reproduced", failures, 1)
}

/// Laminarity, tree shape, strict order reversal and a unique full class.
pub fn poset_lemmas(seed: u64, count: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for (case, x) in random_generic_tuples(seed, count).iter().enumerate() {
        let n = x.len();
        let full = m_intervals(x).iter().filter(|m| m.kappa == n - 1).count();
        if full != 1 {
            failures.push(format!("case {case}: {full} indices with kappa = n - 1"));
            continue;
        }
        let poset = match build_poset(x) {
            Ok(p) => p,
            Err(e) => {
                failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        if !poset.is_tree() {
            failures.push(format!("case {case}: not a tree"));
            continue;
        }
        for (c, p) in poset.edges() {
            if !(poset.nodes[c].average > poset.nodes[p].average) {
                failures.push(format!("case {case}: average does not drop from node {c} to node {p}"));
                break;
            }
        }
    }
    CheckOutcome::new("M-interval lemmas on generic rational tuples", failures, count)
}

/// Exactly one rotation keeps partial averages strictly above the mean,
/// and it starts at the full maximal interval.
pub fn majorizing_rotations(seed: u64, count: usize) -> CheckOutcome {
    let mut failures = Vec::new();
    for (case, x) in random_generic_tuples(seed, count).iter().enumerate() {
        let good: Vec<usize> = (1..=x.len()).filter(|&s| rotation_majorizes(x, s as i64)).collect();
        let start = full_maximal_start(x);
        if good != [start] {
            failures.push(format!("case {case}: strict rotations {good:?}, full maximal start {start}"));
        }
    }
    CheckOutcome::new("unique majorizing rotation", failures, count)
}

fn random_subset(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.4)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Random system with the full set in every collection and `{1}` in the first.
pub fn random_overgeneral_system(rng: &mut impl Rng, n: usize) -> SubsetCollectionSystem {
    let collections = (1..=n)
        .map(|i| {
            let mut sets: Vec<Vec<usize>> = (0..rng.random_range(0..4)).map(|_| random_subset(rng, n)).collect();
            sets.push((1..=n).collect());
            if i == 1 {
                sets.push(vec![1]);
            }
            let k = sets.len();
            let at = rng.random_range(0..k);
            sets.swap(at, k - 1);
            sets
        })
        .collect();
    SubsetCollectionSystem::new(n, collections).expect("well-formed system")
}

/// `1 <= S(x) <= 1 + (n-1) n eps` at `x = (1, eps, ..., eps)`, and `S >= 1` at random `x`.
pub fn subset_system_bounds(seed: u64, count: usize) -> CheckOutcome {
    let mut rng = rng_for(seed, 4);
    let mut failures = Vec::new();
    for case in 0..count {
        let n = rng.random_range(1..=12);
        let system = random_overgeneral_system(&mut rng, n);
        if system.overgeneral_witness().is_none() {
            failures.push(format!("case {case}: generator broke the hypotheses"));
        }
        for eps in [1e-3, 1e-6] {
            let mut values = vec![eps; n];
            values[0] = 1.0;
            let x = PeriodicTuple::new(values).expect("positive");
            let s = generalized_max_sum(&x, &system).expect("positive averages");
            let bound = 1.0 + ((n - 1) * n) as f64 * eps;
            if s > bound * (1.0 + 1e-12) || s < 1.0 {
                failures.push(format!("case {case}, n = {n}, eps = {eps}: sum {s}, bound {bound}"));
            }
        }
        let x = random_float_tuple(&mut rng, n.max(1));
        if x.len() == n {
            if let Ok(s) = generalized_max_sum(&x, &system) {
                if s < 1.0 - 1e-12 {
                    failures.push(format!("case {case}: random tuple gives {s} < 1"));
                }
            }
        }
    }
    CheckOutcome::new("subset-system sums within [1, 1 + (n-1) n eps]", failures, count)
}

/// `S^max` equals `S_n` at its own radii, bounds every `S_n(x, r)` from below,
/// lies in `[1, n]`, and is invariant under scaling and rotation.
pub fn sum_consistency(seed: u64, count: usize) -> CheckOutcome {
    let mut rng = rng_for(seed, 5);
    let mut failures = Vec::new();
    for case in 0..count {
        let x = random_rational_tuple(&mut rng, 1, 9, 50);
        let n = x.len();
        let best = max_avg_sum(&x);
        if sum_with_radii(&x, &best.radii).ok() != Some(best.value.clone()) {
            failures.push(format!("case {case}: radii do not realize the sum"));
        }
        let one = BigRational::from_integer(1.into());
        if best.value < one || best.value > BigRational::from_integer(BigInt::from(n)) {
            failures.push(format!("case {case}: sum {} outside [1, n]", best.value));
        }
        let radii = RadiusTuple::new((0..n).map(|_| rng.random_range(1..=2 * n)).collect()).expect("positive");
        if let Ok(s) = sum_with_radii(&x, &radii) {
            if s < best.value {
                failures.push(format!("case {case}: S_n(x, r) = {s} below the maximal sum"));
            }
        }
        let factor = BigRational::new(BigInt::from(rng.random_range(1..=9i64)), BigInt::from(7));
        if max_avg_sum(&x.scaled(&factor).expect("positive factor")).value != best.value {
            failures.push(format!("case {case}: not scale invariant"));
        }
        let shift = rng.random_range(1..=n as i64);
        let rotated = PeriodicTuple::new(x.rotation(shift)).expect("rotation");
        if max_avg_sum(&rotated).value != best.value {
            failures.push(format!("case {case}: not rotation invariant"));
        }
    }
    CheckOutcome::new("maximal-average sum consistency", failures, count)
}

/// Closed-form minima: `1/p` for `p >= 1`, `2 sqrt 2 - 1`, `2 sqrt 3 - 1`.
pub fn exact_values() -> CheckOutcome {
    let cfg = OptimizerConfig::default();
    let cases: Vec<(usize, f64, f64)> = vec![
        (1, 1.0, 1.0),
        (2, 0.5, 2.0 * 2f64.sqrt() - 1.0),
        (3, 1.0 / 3.0, 2.0 * 3f64.sqrt() - 1.0),
        (4, 1.0, 1.0),
        (5, 2.5, 0.4),
        (7, 1.0, 1.0),
    ];
    let mut failures = Vec::new();
    for &(n, p, expected) in &cases {
        match minimize_chain(n, p, &cfg) {
            Ok(s) => {
                if rel_gap(s.value, expected) > 1e-9 {
                    failures.push(format!("N = {n}, p = {p}: {} vs {expected}", s.value));
                }
                if p >= 1.0 {
                    let mut e = vec![0.0; n];
                    e[n - 1] = 1.0;
                    if s.minimizer.entries() != e {
                        failures.push(format!("N = {n}, p = {p}: minimizer {:?}", s.minimizer.entries()));
                    }
                }
            }
            Err(e) => failures.push(format!("N = {n}, p = {p}: {e}")),
        }
    }
    CheckOutcome::new("closed-form chain minima", failures, cases.len())
}

/// Monotone in `N`, stable from `ceil(1/p)`, minimizer shape, `T~ >= T`, and
/// `T = T~` at minimizers.
pub fn reduction_lemmas(ps: &[f64], seed: u64) -> CheckOutcome {
    let cfg = OptimizerConfig::default();
    let mut rng = rng_for(seed, 6);
    let mut failures = Vec::new();
    let mut cases = 0;
    for &p in ps {
        let stable = (1.0 / p).ceil() as usize;
        let mut previous = f64::INFINITY;
        let mut at_stable = None;
        for n in 1..=stable + 5 {
            cases += 1;
            let sol = match minimize_noncyclic(n, p, &cfg) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("p = {p}, N = {n}: {e}"));
                    continue;
                }
            };
            let value = sol.chain_value;
            if value > previous * (1.0 + 1e-9) {
                failures.push(format!("p = {p}, N = {n}: {value} exceeds {previous}"));
            }
            previous = value;
            if n == stable {
                at_stable = Some(value);
            }
            if n >= stable {
                if let Some(s) = at_stable {
                    if rel_gap(value, s) > 1e-9 {
                        failures.push(format!("p = {p}, N = {n}: {value} differs from N = {stable} value {s}"));
                    }
                }
            }
            if let Some(v) = sol.solution.structure_violations(1e-9).first() {
                failures.push(format!("p = {p}, N = {n}: {v}"));
            }
            if sol.discrepancy > 1e-9 {
                failures.push(format!("p = {p}, N = {n}: T and T~ differ by {}", sol.discrepancy));
            }
        }
        for _ in 0..20 {
            cases += 1;
            let n = rng.random_range(1..=12);
            let entries: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
            let x = SimplexVector::normalized(entries).expect("positive");
            match (t_chain(&x, p), t_noncyclic(&x, p)) {
                (Ok(c), Ok(t)) if c >= t * (1.0 - 1e-12) => {}
                (c, t) => failures.push(format!("p = {p}: chain {c:?} vs non-cyclic {t:?}")),
            }
        }
    }
    CheckOutcome::new("reduced-problem lemmas", failures, cases)
}

/// Grid search for `inf S^max` over `n`-tuples against the chain minimum at `p = 1/n`.
pub fn cyclic_matches_reduced(ns: &[usize], tol: f64) -> CheckOutcome {
    let cfg = OptimizerConfig::default();
    let mut failures = Vec::new();
    for &n in ns {
        let (steps, refinements) = match n {
            1 | 2 => (400, 6),
            _ => (120, 8),
        };
        let reduced = minimize_chain(n, 1.0 / n as f64, &cfg).map(|s| s.value);
        let cyclic = cyclic_bruteforce(n, steps, refinements);
        match (cyclic, reduced) {
            (Ok(c), Ok(r)) if (c - r).abs() <= tol => {}
            (c, r) => failures.push(format!("n = {n}: cyclic {c:?} vs reduced {r:?}")),
        }
    }
    CheckOutcome::new("cyclic infimum equals reduced minimum", failures, ns.len())
}

/// Analytic gradient of `T~` against exact central differences at random interior points.
pub fn gradient_agreement(seed: u64, count: usize, step: FdStep, tol: f64) -> CheckOutcome {
    let mut rng = rng_for(seed, 7);
    let mut failures = Vec::new();
    for case in 0..count {
        let k = rng.random_range(1..=10);
        let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
        let s: f64 = raw.iter().sum();
        let x: Vec<f64> = raw.iter().map(|v| v / s).collect();
        let p = rng.random_range(0.01..1.0);
        let g = chain_gradient(&x, p);
        let err = gradient_relative_error(&g, &x, p, step);
        if !(err <= tol) {
            failures.push(format!("case {case}, k = {k}, p = {p}: relative error {err:e}"));
        }
    }
    CheckOutcome::new("analytic gradient matches finite differences", failures, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_generic_tuples(7, 3);
        let b = random_generic_tuples(7, 3);
        assert_eq!(a.iter().map(|t| t.values().to_vec()).collect::<Vec<_>>(), b.iter().map(|t| t.values().to_vec()).collect::<Vec<_>>());
        assert!(a.iter().all(has_distinct_averages));
    }

    #[test]
    fn example_check_passes() {
        let c = example_reproduction();
        assert!(c.passed, "{}", c.detail);
    }

    #[test]
    fn small_suites_pass() {
        assert!(range_sufficiency(1, 50).passed);
        assert!(min_equals_mean(1, 50, 20).passed);
        assert!(poset_lemmas(1, 20).passed);
        assert!(majorizing_rotations(1, 20).passed);
        assert!(subset_system_bounds(1, 30).passed);
        assert!(sum_consistency(1, 30).passed);
        assert!(gradient_agreement(1, 10, FdStep::Absolute(1e-6), 1e-6).passed);
    }

    #[test]
    fn failures_are_counted() {
        let c = CheckOutcome::new("x", vec!["a".into(), "b".into()], 5);
        assert!(!c.passed);
        assert_eq!(c.detail, "2 of 5 cases failed; first: a");
    }
}
