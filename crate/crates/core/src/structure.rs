//! Maximal intervals of a periodic tuple and the inclusion order on them.
//!
//! For every left end `i` there is a unique shortest maximal interval
//! `[i : i + kappa(i)]` (an M-interval). The `n` classes of M-intervals
//! modulo shifts by `n` are partially ordered by inclusion. When all short
//! interval averages are distinct the classes are pairwise disjoint or
//! nested, the Hasse diagram is a tree, and its root is the unique full
//! maximal interval (cardinality `n`).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic::{IndexInterval, PeriodicTuple};
use crate::scalar::Scalar;

/// Irreducible maximal interval `[start : start + kappa]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MIntervalRecord<T: Scalar = f64> {
    pub start: usize,
    pub kappa: usize,
    pub average: T,
}

impl<T: Scalar> MIntervalRecord<T> {
    pub fn interval(&self) -> IndexInterval {
        let a = self.start as i64;
        IndexInterval { a, b: a + self.kappa as i64 }
    }

    pub fn cardinality(&self) -> usize {
        self.kappa + 1
    }
}

/// M-interval with left end `i` (any integer; reported with `start` in `1..=n`).
pub fn m_interval<T: Scalar>(x: &PeriodicTuple<T>, i: i64) -> MIntervalRecord<T> {
    let (average, len) = x.right_maximal_arg(i);
    MIntervalRecord { start: x.canonical(i), kappa: len - 1, average }
}

pub fn m_intervals<T: Scalar>(x: &PeriodicTuple<T>) -> Vec<MIntervalRecord<T>> {
    (1..=x.len() as i64).map(|i| m_interval(x, i)).collect()
}

/// Whether `[i : i + n - 1]` is a maximal interval.
pub fn is_full_maximal<T: Scalar>(x: &PeriodicTuple<T>, i: i64) -> bool {
    x.right_maximal(i) == x.window_average(i, x.len())
}

/// Smallest `i` in `1..=n` whose full-length window is maximal.
///
/// One always exists because `min_i M^r x(i)` equals the period average.
pub fn full_maximal_start<T: Scalar>(x: &PeriodicTuple<T>) -> usize {
    (1..=x.len() as i64)
        .find(|&i| is_full_maximal(x, i))
        .map(|i| i as usize)
        .unwrap_or_else(|| {
            // Only reachable through floating-point rounding: fall back to the
            // index whose maximal average is smallest.
            let mut best = 1;
            let mut best_value = x.right_maximal(1);
            for i in 2..=x.len() as i64 {
                let v = x.right_maximal(i);
                if v < best_value {
                    best_value = v;
                    best = i as usize;
                }
            }
            best
        })
}

/// Strict majorization test for the rotation starting at `start`: every
/// proper prefix sum stays strictly below `k * mean`.
pub fn rotation_majorizes<T: Scalar>(x: &PeriodicTuple<T>, start: i64) -> bool {
    let n = x.len();
    let total = x.total();
    let nn = T::from_count(n);
    (1..n).all(|k| nn.clone() * x.window_sum(start, k) < T::from_count(k) * total.clone())
}

/// Start of the rotation that majorizes the constant vector; it coincides
/// with the full maximal interval.
pub fn majorizing_rotation<T: Scalar>(x: &PeriodicTuple<T>) -> usize {
    full_maximal_start(x)
}

/// Surrogate for rational independence of the entries: all averages of
/// non-equivalent short intervals, together with the period average, are
/// pairwise distinct.
pub fn has_distinct_averages<T: Scalar>(x: &PeriodicTuple<T>) -> bool {
    let n = x.len();
    let mut averages = Vec::with_capacity(n * n);
    averages.push(x.mean());
    for i in 1..=n as i64 {
        for len in 1..n {
            averages.push(x.window_average(i, len));
        }
    }
    averages.sort_by(|a, b| a.partial_cmp(b).expect("averages are comparable"));
    averages.windows(2).all(|w| w[0] != w[1])
}

/// The `n` classes of M-intervals with their inclusion order.
#[derive(Clone, Debug)]
pub struct IntervalPoset<T: Scalar = f64> {
    pub nodes: Vec<MIntervalRecord<T>>,
    /// `parent[k]` is the node index of the smallest M-interval class strictly
    /// containing node `k`.
    pub parent: Vec<Option<usize>>,
    /// Node index of the class of cardinality `n`, if there is one.
    pub root: Option<usize>,
}

pub fn build_poset<T: Scalar>(x: &PeriodicTuple<T>) -> Result<IntervalPoset<T>> {
    let n = x.len();
    let nodes = m_intervals(x);
    let reps: Vec<IndexInterval> = nodes.iter().map(MIntervalRecord::interval).collect();
    let period = n as i64;
    check_laminar(&reps, n)?;

    let mut parent = vec![None; n];
    for (k, inner) in reps.iter().enumerate() {
        let mut best: Option<(usize, usize)> = None;
        for (j, outer) in reps.iter().enumerate() {
            if j == k {
                continue;
            }
            // The only shift of class j that can cover [i : ...] starts at or before i
            // and within the preceding period.
            let outer = if outer.a <= inner.a { *outer } else { outer.shifted(-period) };
            if outer.contains(inner) && outer != *inner {
                let size = outer.cardinality();
                if best.is_none_or(|(_, s)| size < s) {
                    best = Some((j, size));
                }
            }
        }
        parent[k] = best.map(|(j, _)| j);
    }

    let root = nodes.iter().position(|r| r.cardinality() == n);
    Ok(IntervalPoset { nodes, parent, root })
}

/// Checks that the interval classes (representatives plus all shifts by `n`)
/// are pairwise disjoint or nested.
pub fn check_laminar(reps: &[IndexInterval], n: usize) -> Result<()> {
    let period = n as i64;
    for (k, a) in reps.iter().enumerate() {
        for b in &reps[k + 1..] {
            for shift in [-period, 0, period] {
                let b = b.shifted(shift);
                if a.crosses(&b) {
                    return Err(Error::DegenerateOrder { first: (a.a, a.b), second: (b.a, b.b) });
                }
            }
        }
    }
    Ok(())
}

impl<T: Scalar> IntervalPoset<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `(child, parent)` node-index pairs of the Hasse diagram.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c, p)))
            .collect()
    }

    pub fn children(&self, node: usize) -> Vec<usize> {
        self.edges().into_iter().filter(|&(_, p)| p == node).map(|(c, _)| c).collect()
    }

    /// Nodes that contain no other class.
    pub fn minimal_elements(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.len()];
        for p in self.parent.iter().flatten() {
            has_child[*p] = true;
        }
        (0..self.len()).filter(|&k| !has_child[k]).collect()
    }

    /// A single connected tree whose only parentless node is the full class.
    pub fn is_tree(&self) -> bool {
        match self.root {
            Some(root) => self.parent.iter().enumerate().all(|(k, p)| p.is_some() != (k == root)),
            None => false,
        }
    }

    /// Path from `node` up through its ancestors.
    pub fn chain_from(&self, node: usize) -> Vec<usize> {
        let mut chain = vec![node];
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            if chain.len() > self.len() {
                break;
            }
            chain.push(p);
            cur = p;
        }
        chain
    }

    /// Node index of the class starting at `start` (in `1..=n`).
    pub fn node_by_start(&self, start: usize) -> Option<usize> {
        self.nodes.iter().position(|r| r.start == start)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            nodes: self
                .nodes
                .iter()
                .map(|r| PosetNode { start: r.start, kappa: r.kappa, average: r.average.to_f64() })
                .collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|(c, p)| [self.nodes[c].start, self.nodes[p].start])
                .collect(),
            root: self.root.map(|r| self.nodes[r].start),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph mintervals {\n  rankdir=BT;\n");
        for r in &self.nodes {
            let iv = r.interval();
            let _ = writeln!(
                out,
                "  n{} [label=\"[{}:{}] a={}\"];",
                r.start,
                iv.a,
                iv.b,
                format_average(r.average.to_f64())
            );
        }
        for (c, p) in self.edges() {
            let _ = writeln!(out, "  n{} -> n{};", self.nodes[c].start, self.nodes[p].start);
        }
        out.push_str("}\n");
        out
    }
}

fn format_average(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Poset wire format: nodes, `[child, parent]` edges by start index, root start.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosetJson {
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<[usize; 2]>,
    pub root: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PosetNode {
    pub start: usize,
    pub kappa: usize,
    pub average: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;
    use num_rational::BigRational;

    fn example_exact() -> PeriodicTuple<BigRational> {
        let values = ["1.2", "2.3", "3.5", "1.8", "1.6", "2.4", "3", "3.2", "1.1", "2.5"]
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect();
        PeriodicTuple::new(values).unwrap()
    }

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn m_interval_examples() {
        let x = example_exact();
        let r = m_interval(&x, 1);
        assert_eq!((r.start, r.kappa, r.average), (1, 7, q("2.375")));
        let r = m_interval(&x, 9);
        assert_eq!((r.start, r.kappa, r.average), (9, 9, q("2.26")));
        let r = m_interval(&x, 19);
        assert_eq!((r.start, r.kappa), (9, 9));
        let c = PeriodicTuple::new(vec![2.0; 5]).unwrap();
        for i in 1..=5 {
            let r = m_interval(&c, i);
            assert_eq!((r.kappa, r.average), (0, 2.0));
        }
    }

    #[test]
    fn full_maximal_start_examples() {
        assert_eq!(full_maximal_start(&example_exact()), 9);
        assert_eq!(full_maximal_start(&example_exact().to_f64()), 9);
        assert_eq!(full_maximal_start(&PeriodicTuple::new(vec![3.0; 7]).unwrap()), 1);
    }

    #[test]
    fn example_poset_shape() {
        let x = example_exact();
        let poset = build_poset(&x).unwrap();
        assert!(poset.is_tree());
        let root = poset.root.unwrap();
        assert_eq!(poset.nodes[root].interval(), IndexInterval { a: 9, b: 18 });
        let mut minimal: Vec<_> =
            poset.minimal_elements().into_iter().map(|k| poset.nodes[k].interval()).collect();
        minimal.sort();
        let expect = [(3, 3), (8, 8), (10, 10)].map(|(a, b)| IndexInterval { a, b });
        assert_eq!(minimal, expect);
        let chain: Vec<_> = poset
            .chain_from(poset.node_by_start(8).unwrap())
            .into_iter()
            .map(|k| poset.nodes[k].start)
            .collect();
        assert_eq!(chain, vec![8, 7, 6, 5, 4, 1, 9]);
        let chain: Vec<_> = poset
            .chain_from(poset.node_by_start(3).unwrap())
            .into_iter()
            .map(|k| poset.nodes[k].start)
            .collect();
        assert_eq!(chain, vec![3, 2, 1, 9]);
    }

    #[test]
    fn constant_tuple_is_a_forest_of_singletons() {
        let x = PeriodicTuple::new(vec![1.0; 4]).unwrap();
        let poset = build_poset(&x).unwrap();
        assert!(poset.root.is_none());
        assert!(!poset.is_tree());
        assert!(poset.edges().is_empty());
        assert_eq!(poset.minimal_elements().len(), 4);
        assert_eq!(poset.to_json().root, None);
    }

    #[test]
    fn ties_keep_the_smallest_maximizer() {
        let x = PeriodicTuple::new(vec![1.0, 1.0, 1.0, 0.0]).unwrap();
        let kappas: Vec<_> = m_intervals(&x).iter().map(|r| r.kappa).collect();
        assert_eq!(kappas, vec![0, 0, 0, 3]);
        let poset = build_poset(&x).unwrap();
        assert!(poset.is_tree());
        assert_eq!(poset.root, Some(3));
    }

    #[test]
    fn crossing_classes_are_reported() {
        let iv = |a, b| IndexInterval { a, b };
        assert!(check_laminar(&[iv(1, 2), iv(3, 3), iv(4, 6)], 6).is_ok());
        match check_laminar(&[iv(1, 2), iv(2, 3)], 4) {
            Err(Error::DegenerateOrder { first, second }) => {
                assert_eq!((first, second), ((1, 2), (2, 3)));
            }
            other => panic!("expected DegenerateOrder, got {other:?}"),
        }
        // [4:5] crosses [5:6], the shift of [1:2] by one period.
        assert!(check_laminar(&[iv(1, 2), iv(4, 5)], 4).is_err());
    }

    #[test]
    fn majorizing_rotation_of_example_tuple() {
        let x = example_exact();
        assert_eq!(majorizing_rotation(&x), 9);
        assert!(rotation_majorizes(&x, 9));
        let hits: Vec<i64> = (1..=10).filter(|&i| rotation_majorizes(&x, i)).collect();
        assert_eq!(hits, vec![9]);
        let rotated = x.rotation(9);
        assert_eq!(rotated[0], q("1.1"));
        assert_eq!(rotated[9], q("3.2"));
    }

    #[test]
    fn constant_rotation_is_boundary_case() {
        let x = PeriodicTuple::new(vec![1.0; 5]).unwrap();
        assert_eq!(majorizing_rotation(&x), 1);
        assert!(!rotation_majorizes(&x, 1));
        for k in 1..=5 {
            assert_eq!(x.window_sum(1, k), k as f64);
        }
    }

    #[test]
    fn distinct_average_surrogate() {
        assert!(!has_distinct_averages(&example_exact()));
        let x: PeriodicTuple<BigRational> =
            PeriodicTuple::new(["1", "10", "100", "1000"].iter().map(|s| q(s)).collect()).unwrap();
        assert!(has_distinct_averages(&x));
    }

    #[test]
    fn dot_and_json_render() {
        let poset = build_poset(&example_exact()).unwrap();
        let json = poset.to_json();
        assert_eq!(json.root, Some(9));
        assert_eq!(json.edges.len(), 9);
        assert!(json.edges.contains(&[1, 9]));
        let dot = poset.to_dot();
        assert!(dot.contains("n9 [label=\"[9:18] a=2.26\"];"));
        assert!(dot.contains("n8 -> n7;"));
    }
}
