//! Cyclic sums with averages in the denominators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic::PeriodicTuple;
use crate::scalar::Scalar;

/// One positive window length per index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusTuple(Vec<usize>);

impl RadiusTuple {
    pub fn new(radii: Vec<usize>) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidInput("radius tuple is empty".into()));
        }
        if let Some(k) = radii.iter().position(|&r| r == 0) {
            return Err(Error::InvalidInput(format!("radius {} must be positive", k + 1)));
        }
        Ok(Self(radii))
    }

    pub fn constant(n: usize, k: usize) -> Result<Self> {
        Self::new(vec![k; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rotated(&self, by: usize) -> Self {
        let mut r = self.0.clone();
        let shift = by % r.len();
        r.rotate_left(shift);
        Self(r)
    }
}

/// `S_n(x, r) = sum_i x_i / a_[i+1 : i+r_i](x)`.
pub fn sum_with_radii<T: Scalar>(x: &PeriodicTuple<T>, r: &RadiusTuple) -> Result<T> {
    if r.len() != x.len() {
        return Err(Error::InvalidInput(format!(
            "radius tuple has length {}, tuple has length {}",
            r.len(),
            x.len()
        )));
    }
    let mut acc = T::zero();
    for (k, (xi, &ri)) in x.values().iter().zip(r.as_slice()).enumerate() {
        let i = k as i64 + 1;
        let denom = x.window_average(i + 1, ri);
        if denom.is_zero() {
            return Err(Error::InadmissiblePair { index: k + 1 });
        }
        acc = acc + xi.clone() / denom;
    }
    Ok(acc)
}

/// Diananda sum `sum_i x_i / (x_{i+1} + ... + x_{i+k})`.
pub fn diananda_sum<T: Scalar>(x: &PeriodicTuple<T>, k: usize) -> Result<T> {
    let r = RadiusTuple::constant(x.len(), k)?;
    Ok(sum_with_radii(x, &r)? / T::from_count(k))
}

/// `S^max(x)` with the radii that realize it.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxAvgSum<T: Scalar = f64> {
    pub value: T,
    /// Smallest window length attaining `m_i^+` at every index.
    pub radii: RadiusTuple,
}

/// `S^max(x) = sum_i x_i / m_i^+(x)`, which equals `inf_r S_n(x, r)`.
pub fn max_avg_sum<T: Scalar>(x: &PeriodicTuple<T>) -> MaxAvgSum<T> {
    let mut value = T::zero();
    let mut radii = Vec::with_capacity(x.len());
    for (k, xi) in x.values().iter().enumerate() {
        let (m, len) = x.right_maximal_arg(k as i64 + 2);
        value = value + xi.clone() / m;
        radii.push(len);
    }
    MaxAvgSum { value, radii: RadiusTuple(radii) }
}

/// A nonempty subset of `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexSet {
    /// Bit `j - 1` set for member `j`; used when `n <= 64`.
    Mask(u64),
    /// Sorted, deduplicated 1-based members.
    List(Vec<usize>),
}

impl IndexSet {
    fn from_members(mut members: Vec<usize>, n: usize) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("empty subset".into()));
        }
        if let Some(&bad) = members.iter().find(|&&j| j == 0 || j > n) {
            return Err(Error::InvalidInput(format!("subset index {bad} outside 1..={n}")));
        }
        members.sort_unstable();
        members.dedup();
        if n <= 64 {
            Ok(Self::Mask(members.iter().fold(0u64, |m, &j| m | (1 << (j - 1)))))
        } else {
            Ok(Self::List(members))
        }
    }

    pub fn members(&self) -> Vec<usize> {
        match self {
            Self::Mask(mask) => (0..64).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect(),
            Self::List(list) => list.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Mask(mask) => mask.count_ones() as usize,
            Self::List(list) => list.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn average<T: Scalar>(&self, values: &[T]) -> T {
        let sum = match self {
            Self::Mask(mask) => {
                let mut m = *mask;
                let mut s = T::zero();
                while m != 0 {
                    let b = m.trailing_zeros() as usize;
                    s = s + values[b].clone();
                    m &= m - 1;
                }
                s
            }
            Self::List(list) => list.iter().fold(T::zero(), |s, &j| s + values[j - 1].clone()),
        };
        sum / T::from_count(self.len())
    }
}

/// For every index `i`, a nonempty collection of subsets of `{1..n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetCollectionSystem {
    n: usize,
    collections: Vec<Vec<IndexSet>>,
}

impl SubsetCollectionSystem {
    /// `collections[i - 1]` lists the subsets (1-based members) assigned to index `i`.
    pub fn new(n: usize, collections: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if collections.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {n} collections, got {}",
                collections.len()
            )));
        }
        let collections = collections
            .into_iter()
            .enumerate()
            .map(|(k, sets)| {
                if sets.is_empty() {
                    return Err(Error::InvalidInput(format!("collection {} is empty", k + 1)));
                }
                sets.into_iter().map(|s| IndexSet::from_members(s, n)).collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, collections })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn collection(&self, i: usize) -> &[IndexSet] {
        &self.collections[i - 1]
    }

    /// Index `i0` such that every collection contains the full set and
    /// collection `i0` contains `{i0}`, if such an index exists.
    pub fn overgeneral_witness(&self) -> Option<usize> {
        let full_len = self.n;
        let all_full = self.collections.iter().all(|c| c.iter().any(|s| s.len() == full_len));
        if !all_full {
            return None;
        }
        (1..=self.n).find(|&i| self.collection(i).iter().any(|s| s.members() == [i]))
    }

    /// `m_i(x) = max_j a(x | Omega_{i,j})`.
    pub fn maximal_averages<T: Scalar>(&self, x: &PeriodicTuple<T>) -> Vec<T> {
        self.collections
            .iter()
            .map(|sets| {
                let mut best = sets[0].average(x.values());
                for s in &sets[1..] {
                    let a = s.average(x.values());
                    if a > best {
                        best = a;
                    }
                }
                best
            })
            .collect()
    }
}

/// `sum_i x_i / m_i(x)` for an arbitrary subset system.
pub fn generalized_max_sum<T: Scalar>(
    x: &PeriodicTuple<T>,
    system: &SubsetCollectionSystem,
) -> Result<T> {
    if system.n() != x.len() {
        return Err(Error::InvalidInput(format!(
            "subset system is for n = {}, tuple has n = {}",
            system.n(),
            x.len()
        )));
    }
    let mut acc = T::zero();
    for (k, (xi, m)) in x.values().iter().zip(system.maximal_averages(x)).enumerate() {
        if m.is_zero() {
            return Err(Error::InadmissiblePair { index: k + 1 });
        }
        acc = acc + xi.clone() / m;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_rational;
    use num_rational::BigRational;

    fn tuple(v: &[f64]) -> PeriodicTuple {
        PeriodicTuple::new(v.to_vec()).unwrap()
    }

    fn example() -> PeriodicTuple {
        tuple(&[1.2, 2.3, 3.5, 1.8, 1.6, 2.4, 3.0, 3.2, 1.1, 2.5])
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn sum_with_radii_examples() {
        let c = tuple(&[0.4; 5]);
        let r = RadiusTuple::new(vec![1, 3, 7, 2, 5]).unwrap();
        assert!(close(sum_with_radii(&c, &r).unwrap(), 5.0, 1e-12));
        let x = tuple(&[1.0, 2.0]);
        assert_eq!(sum_with_radii(&x, &RadiusTuple::constant(2, 1).unwrap()).unwrap(), 2.5);
        let full = RadiusTuple::constant(10, 10).unwrap();
        assert!(close(sum_with_radii(&example(), &full).unwrap(), 10.0, 1e-12));
    }

    #[test]
    fn inadmissible_pairs_are_errors() {
        let x = tuple(&[1.0, 0.0, 0.0]);
        let r = RadiusTuple::new(vec![1, 1, 1]).unwrap();
        assert!(matches!(sum_with_radii(&x, &r), Err(Error::InadmissiblePair { index: 1 })));
        assert!(matches!(diananda_sum(&x, 1), Err(Error::InadmissiblePair { .. })));
        assert!(sum_with_radii(&x, &RadiusTuple::new(vec![3, 3, 3]).unwrap()).is_ok());
        assert!(sum_with_radii(&x, &RadiusTuple::new(vec![1, 1]).unwrap()).is_err());
        assert!(RadiusTuple::new(vec![1, 0]).is_err());
    }

    #[test]
    fn diananda_examples() {
        let c = tuple(&[3.0; 6]);
        assert!(close(diananda_sum(&c, 4).unwrap(), 6.0 / 4.0, 1e-12));
        assert_eq!(diananda_sum(&tuple(&[1.0, 2.0]), 1).unwrap(), 2.5);
        let x = example();
        assert!(close(diananda_sum(&x, 10).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn max_avg_sum_examples() {
        let c = tuple(&[0.25; 8]);
        let s = max_avg_sum(&c);
        assert_eq!(s.value, 8.0);
        assert!(s.radii.as_slice().iter().all(|&r| r == 1));

        // Hand evaluation from the averages table: m_i^+ = M^r x(i+1).
        let m_plus = [2.9, 3.5, 2.4, 2.55, 2.8666666666666667, 3.1, 3.2, 2.26, 2.5, 2.375];
        let expect: f64 = example().values().iter().zip(m_plus).map(|(x, m)| x / m).sum();
        let s = max_avg_sum(&example());
        assert!(close(s.value, expect, 1e-12));
        assert!(close(sum_with_radii(&example(), &s.radii).unwrap(), s.value, 1e-12));
        assert_eq!(s.radii.as_slice(), &[2, 1, 5, 4, 3, 2, 1, 10, 1, 8]);
    }

    #[test]
    fn max_avg_sum_near_extremal_tuple() {
        let eps = 1e-6;
        let mut v = vec![eps; 10];
        v[0] = 1.0;
        let s = max_avg_sum(&tuple(&v)).value;
        // x_1 only sees windows that wrap around to itself: S^max is close to n.
        assert!(s > 9.99 && s <= 10.0);
    }

    #[test]
    fn exact_and_float_backends_agree() {
        let exact: Vec<BigRational> =
            ["1.2", "2.3", "3.5", "1.8", "1.6", "2.4", "3", "3.2", "1.1", "2.5"]
                .iter()
                .map(|s| parse_rational(s).unwrap())
                .collect();
        let exact = PeriodicTuple::new(exact).unwrap();
        let a = max_avg_sum(&exact);
        let b = max_avg_sum(&example());
        assert_eq!(a.radii, b.radii);
        assert!(close(a.value.to_f64(), b.value, 1e-14));
    }

    fn overgeneral_system(n: usize) -> SubsetCollectionSystem {
        let full: Vec<usize> = (1..=n).collect();
        let mut collections = vec![vec![full.clone()]; n];
        collections[0].push(vec![1]);
        SubsetCollectionSystem::new(n, collections).unwrap()
    }

    #[test]
    fn generalized_sum_examples() {
        let s = overgeneral_system(6);
        assert_eq!(s.overgeneral_witness(), Some(1));
        let c = tuple(&[2.0; 6]);
        assert_eq!(generalized_max_sum(&c, &s).unwrap(), 6.0);

        let full_only = SubsetCollectionSystem::new(4, vec![vec![vec![1, 2, 3, 4]]; 4]).unwrap();
        let x = tuple(&[1.0, 5.0, 0.5, 2.0]);
        assert!(close(generalized_max_sum(&x, &full_only).unwrap(), 4.0, 1e-12));
        assert_eq!(full_only.overgeneral_witness(), None);

        let n = 8;
        for eps in [1e-3, 1e-6] {
            let mut v = vec![eps; n];
            v[0] = 1.0;
            let value = generalized_max_sum(&tuple(&v), &overgeneral_system(n)).unwrap();
            assert!(value >= 1.0);
            assert!(value <= 1.0 + ((n - 1) * n) as f64 * eps);
        }
    }

    #[test]
    fn subset_validation_and_list_path() {
        assert!(SubsetCollectionSystem::new(2, vec![vec![vec![1]], vec![]]).is_err());
        assert!(SubsetCollectionSystem::new(2, vec![vec![vec![1]], vec![vec![]]]).is_err());
        assert!(SubsetCollectionSystem::new(2, vec![vec![vec![3]], vec![vec![1]]]).is_err());
        assert!(SubsetCollectionSystem::new(3, vec![vec![vec![1]]]).is_err());

        let n = 70;
        let sys = overgeneral_system(n);
        assert!(matches!(sys.collection(1)[0], IndexSet::List(_)));
        let mut v = vec![1e-6; n];
        v[0] = 1.0;
        let value = generalized_max_sum(&tuple(&v), &sys).unwrap();
        assert!((1.0..=1.0 + ((n - 1) * n) as f64 * 1e-6).contains(&value));
        let x = tuple(&[0.0, 1.0]);
        let zero = SubsetCollectionSystem::new(2, vec![vec![vec![1]], vec![vec![1]]]).unwrap();
        assert!(matches!(generalized_max_sum(&x, &zero), Err(Error::InadmissiblePair { index: 1 })));
    }
}
