//! Periodic tuples, index intervals and the discrete right maximal function.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An n-tuple of nonnegative numbers, read as its n-periodic extension.
///
/// Indices are 1-based and may be any integer; `x(i) = x(i + k n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicTuple<T: Scalar = f64> {
    values: Vec<T>,
    // prefix[j] = x_1 + ... + x_j over two periods, j = 0..=2n
    prefix: Vec<T>,
}

impl<T: Scalar> PeriodicTuple<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("tuple must have at least one entry".into()));
        }
        let zero = T::zero();
        for (k, v) in values.iter().enumerate() {
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            let bad = !(*v >= zero) || (!T::EXACT && !v.to_f64().is_finite());
            if bad {
                return Err(Error::InvalidInput(format!(
                    "entry {} is not a finite nonnegative number",
                    k + 1
                )));
            }
        }
        if values.iter().all(|v| v.is_zero()) {
            return Err(Error::InvalidInput("tuple must have a positive entry".into()));
        }
        let n = values.len();
        let mut prefix = Vec::with_capacity(2 * n + 1);
        prefix.push(T::zero());
        for k in 0..2 * n {
            let next = prefix[k].clone() + values[k % n].clone();
            prefix.push(next);
        }
        Ok(Self { values, prefix })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `x(i)` of the periodic extension.
    pub fn get(&self, i: i64) -> &T {
        &self.values[self.offset(i)]
    }

    /// Zero-based position of index `i` within one period.
    pub fn offset(&self, i: i64) -> usize {
        (i - 1).rem_euclid(self.len() as i64) as usize
    }

    /// Maps any index to its representative in `1..=n`.
    pub fn canonical(&self, i: i64) -> usize {
        self.offset(i) + 1
    }

    pub fn total(&self) -> T {
        self.prefix[self.len()].clone()
    }

    /// The period average `a_[1:n](x)`.
    pub fn mean(&self) -> T {
        self.total() / T::from_count(self.len())
    }

    /// Sum of `len` consecutive terms starting at index `start`.
    pub fn window_sum(&self, start: i64, len: usize) -> T {
        let n = self.len();
        let s = self.offset(start);
        let (periods, rem) = (len / n, len % n);
        let tail = self.prefix[s + rem].clone() - self.prefix[s].clone();
        if periods == 0 {
            tail
        } else {
            T::from_count(periods) * self.total() + tail
        }
    }

    pub fn window_average(&self, start: i64, len: usize) -> T {
        debug_assert!(len > 0);
        self.window_sum(start, len) / T::from_count(len)
    }

    pub fn interval_average(&self, interval: IndexInterval) -> T {
        self.window_average(interval.a, interval.cardinality())
    }

    /// `M^r x(i)` together with the smallest window length attaining it.
    pub fn right_maximal_arg(&self, i: i64) -> (T, usize) {
        let mut best = self.window_average(i, 1);
        let mut best_len = 1;
        for len in 2..=self.len() {
            let avg = self.window_average(i, len);
            if avg > best {
                best = avg;
                best_len = len;
            }
        }
        (best, best_len)
    }

    /// Discrete right maximal function `M^r x(i)`, maximizing over lengths `1..=n`.
    pub fn right_maximal(&self, i: i64) -> T {
        self.right_maximal_arg(i).0
    }

    /// Maximal forward average `m_i^+(x) = M^r x(i + 1)`.
    pub fn forward_max_average(&self, i: i64) -> T {
        self.right_maximal(i + 1)
    }

    /// Rotation starting at index `start`: `(x_start, ..., x_{start+n-1})`.
    pub fn rotation(&self, start: i64) -> Vec<T> {
        (0..self.len() as i64).map(|k| self.get(start + k).clone()).collect()
    }

    pub fn scaled(&self, factor: &T) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v.clone() * factor.clone()).collect())
    }

    pub fn to_f64(&self) -> PeriodicTuple<f64> {
        PeriodicTuple::new(self.values.iter().map(Scalar::to_f64).collect())
            .expect("a valid tuple stays valid in floating point")
    }
}

/// Integer interval `[a:b]`, `b >= a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexInterval {
    pub a: i64,
    pub b: i64,
}

impl IndexInterval {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if b < a {
            return Err(Error::InvalidInput(format!("empty interval [{a}:{b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn cardinality(&self) -> usize {
        (self.b - self.a + 1) as usize
    }

    pub fn is_short(&self, n: usize) -> bool {
        ((self.b - self.a) as usize) < n
    }

    pub fn shifted(&self, by: i64) -> Self {
        Self { a: self.a + by, b: self.b + by }
    }

    pub fn is_equivalent(&self, other: &Self, n: usize) -> bool {
        let n = n as i64;
        self.cardinality() == other.cardinality() && (self.a - other.a).rem_euclid(n) == 0
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.a <= other.b && other.a <= self.b
    }

    /// Overlapping but neither contains the other.
    pub fn crosses(&self, other: &Self) -> bool {
        self.intersects(other) && !self.contains(other) && !other.contains(self)
    }
}

impl fmt::Display for IndexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.a, self.b)
    }
}
