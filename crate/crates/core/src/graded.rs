use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Finitely supported map `degree → dimension`. Zero entries are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims(BTreeMap<i64, usize>);

impl GradedDims {
    pub fn new() -> Self {
        GradedDims(BTreeMap::new())
    }

    pub fn get(&self, degree: i64) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn add(&mut self, degree: i64, dim: usize) {
        if dim == 0 {
            return;
        }
        *self.0.entry(degree).or_insert(0) += dim;
    }

    pub fn set(&mut self, degree: i64, dim: usize) {
        if dim == 0 {
            self.0.remove(&degree);
        } else {
            self.0.insert(degree, dim);
        }
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.keys().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    /// `(a ⊗ b)_k = Σ_{i+j=k} a_i b_j`.
    pub fn convolve(&self, other: &GradedDims) -> GradedDims {
        let mut out = GradedDims::new();
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                out.add(i + j, a * b);
            }
        }
        out
    }

    /// Re-indexes degrees by `k ↦ f(k)`, summing collisions.
    pub fn map_degrees(&self, f: impl Fn(i64) -> i64) -> GradedDims {
        let mut out = GradedDims::new();
        for (k, v) in self.iter() {
            out.add(f(k), v);
        }
        out
    }

    pub fn merge(&mut self, other: &GradedDims) {
        for (k, v) in other.iter() {
            self.add(k, v);
        }
    }

    /// Entries with degree `≤ max`.
    pub fn truncated(&self, max: i64) -> GradedDims {
        GradedDims(self.0.range(..=max).map(|(&k, &v)| (k, v)).collect())
    }
}

impl FromIterator<(i64, usize)> for GradedDims {
    fn from_iter<I: IntoIterator<Item = (i64, usize)>>(iter: I) -> Self {
        let mut g = GradedDims::new();
        for (k, v) in iter {
            g.add(k, v);
        }
        g
    }
}

impl<const N: usize> From<[(i64, usize); N]> for GradedDims {
    fn from(v: [(i64, usize); N]) -> Self {
        v.into_iter().collect()
    }
}

impl fmt::Debug for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convolution() {
        let a = GradedDims::from([(0, 1), (1, 1)]);
        assert_eq!(a.convolve(&a), GradedDims::from([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(a.convolve(&GradedDims::new()), GradedDims::new());
    }

    #[test]
    fn zeros_are_not_stored() {
        let mut g = GradedDims::new();
        g.add(3, 0);
        g.set(2, 4);
        g.set(2, 0);
        assert!(g.is_zero());
        assert_eq!(serde_json::to_string(&GradedDims::from([(2, 1), (-1, 3)])).unwrap(), r#"{"-1":3,"2":1}"#);
    }
}
