//! Partial assignments of buckets and colours to vertices.

use serde::{Deserialize, Serialize};

/// A partial bucket assignment `Y_Λ ∈ [s]^Λ` over vertices `0..n`.
///
/// Buckets are 1-indexed; `None` marks a vertex outside the domain `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjectedConfig {
    values: Vec<Option<u32>>,
}

impl ProjectedConfig {
    /// Configuration with an empty domain.
    pub fn empty(n: usize) -> Self {
        Self {
            values: vec![None; n],
        }
    }

    /// Configuration defined on every vertex.
    pub fn full(values: Vec<u32>) -> Self {
        Self {
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn from_options(values: Vec<Option<u32>>) -> Self {
        Self { values }
    }

    /// Configuration defined only on the listed `(vertex, bucket)` pairs.
    ///
    /// Panics if a vertex is `>= n`.
    pub fn from_pairs(n: usize, pairs: &[(usize, u32)]) -> Self {
        let mut cfg = Self::empty(n);
        for &(v, b) in pairs {
            cfg.values[v] = Some(b);
        }
        cfg
    }

    /// Number of vertices in the ambient vertex set (not the domain size).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> Option<u32> {
        self.values.get(v).copied().flatten()
    }

    #[inline]
    pub fn set(&mut self, v: usize, bucket: Option<u32>) {
        self.values[v] = bucket;
    }

    /// Vertices of the domain `Λ`, ascending.
    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, b)| b.map(|_| v))
    }

    pub fn domain_size(&self) -> usize {
        self.values.iter().filter(|b| b.is_some()).count()
    }

    pub fn as_slice(&self) -> &[Option<u32>] {
        &self.values
    }

    /// True when every defined value lies in `1..=s`.
    pub fn is_valid_for(&self, s: u32) -> bool {
        self.values.iter().flatten().all(|&b| (1..=s).contains(&b))
    }

    /// Copy of `self` with `v` removed from the domain.
    pub fn without(&self, v: usize) -> Self {
        let mut out = self.clone();
        out.values[v] = None;
        out
    }
}

/// A colouring `X_S ∈ [q]^S` of the vertices in `domain`.
///
/// `colours[i]` is the colour of `domain[i]`. Colours are 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Colouring {
    domain: Vec<usize>,
    colours: Vec<u32>,
}

impl Colouring {
    /// Panics if the two vectors have different lengths.
    pub fn new(domain: Vec<usize>, colours: Vec<u32>) -> Self {
        assert_eq!(domain.len(), colours.len(), "domain/colour length mismatch");
        Self { domain, colours }
    }

    /// A colouring of all of `0..colours.len()`.
    pub fn full(colours: Vec<u32>) -> Self {
        Self {
            domain: (0..colours.len()).collect(),
            colours,
        }
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<u32> {
        self.domain
            .iter()
            .position(|&u| u == v)
            .map(|i| self.colours[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.domain.iter().copied().zip(self.colours.iter().copied())
    }

    pub fn into_colours(self) -> Vec<u32> {
        self.colours
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_tracks_defined_values() {
        let mut y = ProjectedConfig::from_pairs(5, &[(1, 2), (3, 1)]);
        assert_eq!(y.domain().collect::<Vec<_>>(), vec![1, 3]);
        y.set(1, None);
        assert_eq!(y.domain_size(), 1);
        assert!(y.is_valid_for(1));
        assert!(!ProjectedConfig::full(vec![1, 3]).is_valid_for(2));
    }

    #[test]
    fn colouring_lookup() {
        let x = Colouring::new(vec![4, 2], vec![7, 9]);
        assert_eq!(x.get(2), Some(9));
        assert_eq!(x.get(3), None);
    }
}
