use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Bijection on `0..n`; `apply(i)` is the new label of node `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodePermutation {
    mapping: Vec<usize>,
}

impl NodePermutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; mapping.len()];
        for &t in &mapping {
            if t >= mapping.len() {
                return Err(Error::InvalidPermutation(format!(
                    "target {t} outside 0..{}",
                    mapping.len()
                )));
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidPermutation(format!(
                    "target {t} appears twice"
                )));
            }
        }
        Ok(NodePermutation { mapping })
    }

    pub fn identity(n: usize) -> Self {
        NodePermutation {
            mapping: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.shuffle(rng);
        NodePermutation { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &NodePermutation) -> Result<NodePermutation> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(NodePermutation {
            mapping: other.mapping.iter().map(|&i| self.mapping[i]).collect(),
        })
    }

    pub fn inverse(&self) -> NodePermutation {
        let mut inv = vec![0; self.len()];
        for (i, &t) in self.mapping.iter().enumerate() {
            inv[t] = i;
        }
        NodePermutation { mapping: inv }
    }
}
