//! Triplet storage for matrices with few nonzero entries.
//!
//! Results agree exactly with the dense [`Matrix`] operations: each output
//! entry is accumulated over the inner index in increasing order.

use std::collections::BTreeMap;

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};
use crate::graph::NodePermutation;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix<T: Scalar> {
    n: usize,
    shape: T::Shape,
    /// Sorted by `(row, col)`; no duplicates, no stored zeros.
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(n: usize, shape: T::Shape) -> Self {
        SparseMatrix {
            n,
            shape,
            entries: Vec::new(),
        }
    }

    /// Builds from triplets; repeated coordinates are summed and zeros dropped.
    pub fn from_triplets(
        n: usize,
        shape: T::Shape,
        triplets: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (i, j, x) in triplets {
            if i >= n || j >= n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: i.max(j) + 1,
                });
            }
            map.entry((i, j))
                .and_modify(|acc| acc.add_assign(&x))
                .or_insert(x);
        }
        Ok(SparseMatrix {
            n,
            shape,
            entries: map
                .into_iter()
                .filter(|(_, x)| !x.is_zero())
                .map(|((i, j), x)| (i, j, x))
                .collect(),
        })
    }

    pub fn from_dense(m: &Matrix<T>) -> Self {
        let n = m.n();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = m.get(i, j);
                if !x.is_zero() {
                    entries.push((i, j, x.clone()));
                }
            }
        }
        SparseMatrix {
            n,
            shape: m.shape(),
            entries,
        }
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut out = Matrix::zeros(self.n, self.shape);
        for (i, j, x) in &self.entries {
            out.set(*i, *j, x.clone());
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn triplets(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    fn check_same(&self, n: usize, shape: T::Shape) -> Result<()> {
        if self.n != n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: n,
            });
        }
        if self.shape != shape {
            return Err(Error::Invariant(format!(
                "entry shapes differ: {:?} vs {shape:?}",
                self.shape
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other.n, other.shape)?;
        Self::from_triplets(
            self.n,
            self.shape,
            self.entries.iter().chain(&other.entries).cloned(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other.n, other.shape)?;
        let mut other_rows: Vec<Vec<(usize, &T)>> = vec![Vec::new(); self.n];
        for (k, j, x) in &other.entries {
            other_rows[*k].push((*j, x));
        }
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (i, k, a) in &self.entries {
            for &(j, b) in &other_rows[*k] {
                acc.entry((*i, j))
                    .or_insert_with(|| T::zero(self.shape))
                    .mul_add_assign(a, b);
            }
        }
        Self::from_triplets(
            self.n,
            self.shape,
            acc.into_iter().map(|((i, j), x)| (i, j, x)),
        )
    }

    /// `self ∘ other`, both sparse.
    pub fn circ(&self, other: &Self) -> Result<Self> {
        let sum = self.add(other)?;
        let product = self.mul(other)?;
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (i, j, x) in sum.entries.into_iter() {
            acc.insert((i, j), x);
        }
        for (i, j, x) in product.entries {
            acc.entry((i, j))
                .and_modify(|a| a.add_assign(&x))
                .or_insert(x);
        }
        Self::from_triplets(
            self.n,
            self.shape,
            acc.into_iter().map(|((i, j), x)| (i, j, x)),
        )
    }

    /// `self ∘ dense` written into a dense result. Costs `O(nnz · n)` for the
    /// product term.
    pub fn circ_dense(&self, dense: &Matrix<T>) -> Result<Matrix<T>> {
        self.check_same(dense.n(), dense.shape())?;
        let mut out = dense.clone();
        for (i, j, x) in &self.entries {
            out.get_mut(*i, *j).add_assign(x);
        }
        // Same accumulation order as the dense product: inner index ascending
        // within each row, because entries are sorted by (row, col).
        for (i, k, a) in &self.entries {
            for j in 0..self.n {
                let b = dense.get(*k, j);
                if !b.is_zero() {
                    out.get_mut(*i, j).mul_add_assign(a, b);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(i, j, x)| (*j, *i, x.clone()))
            .collect();
        entries.sort_by_key(|(i, j, _)| (*i, *j));
        SparseMatrix {
            n: self.n,
            shape: self.shape,
            entries,
        }
    }

    pub fn change_of_order(&self, p: &NodePermutation) -> Result<Self> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|(i, j, x)| (p.apply(*i), p.apply(*j), x.clone()))
            .collect();
        entries.sort_by_key(|(i, j, _)| (*i, *j));
        Ok(SparseMatrix {
            n: self.n,
            shape: self.shape,
            entries,
        })
    }
}
