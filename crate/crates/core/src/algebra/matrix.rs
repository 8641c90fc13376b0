//! Dense square matrices and the monoid `A ∘ B = A + B + AB`.

use rayon::prelude::*;

use super::scalar::{One, Scalar};
use crate::error::{Error, Result};
use crate::graph::NodePermutation;

/// Products with at least this many rows are split across the rayon pool.
/// Every entry is accumulated in the same order either way.
const PARALLEL_ROWS: usize = 48;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Scalar> {
    n: usize,
    shape: T::Shape,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(n: usize, shape: T::Shape) -> Self {
        Matrix {
            n,
            shape,
            data: vec![T::zero(shape); n * n],
        }
    }

    pub fn from_fn(n: usize, shape: T::Shape, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = f(i, j);
                debug_assert_eq!(x.shape(), shape);
                data.push(x);
            }
        }
        Matrix { n, shape, data }
    }

    /// Builds from rows; every row must have length `rows.len()` and every
    /// entry must share `shape`.
    pub fn from_rows(shape: T::Shape, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for x in row {
                if x.shape() != shape {
                    return Err(Error::Invariant(format!(
                        "entry shape {:?} differs from matrix shape {shape:?}",
                        x.shape()
                    )));
                }
                data.push(x);
            }
        }
        Ok(Matrix { n, shape, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> T::Shape {
        self.shape
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.shape != other.shape {
            return Err(Error::Invariant(format!(
                "entry shapes differ: {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                a.add_assign(b);
            }
        }
    }

    /// Element-wise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Matrix {
            n: self.n,
            shape: self.shape,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.mul(b))
                .collect(),
        })
    }

    /// Ordinary matrix product; zero entries of the left factor are skipped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Matrix::zeros(self.n, self.shape);
        self.mul_acc_into(other, &mut out);
        Ok(out)
    }

    /// `out += self * other`; shapes already checked.
    fn mul_acc_into(&self, other: &Self, out: &mut Self) {
        let n = self.n;
        if n == 0 {
            return;
        }
        let row_job = |(i, out_row): (usize, &mut [T])| {
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (acc, b) in out_row.iter_mut().zip(other.row(k)) {
                    if !b.is_zero() {
                        acc.mul_add_assign(a, b);
                    }
                }
            }
        };
        if n >= PARALLEL_ROWS {
            out.data.par_chunks_mut(n).enumerate().for_each(row_job);
        } else {
            out.data.chunks_mut(n).enumerate().for_each(row_job);
        }
    }

    /// `self ∘ other = self + other + self * other`.
    pub fn circ(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        self.mul_acc_into(other, &mut out);
        Ok(out)
    }

    /// Entry `(i, j)` of `self ∘ other` without forming the whole product.
    pub fn circ_entry(&self, other: &Self, i: usize, j: usize) -> T {
        let mut acc = self.get(i, j).add(other.get(i, j));
        for k in 0..self.n {
            let a = self.get(i, k);
            if a.is_zero() {
                continue;
            }
            let b = other.get(k, j);
            if !b.is_zero() {
                acc.mul_add_assign(a, b);
            }
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.n, self.shape, |i, j| self.get(j, i).clone())
    }

    /// Simultaneous row/column reorder: `out[p(i)][p(j)] = self[i][j]`.
    pub fn change_of_order(&self, p: &NodePermutation) -> Result<Self> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        let inv = p.inverse();
        Ok(Matrix::from_fn(self.n, self.shape, |i, j| {
            self.get(inv.apply(i), inv.apply(j)).clone()
        }))
    }

    pub fn sum(&self) -> T {
        let mut acc = T::zero(self.shape);
        for x in &self.data {
            acc.add_assign(x);
        }
        acc
    }

    pub fn row_sum(&self, i: usize) -> T {
        let mut acc = T::zero(self.shape);
        for x in self.row(i) {
            acc.add_assign(x);
        }
        acc
    }

    pub fn col_sum(&self, j: usize) -> T {
        let mut acc = T::zero(self.shape);
        for i in 0..self.n {
            acc.add_assign(self.get(i, j));
        }
        acc
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn map<U: Scalar>(&self, shape: U::Shape, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            shape,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, (), |i, j| if i == j { T::one() } else { T::zero(()) })
    }
}

/// Left fold of `∘` over a nonempty list.
pub fn circ_fold<T: Scalar>(ms: &[Matrix<T>]) -> Result<Matrix<T>> {
    let (first, rest) = ms
        .split_first()
        .ok_or(Error::Empty("circ fold of no matrices"))?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.circ(m))
}

/// Sum over every strictly increasing index sequence `σ` of the products
/// `A_σ1 ⋯ A_σj`. Exponential in `ms.len()`; this is the reference expansion
/// of an iterated `∘`, not a fast path.
pub fn circ_expansion<T: Scalar>(ms: &[Matrix<T>]) -> Result<Matrix<T>> {
    let first = ms
        .first()
        .ok_or(Error::Empty("circ expansion of no matrices"))?;
    for m in &ms[1..] {
        first.check_same(m)?;
    }
    if ms.len() > 24 {
        return Err(Error::Config(format!(
            "circ expansion over {} factors would enumerate 2^{} terms",
            ms.len(),
            ms.len()
        )));
    }
    let mut total = Matrix::zeros(first.n, first.shape);
    for mask in 1u32..(1 << ms.len()) {
        let mut indices = (0..ms.len()).filter(|i| mask & (1 << i) != 0);
        let head = indices.next().expect("mask is nonzero");
        let product = indices.try_fold(ms[head].clone(), |acc, i| acc.mul(&ms[i]))?;
        total.add_assign_unchecked(&product);
    }
    Ok(total)
}
