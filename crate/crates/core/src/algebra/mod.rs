//! The matrix monoid `(Mat_n, ∘)` over several entry kinds.

mod dump;
mod matrix;
mod scalar;
mod sparse;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use dump::{dump_matrix, parse_matrix_dump};
pub use matrix::{circ_expansion, circ_fold, Matrix};
pub use scalar::{FeatureVec, GuardedDiv, One, Scalar};
pub use sparse::SparseMatrix;

use crate::error::{Error, Result, ScalarKind};
use crate::graph::NodePermutation;

/// A square matrix whose entry kind is chosen at run time.
#[derive(Debug, Clone, PartialEq)]
pub enum PathMatrix {
    BigInt(Matrix<BigInt>),
    Rational(Matrix<BigRational>),
    Float(Matrix<f64>),
    FeatureVec(Matrix<FeatureVec>),
}

macro_rules! each_kind {
    ($m:expr, $x:ident => $body:expr) => {
        match $m {
            PathMatrix::BigInt($x) => $body,
            PathMatrix::Rational($x) => $body,
            PathMatrix::Float($x) => $body,
            PathMatrix::FeatureVec($x) => $body,
        }
    };
}

macro_rules! each_kind_map {
    ($m:expr, $x:ident => $body:expr) => {
        match $m {
            PathMatrix::BigInt($x) => PathMatrix::BigInt($body),
            PathMatrix::Rational($x) => PathMatrix::Rational($body),
            PathMatrix::Float($x) => PathMatrix::Float($body),
            PathMatrix::FeatureVec($x) => PathMatrix::FeatureVec($body),
        }
    };
}

macro_rules! pairwise {
    ($a:expr, $b:expr, $x:ident, $y:ident => $body:expr) => {
        match ($a, $b) {
            (PathMatrix::BigInt($x), PathMatrix::BigInt($y)) => PathMatrix::BigInt($body?),
            (PathMatrix::Rational($x), PathMatrix::Rational($y)) => PathMatrix::Rational($body?),
            (PathMatrix::Float($x), PathMatrix::Float($y)) => PathMatrix::Float($body?),
            (PathMatrix::FeatureVec($x), PathMatrix::FeatureVec($y)) => {
                PathMatrix::FeatureVec($body?)
            }
            (a, b) => {
                return Err(Error::KindMismatch {
                    left: a.kind(),
                    right: b.kind(),
                })
            }
        }
    };
}

impl PathMatrix {
    pub fn kind(&self) -> ScalarKind {
        match self {
            PathMatrix::BigInt(_) => ScalarKind::BigInt,
            PathMatrix::Rational(_) => ScalarKind::Rational,
            PathMatrix::Float(_) => ScalarKind::Float,
            PathMatrix::FeatureVec(_) => ScalarKind::FeatureVec,
        }
    }

    pub fn n(&self) -> usize {
        each_kind!(self, m => m.n())
    }

    /// Feature dimension for feature-vector matrices.
    pub fn feature_dim(&self) -> Option<usize> {
        match self {
            PathMatrix::FeatureVec(m) => Some(m.shape()),
            _ => None,
        }
    }

    pub fn circ(&self, other: &PathMatrix) -> Result<PathMatrix> {
        Ok(pairwise!(self, other, a, b => a.circ(b)))
    }

    pub fn add(&self, other: &PathMatrix) -> Result<PathMatrix> {
        Ok(pairwise!(self, other, a, b => a.add(b)))
    }

    pub fn mul(&self, other: &PathMatrix) -> Result<PathMatrix> {
        Ok(pairwise!(self, other, a, b => a.mul(b)))
    }

    pub fn hadamard(&self, other: &PathMatrix) -> Result<PathMatrix> {
        Ok(pairwise!(self, other, a, b => a.hadamard(b)))
    }

    pub fn transpose(&self) -> PathMatrix {
        each_kind_map!(self, m => m.transpose())
    }

    pub fn change_of_order(&self, p: &NodePermutation) -> Result<PathMatrix> {
        Ok(each_kind_map!(self, m => m.change_of_order(p)?))
    }

    pub fn is_symmetric(&self) -> bool {
        each_kind!(self, m => m.is_symmetric())
    }

    pub fn is_zero(&self) -> bool {
        each_kind!(self, m => m.is_zero())
    }
}

/// [`circ_expansion`] over run-time kinds.
pub fn circ_expansion_dyn(ms: &[PathMatrix]) -> Result<PathMatrix> {
    let first = ms
        .first()
        .ok_or(Error::Empty("circ expansion of no matrices"))?;
    fn collect<T: Scalar>(
        ms: &[PathMatrix],
        pick: impl Fn(&PathMatrix) -> Option<&Matrix<T>>,
    ) -> Result<Vec<Matrix<T>>> {
        ms.iter()
            .map(|m| {
                pick(m).cloned().ok_or(Error::KindMismatch {
                    left: T::KIND,
                    right: m.kind(),
                })
            })
            .collect()
    }
    Ok(match first {
        PathMatrix::BigInt(_) => PathMatrix::BigInt(circ_expansion(&collect(ms, |m| match m {
            PathMatrix::BigInt(x) => Some(x),
            _ => None,
        })?)?),
        PathMatrix::Rational(_) => {
            PathMatrix::Rational(circ_expansion(&collect(ms, |m| match m {
                PathMatrix::Rational(x) => Some(x),
                _ => None,
            })?)?)
        }
        PathMatrix::Float(_) => PathMatrix::Float(circ_expansion(&collect(ms, |m| match m {
            PathMatrix::Float(x) => Some(x),
            _ => None,
        })?)?),
        PathMatrix::FeatureVec(_) => {
            PathMatrix::FeatureVec(circ_expansion(&collect(ms, |m| match m {
                PathMatrix::FeatureVec(x) => Some(x),
                _ => None,
            })?)?)
        }
    })
}

impl From<Matrix<BigInt>> for PathMatrix {
    fn from(m: Matrix<BigInt>) -> Self {
        PathMatrix::BigInt(m)
    }
}

impl From<Matrix<BigRational>> for PathMatrix {
    fn from(m: Matrix<BigRational>) -> Self {
        PathMatrix::Rational(m)
    }
}

impl From<Matrix<f64>> for PathMatrix {
    fn from(m: Matrix<f64>) -> Self {
        PathMatrix::Float(m)
    }
}

impl From<Matrix<FeatureVec>> for PathMatrix {
    fn from(m: Matrix<FeatureVec>) -> Self {
        PathMatrix::FeatureVec(m)
    }
}
