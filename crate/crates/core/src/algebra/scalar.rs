//! Entry types for path matrices.
//!
//! A [`Scalar`] only needs a zero, addition and multiplication; path counting
//! never requires subtraction. [`One`] is implemented for the kinds that have
//! a multiplicative unit, which excludes feature vectors.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::ScalarKind;

pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    /// Extra data needed to build a zero (the dimension for feature vectors).
    type Shape: Copy + Eq + Debug + Send + Sync;

    const KIND: ScalarKind;

    fn zero(shape: Self::Shape) -> Self;
    fn shape(&self) -> Self::Shape;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, rhs: &Self);
    fn mul(&self, rhs: &Self) -> Self;

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.add_assign(&a.mul(b));
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

pub trait One: Scalar<Shape = ()> {
    fn one() -> Self;
}

/// Division used by normalization; a zero divisor yields zero.
pub trait GuardedDiv: Scalar {
    fn guarded_div(&self, rhs: &Self) -> Self;
}

impl Scalar for BigInt {
    type Shape = ();
    const KIND: ScalarKind = ScalarKind::BigInt;

    fn zero(_: ()) -> Self {
        <BigInt as num_traits::Zero>::zero()
    }
    fn shape(&self) {}
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl One for BigInt {
    fn one() -> Self {
        <BigInt as num_traits::One>::one()
    }
}

impl Scalar for BigRational {
    type Shape = ();
    const KIND: ScalarKind = ScalarKind::Rational;

    fn zero(_: ()) -> Self {
        <BigRational as num_traits::Zero>::zero()
    }
    fn shape(&self) {}
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl One for BigRational {
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
}

impl GuardedDiv for BigRational {
    fn guarded_div(&self, rhs: &Self) -> Self {
        if num_traits::Zero::is_zero(rhs) {
            <BigRational as num_traits::Zero>::zero()
        } else {
            self / rhs
        }
    }
}

impl Scalar for f64 {
    type Shape = ();
    const KIND: ScalarKind = ScalarKind::Float;

    fn zero(_: ()) -> Self {
        0.0
    }
    fn shape(&self) {}
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
}

impl One for f64 {
    fn one() -> Self {
        1.0
    }
}

impl GuardedDiv for f64 {
    fn guarded_div(&self, rhs: &Self) -> Self {
        if *rhs == 0.0 {
            0.0
        } else {
            self / rhs
        }
    }
}

/// Fixed-length real vector with element-wise addition and multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVec(pub Vec<f64>);

impl FeatureVec {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        for x in &mut self.0 {
            *x *= factor;
        }
        self
    }
}

impl Scalar for FeatureVec {
    type Shape = usize;
    const KIND: ScalarKind = ScalarKind::FeatureVec;

    fn zero(dim: usize) -> Self {
        FeatureVec(vec![0.0; dim])
    }
    fn shape(&self) -> usize {
        self.0.len()
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }
    fn add_assign(&mut self, rhs: &Self) {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        FeatureVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a * b).collect())
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        for ((acc, x), y) in self.0.iter_mut().zip(&a.0).zip(&b.0) {
            *acc += x * y;
        }
    }
}

impl GuardedDiv for FeatureVec {
    fn guarded_div(&self, rhs: &Self) -> Self {
        FeatureVec(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| if *b == 0.0 { 0.0 } else { a / b })
                .collect(),
        )
    }
}
