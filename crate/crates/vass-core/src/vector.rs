//! Integer vectors with unbounded entries.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A vector in `Z^d`. Entries are arbitrary-precision signed integers.
///
/// The zero-dimensional vector is legal; its norm is 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn zero(dim: usize) -> Self {
        IntVector(alloc::vec![BigInt::zero(); dim])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        IntVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntVector {
        IntVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Maximum norm `max_i |v(i)|`; 0 for the empty vector.
    pub fn norm(&self) -> BigInt {
        self.0
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Indices of nonzero entries, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|a| !a.is_negative())
    }

    /// Nonnegative and nonzero.
    pub fn is_semipositive(&self) -> bool {
        self.is_nonnegative() && !self.is_zero()
    }

    /// Strictly positive in every coordinate.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|a| a.is_positive())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &IntVector) -> bool {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Projection `v|_I` for an ascending index set `I`.
    pub fn restrict(&self, indices: &[usize]) -> IntVector {
        IntVector(indices.iter().map(|&i| self.0[i].clone()).collect())
    }

    /// Positive part: `v+(i) = max(v(i), 0)`.
    pub fn positive_part(&self) -> IntVector {
        IntVector(
            self.0
                .iter()
                .map(|a| if a.is_positive() { a.clone() } else { BigInt::zero() })
                .collect(),
        )
    }

    /// Negative part: `v-(i) = max(-v(i), 0)`, so `v = v+ - v-`.
    pub fn negative_part(&self) -> IntVector {
        IntVector(
            self.0
                .iter()
                .map(|a| if a.is_negative() { -a } else { BigInt::zero() })
                .collect(),
        )
    }

    /// Gcd of the absolute entries; 0 for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |acc, a| acc.gcd(a))
    }

    /// The smallest vector on the same ray: `v / content(v)`. Zero stays zero.
    pub fn primitive(&self) -> IntVector {
        let c = self.content();
        if c.is_zero() {
            self.clone()
        } else {
            IntVector(self.0.iter().map(|a| a / &c).collect())
        }
    }
}

impl Index<usize> for IntVector {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", a)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
