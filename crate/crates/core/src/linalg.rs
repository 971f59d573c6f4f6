//! Exact dense integer matrices: the symmetric Pascal matrix, its
//! closed-form inverse, and the recovery of the tree-refinement triangle as
//! a matrix-vector product.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::counting::{big_pow, binomial};
use crate::error::{Error, Result};

/// A square matrix of exact integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    size: usize,
    entries: Vec<BigInt>,
}

pub type ExactVector = Vec<BigInt>;

impl ExactMatrix {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        assert!(size >= 1);
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { size, entries }
    }

    pub fn identity(size: usize) -> Self {
        ExactMatrix::from_fn(size, |i, j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.size + j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        let n = self.size;
        Ok(ExactMatrix::from_fn(n, |i, j| {
            (0..n).map(|l| self.get(i, l) * other.get(l, j)).sum()
        }))
    }

    pub fn mul_vec(&self, v: &ExactVector) -> Result<ExactVector> {
        if self.size != v.len() {
            return Err(Error::SizeMismatch {
                left: self.size,
                right: v.len(),
            });
        }
        Ok((0..self.size)
            .map(|i| (0..self.size).map(|l| self.get(i, l) * &v[l]).sum())
            .collect())
    }

    /// Entries as decimal strings, row by row; exact at any size.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        json!(rows)
    }
}

/// The symmetric Pascal matrix of size `n+1`: entry `(i,j) = C(i+j, i)`.
pub fn pascal_matrix(n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n + 1, |i, j| binomial(i + j, i))
}

/// The closed-form inverse of the Pascal matrix: entry
/// `(i,j) = (-1)^(i+j) * sum_m C(m,i) C(m,j)` over `m = 0..=n`.
pub fn pascal_inverse_matrix(n: usize) -> ExactMatrix {
    ExactMatrix::from_fn(n + 1, |i, j| {
        let sum: BigInt = (0..=n).map(|m| binomial(m, i) * binomial(m, j)).sum();
        if (i + j) % 2 == 0 {
            sum
        } else {
            -sum
        }
    })
}

/// The power vector `((n+1)^n, (n+2)^n, .., (2n+1)^n)`.
pub fn power_vector(n: usize) -> ExactVector {
    (0..=n)
        .map(|i| big_pow(&BigInt::from(n + 1 + i), n))
        .collect()
}

/// Checks that the Pascal matrix and its closed-form inverse multiply to the
/// identity in both orders, exactly.
pub fn verify_inverse(n: usize) -> bool {
    let a = pascal_matrix(n);
    let b = pascal_inverse_matrix(n);
    let id = ExactMatrix::identity(n + 1);
    a.mul(&b).is_ok_and(|p| p == id) && b.mul(&a).is_ok_and(|p| p == id)
}

/// The triangle row recovered as `inverse * power_vector`; must agree with
/// the closed-form counts.
pub fn triangle_via_matrix(n: usize) -> ExactVector {
    pascal_inverse_matrix(n)
        .mul_vec(&power_vector(n))
        .expect("matching sizes by construction")
}
