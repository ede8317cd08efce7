use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::Ring;

/// Square matrix over a ring, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<R> {
    rows: Vec<Vec<R>>,
}

impl<R: Ring> Matrix<R> {
    /// Fails with `Mismatch` unless the rows form a nonempty square array.
    pub fn new(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows.iter().any(|row| row.len() != r) {
            return Err(Error::Mismatch);
        }
        Ok(Matrix { rows })
    }

    pub fn scalar(value: R, r: usize) -> Self {
        let zero = value.zero_like();
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { value.clone() } else { zero.clone() })
                    .collect()
            })
            .collect();
        Matrix { rows }
    }

    /// Identity matrix whose entries live in the same ring as `sample`.
    pub fn identity_like(sample: &R, r: usize) -> Self {
        Self::scalar(sample.one_like(), r)
    }

    pub fn zero_like(sample: &R, r: usize) -> Self {
        Self::scalar(sample.zero_like(), r)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<R>] {
        &self.rows
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Matrix {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    /// Entrywise map into another ring.
    pub fn map_into<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn try_map(&self, f: impl Fn(&R) -> Result<R>) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(&f).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows })
    }

    fn zip(&self, other: &Self, f: impl Fn(&R, &R) -> R) -> Self {
        assert_eq!(self.rank(), other.rank(), "matrix size mismatch");
        Matrix {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.plus(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.minus(b))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let r = self.rank();
        assert_eq!(r, other.rank(), "matrix size mismatch");
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        (0..r).fold(self.rows[i][0].zero_like(), |acc, k| {
                            let a = &self.rows[i][k];
                            let b = &other.rows[k][j];
                            if a.is_zero() || b.is_zero() {
                                acc
                            } else {
                                acc.plus(&a.times(b))
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Matrix { rows }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.map(|a| a.times(&a.int_image(n)))
    }

    pub fn trace(&self) -> R {
        (1..self.rank()).fold(self.rows[0][0].clone(), |acc, i| acc.plus(&self.rows[i][i]))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|a| a.is_zero())
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row[..i].iter().all(|a| a.is_zero()))
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.rows).finish()
    }
}
