//! Small dense integer matrices used for twists and lattice bookkeeping.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix {
    rows: Vec<Vec<i64>>,
}

fn overflow() -> Error {
    Error::Input("integer overflow in lattice arithmetic".into())
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            let c = first.len();
            if rows.iter().any(|r| r.len() != c) {
                return Err(Error::Input("ragged integer matrix".into()));
            }
        }
        Ok(IntMatrix { rows })
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn zeros(r: usize, c: usize) -> Self {
        IntMatrix { rows: vec![vec![0; c]; r] }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.rows[i][j] = v;
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.ncols()
            && self
                .rows
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::Mismatch("integer matrix product shapes".into()));
        }
        let n = rhs.ncols();
        let mut out = IntMatrix::zeros(self.nrows(), n);
        for (i, row) in self.rows.iter().enumerate() {
            for j in 0..n {
                let mut acc: i64 = 0;
                for (k, &a) in row.iter().enumerate() {
                    let t = a.checked_mul(rhs.rows[k][j]).ok_or_else(overflow)?;
                    acc = acc.checked_add(t).ok_or_else(overflow)?;
                }
                out.rows[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if self.ncols() != v.len() {
            return Err(Error::Mismatch("matrix-vector product shapes".into()));
        }
        self.rows
            .iter()
            .map(|r| {
                r.iter().zip(v).try_fold(0i64, |acc, (&a, &b)| {
                    a.checked_mul(b).and_then(|t| acc.checked_add(t)).ok_or_else(overflow)
                })
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[i64]) -> Result<Vec<i64>> {
        self.transpose().mul_vec(v)
    }

    pub fn transpose(&self) -> IntMatrix {
        let (r, c) = (self.nrows(), self.ncols());
        IntMatrix { rows: (0..c).map(|j| (0..r).map(|i| self.rows[i][j]).collect()).collect() }
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect()
    }

    /// Determinant by exact rational elimination.
    pub fn det(&self) -> Result<BigInt> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::Mismatch("determinant of a non-square matrix".into()));
        }
        let mut a = self.to_rational();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &piv;
                for k in c..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
        Ok(det.to_integer())
    }

    /// Inverse of a unimodular matrix; errors if `|det| != 1`.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::Mismatch("inverse of a non-square matrix".into()));
        }
        let mut a = self.to_rational();
        let mut inv = IntMatrix::identity(n).to_rational();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Err(Error::Input("matrix is singular".into()));
            };
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].recip();
            for k in 0..n {
                a[c][k] *= &piv;
                inv[c][k] *= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for k in 0..n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                    let t = &f * &inv[c][k];
                    inv[r][k] -= t;
                }
            }
        }
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = &inv[i][j];
                if !x.is_integer() {
                    return Err(Error::Input("matrix is not unimodular".into()));
                }
                out.rows[i][j] = x.to_integer().to_i64().ok_or_else(overflow)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular_inverse_round_trips() {
        let a = IntMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]).unwrap();
        let b = a.inverse_unimodular().unwrap();
        assert!(a.mul(&b).unwrap().is_identity());
        assert_eq!(a.det().unwrap(), BigInt::from(1));
    }

    #[test]
    fn non_unimodular_inverse_is_rejected() {
        let a = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 1]]).unwrap();
        assert!(a.inverse_unimodular().is_err());
    }
}
