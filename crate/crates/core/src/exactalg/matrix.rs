use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::parse(format!("matrix is not square ({dim} rows)")));
        }
        Ok(IntMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn pow(&self, p: u32) -> IntMatrix {
        let mut result = IntMatrix::identity(self.dim);
        let mut base = self.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `tr(M^p)`, computed by exact repeated multiplication.
    pub fn trace_power(&self, p: u32) -> BigInt {
        self.pow(p).trace()
    }

    /// Traces of `M, M^2, ..., M^n`.
    pub fn trace_powers(&self, n: usize) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(n);
        let mut acc = IntMatrix::identity(self.dim);
        for _ in 0..n {
            acc = &acc * self;
            out.push(acc.trace());
        }
        out
    }

    /// `det(I - tM)` via the division-free Samuelson–Berkowitz recurrence.
    ///
    /// The recurrence yields the coefficients of `det(xI - M)` from the top
    /// degree down, which are exactly the ascending coefficients of the
    /// reversed polynomial.
    pub fn charpoly_rev(&self) -> IntPolynomial {
        let n = self.dim;
        if n == 0 {
            return IntPolynomial::one();
        }
        let mut v = vec![BigInt::one(), -self.get(n - 1, n - 1).clone()];
        for m in 2..=n {
            let s = n - m;
            // column of the Toeplitz factor: 1, -a, -R C, -R A1 C, ...
            let mut col = Vec::with_capacity(m + 1);
            col.push(BigInt::one());
            col.push(-self.get(s, s).clone());
            let mut w: Vec<BigInt> = (s + 1..n).map(|i| self.get(i, s).clone()).collect();
            for _ in 2..=m {
                let rc: BigInt = (s + 1..n).zip(&w).map(|(j, wj)| self.get(s, j) * wj).sum();
                col.push(-rc);
                w = (s + 1..n)
                    .map(|i| (s + 1..n).zip(&w).map(|(j, wj)| self.get(i, j) * wj).sum())
                    .collect();
            }
            let next: Vec<BigInt> = (0..=m)
                .map(|i| (0..m.min(i + 1)).map(|j| &col[i - j] * &v[j]).sum())
                .collect();
            v = next;
        }
        IntPolynomial::new(v)
    }

    /// Entrywise absolute value.
    pub fn abs(&self) -> IntMatrix {
        use num_traits::Signed;
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x.abs()).collect(),
        }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<Vec<serde_json::Value>> = Deserialize::deserialize(d)?;
        let rows = raw
            .iter()
            .map(|r| r.iter().map(super::poly::json_to_big).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        IntMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}
