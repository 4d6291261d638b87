use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{deserialize_rational, serde_rational};
use crate::error::{Error, Result};

/// Formal power series with exact rational coefficients, truncated after
/// degree `order`. Always holds exactly `order + 1` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

pub const DEFAULT_ORDER: usize = 32;

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// Pads with zeros or truncates to `order`.
    pub fn from_coeffs(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[BigInt], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().cloned().map(BigRational::from_integer).collect(), order)
    }

    pub fn from_i64(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    /// Integer coefficients, or `None` if any coefficient is fractional.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs.clone(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=order).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::precondition("series inverse needs a nonzero constant term"));
        }
        let n = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(c0.recip());
        for k in 1..=n {
            let s: BigRational = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-s / c0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `exp(s)` for a series with zero constant term, through the recurrence
    /// `n e_n = sum_{k=1}^{n} k s_k e_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::precondition(
                "exp of a formal series requires a zero constant term",
            ));
        }
        let n = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(BigRational::one());
        for m in 1..=n {
            let s: BigRational = (1..=m).map(|k| &self.coeffs[k] * &out[m - k] * BigInt::from(k)).sum();
            out.push(s / BigInt::from(m));
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `log(u)` for a series with constant term one, inverting the
    /// exponential recurrence term by term.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::precondition("log of a formal series requires constant term 1"));
        }
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for m in 1..=n {
            let s: BigRational = (1..m).map(|k| &out[k] * &self.coeffs[m - k] * BigInt::from(k)).sum();
            out[m] = &self.coeffs[m] - s / BigInt::from(m);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `sum_{n=1}^{N} a_n t^n / n`, the logarithm of a zeta function with
    /// periodic-point counts `a_1..a_N`.
    pub fn log_zeta_from_counts(counts: &[BigInt], order: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, c) in counts.iter().enumerate().take(order) {
            coeffs[i + 1] = BigRational::new(c.clone(), BigInt::from(i + 1));
        }
        TruncatedSeries { coeffs }
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        struct R<'a>(&'a BigRational);
        impl Serialize for R<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                serde_rational(self.0, s)
            }
        }
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&R(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct R(#[serde(deserialize_with = "deserialize_rational")] BigRational);
        let raw: Vec<R> = Deserialize::deserialize(d)?;
        if raw.is_empty() {
            return Err(serde::de::Error::custom("series needs at least one coefficient"));
        }
        Ok(TruncatedSeries {
            coeffs: raw.into_iter().map(|r| r.0).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn exp_of_t() {
        let t = TruncatedSeries::from_i64(&[0, 1], 3);
        let e = t.exp().unwrap();
        assert_eq!(e.coeffs(), &[rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6)]);
        assert_eq!(TruncatedSeries::zero(4).exp().unwrap(), TruncatedSeries::one(4));
    }

    #[test]
    fn exp_of_geometric_log() {
        // sum 2^n t^n / n = log 1/(1-2t)
        let counts: Vec<BigInt> = (1..=6).map(|n| BigInt::from(1) << n).collect();
        let s = TruncatedSeries::log_zeta_from_counts(&counts, 6);
        let e = s.exp().unwrap();
        assert_eq!(e, TruncatedSeries::from_i64(&[1, 2, 4, 8, 16, 32, 64], 6));
    }

    #[test]
    fn log_of_geometric() {
        let g = TruncatedSeries::from_i64(&[1, 1, 1, 1, 1], 4);
        let l = g.log().unwrap();
        assert_eq!(l.coeffs(), &[rat(0, 1), rat(1, 1), rat(1, 2), rat(1, 3), rat(1, 4)]);
        assert_eq!(TruncatedSeries::one(5).log().unwrap(), TruncatedSeries::zero(5));
    }

    #[test]
    fn rejects_bad_constant_terms() {
        assert!(TruncatedSeries::from_i64(&[1, 1], 3).exp().is_err());
        assert!(TruncatedSeries::from_i64(&[2, 1], 3).log().is_err());
        assert!(TruncatedSeries::from_i64(&[0, 1], 3).inverse().is_err());
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let s = TruncatedSeries::from_i64(&[1, -1], 5);
        assert_eq!(s.inverse().unwrap(), TruncatedSeries::from_i64(&[1; 6], 5));
    }
}
