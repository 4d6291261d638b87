use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};

/// Ratio of integer polynomials kept in a canonical form: numerator and
/// denominator coprime over the rationals, jointly content-free, and signed so
/// that `den(0) > 0` (or the leading denominator coefficient is positive when
/// `den(0) = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFunc")]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

#[derive(Deserialize)]
struct RawRatFunc {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl TryFrom<RawRatFunc> for RationalFunction {
    type Error = Error;
    fn try_from(raw: RawRatFunc) -> Result<Self> {
        RationalFunction::new(raw.num, raw.den)
    }
}

impl RationalFunction {
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::precondition("rational function with zero denominator"));
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: IntPolynomial::one(),
            });
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g)?;
        let mut den = den.div_exact(&g)?;
        let c = num.content().gcd(&den.content());
        num = num.div_exact_scalar(&c);
        den = den.div_exact_scalar(&c);
        let sign_ref = if den.constant_term().is_zero() {
            den.leading().cloned().unwrap_or_default()
        } else {
            den.constant_term()
        };
        if sign_ref.is_negative() {
            num = -&num;
            den = -&den;
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_polynomial(p: IntPolynomial) -> Self {
        Self::new(p, IntPolynomial::one()).expect("unit denominator")
    }

    /// `1 / p`.
    pub fn reciprocal_of(p: IntPolynomial) -> Result<Self> {
        Self::new(IntPolynomial::one(), p)
    }

    pub fn num(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn den(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0)
    }

    /// Taylor coefficients at the origin through degree `order`.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries> {
        if self.den.constant_term().is_zero() {
            return Err(Error::precondition("rational function has a pole at the origin"));
        }
        let n = TruncatedSeries::from_integers(self.num.coeffs(), order);
        let d = TruncatedSeries::from_integers(self.den.coeffs(), order);
        n.div(&d)
    }

    /// Renders as `(1 − t)/(1 − 2t)` with parentheses only where needed.
    pub fn render(&self) -> String {
        let wrap = |p: &IntPolynomial| {
            let terms = p.coeffs().iter().filter(|c| !c.is_zero()).count();
            if terms > 1 {
                format!("({})", p.render())
            } else {
                p.render()
            }
        };
        if self.den == IntPolynomial::one() {
            return self.num.render();
        }
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }

    pub fn one() -> Self {
        Self::from_polynomial(IntPolynomial::one())
    }

    /// Convenience for tests: build from small integer coefficient lists.
    pub fn from_i64(num: &[i64], den: &[i64]) -> Result<Self> {
        Self::new(IntPolynomial::from_i64(num), IntPolynomial::from_i64(den))
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn num_big(&self) -> Vec<BigInt> {
        self.num.coeffs().to_vec()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
