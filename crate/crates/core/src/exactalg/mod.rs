//! Exact arithmetic: big rationals, integer matrices and their reversed
//! characteristic polynomials, truncated power series, rational functions.

pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod roots;
pub mod series;

pub use matrix::IntMatrix;
pub use num_rational::BigRational;
pub use poly::IntPolynomial;
pub use ratfunc::RationalFunction;
pub use series::{TruncatedSeries, DEFAULT_ORDER};

use crate::error::Result;

/// `det(I - tM)`.
pub fn charpoly_rev(m: &IntMatrix) -> IntPolynomial {
    m.charpoly_rev()
}

/// `tr(M^p)`.
pub fn trace_power(m: &IntMatrix, p: u32) -> num_bigint::BigInt {
    m.trace_power(p)
}

pub fn series_exp(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.exp()
}

pub fn series_log(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.log()
}

pub fn series_of_rational(f: &RationalFunction, order: usize) -> Result<TruncatedSeries> {
    f.series(order)
}
