use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{IntPolynomial, RationalFunction, TruncatedSeries};
use crate::markovcover::{
    families_by, index_families, signed_matrices, transition_matrix, IndexFamily, MarkovCover, SignedTransition,
};
use crate::shiftspace::{CountSequence, TransitionMatrix};

/// Transition matrix of a cover with its signed matrices at every
/// multiplicity `r = 1..L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSpectrum {
    #[serde(rename = "A")]
    pub a: TransitionMatrix,
    pub levels: Vec<SignedTransition>,
    #[serde(rename = "L")]
    pub l: usize,
}

impl CoverSpectrum {
    pub fn from_families(a: TransitionMatrix, families: &[IndexFamily]) -> Result<Self> {
        let levels = families
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| signed_matrices(&a, f))
            .collect::<Result<Vec<_>>>()?;
        if levels.is_empty() {
            return Err(Error::precondition("spectrum needs at least one level"));
        }
        Ok(CoverSpectrum {
            l: levels.len(),
            a,
            levels,
        })
    }

    pub fn from_cover(cover: &MarkovCover) -> Result<Self> {
        let a = transition_matrix(cover)?;
        Self::from_families(a, &index_families(cover)?)
    }

    /// A subshift of finite type: only the singleton level.
    pub fn from_sft(a: &TransitionMatrix) -> Self {
        let fams = families_by(a.k(), |idx| idx.len() == 1);
        Self::from_families(a.clone(), &fams).expect("singleton level is always present")
    }
}

/// `sum_r (-1)^{r-1} tr((B^(r))^p)` for `p = 1..=p_max`, without the
/// non-negativity check.
pub fn signed_counts(spec: &CoverSpectrum, p_max: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p_max];
    for (r, level) in spec.levels.iter().enumerate() {
        let traces = level.b_matrix.trace_powers(p_max);
        for (o, t) in out.iter_mut().zip(traces) {
            if r % 2 == 0 {
                *o += t;
            } else {
                *o -= t;
            }
        }
    }
    out
}

pub fn counts_via_cover(spec: &CoverSpectrum, p_max: usize) -> Result<CountSequence> {
    if p_max == 0 {
        return Err(Error::precondition("p_max must be at least 1"));
    }
    CountSequence::new(signed_counts(spec, p_max))
        .map_err(|_| Error::invariant("signed trace formula produced a negative periodic-point count"))
}

/// Uncancelled even and odd determinant products.
pub fn zeta_products(spec: &CoverSpectrum) -> (IntPolynomial, IntPolynomial) {
    let mut even = IntPolynomial::one();
    let mut odd = IntPolynomial::one();
    for (r, level) in spec.levels.iter().enumerate() {
        let d = level.b_matrix.charpoly_rev();
        // r is 0-based here, so index 0 is multiplicity 1
        if r % 2 == 0 {
            odd = &odd * &d;
        } else {
            even = &even * &d;
        }
    }
    (even, odd)
}

/// `prod_{r even} det(I - tB^(r)) / prod_{r odd} det(I - tB^(r))`, reduced.
pub fn zeta_via_cover(spec: &CoverSpectrum) -> RationalFunction {
    let (even, odd) = zeta_products(spec);
    RationalFunction::new(even, odd).expect("determinant products have constant term 1")
}

/// `exp(sum_{n <= order} N_n t^n / n)`.
pub fn zeta_series_from_counts(counts: &CountSequence, order: usize) -> Result<TruncatedSeries> {
    if order > counts.max_period() {
        return Err(Error::precondition(format!(
            "order {order} exceeds the {} available counts",
            counts.max_period()
        )));
    }
    TruncatedSeries::log_zeta_from_counts(counts.counts(), order).exp()
}

/// Whether the determinant ratio and the exponential of the trace counts
/// agree through `t^order`.
pub fn consistency_check(spec: &CoverSpectrum, order: usize) -> Result<bool> {
    if order == 0 {
        return Err(Error::precondition("order must be at least 1"));
    }
    series_agree(&zeta_via_cover(spec), &signed_counts(spec, order), order)
}

/// Whether `zeta` expands to `exp(sum N_n t^n / n)` through `t^order`.
pub fn series_agree(zeta: &RationalFunction, counts: &[BigInt], order: usize) -> Result<bool> {
    if counts.len() < order {
        return Err(Error::precondition(format!(
            "order {order} exceeds the {} available counts",
            counts.len()
        )));
    }
    let lhs = zeta.series(order)?;
    let rhs = TruncatedSeries::log_zeta_from_counts(counts, order).exp()?;
    Ok(lhs == rhs)
}
