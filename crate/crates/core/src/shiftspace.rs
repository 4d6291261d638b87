//! Subshifts of finite type: path and periodic-point counts, the zeta
//! function `1/det(I - tA)`, irreducibility, Perron data and growth rates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{rat, to_f64};
use crate::exactalg::roots::smallest_positive_root;
use crate::exactalg::{IntMatrix, RationalFunction, TruncatedSeries};

/// Largest `k^n` that [`enumerate_periodic_words`] will walk.
pub const ENUMERATION_BUDGET: u128 = 10_000_000;

/// 0/1 adjacency matrix on `k` symbols. Symbols are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTransition", into = "RawTransition")]
pub struct TransitionMatrix {
    k: usize,
    rows: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct RawTransition {
    k: usize,
    rows: Vec<Vec<u8>>,
}

impl TryFrom<RawTransition> for TransitionMatrix {
    type Error = Error;
    fn try_from(raw: RawTransition) -> Result<Self> {
        if raw.rows.len() != raw.k {
            return Err(Error::parse(format!("k = {} but {} rows given", raw.k, raw.rows.len())));
        }
        TransitionMatrix::from_u8(&raw.rows)
    }
}

impl From<TransitionMatrix> for RawTransition {
    fn from(t: TransitionMatrix) -> Self {
        RawTransition {
            k: t.k,
            rows: t
                .rows
                .iter()
                .map(|r| r.iter().map(|&b| u8::from(b)).collect())
                .collect(),
        }
    }
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::parse("transition matrix needs at least one symbol"));
        }
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::parse("transition matrix is not square"));
        }
        Ok(TransitionMatrix { k, rows })
    }

    pub fn from_u8(rows: &[Vec<u8>]) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let mut row = Vec::with_capacity(r.len());
            for (j, &x) in r.iter().enumerate() {
                match x {
                    0 => row.push(false),
                    1 => row.push(true),
                    _ => return Err(Error::parse(format!("entry ({i}, {j}) is {x}, expected 0 or 1"))),
                }
            }
            out.push(row);
        }
        Self::new(out)
    }

    pub fn full_shift(k: usize) -> Self {
        TransitionMatrix {
            k,
            rows: vec![vec![true; k]; k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j)
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(|&b| BigInt::from(u8::from(b))).collect())
                .collect(),
        )
        .expect("square by construction")
    }
}

/// Periodic-point counts `N_1, ..., N_{n_max}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountSequence {
    counts: Vec<BigInt>,
}

impl CountSequence {
    pub fn new(counts: Vec<BigInt>) -> Result<Self> {
        if counts.iter().any(|c| c.is_negative()) {
            return Err(Error::precondition("periodic-point counts must be non-negative"));
        }
        Ok(CountSequence { counts })
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        CountSequence {
            counts: counts.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn max_period(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    /// `N_n`, 1-based.
    pub fn get(&self, n: usize) -> &BigInt {
        &self.counts[n - 1]
    }
}

impl Serialize for CountSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(1))?;
        let values: Vec<serde_json::Value> = self.counts.iter().map(crate::exactalg::poly::big_to_json).collect();
        m.serialize_entry("counts", &values)?;
        m.end()
    }
}

impl<'de> Deserialize<'de> for CountSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            counts: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(d)?;
        let counts = raw
            .counts
            .iter()
            .map(crate::exactalg::poly::json_to_big)
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CountSequence::new(counts).map_err(D::Error::custom)
    }
}

/// Growth data extracted from counts: `L` (natural-log units), `ρ = e^{-L}`
/// and the matching Perron estimate `e^L`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthStats {
    #[serde(rename = "L")]
    pub l: f64,
    pub rho: f64,
    pub perron_root: f64,
    pub tolerance: f64,
}

/// Number of admissible words of length `n + 1` from `p` to `q`, i.e. `(A^n)_{pq}`.
pub fn count_paths(a: &TransitionMatrix, p: usize, q: usize, n: u32) -> Result<BigInt> {
    if p >= a.k() || q >= a.k() {
        return Err(Error::precondition(format!(
            "symbol out of range: ({p}, {q}) with k = {}",
            a.k()
        )));
    }
    if n == 0 {
        return Err(Error::precondition("path length n must be at least 1"));
    }
    Ok(a.to_int_matrix().pow(n).get(p, q).clone())
}

/// `N_n = tr(A^n)` for `n = 1..=n_max`.
pub fn periodic_counts(a: &TransitionMatrix, n_max: usize) -> Result<CountSequence> {
    if n_max == 0 {
        return Err(Error::precondition("n_max must be at least 1"));
    }
    CountSequence::new(a.to_int_matrix().trace_powers(n_max))
}

/// Every word `(a_0, ..., a_{n-1})` with `A[a_i][a_{i+1 mod n}] = 1`, in
/// lexicographic order. Brute-force oracle for [`periodic_counts`].
pub fn enumerate_periodic_words(a: &TransitionMatrix, n: usize) -> Result<Vec<Vec<usize>>> {
    if n == 0 {
        return Err(Error::precondition("word length must be at least 1"));
    }
    let size = (a.k() as u128).checked_pow(n as u32);
    if size.is_none_or(|s| s > ENUMERATION_BUDGET) {
        return Err(Error::Budget(format!(
            "{}^{} words exceeds {}",
            a.k(),
            n,
            ENUMERATION_BUDGET
        )));
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(n);
    for start in 0..a.k() {
        word.push(start);
        extend_words(a, n, &mut word, &mut out);
        word.pop();
    }
    Ok(out)
}

fn extend_words(a: &TransitionMatrix, n: usize, word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *word.last().unwrap();
    if word.len() == n {
        if a.get(last, word[0]) {
            out.push(word.clone());
        }
        return;
    }
    for next in a.successors(last) {
        word.push(next);
        extend_words(a, n, word, out);
        word.pop();
    }
}

/// `1/det(I - tA)`.
pub fn sft_zeta(a: &TransitionMatrix) -> RationalFunction {
    RationalFunction::reciprocal_of(a.to_int_matrix().charpoly_rev()).expect("det(I - tA) has constant term 1")
}

/// Every symbol reaches every symbol (including itself) by a path of
/// positive length.
pub fn is_irreducible(a: &TransitionMatrix) -> bool {
    let k = a.k();
    let mut reach: Vec<Vec<bool>> = a.rows().to_vec();
    for m in 0..k {
        for i in 0..k {
            if reach[i][m] {
                let via = reach[m].clone();
                for (r, v) in reach[i].iter_mut().zip(via) {
                    *r |= v;
                }
            }
        }
    }
    reach.iter().all(|r| r.iter().all(|&b| b))
}

/// Perron eigenvalue of an irreducible matrix, as a bracket `[lo, hi]` of
/// width below `tol`. Uses exact Sturm bisection on `det(I - tA)`: the
/// smallest positive root there is `1/λ`.
pub fn perron_root_bracket(a: &TransitionMatrix, tol: &BigRational) -> Result<(BigRational, BigRational)> {
    if !is_irreducible(a) {
        return Err(Error::precondition(
            "Perron data is reported only for irreducible matrices",
        ));
    }
    let poly = a.to_int_matrix().charpoly_rev();
    // 1/t must land within tol and t >= 1/k, so shrink the t-width by 4k^2
    let k = BigRational::from_integer(BigInt::from(a.k()));
    let t_tol = tol / (&k * &k * BigInt::from(4));
    let (lo, hi) = smallest_positive_root(&poly, &t_tol)
        .ok_or_else(|| Error::invariant("irreducible matrix without a positive Perron root"))?;
    if lo.is_zero() {
        return Err(Error::invariant("Perron bracket touches zero"));
    }
    Ok((hi.recip(), lo.recip()))
}

pub fn perron_root(a: &TransitionMatrix) -> Result<f64> {
    let (lo, hi) = perron_root_bracket(a, &rat(1, 1_000_000_000_000_000))?;
    Ok(to_f64(&((lo + hi) / BigInt::from(2))))
}

/// `L = max_{n in tail} (1/n) log N_n` over the last `⌈n_max/2⌉` periods.
/// This is an estimate of the lim sup, never an exact value.
pub fn growth_stats(counts: &CountSequence) -> Result<GrowthStats> {
    let n_max = counts.max_period();
    if n_max == 0 {
        return Err(Error::precondition("no counts supplied"));
    }
    if counts.counts().iter().all(|c| c.is_zero()) {
        return Err(Error::precondition("all counts are zero: growth rate L is undefined"));
    }
    let tail_len = n_max.div_ceil(2);
    let mut l = f64::NEG_INFINITY;
    for n in (n_max - tail_len + 1)..=n_max {
        let c = counts.get(n);
        if c.is_zero() {
            continue;
        }
        l = l.max(big_ln(c) / n as f64);
    }
    if !l.is_finite() {
        // counts vanish on the whole tail, fall back to every period
        for n in 1..=n_max {
            let c = counts.get(n);
            if !c.is_zero() {
                l = l.max(big_ln(c) / n as f64);
            }
        }
    }
    let tolerance = 1.0 / n_max as f64;
    Ok(GrowthStats {
        l,
        rho: (-l).exp(),
        perron_root: l.exp(),
        tolerance,
    })
}

/// Natural log of a positive big integer.
pub fn big_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.to_f64().unwrap().ln()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Sum of the divisors of `n`.
pub fn divisor_sum(n: u64) -> u64 {
    let mut s = 0;
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += d;
            if d * d != n {
                s += n / d;
            }
        }
        d += 1;
    }
    s
}

/// The divisor-sum system with `N_n = σ(n) + 1`: returns its zeta series
/// `exp(Σ (σ(n)+1) t^n / n)` and `s(t) = 1/((1 - t) ζ(t))`, the latter by
/// exact series division. `s` must come out with integer coefficients.
pub fn divisor_example_series(order: usize) -> Result<(TruncatedSeries, TruncatedSeries)> {
    if order == 0 {
        return Err(Error::precondition("order must be at least 1"));
    }
    let counts: Vec<BigInt> = (1..=order as u64).map(|n| BigInt::from(divisor_sum(n) + 1)).collect();
    let zeta = TruncatedSeries::log_zeta_from_counts(&counts, order).exp()?;
    let one_minus_t = TruncatedSeries::from_i64(&[1, -1], order);
    let s = one_minus_t.mul(&zeta).inverse()?;
    if s.integer_coeffs().is_none() {
        return Err(Error::invariant("s(t) has a non-integer coefficient"));
    }
    Ok((zeta, s))
}

/// `N_n <= r^n` for every recorded `n`.
pub fn expansive_bound_check(counts: &CountSequence, r: u64) -> Result<bool> {
    if r == 0 {
        return Err(Error::precondition("cover size r must be at least 1"));
    }
    let r = BigInt::from(r);
    let mut power = BigInt::one();
    for c in counts.counts() {
        power *= &r;
        if c > &power {
            return Ok(false);
        }
    }
    Ok(true)
}
