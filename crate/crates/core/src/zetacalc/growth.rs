use num_rational::BigRational;
use serde::Serialize;

use super::phi::phi_audit;
use super::spectrum::{consistency_check, counts_via_cover, CoverSpectrum};
use crate::error::{Error, Result};
use crate::exactalg::rational::to_f64;
use crate::exactalg::roots::{complex_roots, smallest_positive_root};
use crate::exactalg::{RationalFunction, TruncatedSeries};
use crate::markovcover::MarkovCover;
use crate::ruellemap::periodic_points;
use crate::shiftspace::{periodic_counts, sft_zeta, CountSequence, TransitionMatrix};

/// Tolerance on the reported radius of convergence.
pub const RHO_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Growth {
    /// smallest pole modulus; `None` when the denominator is constant
    pub rho: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    /// moduli of all poles, ascending
    pub poles: Vec<f64>,
}

/// Radius of convergence and exponential growth rate of a rational zeta
/// function. With `degree = Some(k)` the bounds `1/k <= rho <= 1` and
/// `L <= log k` are enforced.
pub fn growth_report(zeta: &RationalFunction, counts: &CountSequence, degree: Option<u32>) -> Result<Growth> {
    let den = zeta.den();
    if den.degree().unwrap_or(0) == 0 {
        if counts.max_period() == 0 {
            return Err(Error::precondition("no growth data: constant zeta and no counts"));
        }
        return Ok(Growth {
            rho: None,
            l: None,
            poles: Vec::new(),
        });
    }
    let mut poles: Vec<f64> = complex_roots(den).iter().map(|z| z.norm()).collect();
    poles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut rho = poles[0];
    let tol = BigRational::new(1.into(), BigRational::from_integer(10.into()).to_integer().pow(13));
    if let Some((lo, hi)) = smallest_positive_root(den, &tol) {
        let real = to_f64(&((lo + hi) / BigRational::from_integer(2.into())));
        if (real - rho).abs() < 1e-6 {
            rho = real;
            poles[0] = real;
        }
    }
    let l = -rho.ln();
    if let Some(k) = degree {
        let kf = k as f64;
        if rho < 1.0 / kf - RHO_TOLERANCE || rho > 1.0 + RHO_TOLERANCE || l > kf.ln() + RHO_TOLERANCE {
            return Err(Error::invariant(format!(
                "radius {rho} outside [1/{k}, 1] for a degree-{k} map"
            )));
        }
    }
    Ok(Growth {
        rho: Some(rho),
        l: Some(l),
        poles,
    })
}

/// A named pass/fail check attached to a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Audit {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaReport {
    #[serde(serialize_with = "counts_as_array")]
    pub counts: CountSequence,
    pub zeta: RationalFunction,
    pub series: TruncatedSeries,
    pub rho: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub poles: Vec<f64>,
    pub audits: Vec<Audit>,
}

fn counts_as_array<S: serde::Serializer>(c: &CountSequence, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(c.max_period()))?;
    for n in c.counts() {
        seq.serialize_element(&crate::exactalg::poly::big_to_json(n))?;
    }
    seq.end()
}

impl ZetaReport {
    pub fn all_pass(&self) -> bool {
        self.audits.iter().all(|a| a.pass)
    }
}

/// Report for a subshift of finite type.
pub fn sft_report(a: &TransitionMatrix, order: usize, max_period: usize) -> Result<ZetaReport> {
    let zeta = sft_zeta(a);
    let counts = periodic_counts(a, max_period)?;
    let series = zeta.series(order)?;
    let spec = CoverSpectrum::from_sft(a);
    let consistent = consistency_check(&spec, order.max(1))?;
    let growth = growth_report(&zeta, &counts, None)?;
    Ok(ZetaReport {
        counts,
        zeta,
        series,
        rho: growth.rho,
        l: growth.l,
        poles: growth.poles,
        audits: vec![Audit {
            name: "consistency".into(),
            pass: consistent,
            detail: format!("exp of trace counts equals 1/det(I - tA) through t^{}", order.max(1)),
        }],
    })
}

/// Counts from the signed trace formula next to the direct periodic-point
/// count, for `p = 1..=max_period`.
pub fn oracle_comparison(
    cover: &MarkovCover,
    spec: &CoverSpectrum,
    max_period: usize,
) -> Result<Vec<(usize, num_bigint::BigInt, usize)>> {
    let formula = counts_via_cover(spec, max_period)?;
    (1..=max_period)
        .map(|p| Ok((p, formula.get(p).clone(), periodic_points(cover.map(), p)?.len())))
        .collect()
}

/// Full pipeline for a validated cover: counts from the trace formula, zeta
/// from the determinant ratio, growth data and audits (consistency, the
/// direct periodic-point oracle and `Phi = 1` on short periods).
pub fn cover_report(cover: &MarkovCover, order: usize, max_period: usize, phi_period: usize) -> Result<ZetaReport> {
    let spec = CoverSpectrum::from_cover(cover)?;
    let counts = counts_via_cover(&spec, max_period)?;
    let zeta = super::spectrum::zeta_via_cover(&spec);
    let series = zeta.series(order)?;
    let mut audits = Vec::new();
    let consistent = consistency_check(&spec, order.max(1))?;
    audits.push(Audit {
        name: "consistency".into(),
        pass: consistent,
        detail: format!(
            "determinant ratio equals exp of signed trace counts through t^{}",
            order.max(1)
        ),
    });
    let cmp = oracle_comparison(cover, &spec, max_period)?;
    let bad: Vec<String> = cmp
        .iter()
        .filter(|(_, f, o)| f != &num_bigint::BigInt::from(*o))
        .map(|(p, f, o)| format!("p={p}: formula {f}, direct {o}"))
        .collect();
    audits.push(Audit {
        name: "periodic_points".into(),
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("trace formula matches direct count for p <= {max_period}")
        } else {
            bad.join("; ")
        },
    });
    let mut phi_bad = Vec::new();
    let mut audited = 0;
    for p in 1..=phi_period {
        for x in periodic_points(cover.map(), p)? {
            let a = phi_audit(cover, &spec, &x, p)?;
            audited += 1;
            if a.phi_value != 1 {
                phi_bad.push(format!("Phi({x}) = {} at p={p}", a.phi_value));
            }
        }
    }
    audits.push(Audit {
        name: "phi".into(),
        pass: phi_bad.is_empty(),
        detail: if phi_bad.is_empty() {
            format!("Phi = 1 at all {audited} points of period <= {phi_period}")
        } else {
            phi_bad.join("; ")
        },
    });
    let growth = growth_report(&zeta, &counts, Some(cover.map().degree()))?;
    Ok(ZetaReport {
        counts,
        zeta,
        series,
        rho: growth.rho,
        l: growth.l,
        poles: growth.poles,
        audits,
    })
}
