use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{inverse_branches, CircleMap, CirclePoint};
use crate::exactalg::rational::{format_rational, serde_rational};

/// Constants of the expanding definition for a circle map.
///
/// `lambda` contracts every inverse branch on balls of radius `r`, distinct
/// preimages of a point are at least `c` apart, and `epsilon` is an
/// expansive constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuelleConstants {
    #[serde(serialize_with = "serde_rational")]
    pub r: BigRational,
    #[serde(serialize_with = "serde_rational")]
    pub lambda: BigRational,
    #[serde(serialize_with = "serde_rational")]
    pub c: BigRational,
    #[serde(serialize_with = "serde_rational")]
    pub epsilon: BigRational,
}

impl RuelleConstants {
    /// Upper bound on the diameter of a usable cover element.
    pub fn cover_diameter_bound(&self) -> BigRational {
        let half_c = &self.c / BigRational::from_integer(2.into());
        if self.epsilon < half_c {
            self.epsilon.clone()
        } else {
            half_c
        }
    }
}

impl std::fmt::Display for RuelleConstants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "r = {}, lambda = {}, c = {}, epsilon = {}",
            format_rational(&self.r),
            format_rational(&self.lambda),
            format_rational(&self.c),
            format_rational(&self.epsilon)
        )
    }
}

/// Smallest circle gap between consecutive preimages of `x`.
pub(crate) fn min_preimage_gap(map: &CircleMap, x: &CirclePoint) -> BigRational {
    let pre = inverse_branches(map, x);
    let n = pre.len();
    (0..n)
        .map(|i| {
            let a = pre[i].value();
            let b = pre[(i + 1) % n].value();
            if i + 1 == n {
                b + BigRational::one() - a
            } else {
                b - a
            }
        })
        .min()
        .unwrap()
}

/// Exact constants for `map`.
///
/// Each preimage of `x` moves affinely in `x` between the images of the
/// breakpoints, so the preimage gap is minimised at one of those images.
/// The branch radius is `c/2`; any ball of that radius lifts to an interval
/// of length below one half, on which the lift is invertible. The expansive
/// constant is `r (1 - lambda/4)`, strictly below both `r` and `c/(1 + lambda)`.
pub fn ruelle_constants(map: &CircleMap) -> RuelleConstants {
    let lambda = map.min_slope().recip();
    let mut events: Vec<CirclePoint> = map
        .breakpoints()
        .iter()
        .map(|u| CirclePoint::new(map.lift(u)))
        .collect();
    events.push(CirclePoint::zero());
    events.sort();
    events.dedup();
    let c = events.iter().map(|x| min_preimage_gap(map, x)).min().unwrap();
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let r = &c / &two;
    let epsilon = &r * (BigRational::one() - &lambda / four);
    RuelleConstants { r, lambda, c, epsilon }
}
