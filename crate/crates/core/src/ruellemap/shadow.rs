use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{local_inverse, ruelle_constants, CircleMap, CirclePoint};
use crate::error::{Error, Result};
use crate::exactalg::rational::{deserialize_rational, format_rational, serde_rational};

/// Finite `alpha`-pseudo-orbit: `d(f(x_n), x_{n+1}) < alpha` for every `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoOrbit {
    points: Vec<CirclePoint>,
    #[serde(serialize_with = "serde_rational", deserialize_with = "deserialize_rational")]
    alpha: BigRational,
}

impl PseudoOrbit {
    pub fn new(map: &CircleMap, points: Vec<CirclePoint>, alpha: BigRational) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::precondition("pseudo-orbit is empty"));
        }
        for (i, w) in points.windows(2).enumerate() {
            let d = map.evaluate(&w[0]).dist(&w[1]);
            if d >= alpha {
                return Err(Error::precondition(format!(
                    "not an alpha-pseudo-orbit: d(f(x_{i}), x_{}) = {} >= alpha = {}",
                    i + 1,
                    format_rational(&d),
                    format_rational(&alpha)
                )));
            }
        }
        Ok(PseudoOrbit { points, alpha })
    }

    pub fn points(&self) -> &[CirclePoint] {
        &self.points
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }
}

/// A point whose orbit stays within `beta` of the pseudo-orbit.
///
/// Works backwards: `y_n = x_n`, then `y_{k-1}` is the preimage of `y_k` on
/// the branch through `x_{k-1}`.
pub fn shadow(map: &CircleMap, po: &PseudoOrbit, beta: &BigRational) -> Result<CirclePoint> {
    let rc = ruelle_constants(map);
    if beta <= &BigRational::from_integer(0.into()) {
        return Err(Error::precondition("beta must be positive"));
    }
    if beta >= &rc.r {
        return Err(Error::precondition(format!(
            "beta < r violated: beta = {}, r = {}",
            format_rational(beta),
            format_rational(&rc.r)
        )));
    }
    let gap = &rc.r - beta;
    let contract = (BigRational::one() - &rc.lambda) * beta / &rc.lambda;
    if po.alpha >= gap {
        return Err(Error::precondition(format!(
            "alpha < r - beta violated: alpha = {}, r - beta = {}",
            format_rational(&po.alpha),
            format_rational(&gap)
        )));
    }
    if po.alpha >= contract {
        return Err(Error::precondition(format!(
            "alpha < (1 - lambda) beta / lambda violated: alpha = {}, bound = {}",
            format_rational(&po.alpha),
            format_rational(&contract)
        )));
    }
    let pts = &po.points;
    let mut y = pts.last().unwrap().clone();
    for k in (1..pts.len()).rev() {
        y = local_inverse(map, &pts[k - 1], &y);
    }
    let orbit = map.orbit(&y, pts.len() - 1);
    if let Some(i) = (0..pts.len()).find(|&i| orbit[i].dist(&pts[i]) >= *beta) {
        return Err(Error::invariant(format!("shadow leaves the beta-ball at step {i}")));
    }
    Ok(y)
}
