//! Orientation-preserving piecewise-affine expanding circle maps with
//! rational data.
//!
//! A map is stored as its affine pieces on `[0, 1)` together with a
//! continuous lift `F: R -> R`, `F(x + 1) = F(x) + k`, from which every
//! inverse branch, image and preimage is computed exactly.

mod branches;
mod constants;
mod periodic;
mod shadow;

pub use branches::{contractive_branch, inverse_branches, local_inverse};
pub use constants::{ruelle_constants, RuelleConstants};
pub use periodic::{periodic_points, PERIODIC_BUDGET};
pub use shadow::{shadow, PseudoOrbit};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{deserialize_rational, format_rational, frac, serde_rational};

/// A point of the circle `R/Z`, represented in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(BigRational);

impl CirclePoint {
    /// Reduces any rational mod 1.
    pub fn new(x: BigRational) -> Self {
        CirclePoint(frac(&x))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::new(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        CirclePoint(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn into_value(self) -> BigRational {
        self.0
    }

    /// `min(|x - y|, 1 - |x - y|)`.
    pub fn dist(&self, other: &CirclePoint) -> BigRational {
        circle_dist(&self.0, &other.0)
    }

    /// Signed displacement `other - self` reduced into `(-1/2, 1/2]`.
    pub fn displacement_to(&self, other: &CirclePoint) -> BigRational {
        let half = BigRational::new(1.into(), 2.into());
        let d = frac(&(&other.0 - &self.0 + &half)) - &half;
        if d == -&half {
            half
        } else {
            d
        }
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for CirclePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(CirclePoint::new(deserialize_rational(d)?))
    }
}

/// Circle distance between two reals.
pub fn circle_dist(x: &BigRational, y: &BigRational) -> BigRational {
    let d = frac(&(x - y));
    let other = BigRational::one() - &d;
    if d <= other {
        d
    } else {
        other
    }
}

/// One affine piece: `f(x) = slope * x + intercept (mod 1)` on `[from, to)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Branch {
    #[serde(serialize_with = "serde_rational", deserialize_with = "deserialize_rational")]
    pub from: BigRational,
    #[serde(serialize_with = "serde_rational", deserialize_with = "deserialize_rational")]
    pub to: BigRational,
    #[serde(serialize_with = "serde_rational", deserialize_with = "deserialize_rational")]
    pub slope: BigRational,
    #[serde(serialize_with = "serde_rational", deserialize_with = "deserialize_rational")]
    pub intercept: BigRational,
}

/// A piece of `f` on which no wrap-around happens:
/// `f(x) = slope * x + offset` for `x` in `[lo, hi)`, with image in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonePiece {
    pub lo: BigRational,
    pub hi: BigRational,
    pub slope: BigRational,
    pub offset: BigRational,
}

/// Piecewise-affine expanding circle map of degree `k >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MapJson", into = "MapJson")]
pub struct CircleMap {
    degree: u32,
    branches: Vec<Branch>,
    /// intercept plus the integer correction that makes the lift continuous
    lift_offset: Vec<BigRational>,
    /// lifted image of each branch's right end
    lift_end: Vec<BigRational>,
}

/// Unvalidated map data as it appears in JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub degree: u32,
    pub branches: Vec<Branch>,
}

impl TryFrom<MapJson> for CircleMap {
    type Error = Error;
    fn try_from(raw: MapJson) -> Result<Self> {
        CircleMap::new(raw.degree, raw.branches)
    }
}

impl MapJson {
    pub fn validate(self) -> Result<CircleMap> {
        CircleMap::try_from(self)
    }
}

impl From<CircleMap> for MapJson {
    fn from(m: CircleMap) -> Self {
        MapJson {
            degree: m.degree,
            branches: m.branches,
        }
    }
}

impl CircleMap {
    /// Validates the branch data: a partition of `[0, 1)`, slopes above one,
    /// continuity mod 1 at every breakpoint and total winding `degree`.
    pub fn new(degree: u32, branches: Vec<Branch>) -> Result<Self> {
        if degree < 2 {
            return Err(Error::precondition(format!("degree {degree} < 2")));
        }
        let Some(first) = branches.first() else {
            return Err(Error::precondition("map needs at least one branch"));
        };
        if !first.from.is_zero() {
            return Err(Error::precondition("first branch must start at 0"));
        }
        if !branches.last().unwrap().to.is_one() {
            return Err(Error::precondition("last branch must end at 1"));
        }
        for (i, b) in branches.iter().enumerate() {
            if b.from >= b.to {
                return Err(Error::precondition(format!("branch {i} has an empty domain")));
            }
            if b.slope <= BigRational::one() {
                return Err(Error::precondition(format!(
                    "map not expanding: branch {i} has slope {} <= 1",
                    format_rational(&b.slope)
                )));
            }
        }
        for (i, w) in branches.windows(2).enumerate() {
            if w[0].to != w[1].from {
                return Err(Error::precondition(format!(
                    "branches {i} and {} do not tile [0, 1)",
                    i + 1
                )));
            }
        }
        let mut lift_shift = vec![BigInt::zero()];
        for (i, w) in branches.windows(2).enumerate() {
            let u = &w[0].to;
            let left = &w[0].slope * u + &w[0].intercept;
            let right = &w[1].slope * u + &w[1].intercept;
            let jump = left - right;
            if !jump.is_integer() {
                return Err(Error::precondition(format!(
                    "map is discontinuous at breakpoint {} (between branches {i} and {})",
                    format_rational(u),
                    i + 1
                )));
            }
            let prev = lift_shift[i].clone();
            lift_shift.push(prev + jump.to_integer());
        }
        let last = branches.len() - 1;
        let winding =
            &branches[last].slope + &branches[last].intercept + BigRational::from_integer(lift_shift[last].clone())
                - &branches[0].intercept;
        if winding != BigRational::from_integer(degree.into()) {
            return Err(Error::precondition(format!(
                "total winding {} differs from degree {degree}",
                format_rational(&winding)
            )));
        }
        let lift_offset: Vec<BigRational> = branches
            .iter()
            .zip(lift_shift)
            .map(|(b, s)| &b.intercept + BigRational::from_integer(s))
            .collect();
        let lift_end = branches
            .iter()
            .zip(&lift_offset)
            .map(|(b, off)| &b.slope * &b.to + off)
            .collect();
        Ok(CircleMap {
            degree,
            branches,
            lift_offset,
            lift_end,
        })
    }

    /// `x -> kx mod 1`.
    pub fn multiply_by(k: u32) -> Result<Self> {
        Self::new(
            k,
            vec![Branch {
                from: BigRational::zero(),
                to: BigRational::one(),
                slope: BigRational::from_integer(k.into()),
                intercept: BigRational::zero(),
            }],
        )
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn min_slope(&self) -> &BigRational {
        self.branches.iter().map(|b| &b.slope).min().unwrap()
    }

    /// Lipschitz constant for the circle distance.
    pub fn max_slope(&self) -> &BigRational {
        self.branches.iter().map(|b| &b.slope).max().unwrap()
    }

    fn piece_index(&self, x: &BigRational) -> usize {
        // left-closed pieces; x in [0, 1)
        self.branches
            .iter()
            .position(|b| x < &b.to)
            .unwrap_or(self.branches.len() - 1)
    }

    /// Breakpoints `u_0 = 0 < u_1 < ... < u_{n-1}` of the branch domains.
    pub fn breakpoints(&self) -> Vec<BigRational> {
        self.branches.iter().map(|b| b.from.clone()).collect()
    }

    /// The continuous lift `F` on all of `R`.
    pub fn lift(&self, x: &BigRational) -> BigRational {
        let n = x.floor();
        let r = x - &n;
        let i = self.piece_index(&r);
        let b = &self.branches[i];
        &b.slope * &r + &self.lift_offset[i] + n * BigRational::from_integer(self.degree.into())
    }

    /// Inverse of the lift, `F^{-1}(y)` for any real `y`.
    pub fn lift_inverse(&self, y: &BigRational) -> BigRational {
        let k = BigRational::from_integer(self.degree.into());
        let base = self.lift(&BigRational::zero());
        let n = ((y - &base) / &k).floor();
        let yr = y - &n * &k;
        // the piece whose lifted image [F(from), F(to)) contains yr
        let i = self
            .lift_end
            .iter()
            .position(|end| &yr < end)
            .unwrap_or(self.branches.len() - 1);
        (yr - &self.lift_offset[i]) / &self.branches[i].slope + n
    }

    pub fn evaluate(&self, x: &CirclePoint) -> CirclePoint {
        CirclePoint::new(self.lift(x.value()))
    }

    pub fn evaluate_iter(&self, x: &CirclePoint, n: usize) -> CirclePoint {
        (0..n).fold(x.clone(), |p, _| self.evaluate(&p))
    }

    /// Orbit `x, f(x), ..., f^n(x)`.
    pub fn orbit(&self, x: &CirclePoint, n: usize) -> Vec<CirclePoint> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(x.clone());
        for i in 0..n {
            let next = self.evaluate(&out[i]);
            out.push(next);
        }
        out
    }

    /// Refinement of the branches into pieces on which `f` does not wrap,
    /// in increasing order of `lo`; together they tile `[0, 1)`.
    pub fn monotone_pieces(&self) -> Vec<MonotonePiece> {
        let mut out = Vec::new();
        for (i, b) in self.branches.iter().enumerate() {
            let off = &self.lift_offset[i];
            let lo_img = &b.slope * &b.from + off;
            let hi_img = &self.lift_end[i];
            let mut lo = b.from.clone();
            let mut level = lo_img.floor();
            while lo < b.to {
                let next_int = &level + BigRational::one();
                let cut = if &next_int < hi_img {
                    (&next_int - off) / &b.slope
                } else {
                    b.to.clone()
                };
                if cut > lo {
                    out.push(MonotonePiece {
                        lo: lo.clone(),
                        hi: cut.clone(),
                        slope: b.slope.clone(),
                        offset: off - &level,
                    });
                }
                lo = cut;
                level = next_int;
            }
        }
        out
    }

    /// `(k, log k)`: preimage cardinality is constant equal to the degree,
    /// so the topological entropy is exactly `log k`.
    pub fn degree_and_entropy(&self) -> (u32, f64) {
        (self.degree, (self.degree as f64).ln())
    }
}

/// Free-function form of [`CircleMap::evaluate`].
pub fn evaluate(map: &CircleMap, x: &CirclePoint) -> CirclePoint {
    map.evaluate(x)
}

pub fn evaluate_iter(map: &CircleMap, x: &CirclePoint, n: usize) -> CirclePoint {
    map.evaluate_iter(x, n)
}

pub fn degree_and_entropy(map: &CircleMap) -> (u32, f64) {
    map.degree_and_entropy()
}

impl MonotonePiece {
    pub fn apply(&self, x: &BigRational) -> BigRational {
        &self.slope * x + &self.offset
    }
}

impl fmt::Display for CircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree-{} map with {} branches", self.degree, self.branches.len())
    }
}

#[allow(dead_code)]
pub(crate) fn is_nonneg(q: &BigRational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn br(from: (i64, i64), to: (i64, i64), slope: (i64, i64), intercept: (i64, i64)) -> Branch {
        Branch {
            from: rat(from.0, from.1),
            to: rat(to.0, to.1),
            slope: rat(slope.0, slope.1),
            intercept: rat(intercept.0, intercept.1),
        }
    }

    /// Degree-2 map with slopes 3 on [0, 1/3) and 3/2 on [1/3, 1).
    pub(crate) fn skewed() -> CircleMap {
        CircleMap::new(
            2,
            vec![br((0, 1), (1, 3), (3, 1), (0, 1)), br((1, 3), (1, 1), (3, 2), (1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let d = CircleMap::multiply_by(2).unwrap();
        assert_eq!(
            d.evaluate(&CirclePoint::from_ratio(1, 3)),
            CirclePoint::from_ratio(2, 3)
        );
        assert_eq!(
            d.evaluate(&CirclePoint::from_ratio(2, 3)),
            CirclePoint::from_ratio(1, 3)
        );
        let t = CircleMap::multiply_by(3).unwrap();
        assert_eq!(
            t.evaluate_iter(&CirclePoint::from_ratio(1, 2), 2),
            CirclePoint::from_ratio(1, 2)
        );
    }

    #[test]
    fn rejects_bad_maps() {
        assert!(CircleMap::multiply_by(1).is_err());
        // slope 1 piece
        let flat = CircleMap::new(
            2,
            vec![br((0, 1), (1, 2), (1, 1), (0, 1)), br((1, 2), (1, 1), (3, 1), (-1, 1))],
        );
        assert!(matches!(flat, Err(Error::Precondition(m)) if m.contains("not expanding")));
        // discontinuous
        let jump = CircleMap::new(
            2,
            vec![br((0, 1), (1, 2), (2, 1), (0, 1)), br((1, 2), (1, 1), (2, 1), (1, 3))],
        );
        assert!(jump.is_err());
        // wrong degree
        let wrong = CircleMap::new(3, vec![br((0, 1), (1, 1), (2, 1), (0, 1))]);
        assert!(wrong.is_err());
    }

    #[test]
    fn skewed_map_is_continuous() {
        let m = skewed();
        assert_eq!(m.lift(&rat(1, 3)), rat(1, 1));
        assert_eq!(m.lift(&rat(1, 1)), rat(2, 1));
        assert_eq!(
            m.evaluate(&CirclePoint::from_ratio(2, 3)),
            CirclePoint::from_ratio(1, 2)
        );
        for y in [rat(0, 1), rat(1, 2), rat(7, 5), rat(-3, 4)] {
            assert_eq!(m.lift(&m.lift_inverse(&y)), y);
        }
    }

    #[test]
    fn monotone_pieces_tile() {
        let m = skewed();
        let pieces = m.monotone_pieces();
        assert_eq!(pieces.first().unwrap().lo, rat(0, 1));
        assert_eq!(pieces.last().unwrap().hi, rat(1, 1));
        for w in pieces.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
        for p in &pieces {
            assert!(p.apply(&p.lo) >= rat(0, 1));
            assert!(p.apply(&p.hi) <= rat(1, 1));
        }
        assert_eq!(CircleMap::multiply_by(3).unwrap().monotone_pieces().len(), 3);
    }

    #[test]
    fn json_schema() {
        let text = r#"{"degree":2,"branches":[{"from":"0","to":"1","slope":"2","intercept":"0"}]}"#;
        let m: CircleMap = serde_json::from_str(text).unwrap();
        assert_eq!(m, CircleMap::multiply_by(2).unwrap());
        assert_eq!(serde_json::to_string(&m).unwrap(), text);
    }

    #[test]
    fn displacement() {
        let a = CirclePoint::from_ratio(9, 10);
        let b = CirclePoint::from_ratio(1, 10);
        assert_eq!(a.displacement_to(&b), rat(1, 5));
        assert_eq!(b.displacement_to(&a), rat(-1, 5));
        assert_eq!(a.dist(&b), rat(1, 5));
    }
}
