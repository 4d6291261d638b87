//! Finite unions of arcs on the circle, with exact rational endpoints.
//!
//! A set is stored as a cell decomposition: sorted cut points in `[0, 1)`
//! and a membership bit for each cut point and each open gap between
//! consecutive cuts. Open, closed and half-open arcs all fit, and every
//! boolean operation reduces to refining onto common cuts.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::rational::{deserialize_rational, frac, serde_rational};
use crate::ruellemap::{circle_dist, CircleMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArcSet {
    cuts: Vec<BigRational>,
    points: Vec<bool>,
    /// `gaps[i]` is the open arc from `cuts[i]` to the next cut (cyclically);
    /// with no cuts there is a single gap, the whole circle
    gaps: Vec<bool>,
}

/// A closed arc `[start, start + len]`, with `0 <= start < 1`, `0 <= len <= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub start: BigRational,
    pub len: BigRational,
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

impl Arc {
    pub fn new(start: BigRational, len: BigRational) -> Self {
        Arc {
            start: frac(&start),
            len,
        }
    }

    pub fn end(&self) -> BigRational {
        &self.start + &self.len
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        frac(&(x - &self.start)) <= self.len
    }

    pub fn intersects(&self, other: &Arc) -> bool {
        self.contains(&other.start)
            || self.contains(&other.end())
            || other.contains(&self.start)
            || other.contains(&self.end())
    }

    /// Circle distance between two closed arcs.
    pub fn dist(&self, other: &Arc) -> BigRational {
        if self.intersects(other) {
            return BigRational::zero();
        }
        let mine = [self.start.clone(), self.end()];
        let theirs = [other.start.clone(), other.end()];
        mine.iter()
            .flat_map(|a| theirs.iter().map(move |b| circle_dist(a, b)))
            .min()
            .unwrap()
    }
}

/// Whether `x` (mod 1) lies in the real interval from `a` to `b`.
fn in_interval(x: &BigRational, a: &BigRational, b: &BigRational, closed: bool) -> bool {
    let mut y = x + (a - x).ceil();
    if !closed && &y == a {
        y += BigRational::one();
    }
    if closed {
        &y <= b
    } else {
        &y < b
    }
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet {
            cuts: Vec::new(),
            points: Vec::new(),
            gaps: vec![false],
        }
    }

    pub fn full() -> Self {
        ArcSet {
            cuts: Vec::new(),
            points: Vec::new(),
            gaps: vec![true],
        }
    }

    /// The image on the circle of the real interval from `a` to `b`
    /// (`a <= b`), closed or open.
    pub fn interval(a: &BigRational, b: &BigRational, closed: bool) -> Self {
        let width = b - a;
        if (closed && width >= BigRational::one()) || (!closed && width > BigRational::one()) {
            return Self::full();
        }
        if !closed && width.is_zero() {
            return Self::empty();
        }
        Self::from_predicate(vec![frac(a), frac(b)], |x| in_interval(x, a, b, closed))
    }

    pub fn closed_arc(arc: &Arc) -> Self {
        Self::interval(&arc.start, &arc.end(), true)
    }

    pub fn point(x: &BigRational) -> Self {
        Self::interval(x, x, true)
    }

    /// Builds the set whose membership is `pred`, assuming `pred` is
    /// constant on every gap between the given cuts.
    fn from_predicate(mut cuts: Vec<BigRational>, mut pred: impl FnMut(&BigRational) -> bool) -> Self {
        cuts.sort();
        cuts.dedup();
        if cuts.is_empty() {
            return ArcSet {
                cuts,
                points: Vec::new(),
                gaps: vec![pred(&BigRational::zero())],
            };
        }
        let points = cuts.iter().map(&mut pred).collect();
        let gaps = (0..cuts.len()).map(|i| pred(&gap_midpoint(&cuts, i))).collect();
        ArcSet { cuts, points, gaps }.canonical()
    }

    fn canonical(self) -> Self {
        let n = self.cuts.len();
        if n == 0 {
            return self;
        }
        let keep: Vec<usize> = (0..n)
            .filter(|&i| {
                let prev = (i + n - 1) % n;
                !(self.points[i] == self.gaps[prev] && self.points[i] == self.gaps[i])
            })
            .collect();
        if keep.is_empty() {
            return ArcSet {
                cuts: Vec::new(),
                points: Vec::new(),
                gaps: vec![self.gaps[0]],
            };
        }
        ArcSet {
            cuts: keep.iter().map(|&i| self.cuts[i].clone()).collect(),
            points: keep.iter().map(|&i| self.points[i]).collect(),
            gaps: keep.iter().map(|&i| self.gaps[i]).collect(),
        }
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let x = frac(x);
        if self.cuts.is_empty() {
            return self.gaps[0];
        }
        match self.cuts.binary_search(&x) {
            Ok(i) => self.points[i],
            Err(0) => *self.gaps.last().unwrap(),
            Err(i) => self.gaps[i - 1],
        }
    }

    /// Pointwise combination of several sets.
    pub fn combine(sets: &[&ArcSet], op: impl Fn(&[bool]) -> bool) -> Self {
        let cuts: Vec<BigRational> = sets.iter().flat_map(|s| s.cuts.iter().cloned()).collect();
        let mut buf = vec![false; sets.len()];
        Self::from_predicate(cuts, |x| {
            for (b, s) in buf.iter_mut().zip(sets) {
                *b = s.contains(x);
            }
            op(&buf)
        })
    }

    pub fn union(&self, other: &ArcSet) -> Self {
        Self::combine(&[self, other], |b| b[0] || b[1])
    }

    pub fn intersection(&self, other: &ArcSet) -> Self {
        Self::combine(&[self, other], |b| b[0] && b[1])
    }

    pub fn difference(&self, other: &ArcSet) -> Self {
        Self::combine(&[self, other], |b| b[0] && !b[1])
    }

    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a ArcSet>) -> Self {
        let sets: Vec<&ArcSet> = sets.into_iter().collect();
        Self::combine(&sets, |b| b.iter().any(|&x| x))
    }

    pub fn is_empty(&self) -> bool {
        !self.points.iter().any(|&b| b) && !self.gaps.iter().any(|&b| b)
    }

    pub fn is_full(&self) -> bool {
        self.cuts.is_empty() && self.gaps[0]
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn intersects(&self, other: &ArcSet) -> bool {
        !self.intersection(other).is_empty()
    }

    pub fn closure(&self) -> Self {
        let n = self.cuts.len();
        let points = (0..n)
            .map(|i| self.points[i] || self.gaps[(i + n - 1) % n] || self.gaps[i])
            .collect();
        ArcSet {
            cuts: self.cuts.clone(),
            points,
            gaps: self.gaps.clone(),
        }
        .canonical()
    }

    pub fn interior(&self) -> Self {
        let n = self.cuts.len();
        let points = (0..n)
            .map(|i| self.points[i] && self.gaps[(i + n - 1) % n] && self.gaps[i])
            .collect();
        ArcSet {
            cuts: self.cuts.clone(),
            points,
            gaps: self.gaps.clone(),
        }
        .canonical()
    }

    pub fn is_closed(&self) -> bool {
        &self.closure() == self
    }

    /// Equal to the closure of its interior.
    pub fn is_proper(&self) -> bool {
        &self.interior().closure() == self
    }

    /// Cut points of the decomposition (all arc endpoints).
    pub fn cuts(&self) -> &[BigRational] {
        &self.cuts
    }

    /// Maximal closed arcs of the closure, in order of their start.
    pub fn components(&self) -> Vec<Arc> {
        let c = self.closure();
        let n = c.cuts.len();
        if n == 0 {
            return if c.gaps[0] {
                vec![Arc::new(BigRational::zero(), BigRational::one())]
            } else {
                Vec::new()
            };
        }
        let gap_len = |j: usize| {
            if j + 1 < n {
                &c.cuts[j + 1] - &c.cuts[j]
            } else {
                &c.cuts[0] + BigRational::one() - &c.cuts[j]
            }
        };
        let mut out = Vec::new();
        for i in 0..n {
            if !c.points[i] || c.gaps[(i + n - 1) % n] {
                continue;
            }
            let mut len = BigRational::zero();
            let mut j = i;
            while c.gaps[j] {
                len += gap_len(j);
                j = (j + 1) % n;
            }
            out.push(Arc::new(c.cuts[i].clone(), len));
        }
        out.sort();
        out
    }

    /// `sup d(x, y)` over the closure; zero for the empty set.
    pub fn diameter(&self) -> BigRational {
        let comps = self.components();
        if comps.is_empty() {
            return BigRational::zero();
        }
        let shifted: Vec<Arc> = comps
            .iter()
            .map(|a| Arc::new(&a.start + half(), a.len.clone()))
            .collect();
        let nearest = comps
            .iter()
            .flat_map(|a| shifted.iter().map(move |b| a.dist(b)))
            .min()
            .unwrap();
        half() - nearest
    }

    /// Image of the closure under `f`.
    pub fn image_closed(&self, map: &CircleMap) -> ArcSet {
        let parts: Vec<ArcSet> = self
            .components()
            .iter()
            .map(|a| ArcSet::interval(&map.lift(&a.start), &map.lift(&a.end()), true))
            .collect();
        ArcSet::union_all(&parts)
    }

    /// Image of the interior of the closure under `f`.
    pub fn image_of_interior(&self, map: &CircleMap) -> ArcSet {
        let parts: Vec<ArcSet> = self
            .components()
            .iter()
            .filter(|a| !a.len.is_zero())
            .map(|a| ArcSet::interval(&map.lift(&a.start), &map.lift(&a.end()), false))
            .collect();
        ArcSet::union_all(&parts)
    }

    /// `f^{-1}` of the closure.
    pub fn preimage_closed(&self, map: &CircleMap) -> ArcSet {
        if self.is_full() {
            return ArcSet::full();
        }
        let mut parts = Vec::new();
        for a in self.components() {
            for j in 0..map.degree() {
                let shift = BigRational::from_integer(j.into());
                parts.push(ArcSet::interval(
                    &map.lift_inverse(&(&a.start + &shift)),
                    &map.lift_inverse(&(a.end() + &shift)),
                    true,
                ));
            }
        }
        ArcSet::union_all(&parts)
    }

    /// A point of the interior, if the interior is nonempty.
    pub fn interior_point(&self) -> Option<BigRational> {
        if self.cuts.is_empty() {
            return self.gaps[0].then(BigRational::zero);
        }
        (0..self.cuts.len())
            .find(|&i| self.gaps[i])
            .map(|i| gap_midpoint(&self.cuts, i))
    }
}

fn gap_midpoint(cuts: &[BigRational], i: usize) -> BigRational {
    let n = cuts.len();
    if n == 1 {
        return frac(&(&cuts[0] + half()));
    }
    if i + 1 < n {
        (&cuts[i] + &cuts[i + 1]) * half()
    } else {
        frac(&((&cuts[i] + &cuts[0] + BigRational::one()) * half()))
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::exactalg::rational::format_rational;
        let comps = self.components();
        if comps.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = comps
            .iter()
            .map(|a| {
                let end = a.end();
                let end = if end > BigRational::one() {
                    end - BigRational::one()
                } else {
                    end
                };
                format!("[{}, {}]", format_rational(&a.start), format_rational(&end))
            })
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// JSON form of a closed arc: counterclockwise from `from` to `to`, wrapping
/// through 0 when `to < from`; `{"from": "0", "to": "1"}` is the circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    #[serde(serialize_with = "serde_rational", deserialize_with = "deserialize_rational")]
    pub from: BigRational,
    #[serde(serialize_with = "serde_rational", deserialize_with = "deserialize_rational")]
    pub to: BigRational,
}

impl From<&Arc> for ArcJson {
    fn from(a: &Arc) -> Self {
        let end = a.end();
        let to = if end > BigRational::one() {
            end - BigRational::one()
        } else {
            end
        };
        ArcJson {
            from: a.start.clone(),
            to,
        }
    }
}

impl TryFrom<&ArcJson> for Arc {
    type Error = Error;
    fn try_from(j: &ArcJson) -> Result<Self> {
        let zero = BigRational::zero();
        let one = BigRational::one();
        if j.from < zero || j.from > one || j.to < zero || j.to > one {
            return Err(Error::parse("arc endpoints must lie in [0, 1]"));
        }
        if j.from == j.to {
            return Err(Error::precondition("degenerate arc with from == to"));
        }
        let len = if j.to > j.from {
            &j.to - &j.from
        } else {
            &j.to + &one - &j.from
        };
        Ok(Arc::new(j.from.clone(), len))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn arc(a: (i64, i64), b: (i64, i64)) -> ArcSet {
        ArcSet::interval(&rat(a.0, a.1), &rat(b.0, b.1), true)
    }

    #[test]
    fn membership_and_wrap() {
        let s = arc((9, 10), (11, 10));
        assert!(s.contains(&rat(0, 1)));
        assert!(s.contains(&rat(9, 10)));
        assert!(s.contains(&rat(1, 10)));
        assert!(!s.contains(&rat(1, 2)));
        assert_eq!(s.components(), vec![Arc::new(rat(9, 10), rat(1, 5))]);
        assert_eq!(s.diameter(), rat(1, 5));
    }

    #[test]
    fn boolean_algebra() {
        let a = arc((0, 1), (1, 2));
        let b = arc((1, 2), (1, 1));
        assert!(a.union(&b).is_full());
        assert_eq!(
            a.intersection(&b),
            ArcSet::point(&rat(0, 1)).union(&ArcSet::point(&rat(1, 2)))
        );
        assert!(!a.interior().intersects(&b.interior()));
        assert!(a.is_proper());
        assert!(!a.union(&ArcSet::point(&rat(3, 4))).is_proper());
        assert!(arc((1, 5), (2, 5)).is_subset(&a));
    }

    #[test]
    fn open_arcs() {
        let open = ArcSet::interval(&rat(1, 4), &rat(5, 4), false);
        assert!(!open.contains(&rat(1, 4)));
        assert!(open.contains(&rat(0, 1)));
        assert!(ArcSet::interval(&rat(0, 1), &rat(3, 2), false).is_full());
        assert!(ArcSet::interval(&rat(1, 3), &rat(1, 3), false).is_empty());
    }

    #[test]
    fn diameters() {
        assert_eq!(arc((0, 1), (3, 5)).diameter(), rat(1, 2));
        let two = arc((0, 1), (1, 10)).union(&arc((3, 10), (2, 5)));
        assert_eq!(two.diameter(), rat(2, 5));
        assert_eq!(ArcSet::point(&rat(1, 3)).diameter(), rat(0, 1));
    }

    #[test]
    fn images_under_doubling() {
        let m = CircleMap::multiply_by(2).unwrap();
        let r = arc((2, 5), (3, 5));
        assert_eq!(r.image_closed(&m), arc((4, 5), (6, 5)));
        let pre = arc((0, 1), (1, 5)).preimage_closed(&m);
        assert_eq!(pre, arc((0, 1), (1, 10)).union(&arc((1, 2), (3, 5))));
        assert!(arc((0, 1), (3, 5)).image_of_interior(&m).is_full());
        let almost = arc((0, 1), (1, 2)).image_of_interior(&m);
        assert!(!almost.contains(&rat(0, 1)) && almost.contains(&rat(1, 2)));
    }

    #[test]
    fn json_arcs() {
        let j = ArcJson {
            from: rat(9, 10),
            to: rat(1, 10),
        };
        let a = Arc::try_from(&j).unwrap();
        assert_eq!(a.len, rat(1, 5));
        assert_eq!(ArcJson::from(&a), j);
        assert!(Arc::try_from(&ArcJson {
            from: rat(1, 2),
            to: rat(1, 2)
        })
        .is_err());
    }
}
