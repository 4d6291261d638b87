//! Covers built from a finite net of points.
//!
//! For a net `p_1..p_k` and `A_ij = [d(f(p_i), p_j) < alpha]`, the sets
//! `T_i` of points whose orbit `beta`-shadows an admissible itinerary
//! starting at `i` are the largest solution of
//! `T_i = B_beta(p_i) ∩ f^{-1}(⋃_{A_ij = 1} T_j)`. Iterating from the balls
//! gives outer approximations. Each endpoint of an iterate is either a ball
//! endpoint or an affine image of an endpoint of the previous iterate; once
//! that provenance stops changing, the limit endpoints solve a small affine
//! system and are computed exactly, then checked to be a fixed point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::arcs::ArcSet;
use super::cover::{MarkovCover, Rectangle};
use crate::error::{Error, Result};
use crate::exactalg::rational::format_rational;
use crate::ruellemap::{ruelle_constants, CircleMap, CirclePoint};
use crate::shiftspace::TransitionMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Source {
    Ball,
    /// `a * (endpoint idx of T_j + shift) + b`
    Pull {
        j: usize,
        idx: usize,
        shift: BigInt,
        a: BigRational,
        b: BigRational,
    },
}

#[derive(Clone, Debug)]
struct End {
    val: BigRational,
    src: Source,
}

/// Closed intervals on the line, sorted; endpoints flattened as `2 * k` and
/// `2 * k + 1`.
type Lifted = Vec<(End, End)>;

pub struct NetCover {
    /// the candidate; check `cover.is_valid()`
    pub cover: MarkovCover,
    pub net_matrix: TransitionMatrix,
    /// the sets `T_i` used to cut the circle
    pub t_sets: Vec<ArcSet>,
    /// whether `t_sets` is the exact limit rather than a finite-depth iterate
    pub exact: bool,
    pub depth: usize,
}

struct Setup<'a> {
    map: &'a CircleMap,
    net: Vec<BigRational>,
    beta: BigRational,
    succ: Vec<Vec<usize>>,
}

impl Setup<'_> {
    fn window(&self, i: usize) -> (BigRational, BigRational) {
        (&self.net[i] - &self.beta, &self.net[i] + &self.beta)
    }

    fn end_value(t: &[Lifted], j: usize, idx: usize) -> &BigRational {
        let iv = &t[j][idx / 2];
        if idx.is_multiple_of(2) {
            &iv.0.val
        } else {
            &iv.1.val
        }
    }

    /// One application of the recursion.
    fn step(&self, t: &[Lifted]) -> Vec<Lifted> {
        (0..self.net.len()).map(|i| self.step_one(t, i)).collect()
    }

    fn step_one(&self, t: &[Lifted], i: usize) -> Lifted {
        let (wlo, whi) = self.window(i);
        let jlo = self.map.lift(&wlo);
        let jhi = self.map.lift(&whi);
        // (value, from-ball?, j, idx, shift) for each clipped endpoint
        type Raw = (BigRational, Option<(usize, usize, BigInt)>);
        let mut pieces: Vec<(Raw, Raw)> = Vec::new();
        for &j in &self.succ[i] {
            for (k, (lo, hi)) in t[j].iter().enumerate() {
                let first = (&jlo - &hi.val).ceil().to_integer();
                let last = (&jhi - &lo.val).floor().to_integer();
                let mut m = first;
                while m <= last {
                    let mq = BigRational::from_integer(m.clone());
                    let u = &lo.val + &mq;
                    let v = &hi.val + &mq;
                    let a: Raw = if u >= jlo {
                        (u, Some((j, 2 * k, m.clone())))
                    } else {
                        (jlo.clone(), None)
                    };
                    let b: Raw = if v <= jhi {
                        (v, Some((j, 2 * k + 1, m.clone())))
                    } else {
                        (jhi.clone(), None)
                    };
                    if a.0 <= b.0 {
                        pieces.push((a, b));
                    }
                    m += 1;
                }
            }
        }
        pieces.sort_by(|x, y| (&x.0 .0, &x.1 .0).cmp(&(&y.0 .0, &y.1 .0)));
        let mut merged: Vec<(Raw, Raw)> = Vec::new();
        for p in pieces {
            match merged.last_mut() {
                Some(cur) if p.0 .0 <= cur.1 .0 => {
                    if p.1 .0 > cur.1 .0 {
                        cur.1 = p.1;
                    }
                }
                _ => merged.push(p),
            }
        }
        let pull = |raw: Raw, ball: &BigRational| -> End {
            match raw.1 {
                None => End {
                    val: ball.clone(),
                    src: Source::Ball,
                },
                Some((j, idx, shift)) => {
                    let y = raw.0;
                    let x = self.map.lift_inverse(&y);
                    let a = self.inverse_slope(&y);
                    let base = Self::end_value(t, j, idx) + BigRational::from_integer(shift.clone());
                    let b = &x - &a * &base;
                    End {
                        val: x,
                        src: Source::Pull { j, idx, shift, a, b },
                    }
                }
            }
        };
        merged
            .into_iter()
            .map(|(lo, hi)| (pull(lo, &wlo), pull(hi, &whi)))
            .collect()
    }

    /// Slope of the lift inverse at `y`, on the piece used by `lift_inverse`.
    fn inverse_slope(&self, y: &BigRational) -> BigRational {
        let x = self.map.lift_inverse(y);
        let r = &x - x.floor();
        let b = self
            .map
            .branches()
            .iter()
            .find(|b| r < b.to)
            .unwrap_or_else(|| self.map.branches().last().unwrap());
        b.slope.recip()
    }

    fn signature(t: &[Lifted]) -> Vec<Vec<Source>> {
        t.iter()
            .map(|iv| iv.iter().flat_map(|(a, b)| [a.src.clone(), b.src.clone()]).collect())
            .collect()
    }

    /// Solves the endpoint equations of a stable structure.
    fn solve(&self, t: &[Lifted]) -> Option<Vec<Lifted>> {
        let ends: Vec<Vec<&End>> = t
            .iter()
            .map(|iv| iv.iter().flat_map(|(a, b)| [a, b]).collect())
            .collect();
        let mut solved: Vec<Vec<Option<BigRational>>> = ends.iter().map(|e| vec![None; e.len()]).collect();
        for i in 0..ends.len() {
            for idx in 0..ends[i].len() {
                if solved[i][idx].is_some() {
                    continue;
                }
                // walk until a known value, a ball endpoint or a repeat
                let mut path: Vec<(usize, usize)> = Vec::new();
                let mut cur = (i, idx);
                let anchor: BigRational;
                loop {
                    if let Some(v) = &solved[cur.0][cur.1] {
                        anchor = v.clone();
                        break;
                    }
                    if let Some(pos) = path.iter().position(|&p| p == cur) {
                        // cycle path[pos..]: compose x -> a (x + m) + b around it
                        let mut aa = BigRational::one();
                        let mut bb = BigRational::zero();
                        for &(ci, cidx) in path[pos..].iter().rev() {
                            let Source::Pull { shift, a, b, .. } = &ends[ci][cidx].src else {
                                return None;
                            };
                            let m = BigRational::from_integer(shift.clone());
                            bb = a * (&bb + &m) + b;
                            aa = a * &aa;
                        }
                        if aa >= BigRational::one() {
                            return None;
                        }
                        let start = path[pos];
                        solved[start.0][start.1] = Some(&bb / (BigRational::one() - &aa));
                        anchor = solved[start.0][start.1].clone().unwrap();
                        path.truncate(pos);
                        path.push(start);
                        path.pop();
                        cur = start;
                        break;
                    }
                    match &ends[cur.0][cur.1].src {
                        Source::Ball => {
                            let (lo, hi) = self.window(cur.0);
                            anchor = if cur.1 % 2 == 0 { lo } else { hi };
                            solved[cur.0][cur.1] = Some(anchor.clone());
                            break;
                        }
                        Source::Pull { j, idx, .. } => {
                            path.push(cur);
                            cur = (*j, *idx);
                        }
                    }
                }
                // unwind the path back from the anchor
                let mut val = anchor;
                let mut target = cur;
                while let Some(node) = path.pop() {
                    let Source::Pull { j, idx, shift, a, b } = &ends[node.0][node.1].src else {
                        return None;
                    };
                    debug_assert_eq!((*j, *idx), target);
                    val = a * (&val + BigRational::from_integer(shift.clone())) + b;
                    if solved[node.0][node.1].is_none() {
                        solved[node.0][node.1] = Some(val.clone());
                    }
                    val = solved[node.0][node.1].clone().unwrap();
                    target = node;
                }
            }
        }
        let out: Vec<Lifted> = t
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                iv.iter()
                    .enumerate()
                    .map(|(k, (a, b))| {
                        (
                            End {
                                val: solved[i][2 * k].clone().unwrap(),
                                src: a.src.clone(),
                            },
                            End {
                                val: solved[i][2 * k + 1].clone().unwrap(),
                                src: b.src.clone(),
                            },
                        )
                    })
                    .collect()
            })
            .collect();
        // must be ordered intervals and a genuine fixed point
        let ordered = out
            .iter()
            .all(|iv| iv.iter().all(|(a, b)| a.val <= b.val) && iv.windows(2).all(|w| w[0].1.val < w[1].0.val));
        if !ordered {
            return None;
        }
        let again = self.step(&out);
        let same = again.len() == out.len()
            && again.iter().zip(&out).all(|(x, y)| {
                x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p.0.val == q.0.val && p.1.val == q.1.val)
            });
        same.then_some(out)
    }
}

fn to_arcset(iv: &Lifted) -> ArcSet {
    let parts: Vec<ArcSet> = iv.iter().map(|(a, b)| ArcSet::interval(&a.val, &b.val, true)).collect();
    ArcSet::union_all(&parts)
}

/// Builds a candidate Markov cover from `net`; the result carries the exact
/// validation report of the candidate.
pub fn net_cover(
    map: &CircleMap,
    net: &[CirclePoint],
    alpha: &BigRational,
    beta: &BigRational,
    depth: usize,
) -> Result<NetCover> {
    let rc = ruelle_constants(map);
    let two = BigRational::from_integer(2.into());
    let four = BigRational::from_integer(4.into());
    let mut pts: Vec<BigRational> = net.iter().map(|p| p.value().clone()).collect();
    pts.sort();
    pts.dedup();
    if pts.is_empty() {
        return Err(Error::precondition("net is empty"));
    }
    let beta_bound = std::cmp::min(&rc.epsilon / &two, &rc.c / &four);
    if beta <= &BigRational::zero() || beta >= &beta_bound {
        return Err(Error::precondition(format!(
            "beta < min(epsilon/2, c/4) violated: beta = {}, bound = {}",
            format_rational(beta),
            format_rational(&beta_bound)
        )));
    }
    let alpha_bound = std::cmp::min(&rc.r - beta, (BigRational::one() - &rc.lambda) * beta / &rc.lambda);
    if alpha <= &BigRational::zero() || alpha >= &alpha_bound {
        return Err(Error::precondition(format!(
            "alpha < min(r - beta, (1 - lambda) beta / lambda) violated: alpha = {}, bound = {}",
            format_rational(alpha),
            format_rational(&alpha_bound)
        )));
    }
    let gamma = alpha / (&two * map.max_slope());
    let widest = (0..pts.len())
        .map(|i| {
            if i + 1 < pts.len() {
                &pts[i + 1] - &pts[i]
            } else {
                &pts[0] + BigRational::one() - &pts[i]
            }
        })
        .max()
        .unwrap();
    let radius = &widest / &two;
    if radius >= gamma {
        return Err(Error::precondition(format!(
            "net is not gamma-dense: covering radius {} is not below gamma = alpha / (2 Lip) = {}",
            format_rational(&radius),
            format_rational(&gamma)
        )));
    }

    let points: Vec<CirclePoint> = pts.iter().cloned().map(CirclePoint::new).collect();
    let rows: Vec<Vec<bool>> = points
        .iter()
        .map(|p| {
            let fp = map.evaluate(p);
            points.iter().map(|q| fp.dist(q) < *alpha).collect()
        })
        .collect();
    let net_matrix = TransitionMatrix::new(rows)?;
    let setup = Setup {
        map,
        succ: (0..pts.len()).map(|i| net_matrix.successors(i).collect()).collect(),
        net: pts,
        beta: beta.clone(),
    };

    let mut t: Vec<Lifted> = (0..setup.net.len())
        .map(|i| {
            let (lo, hi) = setup.window(i);
            vec![(
                End {
                    val: lo,
                    src: Source::Ball,
                },
                End {
                    val: hi,
                    src: Source::Ball,
                },
            )]
        })
        .collect();
    let mut exact = false;
    let mut used = 0;
    for n in 1..=depth {
        let next = setup.step(&t);
        used = n;
        let stable = Setup::signature(&next) == Setup::signature(&t);
        t = next;
        if stable {
            if let Some(fixed) = setup.solve(&t) {
                t = fixed;
                exact = true;
                break;
            }
        }
    }
    let t_sets: Vec<ArcSet> = t.iter().map(to_arcset).collect();
    let rectangles = cells(&t_sets);
    Ok(NetCover {
        cover: MarkovCover::new(map.clone(), rectangles),
        net_matrix,
        t_sets,
        exact,
        depth: used,
    })
}

/// Closures of the classes of points with the same membership pattern in
/// the interiors of the `T_i`.
fn cells(t_sets: &[ArcSet]) -> Vec<Rectangle> {
    let mut cuts: Vec<BigRational> = t_sets.iter().flat_map(|s| s.cuts().iter().cloned()).collect();
    cuts.sort();
    cuts.dedup();
    if cuts.is_empty() {
        return vec![Rectangle::from_set(&ArcSet::full())];
    }
    let n = cuts.len();
    let mut groups: BTreeMap<Vec<bool>, Vec<ArcSet>> = BTreeMap::new();
    let mut order: Vec<Vec<bool>> = Vec::new();
    for i in 0..n {
        let lo = cuts[i].clone();
        let hi = if i + 1 < n {
            cuts[i + 1].clone()
        } else {
            &cuts[0] + BigRational::one()
        };
        let gap = ArcSet::interval(&lo, &hi, false);
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        let pattern: Vec<bool> = t_sets.iter().map(|s| s.contains(&mid)).collect();
        if !pattern.iter().any(|&b| b) {
            continue;
        }
        if !groups.contains_key(&pattern) {
            order.push(pattern.clone());
        }
        groups.entry(pattern).or_default().push(gap);
    }
    order
        .iter()
        .map(|p| Rectangle::from_set(&ArcSet::union_all(&groups[p])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn grid(n: i64) -> Vec<CirclePoint> {
        (0..n).map(|i| CirclePoint::from_ratio(i, n)).collect()
    }

    #[test]
    fn doubling_net_32() {
        let m = CircleMap::multiply_by(2).unwrap();
        let nc = net_cover(&m, &grid(32), &rat(9, 100), &rat(1, 10), 12).unwrap();
        assert!(nc.exact);
        assert_eq!(nc.t_sets[0], ArcSet::interval(&rat(-1, 16), &rat(1, 16), true));
        assert!(nc.cover.is_valid(), "{:?}", nc.cover.report().failures());
        assert_eq!(nc.cover.len(), 32);
    }

    #[test]
    fn doubling_net_40() {
        let m = CircleMap::multiply_by(2).unwrap();
        let nc = net_cover(&m, &grid(40), &rat(9, 100), &rat(1, 10), 12).unwrap();
        assert!(nc.exact);
        assert_eq!(nc.t_sets[1], ArcSet::interval(&rat(-2, 40), &rat(4, 40), true));
        assert!(nc.cover.is_valid());
        for r in nc.cover.rectangles() {
            for a in r.arcs() {
                // every edge is a multiple of 1/40, refining the m = 5 subdivision
                assert!((&a.start * BigRational::from_integer(40.into())).is_integer());
            }
        }
    }

    #[test]
    fn rejects_sparse_net() {
        let m = CircleMap::multiply_by(2).unwrap();
        let err = net_cover(&m, &grid(8), &rat(9, 100), &rat(1, 10), 12)
            .err()
            .unwrap()
            .to_string();
        assert!(err.contains("gamma-dense"), "{err}");
        assert!(net_cover(&m, &grid(32), &rat(9, 100), &rat(1, 5), 12).is_err());
        assert!(net_cover(&m, &grid(32), &rat(1, 5), &rat(1, 10), 12).is_err());
    }
}
