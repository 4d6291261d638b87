use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use super::{CircleMap, CirclePoint, MonotonePiece};
use crate::error::{Error, Result};

/// Largest `k^p` accepted by [`periodic_points`].
pub const PERIODIC_BUDGET: u64 = 10_000_000;

/// Exact solutions of `f^p(x) = x`, sorted.
///
/// Walks the tree of branch words; each word carries the half-open
/// interval of points following it and the composed affine map
/// `x -> s x + b` on that interval.
pub fn periodic_points(map: &CircleMap, p: usize) -> Result<Vec<CirclePoint>> {
    if p == 0 {
        return Err(Error::precondition("period must be at least 1"));
    }
    let words = BigInt::from(map.degree()).pow(p as u32);
    if words > BigInt::from(PERIODIC_BUDGET) {
        return Err(Error::Budget(format!(
            "{}^{p} branch words exceed the budget of {PERIODIC_BUDGET}",
            map.degree()
        )));
    }
    let pieces = map.monotone_pieces();
    let mut out = Vec::new();
    let mut visits: u64 = 0;
    let mut stack = vec![(
        0usize,
        BigRational::zero(),
        BigRational::one(),
        BigRational::one(),
        BigRational::zero(),
    )];
    while let Some((depth, lo, hi, s, b)) = stack.pop() {
        visits += 1;
        if visits > 4 * PERIODIC_BUDGET {
            return Err(Error::Budget("periodic point search exceeded its budget".into()));
        }
        if depth == p {
            if s.is_one() {
                continue;
            }
            let x = &b / (BigRational::one() - &s);
            if lo <= x && x < hi {
                out.push(CirclePoint::new(x));
            }
            continue;
        }
        // current image interval [s lo + b, s hi + b) inside [0, 1]
        let img_lo = &s * &lo + &b;
        let img_hi = &s * &hi + &b;
        for piece in pieces.iter().rev() {
            push_child(&mut stack, depth, &s, &b, &img_lo, &img_hi, piece);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[allow(clippy::type_complexity)]
fn push_child(
    stack: &mut Vec<(usize, BigRational, BigRational, BigRational, BigRational)>,
    depth: usize,
    s: &BigRational,
    b: &BigRational,
    img_lo: &BigRational,
    img_hi: &BigRational,
    piece: &MonotonePiece,
) {
    let lo = if img_lo > &piece.lo { img_lo } else { &piece.lo };
    let hi = if img_hi < &piece.hi { img_hi } else { &piece.hi };
    if lo >= hi {
        return;
    }
    let pull = |y: &BigRational| (y - b) / s;
    stack.push((
        depth + 1,
        pull(lo),
        pull(hi),
        &piece.slope * s,
        &piece.slope * b + &piece.offset,
    ));
}
