use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{ruelle_constants, CircleMap, CirclePoint};
use crate::error::{Error, Result};
use crate::exactalg::rational::format_rational;

/// All `a` with `f(a) = x`, in increasing order; always `degree` points.
pub fn inverse_branches(map: &CircleMap, x: &CirclePoint) -> Vec<CirclePoint> {
    let base = map.lift(&BigRational::zero());
    let first = (&base - x.value()).ceil();
    (0..map.degree())
        .map(|j| {
            let y = x.value() + &first + BigRational::from_integer(j.into());
            CirclePoint::new(map.lift_inverse(&y))
        })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// The preimage of `y` on the inverse branch through `a`, i.e. the point near
/// `a` that `f` sends to `y`. Valid while `y` is within half a turn of `f(a)`.
pub fn local_inverse(map: &CircleMap, a: &CirclePoint, y: &CirclePoint) -> CirclePoint {
    let delta = map.evaluate(a).displacement_to(y);
    CirclePoint::new(map.lift_inverse(&(map.lift(a.value()) + delta)))
}

/// `g(y)` for the contractive branch `g` of `f^{-n}` with `g(x) = a`.
pub fn contractive_branch(
    map: &CircleMap,
    x: &CirclePoint,
    a: &CirclePoint,
    n: usize,
    y: &CirclePoint,
) -> Result<CirclePoint> {
    let rc = ruelle_constants(map);
    let orbit = map.orbit(a, n);
    if &orbit[n] != x {
        return Err(Error::precondition(format!("f^{n}({a}) = {} is not {x}", orbit[n])));
    }
    let d = x.dist(y);
    if d >= rc.r {
        return Err(Error::precondition(format!(
            "d(x, y) = {} is not below r = {}: outside the branch domain",
            format_rational(&d),
            format_rational(&rc.r)
        )));
    }
    let mut pulled = vec![y.clone()];
    for j in (0..n).rev() {
        let next = local_inverse(map, &orbit[j], pulled.last().unwrap());
        pulled.push(next);
    }
    pulled.reverse();
    // pulled[j] = f^j(g(y)); check the contraction certificate exactly
    let mut bound = d;
    for j in (0..=n).rev() {
        let dj = pulled[j].dist(&orbit[j]);
        if dj > bound || map.evaluate_iter(&pulled[j], n - j) != *y {
            return Err(Error::invariant(format!(
                "contractive branch certificate failed at step {j}"
            )));
        }
        bound = &bound * &rc.lambda;
    }
    debug_assert!(!bound.is_negative());
    Ok(pulled.swap_remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: i64) -> CirclePoint {
        CirclePoint::from_ratio(n, d)
    }

    #[test]
    fn doubling_preimages() {
        let m = CircleMap::multiply_by(2).unwrap();
        assert_eq!(inverse_branches(&m, &p(1, 3)), vec![p(1, 6), p(2, 3)]);
        assert_eq!(inverse_branches(&m, &p(0, 1)), vec![p(0, 1), p(1, 2)]);
        let t = CircleMap::multiply_by(3).unwrap();
        assert_eq!(inverse_branches(&t, &p(1, 2)), vec![p(1, 6), p(1, 2), p(5, 6)]);
    }

    #[test]
    fn contractive_examples() {
        let m = CircleMap::multiply_by(2).unwrap();
        assert_eq!(
            contractive_branch(&m, &p(0, 1), &p(0, 1), 1, &p(1, 8)).unwrap(),
            p(1, 16)
        );
        assert_eq!(
            contractive_branch(&m, &p(0, 1), &p(1, 2), 1, &p(1, 8)).unwrap(),
            p(9, 16)
        );
        assert_eq!(
            contractive_branch(&m, &p(1, 3), &p(1, 6), 1, &p(1, 3)).unwrap(),
            p(1, 6)
        );
        // y on the other side of 0
        assert_eq!(
            contractive_branch(&m, &p(0, 1), &p(0, 1), 2, &p(15, 16)).unwrap(),
            p(63, 64)
        );
    }

    #[test]
    fn contractive_rejects() {
        let m = CircleMap::multiply_by(2).unwrap();
        assert!(matches!(
            contractive_branch(&m, &p(0, 1), &p(0, 1), 1, &p(1, 4)),
            Err(Error::Precondition(_))
        ));
        assert!(contractive_branch(&m, &p(1, 5), &p(0, 1), 1, &p(1, 5)).is_err());
    }
}
