//! Root location for integer polynomials.
//!
//! Real roots are isolated exactly with Sturm sequences over the rationals and
//! refined by sign bisection; complex roots are only ever needed as moduli
//! for reporting and come from a floating-point Aberth iteration.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPolynomial;
use super::rational::to_f64;

/// Polynomial over the rationals, only used internally for Sturm chains.
#[derive(Clone, Debug)]
struct RatPoly(Vec<BigRational>);

impl RatPoly {
    fn from_int(p: &IntPolynomial) -> Self {
        RatPoly(p.coeffs().iter().cloned().map(BigRational::from_integer).collect())
    }

    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn derivative(&self) -> Self {
        RatPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
        .trim()
    }

    fn rem(&self, d: &Self) -> Self {
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lc = d.0.last().unwrap();
        while r.len() > dd && !r.is_empty() {
            let top = r.last().unwrap() / lc;
            let shift = r.len() - 1 - dd;
            for (i, c) in d.0.iter().enumerate() {
                r[i + shift] -= &top * c;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        RatPoly(r).trim()
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

/// Sturm chain `p, p', -rem(p, p'), ...`; counts distinct real roots.
pub struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let p0 = RatPoly::from_int(p).trim();
        let mut chain = vec![p0.clone()];
        let p1 = p0.derivative();
        if !p1.is_zero() {
            chain.push(p1);
            loop {
                let n = chain.len();
                let r = chain[n - 2].rem(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                chain.push(RatPoly(r.0.iter().map(|c| -c).collect()));
            }
        }
        SturmChain { chain }
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|q| {
                let v = q.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Cauchy bound: every complex root has modulus below this value.
pub fn root_bound(p: &IntPolynomial) -> BigRational {
    let Some(lead) = p.leading() else {
        return BigRational::one();
    };
    let lead = lead.abs();
    let max = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    BigRational::one() + BigRational::new(max, lead)
}

/// Lower bound on the modulus of every nonzero root (Cauchy bound of the
/// reversed polynomial, inverted).
pub fn root_lower_bound(p: &IntPolynomial) -> BigRational {
    let trailing = p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let rev = IntPolynomial::new(p.coeffs()[trailing..].iter().rev().cloned().collect());
    root_bound(&rev).recip()
}

/// Smallest positive real root, bracketed to width below `tol`.
///
/// Returns the bracketing interval `(lo, hi]` containing exactly that root,
/// or `None` if the polynomial has no positive real root.
pub fn smallest_positive_root(p: &IntPolynomial, tol: &BigRational) -> Option<(BigRational, BigRational)> {
    if p.is_zero() {
        return None;
    }
    let sturm = SturmChain::new(p);
    let mut lo = BigRational::zero();
    let mut hi = root_bound(p);
    if sturm.count_roots(&lo, &hi) == 0 {
        return None;
    }
    // a root exactly at zero is excluded by the half-open interval
    while &hi - &lo >= *tol {
        let mid = (&lo + &hi) / BigInt::from(2);
        if sturm.count_roots(&lo, &mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some((lo, hi))
}

/// All complex roots (with multiplicity), by Aberth–Ehrlich iteration in
/// double precision.
pub fn complex_roots(p: &IntPolynomial) -> Vec<Complex64> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    // strip roots at zero
    let trailing = p.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut zeros = vec![Complex64::new(0.0, 0.0); trailing];
    let coeffs: Vec<f64> = p.coeffs()[trailing..]
        .iter()
        .map(|c| to_f64(&BigRational::from_integer(c.clone())))
        .collect();
    let n = deg - trailing;
    if n == 0 {
        return zeros;
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        (v, dv)
    };
    let radius = 1.0 + monic[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(0.5 * radius, angle)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, dv) = eval(roots[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = roots[i] - roots[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                roots[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    zeros.extend(roots);
    zeros
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    #[test]
    fn sturm_counts_distinct_roots() {
        // (t - 1)(t - 2)(t + 3)
        let p = IntPolynomial::from_i64(&[6, -7, 0, 1]);
        let s = SturmChain::new(&p);
        assert_eq!(s.count_roots(&rat(-10, 1), &rat(10, 1)), 3);
        assert_eq!(s.count_roots(&rat(0, 1), &rat(3, 2)), 1);
        assert_eq!(s.count_roots(&rat(1, 1), &rat(2, 1)), 1);
    }

    #[test]
    fn golden_ratio_conjugate() {
        let p = IntPolynomial::from_i64(&[1, -1, -1]);
        let (lo, hi) = smallest_positive_root(&p, &rat(1, 1_000_000_000_000)).unwrap();
        let expect = 2.0 / (1.0 + 5f64.sqrt());
        assert!((to_f64(&lo) - expect).abs() < 1e-12);
        assert!((to_f64(&hi) - expect).abs() < 1e-12);
    }

    #[test]
    fn no_positive_root() {
        assert!(smallest_positive_root(&IntPolynomial::from_i64(&[1, 1]), &rat(1, 100)).is_none());
        assert!(smallest_positive_root(&IntPolynomial::one(), &rat(1, 100)).is_none());
    }

    #[test]
    fn aberth_finds_roots_of_unity() {
        let p = IntPolynomial::one_minus_monomial(1, 4);
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 4);
        for z in roots {
            assert!((z.norm() - 1.0).abs() < 1e-9);
            assert!((z.powu(4) - 1.0).norm() < 1e-9);
        }
    }
}
