use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::spectrum::CoverSpectrum;
use crate::error::{Error, Result};
use crate::markovcover::{permutation_sign, MarkovCover};
use crate::ruellemap::CirclePoint;

/// One nonempty union `J` of cycles of `mu`, with its contribution
/// `(-1)^{t-1} sgn(nu)` to `Phi(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiTerm {
    pub cycles: Vec<usize>,
    pub t: usize,
    pub sign: i32,
    pub contribution: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiAudit {
    pub x: CirclePoint,
    pub p: usize,
    /// first `p` symbols of each coding of `x`, sorted
    pub codings: Vec<Vec<usize>>,
    /// `sigma^p` sends coding `i` to coding `mu[i]`
    pub mu: Vec<usize>,
    pub cycles: Vec<Vec<usize>>,
    pub terms: Vec<PhiTerm>,
    pub phi_value: i64,
}

/// Codings of a periodic point as paths through the layers
/// `(j mod p, s)` with `f^j(x) ∈ R_s`, keeping only nodes that start an
/// infinite admissible path.
fn coding_graph(
    cover: &MarkovCover,
    a: &crate::shiftspace::TransitionMatrix,
    x: &CirclePoint,
    p: usize,
) -> Result<Vec<Vec<(usize, usize)>>> {
    let orbit = cover.map().orbit(x, p);
    let layers: Vec<Vec<usize>> = orbit[..p]
        .iter()
        .map(|y| {
            (0..cover.len())
                .filter(|&s| cover.rectangles()[s].set().contains(y.value()))
                .collect()
        })
        .collect();
    let mut alive: Vec<Vec<bool>> = layers.iter().map(|l| vec![true; l.len()]).collect();
    loop {
        let mut changed = false;
        for j in 0..p {
            let nj = (j + 1) % p;
            for (u, &s) in layers[j].iter().enumerate() {
                if !alive[j][u] {
                    continue;
                }
                let any = layers[nj]
                    .iter()
                    .enumerate()
                    .any(|(v, &s2)| alive[nj][v] && a.get(s, s2));
                if !any {
                    alive[j][u] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // successor of each live node; out-degree above one would give
    // infinitely many codings
    let mut succ: Vec<Vec<(usize, usize)>> = Vec::with_capacity(p);
    for j in 0..p {
        let nj = (j + 1) % p;
        let mut row = Vec::new();
        for (u, &s) in layers[j].iter().enumerate() {
            if !alive[j][u] {
                row.push((usize::MAX, usize::MAX));
                continue;
            }
            let next: Vec<usize> = layers[nj]
                .iter()
                .enumerate()
                .filter(|&(v, &s2)| alive[nj][v] && a.get(s, s2))
                .map(|(v, _)| v)
                .collect();
            if next.len() != 1 {
                return Err(Error::invariant(format!(
                    "coding graph of {x} branches at step {j}: more than {} codings",
                    cover.map().degree()
                )));
            }
            row.push((s, next[0]));
        }
        succ.push(row);
    }
    Ok(succ)
}

/// Evaluates `Phi(x)` for a point of period `p` from the exact set of
/// codings of `x` and the signed matrices of the cover.
pub fn phi_audit(cover: &MarkovCover, spec: &CoverSpectrum, x: &CirclePoint, p: usize) -> Result<PhiAudit> {
    if p == 0 {
        return Err(Error::precondition("period must be at least 1"));
    }
    if &cover.map().evaluate_iter(x, p) != x {
        return Err(Error::precondition(format!("{x} is not fixed by f^{p}")));
    }
    let succ = coding_graph(cover, &spec.a, x, p)?;
    let starts: Vec<usize> = (0..succ[0].len()).filter(|&u| succ[0][u].0 != usize::MAX).collect();
    let k = cover.map().degree() as usize;
    if starts.is_empty() || starts.len() > k {
        return Err(Error::invariant(format!(
            "{} codings of {x}, expected between 1 and {k}",
            starts.len()
        )));
    }
    // walk one period from every start
    let mut codings = Vec::new();
    let mut ends = Vec::new();
    for &u0 in &starts {
        let mut u = u0;
        let mut word = Vec::with_capacity(p);
        for row in &succ {
            let (s, next) = row[u];
            word.push(s);
            u = next;
        }
        codings.push(word);
        ends.push(u);
    }
    let mu: Vec<usize> = ends
        .iter()
        .map(|e| starts.iter().position(|s| s == e).unwrap())
        .collect();
    let n = starts.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut c = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            c.push(j);
            j = mu[j];
        }
        cycles.push(c);
    }

    let s = cycles.len();
    let mut terms = Vec::new();
    let mut phi: i64 = 0;
    for mask in 1u64..(1u64 << s) {
        let chosen: Vec<usize> = (0..s).filter(|&m| mask >> m & 1 == 1).collect();
        let mut members: Vec<usize> = chosen.iter().flat_map(|&m| cycles[m].iter().copied()).collect();
        members.sort();
        let t = members.len();
        let level = spec
            .levels
            .get(t - 1)
            .ok_or_else(|| Error::invariant(format!("{t} codings of {x} share points but L = {}", spec.l)))?;
        // the multi-symbols a_j = {coding_i[j] : i in J} along one period
        let hat: Vec<Vec<usize>> = (0..=p)
            .map(|j| {
                let mut v: Vec<usize> = members.iter().map(|&i| codings[i][j % p]).collect();
                v.sort();
                v
            })
            .collect();
        let mut sign = BigInt::one();
        for j in 0..p {
            let (Some(from), Some(to)) = (level.index.position(&hat[j]), level.index.position(&hat[j + 1])) else {
                return Err(Error::invariant(format!(
                    "symbols {:?} of the codings of {x} are not an overlap family member",
                    hat[j]
                )));
            };
            let b = level.b_matrix.get(from, to);
            if b.is_zero() {
                return Err(Error::invariant(format!(
                    "no unique transition {:?} -> {:?} at level {t}",
                    hat[j],
                    hat[j + 1]
                )));
            }
            sign *= b;
        }
        let sign_from_matrices: i32 = if sign.is_one() { 1 } else { -1 };
        // nu restricted to J, as a permutation of positions in `members`
        let nu: Vec<usize> = members
            .iter()
            .map(|&i| members.iter().position(|&j| j == mu[i]).unwrap())
            .collect();
        let sign_from_cycles = permutation_sign(&nu);
        if sign_from_matrices != sign_from_cycles {
            return Err(Error::invariant(format!(
                "sign along the period disagrees with the cycle structure for {x}"
            )));
        }
        let contribution = if t % 2 == 1 {
            sign_from_matrices
        } else {
            -sign_from_matrices
        };
        phi += contribution as i64;
        terms.push(PhiTerm {
            cycles: chosen,
            t,
            sign: sign_from_matrices,
            contribution,
        });
    }
    Ok(PhiAudit {
        x: x.clone(),
        p,
        codings,
        mu,
        cycles,
        terms,
        phi_value: phi,
    })
}
