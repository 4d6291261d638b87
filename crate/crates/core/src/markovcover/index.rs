use num_bigint::BigInt;
use serde::Serialize;

use super::arcs::ArcSet;
use super::cover::{MarkovCover, Rectangle};
use crate::error::{Error, Result};
use crate::exactalg::IntMatrix;
use crate::shiftspace::TransitionMatrix;

/// The `r`-subsets of rectangle indices whose closed rectangles share a
/// point, each sorted, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexFamily {
    pub r: usize,
    pub members: Vec<Vec<usize>>,
}

impl IndexFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, member: &[usize]) -> Option<usize> {
        self.members.binary_search_by(|m| m.as_slice().cmp(member)).ok()
    }
}

/// Signed transition data at multiplicity `r`, indexed by `index.members`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedTransition {
    pub r: usize,
    pub index: IndexFamily,
    pub a_matrix: IntMatrix,
    pub b_matrix: IntMatrix,
}

/// Levels `I_1, ..., I_L` from a membership test on index sets; each level
/// extends members of the previous one, since any subset of an
/// intersecting family intersects.
pub fn families_by(n: usize, mut intersects: impl FnMut(&[usize]) -> bool) -> Vec<IndexFamily> {
    let mut out = vec![IndexFamily {
        r: 1,
        members: (0..n).map(|i| vec![i]).collect(),
    }];
    if n == 0 {
        return Vec::new();
    }
    loop {
        let prev = out.last().unwrap();
        let mut next = Vec::new();
        for m in &prev.members {
            for j in m.last().unwrap() + 1..n {
                let mut cand = m.clone();
                cand.push(j);
                if intersects(&cand) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return out;
        }
        let r = prev.r + 1;
        out.push(IndexFamily { r, members: next });
    }
}

/// `I_r` for `r = 1..L` from exact closed intersections of the rectangles.
pub fn index_families(cover: &MarkovCover) -> Result<Vec<IndexFamily>> {
    cover.require_valid()?;
    let rects: Vec<&Rectangle> = cover.rectangles().iter().collect();
    Ok(families_by(rects.len(), |idx| {
        let sets: Vec<&ArcSet> = idx.iter().map(|&i| rects[i].set()).collect();
        !ArcSet::combine(&sets, |b| b.iter().all(|&x| x)).is_empty()
    }))
}

/// Abstract mode: `overlapping` lists index sets known to share a point;
/// every subset of a listed set intersects too.
pub fn index_families_abstract(n: usize, overlapping: &[Vec<usize>]) -> Result<Vec<IndexFamily>> {
    for s in overlapping {
        if let Some(&bad) = s.iter().find(|&&i| i >= n) {
            return Err(Error::precondition(format!(
                "index {bad} out of range for {n} rectangles"
            )));
        }
    }
    Ok(families_by(n, |idx| {
        overlapping.iter().any(|s| idx.iter().all(|i| s.contains(i)))
    }))
}

/// Permutations `mu` with `A[s_i][t_mu(i)] = 1` for all `i`, stopping at the
/// second witness.
fn unique_matching(a: &TransitionMatrix, s: &[usize], t: &[usize]) -> Option<Vec<usize>> {
    fn search(
        a: &TransitionMatrix,
        s: &[usize],
        t: &[usize],
        i: usize,
        used: &mut [bool],
        current: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if found.len() > 1 {
            return;
        }
        if i == s.len() {
            found.push(current.clone());
            return;
        }
        for j in 0..t.len() {
            if !used[j] && a.get(s[i], t[j]) {
                used[j] = true;
                current.push(j);
                search(a, s, t, i + 1, used, current, found);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut found = Vec::new();
    search(a, s, t, 0, &mut vec![false; t.len()], &mut Vec::new(), &mut found);
    if found.len() == 1 {
        found.pop()
    } else {
        None
    }
}

/// Sign of a permutation given as a list of images.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
        }
    }
    if (perm.len() - cycles).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `A^(r)` and `B^(r)`: an entry is nonzero exactly when a unique matching
/// permutation exists, and then `B` carries its sign.
pub fn signed_matrices(a: &TransitionMatrix, fam: &IndexFamily) -> Result<SignedTransition> {
    if let Some(m) = fam
        .members
        .iter()
        .find(|m| m.iter().any(|&i| i >= a.k()) || m.len() != fam.r)
    {
        return Err(Error::precondition(format!(
            "index member {m:?} does not fit a {}-symbol matrix at r = {}",
            a.k(),
            fam.r
        )));
    }
    let n = fam.len();
    let mut am = IntMatrix::zeros(n);
    let mut bm = IntMatrix::zeros(n);
    for (p, s) in fam.members.iter().enumerate() {
        for (q, t) in fam.members.iter().enumerate() {
            if let Some(mu) = unique_matching(a, s, t) {
                am.set(p, q, BigInt::from(1));
                bm.set(p, q, BigInt::from(permutation_sign(&mu)));
            }
        }
    }
    Ok(SignedTransition {
        r: fam.r,
        index: fam.clone(),
        a_matrix: am,
        b_matrix: bm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markovcover::{equal_subdivision_cover, transition_matrix};
    use crate::ruellemap::CircleMap;

    #[test]
    fn doubling_five_families() {
        let cover = equal_subdivision_cover(&CircleMap::multiply_by(2).unwrap(), 5).unwrap();
        let fams = index_families(&cover).unwrap();
        assert_eq!(fams.len(), 2);
        assert_eq!(
            fams[1].members,
            vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]
        );
    }

    #[test]
    fn doubling_five_signed() {
        let cover = equal_subdivision_cover(&CircleMap::multiply_by(2).unwrap(), 5).unwrap();
        let a = transition_matrix(&cover).unwrap();
        let fams = index_families(&cover).unwrap();
        let s1 = signed_matrices(&a, &fams[0]).unwrap();
        assert_eq!(s1.a_matrix, a.to_int_matrix());
        assert_eq!(s1.b_matrix, a.to_int_matrix());
        let s2 = signed_matrices(&a, &fams[1]).unwrap();
        let m = &fams[1].members;
        let image = |from: &[usize]| -> Vec<usize> {
            let p = fams[1].position(from).unwrap();
            (0..m.len())
                .filter(|&q| s2.b_matrix.get(p, q) != &BigInt::from(0))
                .collect()
        };
        let pos = |x: &[usize]| fams[1].position(x).unwrap();
        assert_eq!(image(&[0, 1]), vec![pos(&[1, 2])]);
        assert_eq!(image(&[1, 2]), vec![pos(&[3, 4])]);
        assert_eq!(image(&[3, 4]), vec![pos(&[2, 3])]);
        assert_eq!(image(&[2, 3]), vec![pos(&[0, 1])]);
        assert_eq!(image(&[0, 4]), vec![pos(&[0, 4])]);
        assert_eq!(s2.b_matrix, s2.a_matrix);
    }

    #[test]
    fn non_unique_is_zero() {
        let a = TransitionMatrix::full_shift(2);
        let fam = IndexFamily {
            r: 2,
            members: vec![vec![0, 1]],
        };
        let s = signed_matrices(&a, &fam).unwrap();
        assert_eq!(s.a_matrix.get(0, 0), &BigInt::from(0));
    }

    #[test]
    fn signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        // swap forced by the matrix
        let a = TransitionMatrix::from_u8(&[vec![0, 1], vec![1, 0]]).unwrap();
        let fam = IndexFamily {
            r: 2,
            members: vec![vec![0, 1]],
        };
        assert_eq!(signed_matrices(&a, &fam).unwrap().b_matrix.get(0, 0), &BigInt::from(-1));
    }

    #[test]
    fn abstract_mode() {
        let fams = index_families_abstract(4, &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(fams.len(), 3);
        assert_eq!(fams[1].members, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 3]]);
        assert_eq!(fams[2].members, vec![vec![0, 1, 2]]);
        assert!(index_families_abstract(2, &[vec![0, 5]]).is_err());
    }
}
