use super::arcs::ArcSet;
use super::cover::{transition_matrix, MarkovCover};
use crate::error::{Error, Result};
use crate::ruellemap::CirclePoint;
use crate::shiftspace::TransitionMatrix;

fn check_admissible(a: &TransitionMatrix, word: &[usize]) -> Result<()> {
    if let Some(&s) = word.iter().find(|&&s| s >= a.k()) {
        return Err(Error::precondition(format!("symbol {s} out of range")));
    }
    if let Some(i) = (1..word.len()).find(|&i| !a.get(word[i - 1], word[i])) {
        return Err(Error::precondition(format!(
            "word is not admissible: no transition {} -> {} at position {i}",
            word[i - 1],
            word[i]
        )));
    }
    Ok(())
}

/// `F_n = R_{a_0} ∩ f^{-1}(R_{a_1}) ∩ ... ∩ f^{-n}(R_{a_n})`, certified
/// nonempty and of diameter at most `lambda^n` times the largest rectangle.
pub fn pi_decode(cover: &MarkovCover, prefix: &[usize]) -> Result<ArcSet> {
    let a = transition_matrix(cover)?;
    if prefix.is_empty() {
        return Err(Error::precondition("empty prefix"));
    }
    check_admissible(&a, prefix)?;
    let rects = cover.rectangles();
    let mut g = rects[*prefix.last().unwrap()].set().clone();
    for &s in prefix.iter().rev().skip(1) {
        g = rects[s].set().intersection(&g.preimage_closed(cover.map()));
    }
    let n = prefix.len() - 1;
    let max_diam = rects.iter().map(|r| r.diameter()).max().unwrap();
    let lambda = &cover.constants().lambda;
    let bound = (0..n).fold(max_diam, |acc, _| acc * lambda);
    if g.is_empty() || g.diameter() > bound {
        return Err(Error::invariant(format!(
            "cylinder set for {prefix:?} fails the nesting certificate"
        )));
    }
    Ok(g)
}

/// All admissible words `a_0..a_n` with `f^i(x) ∈ R_{a_i}`, sorted.
pub fn code_point(cover: &MarkovCover, x: &CirclePoint, n: usize) -> Result<Vec<Vec<usize>>> {
    let a = transition_matrix(cover)?;
    let orbit = cover.map().orbit(x, n);
    let rects = cover.rectangles();
    let hits: Vec<Vec<usize>> = orbit
        .iter()
        .map(|y| {
            (0..rects.len())
                .filter(|&i| rects[i].set().contains(y.value()))
                .collect()
        })
        .collect();
    let a = &a;
    let mut words: Vec<Vec<usize>> = hits[0].iter().map(|&s| vec![s]).collect();
    for level in &hits[1..] {
        words = words
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                level
                    .iter()
                    .filter(move |&&s| a.get(last, s))
                    .map(move |&s| {
                        let mut w2 = w.clone();
                        w2.push(s);
                        w2
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    words.sort();
    if words.len() > cover.map().degree() as usize {
        return Err(Error::invariant(format!(
            "{} codings of {x} exceed the degree {}",
            words.len(),
            cover.map().degree()
        )));
    }
    Ok(words)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use crate::markovcover::equal_subdivision_cover;
    use crate::ruellemap::CircleMap;

    fn cover5() -> MarkovCover {
        equal_subdivision_cover(&CircleMap::multiply_by(2).unwrap(), 5).unwrap()
    }

    #[test]
    fn decode_examples() {
        let c = cover5();
        assert_eq!(
            pi_decode(&c, &[0]).unwrap(),
            ArcSet::interval(&rat(0, 1), &rat(1, 5), true)
        );
        assert_eq!(
            pi_decode(&c, &[0, 0]).unwrap(),
            ArcSet::interval(&rat(0, 1), &rat(1, 10), true)
        );
        let f = pi_decode(&c, &[0, 1, 2]).unwrap();
        assert_eq!(f, ArcSet::interval(&rat(1, 10), &rat(3, 20), true));
        assert_eq!(f.diameter(), rat(1, 20));
        assert!(pi_decode(&c, &[0, 2]).is_err());
    }

    #[test]
    fn code_examples() {
        let c = cover5();
        assert_eq!(
            code_point(&c, &CirclePoint::from_ratio(1, 10), 0).unwrap(),
            vec![vec![0]]
        );
        assert_eq!(
            code_point(&c, &CirclePoint::from_ratio(1, 5), 0).unwrap(),
            vec![vec![0], vec![1]]
        );
        assert_eq!(
            code_point(&c, &CirclePoint::zero(), 3).unwrap(),
            vec![vec![0, 0, 0, 0], vec![4, 4, 4, 4]]
        );
    }
}
