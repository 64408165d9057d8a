//! Slopes attained by `min_i { i z + a_i }` on `z >= 0` under a doubling
//! condition on the coefficients.

use num_traits::{Signed, Zero};

use crate::envelope::{lower_envelope, Line};
use crate::error::{Error, Result};
use crate::prevariety::ParamBound;
use crate::scalar::{q, ExtRat, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConcaveSlopes {
    Attained {
        /// Largest index with `a_{i-1} >= 2 a_i` for all `1 <= i <= t`.
        t: usize,
        /// Slopes among `0..=t` that win strictly somewhere on `z >= 0`.
        attained: Vec<usize>,
        /// `z_i = a_{i-1} - a_i` for `i = 1..=t`.
        breakpoints: Vec<Q>,
        /// Beyond this point only slopes `0..=t` matter.
        z0: Q,
    },
    /// The coefficient at this index is not positive (or `a_0` is infinite).
    Violated { index: usize },
}

fn finite_positive(a: &ExtRat) -> Option<&Q> {
    a.finite().filter(|v| v.is_positive())
}

pub fn concave_slopes(a: &[ExtRat]) -> Result<ConcaveSlopes> {
    if a.is_empty() {
        return Err(Error::precondition("no coefficients"));
    }
    if finite_positive(&a[0]).is_none() {
        return Ok(ConcaveSlopes::Violated { index: 0 });
    }
    if let Some(j) = (1..a.len()).find(|&j| matches!(a[j].finite(), Some(v) if !v.is_positive())) {
        return Ok(ConcaveSlopes::Violated { index: j });
    }
    let mut t = 0;
    while t + 1 < a.len() {
        match (finite_positive(&a[t]), finite_positive(&a[t + 1])) {
            (Some(prev), Some(cur)) if prev >= &(cur * q(2)) => t += 1,
            _ => break,
        }
    }
    let fin = |i: usize| a[i].finite().expect("finite below t").clone();
    let breakpoints: Vec<Q> = (1..=t).map(|i| fin(i - 1) - fin(i)).collect();
    let at = fin(t);
    let z0 = (t + 1..a.len())
        .filter_map(|j| a[j].finite().map(|aj| (&at - aj) / q((j - t) as i64)))
        .fold(Q::zero(), |m, z| if z > m { z } else { m });

    let (lines, idx): (Vec<Line<Q>>, Vec<usize>) = a
        .iter()
        .enumerate()
        .filter_map(|(i, ai)| ai.finite().map(|v| (Line::new(q(i as i64), v.clone()), i)))
        .unzip();
    let env = lower_envelope(lines, &ParamBound::Finite(Q::zero()), &ParamBound::PosInf);
    let mut attained: Vec<usize> = env
        .pieces
        .iter()
        .filter_map(|p| p.strict_winner())
        .map(|l| idx[l])
        .filter(|&i| i <= t)
        .collect();
    attained.sort();
    attained.dedup();
    // at each breakpoint exactly the two neighbouring slopes tie
    for (i, z) in breakpoints.iter().enumerate() {
        let ties: Vec<usize> = env.ties_at(z).into_iter().map(|l| idx[l]).collect();
        debug_assert_eq!(ties, vec![i, i + 1], "breakpoint {z}");
    }
    Ok(ConcaveSlopes::Attained {
        t,
        attained,
        breakpoints,
        z0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(v: &[Option<i64>]) -> Vec<ExtRat> {
        v.iter()
            .map(|x| match x {
                Some(n) => ExtRat::Finite(q(*n)),
                None => ExtRat::Inf,
            })
            .collect()
    }

    #[test]
    fn doubling_example() {
        let r = concave_slopes(&ext(&[Some(8), Some(4), Some(2), Some(1)])).unwrap();
        assert_eq!(
            r,
            ConcaveSlopes::Attained {
                t: 3,
                attained: vec![0, 1, 2, 3],
                breakpoints: vec![q(4), q(2), q(1)],
                z0: q(0),
            }
        );
        let padded = concave_slopes(&ext(&[Some(8), Some(4), Some(2), Some(1), None, None])).unwrap();
        assert_eq!(padded, r);
    }

    #[test]
    fn single_and_violations() {
        let r = concave_slopes(&ext(&[Some(3)])).unwrap();
        assert!(matches!(r, ConcaveSlopes::Attained { t: 0, ref attained, .. } if attained == &[0]));
        assert_eq!(
            concave_slopes(&ext(&[Some(8), Some(-1)])).unwrap(),
            ConcaveSlopes::Violated { index: 1 }
        );
        assert_eq!(concave_slopes(&ext(&[None, Some(1)])).unwrap(), ConcaveSlopes::Violated { index: 0 });
    }

    #[test]
    fn finite_tail_sets_threshold() {
        // a_2 = 3 breaks the doubling, so t = 1
        let r = concave_slopes(&ext(&[Some(8), Some(4), Some(3)])).unwrap();
        match r {
            ConcaveSlopes::Attained { t, attained, z0, .. } => {
                assert_eq!(t, 1);
                assert_eq!(attained, vec![0, 1]);
                assert_eq!(z0, q(1));
                assert!(z0 < q(4));
            }
            other => panic!("{other:?}"),
        }
    }
}
