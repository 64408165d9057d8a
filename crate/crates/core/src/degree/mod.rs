//! Degree bounds: subadditivity, certificate refinement and stars.

mod concave;
mod refine;
mod star;

pub use concave::{concave_slopes, ConcaveSlopes};
pub use refine::{build_newton_lift, refine_certificate, LiftEdge, NewtonLift, Refinement};
pub use star::{star_b, star_c, star_d, star_lower_construct, star_sweep, star_upper_check, StarConstruction, StarRow, UpperCheck};

use crate::error::{Error, Result};
use crate::hilbert::{count_classes, hilbert_sweep, MonomialGrid, Shape, GRID_BUDGET};
use crate::independence::SearchOptions;
use crate::prevariety::{Branch, Prevariety, Star};
use crate::scalar::{q, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    pub lower: Q,
    pub upper: Q,
    /// Where each bound came from.
    pub evidence: Vec<String>,
}

/// `max_k (a_k - c) / k`, a lower bound on `lim a_k / k` for sequences with
/// `a_{kr} >= r (a_k - c)`. Returns the bound and the `k` attaining it.
pub fn subadditive_lower(a: &[(u32, usize)], c: usize) -> Result<(Q, u32)> {
    if a.windows(2).any(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1) {
        return Err(Error::precondition("values must be non-decreasing in k"));
    }
    a.iter()
        .filter(|&&(k, _)| k > 0)
        .map(|&(k, v)| ((q(v as i64) - q(c as i64)) / q(k as i64), k))
        .fold(None, |best: Option<(Q, u32)>, cur| match best {
            Some(b) if b.0 >= cur.0 => Some(b),
            _ => Some(cur),
        })
        .ok_or_else(|| Error::precondition("no values with k >= 1"))
}

/// Bounds on `lim TH(k) / k` for `V` of dimension at most one: the lower
/// bound from the Hilbert sweep up to `kmax`, the upper bound from per-branch
/// class-count slopes at `kmax`.
pub fn degree_bounds(v: &Prevariety, shape: Shape, kmax: u32, opts: &SearchOptions) -> Result<DegreeBounds> {
    if kmax == 0 {
        return Err(Error::precondition("kmax must be at least 1"));
    }
    let branches = v.branches()?;
    let c = branches.len();
    let n = v.ambient_dim();
    let records = hilbert_sweep(v, shape, 1..=kmax, opts)?;
    let seq: Vec<(u32, usize)> = records.iter().map(|r| (r.k, r.lower)).collect();
    let (lower, at) = subadditive_lower(&seq, c)?;
    let mut evidence = vec![format!(
        "lower: (TH({at}) - c) / {at} with TH({at}) >= {} and c = {c} branches",
        records[at as usize - 1].lower
    )];
    let mut upper = Q::from_integer(0.into());
    for (l, br) in branches.iter().enumerate() {
        let slope = match br {
            Branch::Point(_) => 0,
            Branch::Segment(seg) => {
                let dir = vec![seg.direction_q()];
                let hi = count_classes(&dir, &MonomialGrid::new(n, kmax, shape), GRID_BUDGET)?.count();
                let lo = count_classes(&dir, &MonomialGrid::new(n, kmax - 1, shape), GRID_BUDGET)?.count();
                hi - lo
            }
        };
        evidence.push(format!("upper: branch {} class-count slope {slope} at k = {kmax}", l + 1));
        upper += q(slope as i64);
    }
    Ok(DegreeBounds { lower, upper, evidence })
}

/// Box-grid bounds for a planar star: the lower bound from the integer-point
/// recursion for `C < k <= kmax`, the upper bound `B`.
pub fn star_degree_bounds(star: &Star, kmax: u32) -> Result<DegreeBounds> {
    let c = star.directions().len();
    let b = star_b(star);
    let mut seq = Vec::new();
    let mut threshold = None;
    for k in 1..=kmax {
        match star_lower_construct(star, k) {
            Ok((con, _)) => seq.push((k, con.size())),
            Err(Error::BelowThreshold { threshold: t, .. }) => threshold = Some(t),
            Err(e) => return Err(e),
        }
    }
    if seq.is_empty() {
        return Err(Error::BelowThreshold {
            k: kmax,
            threshold: threshold.unwrap_or(kmax),
        });
    }
    let (lower, at) = subadditive_lower(&seq, c)?;
    let w = seq.iter().find(|&&(k, _)| k == at).map_or(0, |&(_, s)| s);
    Ok(DegreeBounds {
        lower,
        upper: q(b),
        evidence: vec![
            format!("lower: (|W| - c) / {at} with |W| = {w} and c = {c} rays"),
            format!("upper: B = {b} from TH(k) <= kB + 1"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Point;
    use crate::prevariety::{ParamBound, Segment};
    use crate::scalar::q_frac;

    #[test]
    fn subadditive_examples() {
        let a: Vec<(u32, usize)> = (1..=5).map(|k| (k, 2 * k as usize)).collect();
        assert_eq!(subadditive_lower(&a, 1).unwrap(), (q_frac(9, 5), 5));
        let a: Vec<(u32, usize)> = (1..=5).map(|k| (k, k as usize)).collect();
        assert_eq!(subadditive_lower(&a, 0).unwrap().0, q(1));
        assert!(subadditive_lower(&[], 0).is_err());
        assert!(subadditive_lower(&[(1, 3), (2, 1)], 0).is_err());
    }

    #[test]
    fn segment_and_point() {
        let seg = Segment::new(Point::from_ints(&[0, 0]), vec![1, -1], ParamBound::Finite(q(-3)), ParamBound::Finite(q(3))).unwrap();
        let v = Prevariety::from_segments(2, vec![seg]).unwrap();
        let d = degree_bounds(&v, Shape::Simplex, 6, &SearchOptions::default()).unwrap();
        assert_eq!((d.lower, d.upper), (q(2), q(2)));

        let p = Prevariety::from_points(&[Point::from_ints(&[1, 1])]).unwrap();
        let d = degree_bounds(&p, Shape::Simplex, 4, &SearchOptions::default()).unwrap();
        assert_eq!((d.lower, d.upper), (q(0), q(0)));
    }

    #[test]
    fn tropical_line_star() {
        let s = Star::new(Point::origin(2), vec![vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        let d = star_degree_bounds(&s, 30).unwrap();
        assert_eq!(d.upper, q(2));
        assert!(d.lower > q_frac(3, 2) && d.lower <= q(2));
    }
}
