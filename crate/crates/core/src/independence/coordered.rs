//! Points whose coordinates are ordered opposite to a given vector family.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::Point;
use crate::prevariety::Polyhedron;
use crate::scalar::{q, Q};

/// Per-coordinate dense ranks of a family of vectors.
fn dense_ranks(bs: &[Vec<Q>], m: usize) -> Vec<Vec<Q>> {
    let mut ranks = vec![vec![Q::zero(); m]; bs.len()];
    for j in 0..m {
        let distinct: BTreeSet<&Q> = bs.iter().map(|b| &b[j]).collect();
        let distinct: Vec<&Q> = distinct.into_iter().collect();
        for (i, b) in bs.iter().enumerate() {
            let r = distinct.binary_search(&&b[j]).expect("value present");
            ranks[i][j] = q(r as i64);
        }
    }
    ranks
}

/// `u[i1][j] <= u[i2][j]` iff `v[i1][j] >= v[i2][j]` for all pairs and
/// coordinates.
pub fn is_co_ordered(us: &[Vec<Q>], vs: &[Vec<Q>]) -> bool {
    us.len() == vs.len()
        && us.iter().zip(vs).all(|(u, v)| u.len() == v.len())
        && (0..us.len()).all(|a| {
            (0..us.len()).all(|b| (0..us[a].len()).all(|j| (us[a][j] <= us[b][j]) == (vs[a][j] >= vs[b][j])))
        })
}

/// Points of `p` co-ordered with `bs` in the chosen coordinates. The
/// projection of the direction space of `p` onto `coords` must be
/// bijective.
pub fn co_ordered_points(bs: &[Vec<Q>], p: &Polyhedron, coords: &[usize]) -> Result<Vec<Point>> {
    let m = coords.len();
    if p.dim() != m {
        return Err(Error::precondition(format!(
            "polyhedron has dimension {} but {m} coordinates were chosen",
            p.dim()
        )));
    }
    if let Some(b) = bs.iter().find(|b| b.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: b.len(),
        });
    }
    for (i, a) in bs.iter().enumerate() {
        if bs[..i].contains(a) {
            return Err(Error::precondition("family must be pairwise distinct"));
        }
    }
    let x0 = p.relative_interior();
    if m == 0 {
        return if bs.len() <= 1 {
            Ok(bs.iter().map(|_| x0.clone()).collect())
        } else {
            Err(Error::Construction("a point cannot host distinct co-ordered points".into()))
        };
    }
    // unit moves along each chosen coordinate inside the direction space
    let basis = p.basis();
    let proj: Vec<Vec<Q>> = (0..m)
        .map(|a| basis.iter().map(|l| l[coords[a]].clone()).collect())
        .collect();
    let mut moves: Vec<Vec<Q>> = Vec::with_capacity(m);
    for j in 0..m {
        let mut e = vec![Q::zero(); m];
        e[j] = Q::one();
        let c = linalg::solve(&proj, &e)
            .ok_or_else(|| Error::precondition("projection onto the chosen coordinates is not full rank"))?;
        let mut dir = vec![Q::zero(); p.ambient_dim()];
        for (ck, l) in c.iter().zip(basis) {
            for (d, x) in dir.iter_mut().zip(l) {
                *d = &*d + ck * x;
            }
        }
        moves.push(dir);
    }
    let ranks = dense_ranks(bs, m);
    let mut delta = Q::one();
    for _ in 0..256 {
        let pts: Vec<Point> = ranks
            .iter()
            .map(|r| {
                let mut x = x0.clone();
                for (j, rj) in r.iter().enumerate() {
                    x = x.offset(&moves[j], &(-(&delta * rj)));
                }
                x
            })
            .collect();
        if pts.iter().all(|x| p.contains(x)) {
            return Ok(pts);
        }
        delta /= q(2);
    }
    Err(Error::Construction("no step size keeps the co-ordered points inside".into()))
}
