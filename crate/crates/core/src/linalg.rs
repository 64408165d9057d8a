//! Dense exact linear algebra over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Q;

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Reduced row-echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Q>]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{x : rows * x = 0}` in `Q^n`, one vector per free column, each
/// scaled to a primitive integer vector with first nonzero entry positive.
pub fn nullspace(rows: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let (r, pivots) = rref(rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            primitive_q(&v)
        })
        .collect()
}

/// Scales a nonzero rational vector to a primitive integer vector with
/// positive first nonzero entry.
pub fn primitive_q(v: &[Q]) -> Vec<Q> {
    primitive_int(v).into_iter().map(Q::from_integer).collect()
}

pub fn primitive_int(v: &[Q]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// Solves `a * x = b` for square invertible `a`.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(r.iter().map(|row| row[n].clone()).collect())
}

/// Transpose of a rectangular matrix.
pub fn transpose(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|c| m.iter().map(|r| r[c].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, q_frac};

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn nullspace_of_line() {
        assert_eq!(nullspace(&[v(&[1, 1])], 2), vec![v(&[1, -1])]);
        assert_eq!(nullspace(&[v(&[2, 3])], 2), vec![v(&[3, -2])]);
        assert!(nullspace(&[v(&[1, 0]), v(&[0, 1])], 2).is_empty());
        assert_eq!(nullspace(&[], 2).len(), 2);
    }

    #[test]
    fn rref_rank() {
        let rows = vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1])];
        assert_eq!(rank(&rows), 2);
        let (r, p) = rref(&rows);
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r[0], v(&[1, 0, 1]));
    }

    #[test]
    fn solve_square() {
        let a = vec![v(&[2, 1]), v(&[1, 3])];
        let x = solve(&a, &v(&[3, 5])).unwrap();
        assert_eq!(x, vec![q_frac(4, 5), q_frac(7, 5)]);
        assert!(solve(&[v(&[1, 1]), v(&[2, 2])], &v(&[1, 2])).is_none());
    }

    #[test]
    fn primitive_scaling() {
        let p = primitive_int(&[q_frac(-2, 3), q_frac(4, 3)]);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
