//! Fourier–Motzkin elimination with back-substitution.
//!
//! Handles mixed strict/non-strict systems `a . x >= b` / `a . x > b` with a
//! rational coefficient matrix. The right-hand sides live in any ordered
//! `Q`-vector space, which lets the same routine run over plain rationals and
//! over [`PerturbedScalar`] values. Intended for the small systems (a handful
//! of variables) arising in this crate.

use std::collections::BTreeMap;
use std::ops::{Add, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::{PerturbedScalar, Q};

/// An ordered vector space over `Q`.
pub trait LinearValue: Clone + Ord + Add<Output = Self> + Sub<Output = Self> {
    fn from_q(v: Q) -> Self;
    fn scale(&self, f: &Q) -> Self;
}

impl LinearValue for Q {
    fn from_q(v: Q) -> Self {
        v
    }
    fn scale(&self, f: &Q) -> Self {
        self * f
    }
}

/// Only finite values may be used here.
impl LinearValue for PerturbedScalar {
    fn from_q(v: Q) -> Self {
        PerturbedScalar::finite(v)
    }
    fn scale(&self, f: &Q) -> Self {
        PerturbedScalar::scale(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ineq<V> {
    pub coeffs: Vec<Q>,
    pub rhs: V,
    pub strict: bool,
}

impl<V: LinearValue> Ineq<V> {
    pub fn ge(coeffs: Vec<Q>, rhs: V) -> Self {
        Ineq { coeffs, rhs, strict: false }
    }

    pub fn gt(coeffs: Vec<Q>, rhs: V) -> Self {
        Ineq { coeffs, rhs, strict: true }
    }

    /// `coeffs . x = rhs` as two inequalities.
    pub fn eq(coeffs: Vec<Q>, rhs: V) -> [Self; 2] {
        let neg: Vec<Q> = coeffs.iter().map(|c| -c).collect();
        [
            Ineq::ge(coeffs, rhs.clone()),
            Ineq::ge(neg, rhs.scale(&-Q::one())),
        ]
    }

    pub fn holds(&self, x: &[V]) -> bool {
        let lhs = self
            .coeffs
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .fold(V::from_q(Q::zero()), |acc, (c, xi)| acc + xi.scale(c));
        if self.strict {
            lhs > self.rhs
        } else {
            lhs >= self.rhs
        }
    }

    /// Scales so that the first nonzero coefficient has absolute value one.
    fn normalized(mut self) -> Self {
        if let Some(c) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let f = c.abs().recip();
            for x in self.coeffs.iter_mut() {
                *x = &*x * &f;
            }
            self.rhs = self.rhs.scale(&f);
        }
        self
    }
}

/// Removes exact duplicates and keeps only the tightest of parallel rows with
/// identical normalized coefficients.
fn prune<V: LinearValue>(rows: Vec<Ineq<V>>) -> Vec<Ineq<V>> {
    let mut best: BTreeMap<Vec<Q>, (V, bool)> = BTreeMap::new();
    for r in rows {
        let r = r.normalized();
        match best.get_mut(&r.coeffs) {
            Some((rhs, strict)) => {
                if r.rhs > *rhs || (r.rhs == *rhs && r.strict) {
                    *rhs = r.rhs;
                    *strict = r.strict;
                }
            }
            None => {
                best.insert(r.coeffs, (r.rhs, r.strict));
            }
        }
    }
    best.into_iter()
        .map(|(coeffs, (rhs, strict))| Ineq { coeffs, rhs, strict })
        .collect()
}

/// Returns a point satisfying every inequality, or `None` if the system is
/// infeasible.
pub fn solve<V: LinearValue>(n: usize, system: &[Ineq<V>]) -> Option<Vec<V>> {
    let zero = V::from_q(Q::zero());
    // levels[k] holds the rows that involve only x_0..=x_k
    let mut levels: Vec<Vec<Ineq<V>>> = vec![Vec::new(); n];
    let mut current = prune(system.to_vec());
    for var in (0..n).rev() {
        let (with, without): (Vec<_>, Vec<_>) =
            current.into_iter().partition(|r| !r.coeffs[var].is_zero());
        let (pos, neg): (Vec<_>, Vec<_>) = with.iter().partition(|r| r.coeffs[var].is_positive());
        let mut next = without;
        for p in &pos {
            for m in &neg {
                let fp = p.coeffs[var].recip();
                let fm = m.coeffs[var].abs().recip();
                let coeffs = p
                    .coeffs
                    .iter()
                    .zip(&m.coeffs)
                    .map(|(a, b)| a * &fp + b * &fm)
                    .collect();
                next.push(Ineq {
                    coeffs,
                    rhs: p.rhs.scale(&fp) + m.rhs.scale(&fm),
                    strict: p.strict || m.strict,
                });
            }
        }
        levels[var] = with;
        current = prune(next);
    }
    // remaining rows have all-zero coefficients: 0 >= rhs or 0 > rhs
    for r in &current {
        let ok = if r.strict { zero > r.rhs } else { zero >= r.rhs };
        if !ok {
            return None;
        }
    }

    let mut x: Vec<V> = Vec::with_capacity(n);
    for var in 0..n {
        let mut lower: Option<(V, bool)> = None;
        let mut upper: Option<(V, bool)> = None;
        for r in &levels[var] {
            // c * x_var >= rhs - sum_{j<var} a_j x_j
            let rest = r
                .coeffs
                .iter()
                .take(var)
                .zip(&x)
                .filter(|(c, _)| !c.is_zero())
                .fold(zero.clone(), |acc, (c, xj)| acc + xj.scale(c));
            let c = &r.coeffs[var];
            let bound = (r.rhs.clone() - rest).scale(&c.recip());
            if c.is_positive() {
                tighten(&mut lower, bound, r.strict, true);
            } else {
                tighten(&mut upper, bound, r.strict, false);
            }
        }
        let v = match (lower, upper) {
            (Some((l, ls)), Some((u, us))) => {
                if l < u {
                    (l + u).scale(&Q::new(1.into(), 2.into()))
                } else if l == u && !ls && !us {
                    l
                } else {
                    return None;
                }
            }
            (Some((l, _)), None) => l + V::from_q(Q::one()),
            (None, Some((u, _))) => u - V::from_q(Q::one()),
            (None, None) => zero.clone(),
        };
        x.push(v);
    }
    debug_assert!(system.iter().all(|r| r.holds(&x)));
    Some(x)
}

fn tighten<V: LinearValue>(slot: &mut Option<(V, bool)>, b: V, strict: bool, is_lower: bool) {
    match slot {
        None => *slot = Some((b, strict)),
        Some((cur, s)) => {
            let better = if is_lower { b > *cur } else { b < *cur };
            if better {
                *slot = Some((b, strict));
            } else if b == *cur && strict {
                *s = true;
            }
        }
    }
}

pub fn feasible<V: LinearValue>(n: usize, system: &[Ineq<V>]) -> bool {
    solve(n, system).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn row(c: &[i64], r: i64) -> Ineq<Q> {
        Ineq::ge(c.iter().map(|&x| q(x)).collect(), q(r))
    }

    #[test]
    fn triangle_is_feasible() {
        // x >= 0, y >= 0, x + y <= 1
        let sys = vec![row(&[1, 0], 0), row(&[0, 1], 0), row(&[-1, -1], -1)];
        let x = solve(2, &sys).unwrap();
        assert!(sys.iter().all(|r| r.holds(&x)));
    }

    #[test]
    fn strictness_matters() {
        // x >= 1 and x <= 1 feasible; x > 1 and x <= 1 not
        let sys = vec![row(&[1], 1), row(&[-1], -1)];
        assert_eq!(solve(1, &sys).unwrap(), vec![q(1)]);
        let sys = vec![Ineq::gt(vec![q(1)], q(1)), row(&[-1], -1)];
        assert!(solve(1, &sys).is_none());
    }

    #[test]
    fn equality_pair() {
        let mut sys: Vec<Ineq<Q>> = Ineq::eq(vec![q(2), q(3)], q(6)).to_vec();
        sys.push(row(&[1, 0], 0));
        sys.push(row(&[-1, 0], -3));
        let x = solve(2, &sys).unwrap();
        assert_eq!(&x[0] * q(2) + &x[1] * q(3), q(6));
    }

    #[test]
    fn perturbed_rhs() {
        // x > eta and x < 2 eta
        let eta = |c| PerturbedScalar::eta(q(c));
        let sys = vec![
            Ineq::gt(vec![q(1)], eta(1)),
            Ineq::gt(vec![q(-1)], eta(-2)),
        ];
        let x = solve(1, &sys).unwrap();
        assert!(x[0] > eta(1) && x[0] < eta(2));
        let sys = vec![
            Ineq::gt(vec![q(1)], eta(1)),
            Ineq::gt(vec![q(-1)], eta(-1)),
        ];
        assert!(solve(1, &sys).is_none());
    }
}
