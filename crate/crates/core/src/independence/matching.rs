//! Minimum-weight perfect matchings of square evaluation matrices.

use crate::error::{Error, Result};
use crate::scalar::{PerturbedScalar, Q};

use super::EvalMatrix;

/// Above this size the assignment is solved with the Hungarian method.
pub const BRUTE_FORCE_LIMIT: usize = 8;

/// Default bound on the matrix size for exhaustive tropical rank.
pub const RANK_BUDGET: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingResult {
    /// Row `i` is matched to column `permutation[i]`.
    pub permutation: Vec<usize>,
    pub value: PerturbedScalar,
    pub unique: bool,
    /// Second-best value minus the optimum; infinite when no other finite
    /// matching exists.
    pub gap: PerturbedScalar,
}

impl MatchingResult {
    pub fn is_identity(&self) -> bool {
        self.permutation.iter().enumerate().all(|(i, &p)| i == p)
    }
}

fn check_square(a: &EvalMatrix) -> Result<usize> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if a.rows() == 0 {
        return Err(Error::precondition("empty matrix"));
    }
    Ok(a.rows())
}

pub fn min_matching(a: &EvalMatrix) -> Result<MatchingResult> {
    let s = check_square(a)?;
    if s <= BRUTE_FORCE_LIMIT {
        brute_force(a)
    } else {
        hungarian_matching(a)
    }
}

/// Exhaustive enumeration of all `s!` permutations.
pub fn brute_force(a: &EvalMatrix) -> Result<MatchingResult> {
    let s = check_square(a)?;
    struct State {
        best: Option<(PerturbedScalar, Vec<usize>)>,
        second: PerturbedScalar,
    }
    fn rec(a: &EvalMatrix, row: usize, used: &mut [bool], perm: &mut Vec<usize>, acc: PerturbedScalar, st: &mut State) {
        let s = used.len();
        if row == s {
            match &st.best {
                None => st.best = Some((acc, perm.clone())),
                Some((b, _)) if acc < *b => {
                    st.second = b.clone();
                    st.best = Some((acc, perm.clone()));
                }
                Some(_) => {
                    if acc < st.second {
                        st.second = acc;
                    }
                }
            }
            return;
        }
        for c in 0..s {
            if used[c] || !a.get(row, c).is_finite() {
                continue;
            }
            used[c] = true;
            perm.push(c);
            rec(a, row + 1, used, perm, &acc + a.get(row, c), st);
            perm.pop();
            used[c] = false;
        }
    }
    let mut st = State {
        best: None,
        second: PerturbedScalar::inf(),
    };
    rec(a, 0, &mut vec![false; s], &mut Vec::with_capacity(s), PerturbedScalar::zero(), &mut st);
    let (value, permutation) = st.best.ok_or(Error::NoFiniteMatching)?;
    let gap = gap_of(&st.second, &value);
    Ok(MatchingResult {
        permutation,
        unique: gap.is_positive(),
        value,
        gap,
    })
}

fn gap_of(second: &PerturbedScalar, best: &PerturbedScalar) -> PerturbedScalar {
    if second.is_finite() {
        second - best
    } else {
        PerturbedScalar::inf()
    }
}

/// Finite stand-in for `+inf`, larger than any finite matching can reach.
fn big_m(a: &EvalMatrix) -> PerturbedScalar {
    let s = a.rows() as i64;
    let mut bound = PerturbedScalar::zero();
    for row in a.entries() {
        for e in row.iter().filter(|e| e.is_finite()) {
            let abs = if e < &PerturbedScalar::zero() { -e.clone() } else { e.clone() };
            if abs > bound {
                bound = abs;
            }
        }
    }
    (bound + PerturbedScalar::int(1)).scale(&Q::from_integer((4 * s + 4).into()))
}

/// Shortest augmenting path method with row/column potentials.
fn hungarian(cost: &[Vec<PerturbedScalar>]) -> Vec<usize> {
    let n = cost.len();
    let zero = PerturbedScalar::zero();
    let mut u = vec![zero.clone(); n + 1];
    let mut v = vec![zero.clone(); n + 1];
    // p[j] = row matched to column j (1-based, 0 = none)
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv: Vec<Option<PerturbedScalar>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta: Option<PerturbedScalar> = None;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = &(&cost[i0 - 1][j - 1] - &u[i0]) - &v[j];
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[p[j]] = &u[p[j]] + &delta;
                    v[j] = &v[j] - &delta;
                } else if let Some(m) = minv[j].as_mut() {
                    *m = &*m - &delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[p[j] - 1] = j - 1;
    }
    perm
}

fn solve_finite(a: &EvalMatrix, m: &PerturbedScalar) -> Option<(PerturbedScalar, Vec<usize>)> {
    let cost: Vec<Vec<PerturbedScalar>> = a
        .entries()
        .iter()
        .map(|row| row.iter().map(|e| if e.is_finite() { e.clone() } else { m.clone() }).collect())
        .collect();
    let perm = hungarian(&cost);
    let mut value = PerturbedScalar::zero();
    for (i, &j) in perm.iter().enumerate() {
        if !a.get(i, j).is_finite() {
            return None;
        }
        value = &value + a.get(i, j);
    }
    Some((value, perm))
}

/// Cheapest single exchange cycle against the optimal `perm`: every other
/// permutation is `perm` composed with disjoint cycles, each adding a
/// nonnegative cost, so the second-best value is reached by one cycle.
/// Edge `i -> l` gives row `i` the column of row `l`.
fn min_exchange_cycle(a: &EvalMatrix, perm: &[usize]) -> Option<PerturbedScalar> {
    let s = perm.len();
    let mut dist: Vec<Vec<Option<PerturbedScalar>>> = (0..s)
        .map(|i| {
            (0..s)
                .map(|l| {
                    let e = a.get(i, perm[l]);
                    (l != i && e.is_finite()).then(|| e - a.get(i, perm[i]))
                })
                .collect()
        })
        .collect();
    // no negative cycles since perm is optimal
    for k in 0..s {
        for i in 0..s {
            let Some(ik) = dist[i][k].clone() else { continue };
            for j in 0..s {
                if let Some(kj) = &dist[k][j] {
                    let via = &ik + kj;
                    if dist[i][j].as_ref().is_none_or(|d| via < *d) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
    }
    (0..s).filter_map(|i| dist[i][i].clone()).min()
}

/// Hungarian solve plus a minimum exchange-cycle search for the gap to the
/// second-best matching; `O(s^3)`. [`min_matching`] uses it above the
/// enumeration limit.
pub fn hungarian_matching(a: &EvalMatrix) -> Result<MatchingResult> {
    check_square(a)?;
    let (value, permutation) = solve_finite(a, &big_m(a)).ok_or(Error::NoFiniteMatching)?;
    let gap = min_exchange_cycle(a, &permutation).unwrap_or_else(PerturbedScalar::inf);
    Ok(MatchingResult {
        permutation,
        unique: gap.is_positive(),
        value,
        gap,
    })
}

pub fn is_trop_nonsingular(a: &EvalMatrix) -> Result<bool> {
    match min_matching(a) {
        Ok(m) => Ok(m.unique),
        Err(Error::NoFiniteMatching) => Ok(false),
        Err(e) => Err(e),
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Size of the largest tropically nonsingular square submatrix.
pub fn tropical_rank(a: &EvalMatrix, bound: usize) -> Result<usize> {
    let (m, s) = (a.rows(), a.cols());
    if m == s && m > 0 && is_trop_nonsingular(a)? {
        return Ok(m);
    }
    if m > bound || s > bound {
        return Err(Error::RankBudgetExceeded { rows: m, cols: s, bound });
    }
    for r in (1..=m.min(s)).rev() {
        let row_sets = combinations(m, r);
        let col_sets = combinations(s, r);
        for rows in &row_sets {
            for cols in &col_sets {
                if is_trop_nonsingular(&a.submatrix(rows, cols))? {
                    return Ok(r);
                }
            }
        }
    }
    Ok(0)
}
