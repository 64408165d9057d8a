//! Evaluation matrices, tropical nonsingularity, dual potentials and
//! certificates of independence.

mod certificate;
mod coordered;
mod matching;
mod search;

pub use certificate::{certify_from_points, verify_certificate, Certificate, Member, Verification, Witness};
pub use coordered::{co_ordered_points, is_co_ordered};
pub use matching::{brute_force, hungarian_matching, is_trop_nonsingular, min_matching, tropical_rank, MatchingResult, BRUTE_FORCE_LIMIT, RANK_BUDGET};
pub use search::{candidate_points, rank_by_search, search_max_independent, SearchOptions, SearchOutcome};

use crate::error::{Error, Result};
use crate::poly::{eval, Point, TropPoly};
use crate::scalar::{PerturbedScalar, Q};

/// `entries[i][j] = f_i(v_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<PerturbedScalar>>,
}

impl EvalMatrix {
    pub fn new(entries: Vec<Vec<PerturbedScalar>>) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, Vec::len);
        if let Some(bad) = entries.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(EvalMatrix { rows, cols, entries })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| PerturbedScalar::int(x)).collect())
                .collect(),
        )
        .expect("rectangular input")
    }

    pub fn from_rationals(rows: Vec<Vec<Q>>) -> Result<Self> {
        Self::new(
            rows.into_iter()
                .map(|r| r.into_iter().map(PerturbedScalar::finite).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<PerturbedScalar>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &PerturbedScalar {
        &self.entries[i][j]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> EvalMatrix {
        EvalMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// New column `j` is old column `perm[j]`.
    pub fn permute_cols(&self, perm: &[usize]) -> EvalMatrix {
        let all: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&all, perm)
    }
}

pub fn build_eval_matrix(fs: &[TropPoly], vs: &[Point]) -> Result<EvalMatrix> {
    let entries = fs
        .iter()
        .map(|f| vs.iter().map(|v| eval(f, v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    EvalMatrix::new(entries)
}

/// Potentials `w` with `a[i][i] + w[i] < a[l][i] + w[l]` for all `l != i`,
/// for a square matrix whose unique minimum matching is the diagonal.
pub fn dual_potentials(a: &EvalMatrix) -> Result<Vec<PerturbedScalar>> {
    let m = min_matching(a)?;
    if !m.unique || !m.is_identity() {
        return Err(Error::precondition(
            "dual potentials need the diagonal as the unique minimum matching",
        ));
    }
    let s = a.rows();
    let delta = if m.gap.is_finite() {
        m.gap.scale(&Q::new(1.into(), ((s + 1) as i64).into()))
    } else {
        PerturbedScalar::int(1)
    };
    // w_i - w_l <= a[l][i] - a[i][i] - delta, an edge l -> i
    let mut edges: Vec<(usize, usize, PerturbedScalar)> = Vec::new();
    for i in 0..s {
        for l in 0..s {
            if i != l && a.get(l, i).is_finite() {
                edges.push((l, i, &(a.get(l, i) - a.get(i, i)) - &delta));
            }
        }
    }
    let mut w = vec![PerturbedScalar::zero(); s];
    for _ in 0..s {
        let mut changed = false;
        for (from, to, weight) in &edges {
            let cand = &w[*from] + weight;
            if cand < w[*to] {
                w[*to] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for (from, to, weight) in &edges {
        if &w[*from] + weight < w[*to] {
            return Err(Error::Construction("negative cycle in potential system".into()));
        }
    }
    for i in 0..s {
        for l in 0..s {
            if i != l {
                let lhs = a.get(i, i) + &w[i];
                let rhs = a.get(l, i) + &w[l];
                assert!(lhs < rhs, "potentials violate strictness at ({i}, {l})");
            }
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Point;

    #[test]
    fn eval_matrix_examples() {
        let fs = vec![
            TropPoly::from_ints(&[(&[0, 0], 0)]).unwrap(),
            TropPoly::from_ints(&[(&[1, 1], 0)]).unwrap(),
        ];
        let a = build_eval_matrix(&fs, &[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1])]).unwrap();
        assert_eq!(a, EvalMatrix::from_ints(&[&[0, 0], &[0, 2]]));

        let a = build_eval_matrix(&[TropPoly::from_ints(&[(&[1], 0)]).unwrap()], &[Point::from_ints(&[3])]).unwrap();
        assert_eq!(a, EvalMatrix::from_ints(&[&[3]]));

        let f = TropPoly::from_ints(&[(&[1, 0], 0), (&[0, 1], 0)]).unwrap();
        let a = build_eval_matrix(&[f], &[Point::from_ints(&[1, 2]), Point::from_ints(&[2, 1])]).unwrap();
        assert_eq!(a, EvalMatrix::from_ints(&[&[1, 1]]));
    }

    #[test]
    fn potentials_examples() {
        for rows in [
            vec![vec![0, 5], vec![5, 0]],
            vec![vec![0, 1], vec![3, 0]],
            vec![vec![0, 2, 2], vec![2, 0, 2], vec![2, 2, 1]],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = EvalMatrix::from_ints(&refs);
            let w = dual_potentials(&a).unwrap();
            for i in 0..a.rows() {
                for l in 0..a.rows() {
                    if i != l {
                        assert!(a.get(i, i) + &w[i] < a.get(l, i) + &w[l]);
                    }
                }
            }
        }
        assert!(dual_potentials(&EvalMatrix::from_ints(&[&[0, 0], &[0, 0]])).is_err());
        assert!(dual_potentials(&EvalMatrix::from_ints(&[&[1, 0], &[0, 1]])).is_err());
    }
}
