//! Branch-and-bound search for large independent subsets of monomials.

use std::collections::BTreeSet;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Point, TropPoly};
use crate::prevariety::{ParamBound, Polyhedron, Prevariety, Segment};
use crate::scalar::{q, Q};

use super::{certify_from_points, Certificate};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search nodes.
    pub node_budget: u64,
    /// Geometric spread `2^0 .. 2^depth` of candidates along unbounded sides.
    pub depth: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_budget: 200_000,
            depth: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub size: usize,
    /// Indices into the input monomial list.
    pub members: Vec<usize>,
    pub certificate: Option<Certificate>,
    /// Upper bound from per-branch class counts.
    pub upper_bound: usize,
    /// The search space was explored completely within budget.
    pub complete: bool,
    /// `size` is the true maximum.
    pub exact: bool,
}

fn segment_params(seg: &Segment, monomials: &[Monomial], depth: u32) -> Vec<Q> {
    let dir = seg.direction_q();
    let base = &seg.base().0;
    let lines: BTreeSet<(Q, Q)> = monomials.iter().map(|m| (m.dot(&dir), m.dot(base))).collect();
    let lines: Vec<(Q, Q)> = lines.into_iter().collect();
    let mut ts: BTreeSet<Q> = BTreeSet::new();
    for b in [seg.lo(), seg.hi()] {
        if let Some(t) = b.finite() {
            ts.insert(t.clone());
        }
    }
    let anchor = seg.interior_param();
    ts.insert(anchor.clone());
    for (i, (sa, oa)) in lines.iter().enumerate() {
        for (sb, ob) in &lines[i + 1..] {
            if sa != sb {
                ts.insert((ob - oa) / (sa - sb));
            }
        }
    }
    let mut step = Q::one();
    for _ in 0..=depth {
        match seg.lo() {
            ParamBound::Finite(l) => {
                ts.insert(l + &step);
            }
            _ => {
                ts.insert(&anchor - &step);
            }
        }
        match seg.hi() {
            ParamBound::Finite(h) => {
                ts.insert(h - &step);
            }
            _ => {
                ts.insert(&anchor + &step);
            }
        }
        step *= q(2);
    }
    let sorted: Vec<Q> = ts.iter().cloned().collect();
    for w in sorted.windows(2) {
        ts.insert((&w[0] + &w[1]) / q(2));
    }
    ts.into_iter().filter(|t| seg.contains_param(t)).collect()
}

fn polyhedron_points(p: &Polyhedron) -> Vec<Point> {
    let x0 = p.relative_interior().clone();
    let basis = p.basis();
    if basis.is_empty() || basis.len() > 3 {
        return vec![x0];
    }
    let m = basis.len();
    let mut out = vec![x0.clone()];
    let mut delta = Q::one();
    for _ in 0..64 {
        let mut pts = Vec::new();
        let combos = 3usize.pow(m as u32);
        for c in 0..combos {
            let mut x = x0.clone();
            let mut code = c;
            for l in basis {
                let coef = q((code % 3) as i64 - 1) * &delta;
                code /= 3;
                x = x.offset(l, &coef);
            }
            pts.push(x);
        }
        if pts.iter().all(|x| p.contains(x)) {
            out = pts;
            break;
        }
        delta /= q(2);
    }
    out
}

/// Structured witness candidates on every branch of `v`.
pub fn candidate_points(monomials: &[Monomial], v: &Prevariety, depth: u32) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut push = |p: Point, out: &mut Vec<Point>| {
        if seen.insert(p.clone()) {
            out.push(p);
        }
    };
    for piece in v.pieces() {
        match (piece.dim(), piece.as_segment()) {
            (1, Some(seg)) => {
                for t in segment_params(&seg, monomials, depth) {
                    push(seg.point_at(&t), &mut out);
                }
            }
            _ => {
                for p in polyhedron_points(piece) {
                    push(p, &mut out);
                }
            }
        }
    }
    for seg in v.segments() {
        for t in segment_params(seg, monomials, depth) {
            push(seg.point_at(&t), &mut out);
        }
    }
    out
}

/// Sum over branches of the number of monomial classes on each branch.
fn class_upper_bound(monomials: &[Monomial], v: &Prevariety) -> usize {
    let count = |basis: &[Vec<Q>]| -> usize {
        let labels: BTreeSet<Vec<Q>> = monomials
            .iter()
            .map(|m| basis.iter().map(|l| m.dot(l)).collect())
            .collect();
        labels.len()
    };
    let mut total = 0usize;
    for p in v.pieces() {
        total += count(p.basis());
    }
    for s in v.segments() {
        total += count(&[s.direction_q()]);
    }
    total.min(monomials.len())
}

trait Weight: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> {}
impl<T: Clone + Ord + Zero + Add<Output = T> + Sub<Output = T>> Weight for T {}

struct Dfs<'a, W> {
    vals: &'a [Vec<W>],
    chosen: Vec<(usize, usize)>,
    used: Vec<bool>,
    dist: Vec<Vec<W>>,
    best: Vec<(usize, usize)>,
    stop_at: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl<W: Weight> Dfs<'_, W> {
    /// Weight of the constraint `b_a - b_b < w(a, b)`.
    fn w(&self, a: (usize, usize), b: (usize, usize)) -> W {
        self.vals[b.0][a.1].clone() - self.vals[a.0][a.1].clone()
    }

    /// Shortest paths to and from `n` if adding it keeps every cycle positive.
    fn extension(&self, n: (usize, usize)) -> Option<(Vec<W>, Vec<W>)> {
        let k = self.chosen.len();
        let w_out: Vec<W> = self.chosen.iter().map(|&a| self.w(n, a)).collect();
        let w_in: Vec<W> = self.chosen.iter().map(|&b| self.w(b, n)).collect();
        let mut from_n: Vec<W> = Vec::with_capacity(k);
        for b in 0..k {
            let best = (0..k).map(|a| w_out[a].clone() + self.dist[a][b].clone()).min().expect("nonempty");
            if best.clone() + w_in[b].clone() <= W::zero() {
                return None;
            }
            from_n.push(best);
        }
        let to_n = (0..k)
            .map(|a| (0..k).map(|b| self.dist[a][b].clone() + w_in[b].clone()).min().expect("nonempty"))
            .collect();
        Some((to_n, from_n))
    }

    fn apply(&mut self, n: (usize, usize), to_n: Vec<W>, from_n: Vec<W>) {
        let k = self.chosen.len();
        for a in 0..k {
            for b in 0..k {
                let via = to_n[a].clone() + from_n[b].clone();
                if via < self.dist[a][b] {
                    self.dist[a][b] = via;
                }
            }
            self.dist[a].push(to_n[a].clone());
        }
        let mut row = from_n;
        row.push(W::zero());
        self.dist.push(row);
        self.chosen.push(n);
    }

    fn rec(&mut self, i: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        let m = self.vals.len();
        if self.best.len() >= self.stop_at || i == m || self.chosen.len() + (m - i) <= self.best.len() {
            return;
        }
        for c in 0..self.used.len() {
            if self.used[c] {
                continue;
            }
            if let Some((to_n, from_n)) = self.extension((i, c)) {
                let saved = self.dist.clone();
                self.apply((i, c), to_n, from_n);
                self.used[c] = true;
                self.rec(i + 1);
                self.used[c] = false;
                self.chosen.pop();
                self.dist = saved;
                if self.aborted || self.best.len() >= self.stop_at {
                    return;
                }
            }
        }
        self.rec(i + 1);
    }
}

fn run_dfs<W: Weight>(vals: &[Vec<W>], ncand: usize, stop_at: usize, budget: u64) -> (Vec<(usize, usize)>, bool) {
    let mut dfs = Dfs {
        vals,
        chosen: Vec::new(),
        used: vec![false; ncand],
        dist: Vec::new(),
        best: Vec::new(),
        stop_at,
        nodes: 0,
        budget,
        aborted: false,
    };
    dfs.rec(0);
    (dfs.best, !dfs.aborted)
}

/// Scales a rational matrix to `i128` when the entries stay small.
fn to_integer_matrix(vals: &[Vec<Q>]) -> Option<Vec<Vec<i128>>> {
    let l = vals
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let limit = BigInt::from(1u64 << 60);
    vals.iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let v = (x * Q::from_integer(l.clone())).to_integer();
                    if v.abs() > limit {
                        None
                    } else {
                        v.to_i128()
                    }
                })
                .collect()
        })
        .collect()
}

/// Tropical rank of a finite rational matrix by the same depth-first search
/// used for independent sets: rows are functions, columns are candidate
/// witnesses. Errors when the node budget runs out.
pub fn rank_by_search(vals: &[Vec<Q>], node_budget: u64) -> Result<usize> {
    let ncols = vals.first().map_or(0, Vec::len);
    let (best, complete) = match to_integer_matrix(vals) {
        Some(ints) => run_dfs(&ints, ncols, vals.len().min(ncols), node_budget),
        None => run_dfs(vals, ncols, vals.len().min(ncols), node_budget),
    };
    if !complete {
        return Err(Error::BudgetExceeded(format!("rank search over {} nodes", node_budget)));
    }
    Ok(best.len())
}

/// Largest subset of `monomials` admitting a certificate with witnesses from
/// the structured candidate set. Exact when the size meets the class-count
/// upper bound, or when `v` is a finite point set and the search completed.
pub fn search_max_independent(monomials: &[Monomial], v: &Prevariety, opts: &SearchOptions) -> Result<SearchOutcome> {
    let cands = candidate_points(monomials, v, opts.depth);
    let upper_bound = class_upper_bound(monomials, v);
    let finite_points = v.segments().is_empty() && v.pieces().iter().all(|p| p.dim() == 0);
    let vals: Vec<Vec<Q>> = monomials
        .iter()
        .map(|m| cands.iter().map(|x| m.dot(&x.0)).collect())
        .collect();
    let (best, complete) = match to_integer_matrix(&vals) {
        Some(ints) => run_dfs(&ints, cands.len(), upper_bound.min(cands.len()), opts.node_budget),
        None => run_dfs(&vals, cands.len(), upper_bound.min(cands.len()), opts.node_budget),
    };
    let mut best = best;
    best.sort();
    let members: Vec<usize> = best.iter().map(|&(m, _)| m).collect();
    let certificate = if best.is_empty() {
        None
    } else {
        let fs: Vec<TropPoly> = members.iter().map(|&m| TropPoly::monomial(monomials[m].clone())).collect();
        let pts: Vec<Point> = best.iter().map(|&(_, c)| cands[c].clone()).collect();
        certify_from_points(&fs, &pts, v)?
    };
    let size = best.len();
    let exact = size == upper_bound || (finite_points && complete);
    Ok(SearchOutcome {
        size,
        members,
        certificate,
        upper_bound,
        complete,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::verify_certificate;
    use crate::prevariety::{Halfspace, ParamBound};

    fn box_grid(n: usize, k: u32) -> Vec<Monomial> {
        let mut out = vec![Monomial(vec![])];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..=k).map(move |e| {
                        let mut v = m.0.clone();
                        v.push(e);
                        Monomial(v)
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn two_points_box_one() {
        let v = Prevariety::from_points(&[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1])]).unwrap();
        let r = search_max_independent(&box_grid(2, 1), &v, &SearchOptions::default()).unwrap();
        assert_eq!(r.size, 2);
        assert!(r.exact);
        assert!(verify_certificate(r.certificate.as_ref().unwrap(), &v).verified);
    }

    #[test]
    fn anti_diagonal_simplex_two() {
        // x + y = 0 on [-10, 10]: labels i - j take 5 values on M_2
        let p = Polyhedron::new(
            2,
            vec![
                Halfspace::eq(vec![q(1), q(1)], q(0)).unwrap(),
                Halfspace::ge(vec![q(1), q(0)], q(-10)).unwrap(),
                Halfspace::le(vec![q(1), q(0)], q(10)).unwrap(),
            ],
        )
        .unwrap();
        let v = Prevariety::from_polyhedra(2, vec![p]).unwrap();
        let grid: Vec<Monomial> = box_grid(2, 2).into_iter().filter(|m| m.degree() <= 2).collect();
        let r = search_max_independent(&grid, &v, &SearchOptions::default()).unwrap();
        assert_eq!(r.size, 5);
        assert!(r.exact);
        assert!(verify_certificate(r.certificate.as_ref().unwrap(), &v).verified);
    }

    #[test]
    fn single_monomial() {
        let v = Prevariety::from_segments(
            2,
            vec![Segment::new(Point::from_ints(&[0, 0]), vec![1, 0], ParamBound::Finite(q(0)), ParamBound::PosInf).unwrap()],
        )
        .unwrap();
        let r = search_max_independent(&[Monomial(vec![2, 1])], &v, &SearchOptions::default()).unwrap();
        assert_eq!(r.size, 1);
        assert!(r.exact);
    }

    #[test]
    fn tropical_line_box_one() {
        let dirs = [[1, 0], [0, 1], [-1, -1]];
        let segs = dirs
            .iter()
            .map(|d| Segment::new(Point::from_ints(&[0, 0]), d.to_vec(), ParamBound::Finite(q(0)), ParamBound::PosInf).unwrap())
            .collect();
        let v = Prevariety::from_segments(2, segs).unwrap();
        let r = search_max_independent(&box_grid(2, 1), &v, &SearchOptions::default()).unwrap();
        // B = 2 so at most k B + 1 = 3
        assert!(r.size <= 3);
        assert!(r.size >= 2);
        assert!(verify_certificate(r.certificate.as_ref().unwrap(), &v).verified);
    }
}
