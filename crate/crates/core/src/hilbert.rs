//! Monomial grids, equivalence classes modulo a direction space, and
//! tropical Hilbert functions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::independence::{certify_from_points, co_ordered_points, search_max_independent, Certificate, SearchOptions};
use crate::linalg;
use crate::poly::{Monomial, Point, TropPoly};
use crate::prevariety::{Polyhedron, Prevariety};
use crate::scalar::{q, Q};

/// Default cap on the number of monomials enumerated for one grid.
pub const GRID_BUDGET: u64 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// `0 <= i_1 + ... + i_n <= k`
    Simplex,
    /// `0 <= i_j <= k` for every `j`
    Box,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Simplex => "simplex",
            Shape::Box => "box",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplex" => Ok(Shape::Simplex),
            "box" => Ok(Shape::Box),
            other => Err(Error::parse("shape", format!("expected simplex or box, got {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialGrid {
    pub n: usize,
    pub k: u32,
    pub shape: Shape,
}

impl MonomialGrid {
    pub fn new(n: usize, k: u32, shape: Shape) -> Self {
        MonomialGrid { n, k, shape }
    }

    pub fn simplex(n: usize, k: u32) -> Self {
        Self::new(n, k, Shape::Simplex)
    }

    pub fn boxed(n: usize, k: u32) -> Self {
        Self::new(n, k, Shape::Box)
    }

    /// Number of monomials, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        let k = BigInt::from(self.k);
        let count = match self.shape {
            Shape::Box => num_traits::pow(k + 1, self.n),
            Shape::Simplex => {
                // binomial(n + k, n)
                let mut acc = BigInt::from(1);
                for i in 1..=self.n {
                    acc = acc * (BigInt::from(self.k) + i) / i;
                }
                acc
            }
        };
        count.to_u64().unwrap_or(u64::MAX)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        m.dim() == self.n
            && match self.shape {
                Shape::Simplex => m.degree() <= self.k as u64,
                Shape::Box => m.0.iter().all(|&e| e <= self.k),
            }
    }

    /// All monomials in lexicographic order of exponent vectors.
    pub fn enumerate(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(self.n);
        self.fill(&mut cur, self.k, &mut out);
        out
    }

    fn fill(&self, cur: &mut Vec<u32>, left: u32, out: &mut Vec<Monomial>) {
        if cur.len() == self.n {
            out.push(Monomial(cur.clone()));
            return;
        }
        let top = match self.shape {
            Shape::Simplex => left,
            Shape::Box => self.k,
        };
        for e in 0..=top {
            cur.push(e);
            self.fill(cur, left - e.min(left), out);
            cur.pop();
        }
    }
}

/// Equivalence classes of grid monomials modulo a direction space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTable {
    /// Reduced row-echelon basis used for labels.
    pub basis: Vec<Vec<Q>>,
    /// Pivot coordinates of `basis`.
    pub pivots: Vec<usize>,
    /// `(label, representative)` in order of first appearance.
    pub classes: Vec<(Vec<Q>, Monomial)>,
}

impl ClassTable {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn label(&self, m: &Monomial) -> Vec<Q> {
        self.basis.iter().map(|r| m.dot(r)).collect()
    }
}

pub fn count_classes(l: &[Vec<Q>], grid: &MonomialGrid, budget: u64) -> Result<ClassTable> {
    if let Some(v) = l.iter().find(|v| v.len() != grid.n) {
        return Err(Error::DimensionMismatch {
            expected: grid.n,
            found: v.len(),
        });
    }
    let size = grid.size();
    if size > budget {
        return Err(Error::GridTooLarge { size, budget });
    }
    let (basis, pivots) = linalg::rref(l);
    let mut seen: BTreeMap<Vec<Q>, ()> = BTreeMap::new();
    let mut classes = Vec::new();
    for m in grid.enumerate() {
        let label: Vec<Q> = basis.iter().map(|r| m.dot(r)).collect();
        if seen.insert(label.clone(), ()).is_none() {
            classes.push((label, m));
        }
    }
    Ok(ClassTable { basis, pivots, classes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertRecord {
    pub k: u32,
    pub shape: Shape,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    /// Sum of the per-piece class counts.
    pub classes: Option<usize>,
    pub certificate: Option<Certificate>,
}

impl HilbertRecord {
    fn new(grid: &MonomialGrid, lower: usize, upper: usize, classes: Option<usize>, certificate: Option<Certificate>) -> Self {
        assert!(lower <= upper, "lower bound {lower} exceeds upper bound {upper}");
        HilbertRecord {
            k: grid.k,
            shape: grid.shape,
            lower,
            upper,
            exact: lower == upper,
            classes,
            certificate,
        }
    }
}

/// Exact value for a polyhedron together with a constructed certificate of
/// that many class representatives.
pub fn th_polyhedron(p: &Polyhedron, grid: &MonomialGrid) -> Result<HilbertRecord> {
    let table = count_classes(p.basis(), grid, GRID_BUDGET)?;
    let t = table.count();
    let labels: Vec<Vec<Q>> = table.classes.iter().map(|(l, _)| l.clone()).collect();
    let points = co_ordered_points(&labels, p, &table.pivots)?;
    let fs: Vec<TropPoly> = table
        .classes
        .iter()
        .map(|(_, m)| TropPoly::monomial(m.clone()))
        .collect();
    let v = Prevariety::from_polyhedra(p.ambient_dim(), vec![p.clone()])?;
    let cert = certify_from_points(&fs, &points, &v)?.ok_or_else(|| {
        Error::Construction("co-ordered witnesses gave a singular evaluation matrix".into())
    })?;
    Ok(HilbertRecord::new(grid, t, t, Some(t), Some(cert)))
}

/// Integer vectors with coordinates below `s`, co-ordered with the points.
fn co_ordered_exponents(points: &[Point]) -> Vec<Monomial> {
    let n = points.first().map_or(0, Point::dim);
    let mut out = vec![vec![0u32; n]; points.len()];
    for j in 0..n {
        let mut distinct: Vec<&Q> = points.iter().map(|p| &p.0[j]).collect();
        distinct.sort();
        distinct.dedup();
        let top = distinct.len() as u32 - 1;
        for (i, p) in points.iter().enumerate() {
            let r = distinct.binary_search(&&p.0[j]).expect("value present") as u32;
            out[i][j] = top - r;
        }
    }
    out.into_iter().map(Monomial).collect()
}

/// Finite point sets: exact `s` by construction once `k >= n s`, otherwise
/// whatever the exhaustive witness search establishes.
pub fn th_points(points: &[Point], grid: &MonomialGrid, opts: &SearchOptions) -> Result<HilbertRecord> {
    let s = points.len();
    if s == 0 {
        return Err(Error::precondition("empty point set"));
    }
    for (i, p) in points.iter().enumerate() {
        if p.dim() != grid.n {
            return Err(Error::DimensionMismatch {
                expected: grid.n,
                found: p.dim(),
            });
        }
        if points[..i].contains(p) {
            return Err(Error::precondition("points must be pairwise distinct"));
        }
    }
    let v = Prevariety::from_points(points)?;
    let upper = (s as u64).min(grid.size()) as usize;
    if grid.k as u64 >= (grid.n * s) as u64 {
        let exps = co_ordered_exponents(points);
        debug_assert!(exps.iter().all(|m| grid.contains(m)));
        let fs: Vec<TropPoly> = exps.into_iter().map(TropPoly::monomial).collect();
        let cert = certify_from_points(&fs, points, &v)?
            .ok_or_else(|| Error::Construction("co-ordered exponents gave a singular matrix".into()))?;
        return Ok(HilbertRecord::new(grid, s, s, None, Some(cert)));
    }
    let found = search_max_independent(&grid.enumerate(), &v, opts)?;
    let upper = if found.exact { found.size } else { upper };
    Ok(HilbertRecord::new(grid, found.size, upper, None, found.certificate))
}

/// All pieces of `v` as polyhedra (segments by their closed inner part).
fn piece_polyhedra(v: &Prevariety) -> Vec<Polyhedron> {
    v.pieces()
        .iter()
        .cloned()
        .chain(v.segments().iter().map(|s| s.inner_polyhedron()))
        .collect()
}

/// `max_l TH(V_l) <= TH(V) <= sum_l TH(V_l)`, with the lower side improved by
/// witness search when `opts.node_budget > 0`.
pub fn th_union_bounds(v: &Prevariety, grid: &MonomialGrid, opts: &SearchOptions) -> Result<HilbertRecord> {
    if v.is_empty() {
        return Err(Error::precondition("empty prevariety"));
    }
    let mut lower = 0usize;
    let mut cert = None;
    let mut sum = 0usize;
    let mut per_piece = Vec::new();
    for p in piece_polyhedra(v) {
        let r = th_polyhedron(&p, grid)?;
        sum += r.lower;
        per_piece.push(r.lower);
        if r.lower > lower {
            lower = r.lower;
            cert = r.certificate;
        }
    }
    let mut upper = (sum as u64).min(grid.size()) as usize;
    if lower < upper && opts.node_budget > 0 {
        let found = search_max_independent(&grid.enumerate(), v, opts)?;
        if found.size > lower {
            lower = found.size;
            cert = found.certificate;
        }
        if found.exact {
            upper = upper.min(found.size.max(lower));
        }
    }
    assert!(per_piece.iter().all(|&x| lower >= x), "lower bound below a piece value");
    assert!(upper <= sum, "upper bound above the sum of pieces");
    Ok(HilbertRecord::new(grid, lower, upper, Some(sum), cert))
}

/// One record per `k`, computed in parallel and returned in order of `k`.
/// Lower bounds are made non-decreasing and upper bounds non-decreasing from
/// above, both valid because the grids are nested.
pub fn hilbert_sweep(v: &Prevariety, shape: Shape, ks: std::ops::RangeInclusive<u32>, opts: &SearchOptions) -> Result<Vec<HilbertRecord>> {
    let n = v.ambient_dim();
    let finite_points = v.segments().is_empty() && v.pieces().iter().all(|p| p.dim() == 0);
    let points: Vec<Point> = v.pieces().iter().map(|p| p.relative_interior().clone()).collect();
    let mut records: Vec<HilbertRecord> = ks
        .collect::<Vec<u32>>()
        .into_par_iter()
        .map(|k| {
            let grid = MonomialGrid::new(n, k, shape);
            if finite_points {
                th_points(&points, &grid, opts)
            } else {
                th_union_bounds(v, &grid, opts)
            }
        })
        .collect::<Result<_>>()?;
    for i in 1..records.len() {
        if records[i].lower < records[i - 1].lower {
            records[i].lower = records[i - 1].lower;
            records[i].certificate = records[i - 1].certificate.clone();
        }
    }
    for i in (0..records.len().saturating_sub(1)).rev() {
        if records[i].upper > records[i + 1].upper {
            records[i].upper = records[i + 1].upper;
        }
    }
    for r in &mut records {
        r.exact = r.lower == r.upper;
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineCheck {
    pub closed_form: i64,
    pub enumerated: usize,
    pub agree: bool,
}

/// Compares `(|p| + |q|)(k - 1) + 1` against enumeration of classes of
/// `span{(q, -p)}` on the simplex grid.
pub fn line_formula_check(p: i64, qv: i64, k: u32) -> Result<LineCheck> {
    let ok = if p == 0 || qv == 0 {
        p.abs() + qv.abs() == 1
    } else {
        p.gcd(&qv) == 1
    };
    if !ok {
        return Err(Error::precondition(format!(
            "({p}, {qv}) must be coprime, or a unit vector when one entry is zero"
        )));
    }
    let closed_form = (p.abs() + qv.abs()) * (k as i64 - 1) + 1;
    let table = count_classes(&[vec![q(qv), q(-p)]], &MonomialGrid::simplex(2, k), GRID_BUDGET)?;
    let enumerated = table.count();
    Ok(LineCheck {
        closed_form,
        agree: closed_form == enumerated as i64,
        enumerated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFit {
    pub degree: usize,
    /// The `degree`-th differences are constant from `onset` to the end.
    pub stabilized: bool,
    pub onset: Option<u32>,
    /// Coefficients of the fitted polynomial in `k`, constant term first.
    pub coefficients: Vec<Q>,
}

impl PolyFit {
    pub fn eval(&self, k: u32) -> Q {
        let x = q(k as i64);
        self.coefficients
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * &x + c)
    }
}

/// Empirical check that `values` (at consecutive `k`) eventually agree with a
/// polynomial of the given degree.
pub fn eventual_poly_fit(values: &[(u32, usize)], degree: usize) -> Result<PolyFit> {
    if values.len() < degree + 2 {
        return Err(Error::precondition(format!(
            "need at least {} values for a degree-{degree} fit",
            degree + 2
        )));
    }
    if values.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
        return Err(Error::precondition("values must be at consecutive k"));
    }
    let mut diffs: Vec<i128> = values.iter().map(|&(_, v)| v as i128).collect();
    for _ in 0..degree {
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    // smallest start from which at least two differences remain and agree
    let last = diffs[diffs.len() - 1];
    let mut start = diffs.len() - 1;
    while start > 0 && diffs[start - 1] == last {
        start -= 1;
    }
    if diffs.len() - start < 2 {
        return Ok(PolyFit {
            degree,
            stabilized: false,
            onset: None,
            coefficients: Vec::new(),
        });
    }
    let pts = &values[start..start + degree + 1];
    let vandermonde: Vec<Vec<Q>> = pts
        .iter()
        .map(|&(k, _)| (0..=degree).map(|e| num_traits::pow(q(k as i64), e)).collect())
        .collect();
    let rhs: Vec<Q> = pts.iter().map(|&(_, v)| q(v as i64)).collect();
    let coefficients = linalg::solve(&vandermonde, &rhs).expect("distinct nodes give an invertible system");
    let fit = PolyFit {
        degree,
        stabilized: true,
        onset: Some(values[start].0),
        coefficients,
    };
    debug_assert!(values[start..].iter().all(|&(k, v)| fit.eval(k) == q(v as i64)));
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::verify_certificate;
    use crate::prevariety::Halfspace;
    use crate::scalar::q_frac;

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    fn line_segment(normal: &[i64], c: i64) -> Polyhedron {
        Polyhedron::new(
            2,
            vec![
                Halfspace::eq(v(normal), q(c)).unwrap(),
                Halfspace::ge(v(&[1, 0]), q(-10)).unwrap(),
                Halfspace::le(v(&[1, 0]), q(10)).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(MonomialGrid::simplex(2, 2).enumerate().len(), 6);
        assert_eq!(MonomialGrid::simplex(2, 2).size(), 6);
        assert_eq!(MonomialGrid::boxed(3, 2).size(), 27);
        assert_eq!(MonomialGrid::boxed(3, 2).enumerate().len(), 27);
        assert_eq!(MonomialGrid::simplex(3, 4).size(), 35);
        assert_eq!(MonomialGrid::simplex(3, 4).enumerate().len(), 35);
    }

    #[test]
    fn class_examples() {
        let g = MonomialGrid::simplex(2, 2);
        assert_eq!(count_classes(&[v(&[1, -1])], &g, GRID_BUDGET).unwrap().count(), 5);
        assert_eq!(count_classes(&[v(&[3, -2])], &g, GRID_BUDGET).unwrap().count(), 6);
        assert_eq!(count_classes(&[v(&[1, 0]), v(&[0, 1])], &g, GRID_BUDGET).unwrap().count(), 6);
        assert!(matches!(
            count_classes(&[v(&[1, 0])], &MonomialGrid::boxed(2, 10), 10),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn polyhedron_examples() {
        let g = MonomialGrid::simplex(2, 2);
        // the anti-diagonal x + y = 0 has direction (1, -1)
        let r = th_polyhedron(&line_segment(&[1, 1], 0), &g).unwrap();
        assert_eq!((r.lower, r.exact), (5, true));
        let p = line_segment(&[1, 1], 0);
        let vv = Prevariety::from_polyhedra(2, vec![p]).unwrap();
        let cert = r.certificate.unwrap();
        assert_eq!(cert.len(), 5);
        assert!(verify_certificate(&cert, &vv).verified);

        // the diagonal y = x has direction (1, 1): classes by i + j
        assert_eq!(th_polyhedron(&line_segment(&[1, -1], 0), &g).unwrap().lower, 3);

        let pt = Polyhedron::point(&Point::from_ints(&[1, 2]));
        assert_eq!(th_polyhedron(&pt, &MonomialGrid::simplex(2, 5)).unwrap().lower, 1);

        assert_eq!(th_polyhedron(&line_segment(&[2, 3], 6), &g).unwrap().lower, 6);
    }

    #[test]
    fn points_examples() {
        let opts = SearchOptions::default();
        let pts = [Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1])];
        let r = th_points(&pts, &MonomialGrid::simplex(2, 4), &opts).unwrap();
        assert_eq!((r.lower, r.exact), (2, true));

        let r = th_points(&[Point::from_ints(&[3, 3])], &MonomialGrid::simplex(2, 0), &opts).unwrap();
        assert_eq!((r.lower, r.exact), (1, true));

        let pts = [Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1]), Point::from_ints(&[2, 2])];
        let r = th_points(&pts, &MonomialGrid::simplex(2, 6), &opts).unwrap();
        assert_eq!(r.lower, 3);
        let vv = Prevariety::from_points(&pts).unwrap();
        assert!(verify_certificate(r.certificate.as_ref().unwrap(), &vv).verified);
    }

    #[test]
    fn union_examples() {
        let opts = SearchOptions::default();
        let g = MonomialGrid::simplex(2, 2);
        let one = Prevariety::from_polyhedra(2, vec![line_segment(&[1, 1], 0)]).unwrap();
        let r = th_union_bounds(&one, &g, &opts).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (5, 5, true));

        let cross = Prevariety::from_polyhedra(
            2,
            vec![
                Polyhedron::new(2, vec![Halfspace::eq(v(&[1, -1]), q(0)).unwrap()]).unwrap(),
                Polyhedron::new(2, vec![Halfspace::eq(v(&[1, 1]), q(0)).unwrap()]).unwrap(),
            ],
        )
        .unwrap();
        let r = th_union_bounds(&cross, &g, &opts).unwrap();
        assert!(r.lower >= 5);
        assert_eq!(r.classes, Some(8));
        assert!(r.upper <= 6);

        let two = Prevariety::from_points(&[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 1])]).unwrap();
        let r = th_union_bounds(&two, &MonomialGrid::boxed(2, 1), &opts).unwrap();
        assert_eq!((r.lower, r.upper, r.exact), (2, 2, true));
    }

    #[test]
    fn line_formula_examples() {
        assert_eq!(
            line_formula_check(2, 3, 2).unwrap(),
            LineCheck { closed_form: 6, enumerated: 6, agree: true }
        );
        assert_eq!(
            line_formula_check(1, 1, 2).unwrap(),
            LineCheck { closed_form: 3, enumerated: 5, agree: false }
        );
        assert_eq!(
            line_formula_check(1, 0, 3).unwrap(),
            LineCheck { closed_form: 3, enumerated: 4, agree: false }
        );
        assert!(line_formula_check(2, 4, 2).is_err());
        assert!(line_formula_check(2, 0, 2).is_err());
    }

    #[test]
    fn fit_examples() {
        let seq: Vec<(u32, usize)> = (1..=10).map(|k| (k, 2 * k as usize + 1)).collect();
        let f = eventual_poly_fit(&seq, 1).unwrap();
        assert!(f.stabilized);
        assert_eq!(f.onset, Some(1));
        assert_eq!(f.coefficients, vec![q(1), q(2)]);

        let f = eventual_poly_fit(&[(0, 4), (1, 4), (2, 4)], 0).unwrap();
        assert_eq!(f.coefficients, vec![q(4)]);

        let seq: Vec<(u32, usize)> = (0..=8).map(|k| (k, ((k + 1) * (k + 2) / 2) as usize)).collect();
        let f = eventual_poly_fit(&seq, 2).unwrap();
        assert_eq!(f.coefficients, vec![q(1), q_frac(3, 2), q_frac(1, 2)]);

        assert!(eventual_poly_fit(&[(1, 1)], 0).is_err());
    }

    #[test]
    fn sweep_is_monotone() {
        let vv = Prevariety::from_polyhedra(2, vec![line_segment(&[1, 1], 0)]).unwrap();
        let recs = hilbert_sweep(&vv, Shape::Simplex, 1..=4, &SearchOptions::default()).unwrap();
        let vals: Vec<usize> = recs.iter().map(|r| r.lower).collect();
        assert_eq!(vals, vec![3, 5, 7, 9]);
    }
}
