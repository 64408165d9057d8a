//! Rational polyhedra, their unions, stars, and one-dimensional segments.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fm::{self, Ineq};
use crate::linalg;
use crate::poly::{Point, TropPoly};
use crate::scalar::{q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `normal . x >= constant`
    Ge,
    /// `normal . x = constant`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: Vec<Q>,
    constant: Q,
    relation: Relation,
}

impl Halfspace {
    pub fn new(normal: Vec<Q>, relation: Relation, constant: Q) -> Result<Self> {
        if linalg::is_zero_vec(&normal) {
            return Err(Error::precondition("half-space normal must be nonzero"));
        }
        Ok(Halfspace {
            normal,
            constant,
            relation,
        })
    }

    pub fn ge(normal: Vec<Q>, constant: Q) -> Result<Self> {
        Self::new(normal, Relation::Ge, constant)
    }

    pub fn eq(normal: Vec<Q>, constant: Q) -> Result<Self> {
        Self::new(normal, Relation::Eq, constant)
    }

    /// `normal . x <= constant`.
    pub fn le(normal: Vec<Q>, constant: Q) -> Result<Self> {
        Self::new(normal.iter().map(|c| -c).collect(), Relation::Ge, -constant)
    }

    pub fn normal(&self) -> &[Q] {
        &self.normal
    }

    pub fn constant(&self) -> &Q {
        &self.constant
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        let v = linalg::dot(&self.normal, x);
        match self.relation {
            Relation::Ge => v >= self.constant,
            Relation::Eq => v == self.constant,
        }
    }

    fn rows(&self, strict: bool) -> Vec<Ineq<Q>> {
        match self.relation {
            Relation::Eq => Ineq::eq(self.normal.clone(), self.constant.clone()).to_vec(),
            Relation::Ge if strict => vec![Ineq::gt(self.normal.clone(), self.constant.clone())],
            Relation::Ge => vec![Ineq::ge(self.normal.clone(), self.constant.clone())],
        }
    }
}

/// A nonempty H-polyhedron together with its affine-hull data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    n: usize,
    constraints: Vec<Halfspace>,
    /// Constraint indices that hold with equality on the whole polyhedron.
    implicit: Vec<bool>,
    basis: Vec<Vec<Q>>,
    interior: Point,
}

impl Polyhedron {
    pub fn new(n: usize, constraints: Vec<Halfspace>) -> Result<Self> {
        for h in &constraints {
            if h.normal.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: h.normal.len(),
                });
            }
        }
        let base_rows: Vec<Vec<Ineq<Q>>> = constraints.iter().map(|h| h.rows(false)).collect();
        if !fm::feasible(n, &base_rows.concat()) {
            return Err(Error::EmptyPolyhedron);
        }
        let implicit: Vec<bool> = constraints
            .iter()
            .enumerate()
            .map(|(i, h)| {
                if h.relation == Relation::Eq {
                    return true;
                }
                let mut sys: Vec<Ineq<Q>> = Vec::new();
                for (j, rows) in base_rows.iter().enumerate() {
                    if j == i {
                        sys.extend(h.rows(true));
                    } else {
                        sys.extend(rows.iter().cloned());
                    }
                }
                !fm::feasible(n, &sys)
            })
            .collect();
        let hull: Vec<Vec<Q>> = constraints
            .iter()
            .zip(&implicit)
            .filter(|(_, &imp)| imp)
            .map(|(h, _)| h.normal.clone())
            .collect();
        let basis = linalg::nullspace(&hull, n);
        let relint_sys: Vec<Ineq<Q>> = constraints
            .iter()
            .zip(&implicit)
            .flat_map(|(h, &imp)| {
                if imp {
                    Ineq::eq(h.normal.clone(), h.constant.clone()).to_vec()
                } else {
                    h.rows(true)
                }
            })
            .collect();
        let interior = fm::solve(n, &relint_sys)
            .map(Point)
            .ok_or_else(|| Error::Construction("relative interior point not found".into()))?;
        Ok(Polyhedron {
            n,
            constraints,
            implicit,
            basis,
            interior,
        })
    }

    /// The single point `p` as a polyhedron.
    pub fn point(p: &Point) -> Self {
        let n = p.dim();
        let cons = (0..n)
            .map(|i| {
                let mut e = vec![Q::zero(); n];
                e[i] = Q::one();
                Halfspace::eq(e, p.0[i].clone()).expect("unit normal")
            })
            .collect();
        Polyhedron::new(n, cons).expect("a point is nonempty")
    }

    /// Axis-aligned box `[lo_i, hi_i]`.
    pub fn boxed(lo: &[Q], hi: &[Q]) -> Result<Self> {
        let n = lo.len();
        let mut cons = Vec::new();
        for i in 0..n {
            let mut e = vec![Q::zero(); n];
            e[i] = Q::one();
            cons.push(Halfspace::ge(e.clone(), lo[i].clone())?);
            cons.push(Halfspace::le(e, hi[i].clone())?);
        }
        Polyhedron::new(n, cons)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Halfspace] {
        &self.constraints
    }

    /// Dimension `m` of the polyhedron.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis of the direction space `L` of the affine hull.
    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn relative_interior(&self) -> &Point {
        &self.interior
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.dim() == self.n && self.constraints.iter().all(|h| h.satisfied_by(&x.0))
    }

    /// A one-dimensional polyhedron as a closed segment.
    pub fn as_segment(&self) -> Option<Segment> {
        if self.dim() != 1 {
            return None;
        }
        let dir_q = &self.basis[0];
        let dir: Vec<i64> = dir_q.iter().map(|c| c.to_integer().to_i64()).collect::<Option<_>>()?;
        let x0 = &self.interior;
        let mut lo = ParamBound::NegInf;
        let mut hi = ParamBound::PosInf;
        for (h, &imp) in self.constraints.iter().zip(&self.implicit) {
            if imp {
                continue;
            }
            let slope = linalg::dot(&h.normal, dir_q);
            if slope.is_zero() {
                continue;
            }
            let t = (&h.constant - linalg::dot(&h.normal, &x0.0)) / &slope;
            if slope.is_positive() {
                lo = lo.max(ParamBound::Finite(t));
            } else {
                hi = hi.min(ParamBound::Finite(t));
            }
        }
        Segment::new(x0.clone(), dir, lo, hi).ok()
    }
}

/// Endpoint of a parameter interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamBound {
    NegInf,
    Finite(Q),
    PosInf,
}

impl ParamBound {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            ParamBound::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for ParamBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamBound::NegInf => f.write_str("-inf"),
            ParamBound::Finite(v) => write!(f, "{v}"),
            ParamBound::PosInf => f.write_str("inf"),
        }
    }
}

/// `{ base + t * dir : t in interval }` with a primitive integer direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    base: Point,
    dir: Vec<i64>,
    lo: ParamBound,
    hi: ParamBound,
    lo_closed: bool,
    hi_closed: bool,
}

impl Segment {
    /// Closed (at finite ends) segment.
    pub fn new(base: Point, dir: Vec<i64>, lo: ParamBound, hi: ParamBound) -> Result<Self> {
        Self::with_flags(base, dir, lo, hi, true, true)
    }

    pub fn with_flags(
        base: Point,
        dir: Vec<i64>,
        lo: ParamBound,
        hi: ParamBound,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<Self> {
        if base.dim() != dir.len() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: dir.len(),
            });
        }
        let g = dir.iter().fold(0i64, |acc, &d| acc.gcd(&d));
        if g != 1 {
            return Err(Error::precondition(format!(
                "segment direction {dir:?} is not primitive"
            )));
        }
        if lo >= hi || lo == ParamBound::PosInf || hi == ParamBound::NegInf {
            return Err(Error::precondition(format!(
                "empty parameter interval [{lo}, {hi}]"
            )));
        }
        Ok(Segment {
            base,
            dir,
            lo_closed: lo_closed && lo.finite().is_some(),
            hi_closed: hi_closed && hi.finite().is_some(),
            lo,
            hi,
        })
    }

    /// Accepts any nonzero rational direction; it is rescaled to a primitive
    /// integer vector and the parameter interval rescaled with it. The flag
    /// reports whether rescaling changed the direction.
    pub fn from_rational_direction(
        base: Point,
        dir: &[Q],
        lo: ParamBound,
        hi: ParamBound,
        lo_closed: bool,
        hi_closed: bool,
    ) -> Result<(Self, bool)> {
        if linalg::is_zero_vec(dir) {
            return Err(Error::precondition("segment direction must be nonzero"));
        }
        let l = dir.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = dir.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        // primitive = dir * factor
        let factor = Q::new(l, g.clone());
        let prim: Vec<i64> = ints
            .iter()
            .map(|x| (x / &g).to_i64())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::precondition("direction entries too large"))?;
        let rescale = |b: ParamBound| match b {
            ParamBound::Finite(t) => ParamBound::Finite(t / &factor),
            other => other,
        };
        let changed = !factor.is_one();
        let seg = Segment::with_flags(base, prim, rescale(lo), rescale(hi), lo_closed, hi_closed)?;
        Ok((seg, changed))
    }

    pub fn dim(&self) -> usize {
        self.dir.len()
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn direction(&self) -> &[i64] {
        &self.dir
    }

    pub fn direction_q(&self) -> Vec<Q> {
        self.dir.iter().map(|&d| q(d)).collect()
    }

    pub fn lo(&self) -> &ParamBound {
        &self.lo
    }

    pub fn hi(&self) -> &ParamBound {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.finite().is_some() && self.hi.finite().is_some()
    }

    pub fn point_at(&self, t: &Q) -> Point {
        self.base.offset(&self.direction_q(), t)
    }

    pub fn contains_param(&self, t: &Q) -> bool {
        let above = match &self.lo {
            ParamBound::NegInf => true,
            ParamBound::Finite(l) => t > l || (self.lo_closed && t == l),
            ParamBound::PosInf => false,
        };
        let below = match &self.hi {
            ParamBound::PosInf => true,
            ParamBound::Finite(h) => t < h || (self.hi_closed && t == h),
            ParamBound::NegInf => false,
        };
        above && below
    }

    /// The parameter of `x` if it lies on the supporting line.
    pub fn param_of(&self, x: &Point) -> Option<Q> {
        if x.dim() != self.dim() {
            return None;
        }
        let i = self.dir.iter().position(|&d| d != 0)?;
        let t = (&x.0[i] - &self.base.0[i]) / q(self.dir[i]);
        (self.point_at(&t) == *x).then_some(t)
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.param_of(x).is_some_and(|t| self.contains_param(&t))
    }

    /// A parameter strictly inside the interval.
    pub fn interior_param(&self) -> Q {
        match (&self.lo, &self.hi) {
            (ParamBound::Finite(l), ParamBound::Finite(h)) => (l + h) / q(2),
            (ParamBound::Finite(l), _) => l + q(1),
            (_, ParamBound::Finite(h)) => h - q(1),
            _ => Q::zero(),
        }
    }

    /// A closed polyhedron contained in the segment with the same direction
    /// space (the segment itself when it is closed).
    pub fn inner_polyhedron(&self) -> Polyhedron {
        let n = self.dim();
        let d = self.direction_q();
        let mid = self.interior_param();
        let shrink = |end: &ParamBound, closed: bool, toward_lo: bool| -> Option<Q> {
            let e = end.finite()?;
            if closed {
                Some(e.clone())
            } else {
                let span = if toward_lo { &mid - e } else { e - &mid };
                Some(if toward_lo { e + span / q(2) } else { e - span / q(2) })
            }
        };
        let lo = shrink(&self.lo, self.lo_closed, true);
        let hi = shrink(&self.hi, self.hi_closed, false);
        let mut cons = Vec::new();
        for v in linalg::nullspace(std::slice::from_ref(&d), n) {
            let c = linalg::dot(&v, &self.base.0);
            cons.push(Halfspace::eq(v, c).expect("nonzero nullspace vector"));
        }
        let dd = linalg::dot(&d, &d);
        let bd = linalg::dot(&d, &self.base.0);
        if let Some(l) = lo {
            cons.push(Halfspace::ge(d.clone(), &bd + &l * &dd).expect("nonzero direction"));
        }
        if let Some(h) = hi {
            cons.push(Halfspace::le(d.clone(), &bd + &h * &dd).expect("nonzero direction"));
        }
        Polyhedron::new(n, cons).expect("segment polyhedron is nonempty")
    }
}

/// Union of rays `apex + t * d_l`, `t >= 0`, with primitive pairwise distinct
/// integer directions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Star {
    apex: Point,
    directions: Vec<Vec<i64>>,
}

impl Star {
    pub fn new(apex: Point, directions: Vec<Vec<i64>>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::precondition("a star needs at least one ray"));
        }
        for (i, d) in directions.iter().enumerate() {
            if d.len() != apex.dim() {
                return Err(Error::DimensionMismatch {
                    expected: apex.dim(),
                    found: d.len(),
                });
            }
            let g = d.iter().fold(0i64, |acc, &x| acc.gcd(&x));
            if g != 1 {
                return Err(Error::precondition(format!(
                    "star direction {d:?} is zero or not primitive"
                )));
            }
            if directions[..i].contains(d) {
                return Err(Error::precondition(format!("duplicate star direction {d:?}")));
            }
        }
        Ok(Star { apex, directions })
    }

    pub fn apex(&self) -> &Point {
        &self.apex
    }

    pub fn directions(&self) -> &[Vec<i64>] {
        &self.directions
    }

    pub fn dim(&self) -> usize {
        self.apex.dim()
    }
}

/// One connected piece of a prevariety of dimension at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Branch {
    Point(Point),
    Segment(Segment),
}

/// A finite union of polyhedra and segments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prevariety {
    dim: usize,
    pieces: Vec<Polyhedron>,
    segments: Vec<Segment>,
}

impl Prevariety {
    pub fn new(dim: usize, pieces: Vec<Polyhedron>, segments: Vec<Segment>) -> Result<Self> {
        for p in &pieces {
            if p.ambient_dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.ambient_dim(),
                });
            }
        }
        for s in &segments {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: s.dim(),
                });
            }
        }
        Ok(Prevariety {
            dim,
            pieces,
            segments,
        })
    }

    pub fn from_polyhedra(dim: usize, pieces: Vec<Polyhedron>) -> Result<Self> {
        Self::new(dim, pieces, Vec::new())
    }

    pub fn from_segments(dim: usize, segments: Vec<Segment>) -> Result<Self> {
        Self::new(dim, Vec::new(), segments)
    }

    pub fn from_points(points: &[Point]) -> Result<Self> {
        let dim = points
            .first()
            .map(Point::dim)
            .ok_or_else(|| Error::precondition("empty point set"))?;
        Self::from_polyhedra(dim, points.iter().map(Polyhedron::point).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Polyhedron] {
        &self.pieces
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && self.segments.is_empty()
    }

    /// Dimension of the union (maximum over pieces).
    pub fn dimension(&self) -> Option<usize> {
        let seg = (!self.segments.is_empty()).then_some(1);
        self.pieces.iter().map(Polyhedron::dim).chain(seg).max()
    }

    pub fn contains(&self, x: &Point) -> Result<bool> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(self.pieces.iter().any(|p| p.contains(x)) || self.segments.iter().any(|s| s.contains(x)))
    }

    /// Decomposition into points and segments; fails if some piece has
    /// dimension two or more.
    pub fn branches(&self) -> Result<Vec<Branch>> {
        let mut out = Vec::new();
        for p in &self.pieces {
            match p.dim() {
                0 => out.push(Branch::Point(p.relative_interior().clone())),
                1 => out.push(Branch::Segment(p.as_segment().ok_or_else(|| {
                    Error::precondition("segment direction does not fit in i64")
                })?)),
                d => {
                    return Err(Error::NotOneDimensional(format!(
                        "piece of dimension {d}"
                    )))
                }
            }
        }
        out.extend(self.segments.iter().cloned().map(Branch::Segment));
        Ok(out)
    }

    /// Number of branches `c` of a prevariety of dimension at most one.
    pub fn branch_count(&self) -> Result<usize> {
        self.branches().map(|b| b.len())
    }

    /// Translate by `-t`.
    pub fn translated(&self, t: &Point) -> Result<Prevariety> {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let cons = p
                    .constraints
                    .iter()
                    .map(|h| Halfspace {
                        normal: h.normal.clone(),
                        constant: &h.constant - linalg::dot(&h.normal, &t.0),
                        relation: h.relation,
                    })
                    .collect();
                Polyhedron::new(self.dim, cons)
            })
            .collect::<Result<_>>()?;
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                base: s.base.sub(t),
                ..s.clone()
            })
            .collect();
        Prevariety::new(self.dim, pieces, segments)
    }

    /// Permute ambient coordinates: new coordinate `i` is old `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Prevariety> {
        let pv = |v: &[Q]| perm.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let cons = p
                    .constraints
                    .iter()
                    .map(|h| Halfspace {
                        normal: pv(&h.normal),
                        constant: h.constant.clone(),
                        relation: h.relation,
                    })
                    .collect();
                Polyhedron::new(self.dim, cons)
            })
            .collect::<Result<_>>()?;
        let segments = self
            .segments
            .iter()
            .map(|s| Segment {
                base: Point(pv(&s.base.0)),
                dir: perm.iter().map(|&i| s.dir[i]).collect(),
                ..s.clone()
            })
            .collect();
        Prevariety::new(self.dim, pieces, segments)
    }
}

/// One ray per direction, closed at the apex.
pub fn star_to_prevariety(star: &Star) -> Prevariety {
    let segments = star
        .directions
        .iter()
        .map(|d| {
            Segment::new(
                star.apex.clone(),
                d.clone(),
                ParamBound::Finite(Q::zero()),
                ParamBound::PosInf,
            )
            .expect("star directions are primitive")
        })
        .collect();
    Prevariety::from_segments(star.dim(), segments).expect("rays share the apex dimension")
}

/// Constraints saying term `i` attains the minimum of `f`.
fn minimizer_cell(f: &TropPoly, i: usize) -> Option<Vec<Halfspace>> {
    let ti = &f.terms()[i];
    let ci = ti.coeff.base_value()?;
    let ai = ti.monomial.as_rational();
    let mut out = Vec::new();
    for (j, tj) in f.terms().iter().enumerate() {
        if j == i {
            continue;
        }
        let Some(cj) = tj.coeff.base_value() else {
            continue;
        };
        let normal: Vec<Q> = tj.monomial.as_rational().iter().zip(&ai).map(|(a, b)| a - b).collect();
        let constant = ci - cj;
        match Halfspace::ge(normal, constant.clone()) {
            Ok(h) => out.push(h),
            Err(_) if !constant.is_positive() => {}
            Err(_) => return None,
        }
    }
    Some(out)
}

/// The solution set of `f_i = g_i` for all `i`, as the union of its nonempty
/// minimizer cells. Coefficients must be unperturbed.
pub fn decompose_equations(eqs: &[(TropPoly, TropPoly)]) -> Result<Prevariety> {
    let Some((f0, _)) = eqs.first() else {
        return Err(Error::precondition("no equations"));
    };
    let n = f0.dim();
    for (f, g) in eqs {
        for p in [f, g] {
            if p.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.dim(),
                });
            }
            if p.terms().iter().any(|t| !t.coeff.eps().is_zero()) {
                return Err(Error::precondition(
                    "decomposition needs unperturbed coefficients",
                ));
            }
        }
    }
    let feasible = |cons: &[Halfspace]| {
        let rows: Vec<Ineq<Q>> = cons.iter().flat_map(|h| h.rows(false)).collect();
        fm::feasible(n, &rows)
    };
    let mut cells: Vec<Vec<Halfspace>> = vec![Vec::new()];
    for (f, g) in eqs {
        let mut local = Vec::new();
        for i in 0..f.terms().len() {
            let Some(fc) = minimizer_cell(f, i) else { continue };
            for j in 0..g.terms().len() {
                let Some(gc) = minimizer_cell(g, j) else { continue };
                let (ti, tj) = (&f.terms()[i], &g.terms()[j]);
                let (Some(ci), Some(cj)) = (ti.coeff.base_value(), tj.coeff.base_value()) else {
                    continue;
                };
                let normal: Vec<Q> = ti
                    .monomial
                    .as_rational()
                    .iter()
                    .zip(tj.monomial.as_rational())
                    .map(|(a, b)| a - b)
                    .collect();
                let mut cell = fc.clone();
                cell.extend(gc);
                let constant = cj - ci;
                match Halfspace::eq(normal, constant.clone()) {
                    Ok(h) => cell.push(h),
                    Err(_) if constant.is_zero() => {}
                    Err(_) => continue,
                }
                if feasible(&cell) {
                    local.push(cell);
                }
            }
        }
        let mut next = Vec::new();
        for a in &cells {
            for b in &local {
                let mut c = a.clone();
                c.extend(b.iter().cloned());
                if feasible(&c) {
                    next.push(c);
                }
            }
        }
        cells = next;
    }
    let mut pieces: Vec<Polyhedron> = Vec::new();
    for c in cells {
        let mut c = c;
        c.sort_by(|a, b| {
            (&a.normal, &a.constant, a.relation == Relation::Eq)
                .cmp(&(&b.normal, &b.constant, b.relation == Relation::Eq))
        });
        c.dedup();
        let p = Polyhedron::new(n, c)?;
        if !pieces.contains(&p) {
            pieces.push(p);
        }
    }
    Prevariety::from_polyhedra(n, pieces)
}
