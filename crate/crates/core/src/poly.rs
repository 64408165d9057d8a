//! Tropical monomials and min-plus polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::prevariety::{ParamBound, Segment};
use crate::scalar::{PerturbedScalar, Q};

/// A point of `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Q>);

impl Point {
    pub fn new(coords: Vec<Q>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| crate::scalar::q(c)).collect())
    }

    pub fn origin(n: usize) -> Self {
        Point(vec![Q::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    /// `self + t * dir`.
    pub fn offset(&self, dir: &[Q], t: &Q) -> Point {
        Point(self.0.iter().zip(dir).map(|(x, d)| x + d * t).collect())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Exponent vector `i_1 x_1 + ... + i_n x_n` of a tropical monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Tropical degree `i_1 + ... + i_n`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// `<exponents, x>`.
    pub fn dot(&self, x: &[Q]) -> Q {
        self.0
            .iter()
            .zip(x)
            .filter(|(e, _)| **e != 0)
            .map(|(&e, c)| c * Q::from_integer(e.into()))
            .fold(Q::zero(), |acc, v| acc + v)
    }

    pub fn dot_int(&self, x: &[i64]) -> i64 {
        self.0.iter().zip(x).map(|(&e, &c)| e as i64 * c).sum()
    }

    pub fn as_rational(&self) -> Vec<Q> {
        self.0.iter().map(|&e| Q::from_integer(e.into())).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub monomial: Monomial,
    pub coeff: PerturbedScalar,
}

/// `min_i { <a_i, x> + c_i }`. Terms are kept sorted by exponent vector with
/// duplicates merged (smallest coefficient wins), so term indices are
/// canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropPoly {
    dim: usize,
    terms: Vec<Term>,
}

impl TropPoly {
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Monomial, PerturbedScalar)>) -> Result<Self> {
        let mut merged: BTreeMap<Monomial, PerturbedScalar> = BTreeMap::new();
        for (m, c) in terms {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
            merged
                .entry(m)
                .and_modify(|old| {
                    if c < *old {
                        *old = c.clone();
                    }
                })
                .or_insert(c);
        }
        if !merged.values().any(PerturbedScalar::is_finite) {
            return Err(Error::precondition(
                "tropical polynomial needs a term with finite coefficient",
            ));
        }
        let terms = merged
            .into_iter()
            .map(|(monomial, coeff)| Term { monomial, coeff })
            .collect();
        Ok(TropPoly { dim, terms })
    }

    /// The bare monomial `<a, x>`.
    pub fn monomial(m: Monomial) -> Self {
        let dim = m.dim();
        TropPoly {
            dim,
            terms: vec![Term {
                monomial: m,
                coeff: PerturbedScalar::zero(),
            }],
        }
    }

    /// Convenience constructor from integer exponents and integer coefficients.
    pub fn from_ints(terms: &[(&[u32], i64)]) -> Result<Self> {
        let dim = terms.first().map(|(e, _)| e.len()).unwrap_or(0);
        Self::new(
            dim,
            terms
                .iter()
                .map(|(e, c)| (Monomial(e.to_vec()), PerturbedScalar::int(*c))),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// The single term of a one-term polynomial.
    pub fn as_single_term(&self) -> Option<&Term> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }

    /// Adds `c` to every coefficient.
    pub fn shifted(&self, c: &PerturbedScalar) -> TropPoly {
        TropPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    monomial: t.monomial.clone(),
                    coeff: &t.coeff + c,
                })
                .collect(),
        }
    }
}

/// Min-plus value of `f` at `x` and the indices of the terms attaining it.
pub fn eval_poly(f: &TropPoly, x: &Point) -> Result<(PerturbedScalar, Vec<usize>)> {
    if x.dim() != f.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            found: x.dim(),
        });
    }
    let mut best = PerturbedScalar::inf();
    let mut argmin = Vec::new();
    for (i, t) in f.terms.iter().enumerate() {
        if !t.coeff.is_finite() {
            continue;
        }
        let v = &t.coeff + &PerturbedScalar::finite(t.monomial.dot(&x.0));
        match v.cmp(&best) {
            std::cmp::Ordering::Less => {
                best = v;
                argmin.clear();
                argmin.push(i);
            }
            std::cmp::Ordering::Equal => argmin.push(i),
            std::cmp::Ordering::Greater => {}
        }
    }
    Ok((best, argmin))
}

/// Value only.
pub fn eval(f: &TropPoly, x: &Point) -> Result<PerturbedScalar> {
    eval_poly(f, x).map(|(v, _)| v)
}

/// Maximum exponent sum over the terms with finite coefficient.
pub fn poly_degree(f: &TropPoly) -> u64 {
    f.terms
        .iter()
        .filter(|t| t.coeff.is_finite())
        .map(|t| t.monomial.degree())
        .max()
        .unwrap_or(0)
}

/// One affine piece `slope * t + offset` of a restriction, remembering the
/// term it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub slope: Q,
    pub offset: PerturbedScalar,
    pub term: usize,
}

impl Piece {
    pub fn at(&self, t: &Q) -> PerturbedScalar {
        &self.offset + &PerturbedScalar::finite(&self.slope * t)
    }
}

/// `f(base + t * dir)` as a minimum of affine functions of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateRestriction {
    pub pieces: Vec<Piece>,
    pub lo: ParamBound,
    pub hi: ParamBound,
}

impl UnivariateRestriction {
    pub fn eval(&self, t: &Q) -> PerturbedScalar {
        self.pieces
            .iter()
            .map(|p| p.at(t))
            .min()
            .unwrap_or_else(PerturbedScalar::inf)
    }
}

pub fn restrict_to_segment(f: &TropPoly, seg: &Segment) -> Result<UnivariateRestriction> {
    if seg.dim() != f.dim {
        return Err(Error::DimensionMismatch {
            expected: f.dim,
            found: seg.dim(),
        });
    }
    let dir = seg.direction_q();
    let pieces = f
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| Piece {
            slope: t.monomial.dot(&dir),
            offset: &t.coeff + &PerturbedScalar::finite(t.monomial.dot(&seg.base().0)),
            term: i,
        })
        .collect();
    Ok(UnivariateRestriction {
        pieces,
        lo: seg.lo().clone(),
        hi: seg.hi().clone(),
    })
}
