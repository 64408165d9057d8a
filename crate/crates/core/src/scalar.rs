//! Exact scalars: rationals extended by `+inf`, and a lexicographic extension
//! by a formal positive infinitesimal `eta`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in reduced form with positive
/// denominator by `num-rational`.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = |reason: &str| Error::InvalidValue {
        value: s.to_string(),
        reason: reason.to_string(),
    };
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad("bad numerator"))?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad("bad denominator"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n = BigInt::from_str(&digits).map_err(|_| bad("bad decimal"))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = Q::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    BigInt::from_str(t)
        .map(Q::from_integer)
        .map_err(|_| bad("not a rational"))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(v: &Q) -> String {
    v.to_string()
}

/// Decimal rendering with `digits` fractional digits (rounded toward zero).
pub fn format_decimal(v: &Q, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (v * Q::from_integer(scale.clone())).round().to_integer();
    let neg = scaled.is_negative() || (scaled.is_zero() && v.is_negative());
    let abs = scaled.abs();
    let int = &abs / &scale;
    let frac = &abs % &scale;
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

/// A rational or `+inf`. `+inf` is absorbing under addition and larger than
/// every rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRat {
    Finite(Q),
    Inf,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Q::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            ExtRat::Finite(v) => Some(v),
            ExtRat::Inf => None,
        }
    }
}

impl From<Q> for ExtRat {
    fn from(v: Q) -> Self {
        ExtRat::Finite(v)
    }
}

impl From<i64> for ExtRat {
    fn from(v: i64) -> Self {
        ExtRat::Finite(q(v))
    }
}

impl Add for &ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Inf,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        &self + &rhs
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(v) => write!(f, "{v}"),
            ExtRat::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtRat::Inf),
            other => parse_rational(other).map(ExtRat::Finite),
        }
    }
}

/// `base + eps * eta` for a formal positive infinitesimal `eta`, compared
/// lexicographically. When `base` is `+inf` the `eta` part is always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PerturbedScalar {
    base: ExtRat,
    eps: Q,
}

impl PerturbedScalar {
    pub fn new(base: ExtRat, eps: Q) -> Self {
        let eps = if base.is_finite() { eps } else { Q::zero() };
        PerturbedScalar { base, eps }
    }

    pub fn finite(v: Q) -> Self {
        PerturbedScalar {
            base: ExtRat::Finite(v),
            eps: Q::zero(),
        }
    }

    pub fn int(v: i64) -> Self {
        Self::finite(q(v))
    }

    pub fn inf() -> Self {
        PerturbedScalar {
            base: ExtRat::Inf,
            eps: Q::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    /// Pure infinitesimal `c * eta`.
    pub fn eta(c: Q) -> Self {
        PerturbedScalar {
            base: ExtRat::zero(),
            eps: c,
        }
    }

    pub fn base(&self) -> &ExtRat {
        &self.base
    }

    pub fn eps(&self) -> &Q {
        &self.eps
    }

    pub fn is_finite(&self) -> bool {
        self.base.is_finite()
    }

    pub fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// The rational base part, if finite.
    pub fn base_value(&self) -> Option<&Q> {
        self.base.finite()
    }

    /// Rational value with `eta` substituted by `eta0`.
    pub fn realize(&self, eta0: &Q) -> Option<Q> {
        self.base.finite().map(|b| b + &self.eps * eta0)
    }

    /// Multiplies by a rational. Panics on `inf * negative`.
    pub fn scale(&self, factor: &Q) -> Self {
        match &self.base {
            ExtRat::Finite(b) => PerturbedScalar {
                base: ExtRat::Finite(b * factor),
                eps: &self.eps * factor,
            },
            ExtRat::Inf => {
                assert!(!factor.is_negative(), "cannot scale +inf by a negative factor");
                if factor.is_zero() {
                    Self::zero()
                } else {
                    Self::inf()
                }
            }
        }
    }

    /// `self - rhs`; `None` when `rhs` is infinite.
    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        match (&self.base, &rhs.base) {
            (_, ExtRat::Inf) => None,
            (ExtRat::Inf, _) => Some(Self::inf()),
            (ExtRat::Finite(a), ExtRat::Finite(b)) => Some(PerturbedScalar {
                base: ExtRat::Finite(a - b),
                eps: &self.eps - &rhs.eps,
            }),
        }
    }
}

impl Ord for PerturbedScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base
            .cmp(&other.base)
            .then_with(|| self.eps.cmp(&other.eps))
    }
}

impl PartialOrd for PerturbedScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &PerturbedScalar {
    type Output = PerturbedScalar;
    fn add(self, rhs: &PerturbedScalar) -> PerturbedScalar {
        match (&self.base, &rhs.base) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => PerturbedScalar {
                base: ExtRat::Finite(a + b),
                eps: &self.eps + &rhs.eps,
            },
            _ => PerturbedScalar::inf(),
        }
    }
}

impl Add for PerturbedScalar {
    type Output = PerturbedScalar;
    fn add(self, rhs: PerturbedScalar) -> PerturbedScalar {
        &self + &rhs
    }
}

/// Finite operands only.
impl Sub for &PerturbedScalar {
    type Output = PerturbedScalar;
    fn sub(self, rhs: &PerturbedScalar) -> PerturbedScalar {
        self.checked_sub(rhs)
            .expect("subtracting an infinite perturbed scalar")
    }
}

impl Sub for PerturbedScalar {
    type Output = PerturbedScalar;
    fn sub(self, rhs: PerturbedScalar) -> PerturbedScalar {
        &self - &rhs
    }
}

impl Neg for PerturbedScalar {
    type Output = PerturbedScalar;
    fn neg(self) -> PerturbedScalar {
        assert!(self.is_finite(), "negating +inf");
        self.scale(&-Q::one())
    }
}

impl From<Q> for PerturbedScalar {
    fn from(v: Q) -> Self {
        PerturbedScalar::finite(v)
    }
}

impl From<ExtRat> for PerturbedScalar {
    fn from(v: ExtRat) -> Self {
        PerturbedScalar::new(v, Q::zero())
    }
}

impl fmt::Display for PerturbedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eps.is_zero() {
            return write!(f, "{}", self.base);
        }
        let sign = if self.eps.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}eta", self.base, sign, self.eps.abs())
    }
}

impl FromStr for PerturbedScalar {
    type Err = Error;
    /// Accepts the `Display` form: `"3/2"`, `"inf"`, `"3/2+1/4eta"`, `"-1-2eta"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let Some(body) = t.strip_suffix("eta") else {
            return t.parse::<ExtRat>().map(Into::into);
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(|| Error::InvalidValue {
                value: s.to_string(),
                reason: "missing base part".into(),
            })?;
        let base = parse_rational(&body[..split])?;
        let eps = parse_rational(&body[split..])?;
        Ok(PerturbedScalar::new(ExtRat::Finite(base), eps))
    }
}

/// Least common multiple of the denominators of `values`.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Smallest integer `>= v`.
pub fn ceil_q(v: &Q) -> BigInt {
    v.ceil().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/4").unwrap(), q_frac(3, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), q_frac(-5, 4));
        assert_eq!(format_rational(&q_frac(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(7)), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!("inf".parse::<ExtRat>().unwrap(), ExtRat::Inf);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(format_decimal(&q_frac(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&q_frac(-7, 2), 2), "-3.50");
        assert_eq!(format_decimal(&q_frac(-1, 3), 2), "-0.33");
        assert_eq!(format_decimal(&q_frac(8, 7), 3), "1.143");
        assert_eq!(format_decimal(&q_frac(-2, 3), 1), "-0.7");
    }

    #[test]
    fn infinity_absorbs_and_dominates() {
        let a = ExtRat::from(5);
        assert_eq!(&a + &ExtRat::Inf, ExtRat::Inf);
        assert!(ExtRat::Inf > ExtRat::from(1_000_000));
        let p = PerturbedScalar::new(ExtRat::Inf, q(3));
        assert_eq!(p.eps(), &q(0));
    }

    #[test]
    fn lexicographic_order() {
        let a = PerturbedScalar::new(q(1).into(), q(5));
        let b = PerturbedScalar::new(q(1).into(), q(6));
        let c = PerturbedScalar::new(q(2).into(), q(-100));
        assert!(a < b && b < c && c < PerturbedScalar::inf());
    }

    #[test]
    fn perturbed_text_round_trip() {
        for s in ["3/2", "inf", "3/2+1/4eta", "-1-2eta", "0+1eta"] {
            let v: PerturbedScalar = s.parse().unwrap();
            assert_eq!(v.to_string().parse::<PerturbedScalar>().unwrap(), v);
        }
        let v: PerturbedScalar = "-1-2eta".parse().unwrap();
        assert_eq!(v, PerturbedScalar::new(q(-1).into(), q(-2)));
    }
}
