//! Stars: the closed-form box degree `B`, the integer-point recursion giving
//! `|W| >= kB - D` independent monomials, and the `kB + 1` upper check.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::envelope::{lower_envelope, Line};
use crate::error::{Error, Result};
use crate::hilbert::MonomialGrid;
use crate::independence::{search_max_independent, verify_certificate, Certificate, Member, SearchOptions, Witness};
use crate::poly::{Monomial, Point, TropPoly};
use crate::prevariety::{star_to_prevariety, ParamBound, Star};
use crate::scalar::{q, PerturbedScalar, Q};

/// `sum_i max(sum of positive i-th entries, -sum of negative i-th entries)`.
pub fn star_b(star: &Star) -> i64 {
    (0..star.dim())
        .map(|i| {
            let (pos, neg) = star.directions().iter().fold((0, 0), |(p, n), d| {
                let x = d[i];
                if x > 0 {
                    (p + x, n)
                } else {
                    (p, n - x)
                }
            });
            pos.max(neg)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarConstruction {
    pub k: u32,
    /// Axes mirrored (`x -> -x`, exponent `e -> k - e`) before the recursion.
    pub reflected: [bool; 2],
    /// Directions with a negative entry, in the mirrored frame.
    pub negative_dirs: Vec<(i64, i64)>,
    pub base_thresholds: Vec<i64>,
    /// Thresholds when the recursion halted.
    pub thresholds: Vec<i64>,
    /// Points in the order they were added, in the mirrored frame.
    pub points: Vec<(i64, i64)>,
    /// Index into `negative_dirs` of the active line at each step.
    pub active: Vec<usize>,
    /// Exponents of the certificate members in the original frame.
    pub exponents: Vec<Monomial>,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    /// Number of distinct winning members on each ray.
    pub ray_slopes: Vec<usize>,
}

impl StarConstruction {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn lower_target(&self) -> i64 {
        self.k as i64 * self.b - self.d
    }
}

fn ceil_sqrt(n: i64) -> i64 {
    let s = n.sqrt();
    if s * s == n {
        s
    } else {
        s + 1
    }
}

/// `C` as a sum of per-direction square-root ceilings.
pub fn star_c(negative_dirs: &[(i64, i64)]) -> i64 {
    negative_dirs.iter().map(|&(u, v)| ceil_sqrt(u * u + v * v)).sum()
}

/// `D` with `|W| >= kB - D` on completion of the recursion.
pub fn star_d(negative_dirs: &[(i64, i64)], c: i64) -> i64 {
    let s: i64 = negative_dirs
        .iter()
        .map(|&(u, v)| match (u >= 0, v >= 0) {
            (true, false) => u - v,
            (false, false) => -2 * (u + v),
            (false, true) => v - u,
            (true, true) => 0,
        })
        .sum();
    c * s
}

/// Mirrors each axis whose positive entries outweigh the negative ones.
fn normalize(star: &Star) -> ([bool; 2], Vec<(i64, i64)>) {
    let mut reflected = [false; 2];
    for (i, r) in reflected.iter_mut().enumerate() {
        let (pos, neg) = star.directions().iter().fold((0, 0), |(p, n), d| {
            (p + d[i].max(0), n - d[i].min(0))
        });
        *r = pos > neg;
    }
    let dirs = star
        .directions()
        .iter()
        .map(|d| {
            let sx = if reflected[0] { -1 } else { 1 };
            let sy = if reflected[1] { -1 } else { 1 };
            (sx * d[0], sy * d[1])
        })
        .collect();
    (reflected, dirs)
}

fn floor_q(v: &Q) -> BigInt {
    v.floor().to_integer()
}

fn ceil_q(v: &Q) -> BigInt {
    v.ceil().to_integer()
}

/// Lexicographically smallest integer point strictly inside the edge
/// `P ∩ {u x + v y = c}`, if that edge has positive length.
fn inner_point(lines: &[(i64, i64)], cs: &[i64], l: usize, k: i64) -> Option<(i64, i64)> {
    let (u, v) = lines[l];
    let c = cs[l];
    let g = i64::extended_gcd(&u, &v);
    debug_assert_eq!(g.gcd, 1);
    let p0 = (c * g.x, c * g.y);
    let dir = (-v, u);
    let mut rows: Vec<(i64, i64, i64)> = vec![(1, 0, 0), (-1, 0, -k), (0, 1, 0), (0, -1, -k)];
    rows.extend(
        lines
            .iter()
            .zip(cs)
            .enumerate()
            .filter(|&(j, _)| j != l)
            .map(|(_, (&(a, b), &r))| (a, b, r)),
    );
    let mut lo: Option<Q> = None;
    let mut hi: Option<Q> = None;
    for (a, b, rhs) in rows {
        let alpha = a * dir.0 + b * dir.1;
        let beta = rhs - (a * p0.0 + b * p0.1);
        if alpha == 0 {
            if beta > 0 {
                return None;
            }
            continue;
        }
        let bound = Q::new(beta.into(), alpha.into());
        if alpha > 0 {
            if lo.as_ref().is_none_or(|x| &bound > x) {
                lo = Some(bound);
            }
        } else if hi.as_ref().is_none_or(|x| &bound < x) {
            hi = Some(bound);
        }
    }
    let (lo, hi) = (lo?, hi?);
    if lo >= hi {
        return None;
    }
    let tmin: BigInt = floor_q(&lo) + 1;
    let tmax: BigInt = ceil_q(&hi) - 1;
    if tmin > tmax {
        return None;
    }
    // x = p0.x - v t; for v = 0 order by y = p0.y + u t
    let key = if v != 0 { -v } else { u };
    let t: i64 = if key > 0 { tmin } else { tmax }.try_into().ok()?;
    Some((p0.0 + t * dir.0, p0.1 + t * dir.1))
}

/// Runs the recursion for `k > C` and returns the construction with its
/// verified certificate `min_s { <e_s, x> + b_s }`.
pub fn star_lower_construct(star: &Star, k: u32) -> Result<(StarConstruction, Certificate)> {
    if star.dim() != 2 {
        return Err(Error::precondition("the integer-point recursion needs a star in the plane"));
    }
    let (reflected, dirs) = normalize(star);
    let negative_dirs: Vec<(i64, i64)> = dirs.iter().copied().filter(|&(u, v)| u < 0 || v < 0).collect();
    let c = star_c(&negative_dirs);
    if (k as i64) <= c {
        return Err(Error::BelowThreshold {
            k,
            threshold: c as u32,
        });
    }
    let b = star_b(star);
    let d = star_d(&negative_dirs, c);
    let ki = k as i64;

    let base_thresholds: Vec<i64> = negative_dirs.iter().map(|&(u, v)| c * u.min(v)).collect();
    let mut cs = base_thresholds.clone();
    let mut points = Vec::new();
    let mut active = Vec::new();
    loop {
        let step = (0..negative_dirs.len()).find_map(|l| inner_point(&negative_dirs, &cs, l, ki).map(|p| (l, p)));
        let Some((l, p)) = step else { break };
        debug_assert!(!points.contains(&p));
        points.push(p);
        active.push(l);
        cs[l] -= 1;
    }

    let exponents: Vec<Monomial> = points
        .iter()
        .map(|&(x, y)| {
            let e = |w: i64, r: bool| (if r { ki - w } else { w }) as u32;
            Monomial(vec![e(x, reflected[0]), e(y, reflected[1])])
        })
        .collect();
    let pow2 = |s: usize| Q::from_integer(BigInt::one() << s);
    let members: Vec<Member> = exponents
        .iter()
        .enumerate()
        .map(|(i, e)| Member {
            poly: TropPoly::monomial(e.clone()),
            b: PerturbedScalar::finite(pow2(i + 1) - e.dot(star.apex().coords())),
        })
        .collect();

    // witnesses: a strictly winning piece on some ray of the mirrored star
    let sigma = [
        if reflected[0] { -1 } else { 1 },
        if reflected[1] { -1 } else { 1 },
    ];
    let mut witness: Vec<Option<Point>> = vec![None; points.len()];
    let mut ray_slopes = Vec::with_capacity(dirs.len());
    for &(du, dv) in &dirs {
        let lines: Vec<Line<Q>> = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Line::new(q(x * du + y * dv), pow2(i + 1)))
            .collect();
        let env = lower_envelope(lines, &ParamBound::Finite(Q::zero()), &ParamBound::PosInf);
        let mut winners = 0;
        for piece in &env.pieces {
            let Some(s) = piece.strict_winner() else { continue };
            winners += 1;
            if witness[s].is_none() {
                let z = piece.interior();
                let coords = star
                    .apex()
                    .coords()
                    .iter()
                    .zip([du * sigma[0], dv * sigma[1]])
                    .map(|(a, m)| a + &z * q(m))
                    .collect();
                witness[s] = Some(Point::new(coords));
            }
        }
        ray_slopes.push(winners);
    }
    let witnesses = witness
        .into_iter()
        .enumerate()
        .map(|(s, w)| {
            w.map(|point| Witness { point, minimizer: s })
                .ok_or_else(|| Error::Construction(format!("member {} never wins on the star", s + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let cert = Certificate::new(members, witnesses)?;
    let check = verify_certificate(&cert, &star_to_prevariety(star));
    if !check.verified {
        return Err(Error::Construction(format!("star certificate failed: {check}")));
    }
    let construction = StarConstruction {
        k,
        reflected,
        negative_dirs,
        base_thresholds,
        thresholds: cs,
        points,
        active,
        exponents,
        b,
        c,
        d,
        ray_slopes,
    };
    if (construction.size() as i64) < construction.lower_target() {
        return Err(Error::Construction(format!(
            "recursion produced {} points, below kB - D = {}",
            construction.size(),
            construction.lower_target()
        )));
    }
    Ok((construction, cert))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperCheck {
    pub k: u32,
    /// `kB + 1`
    pub bound: i64,
    /// Largest independent set found by search on the box grid.
    pub search: usize,
    /// Whether the search finished within its budget.
    pub complete: bool,
    pub holds: bool,
}

pub fn star_upper_check(star: &Star, k: u32, opts: &SearchOptions) -> Result<UpperCheck> {
    let bound = k as i64 * star_b(star) + 1;
    let grid = MonomialGrid::boxed(star.dim(), k);
    let out = search_max_independent(&grid.enumerate(), &star_to_prevariety(star), opts)?;
    Ok(UpperCheck {
        k,
        bound,
        search: out.size,
        complete: out.complete,
        holds: (out.size as i64) <= bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarRow {
    pub k: u32,
    /// `None` when `k <= C`.
    pub w: Option<usize>,
    pub lower_target: i64,
    pub upper: i64,
    pub search: Option<usize>,
    pub verified: bool,
}

/// Per-`k` rows ordered by `k`. Search runs only when `search` is given.
pub fn star_sweep(star: &Star, ks: std::ops::RangeInclusive<u32>, search: Option<&SearchOptions>) -> Result<Vec<StarRow>> {
    let b = star_b(star);
    ks.collect::<Vec<u32>>()
        .into_par_iter()
        .map(|k| {
            let (w, lower_target, verified) = match star_lower_construct(star, k) {
                Ok((con, _)) => (Some(con.size()), con.lower_target(), true),
                Err(Error::BelowThreshold { .. }) => (None, k as i64 * b - lower_d(star)?, false),
                Err(e) => return Err(e),
            };
            let search = search
                .map(|o| star_upper_check(star, k, o).map(|u| u.search))
                .transpose()?;
            Ok(StarRow {
                k,
                w,
                lower_target,
                upper: k as i64 * b + 1,
                search,
                verified,
            })
        })
        .collect()
}

fn lower_d(star: &Star) -> Result<i64> {
    if star.dim() != 2 {
        return Err(Error::precondition("the integer-point recursion needs a star in the plane"));
    }
    let (_, dirs) = normalize(star);
    let neg: Vec<(i64, i64)> = dirs.into_iter().filter(|&(u, v)| u < 0 || v < 0).collect();
    Ok(star_d(&neg, star_c(&neg)))
}
