//! Certificates `min_j { b_j + f_j }` with one witness point per member.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{eval, Point, TropPoly};
use crate::prevariety::Prevariety;
use crate::scalar::PerturbedScalar;

use super::{build_eval_matrix, dual_potentials, is_trop_nonsingular, min_matching};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub poly: TropPoly,
    pub b: PerturbedScalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub point: Point,
    /// Index of the member that must strictly win at `point`.
    pub minimizer: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    members: Vec<Member>,
    witnesses: Vec<Witness>,
}

impl Certificate {
    /// Checks that every member has exactly one designated witness.
    pub fn new(members: Vec<Member>, witnesses: Vec<Witness>) -> Result<Self> {
        if members.len() != witnesses.len() {
            return Err(Error::DimensionMismatch {
                expected: members.len(),
                found: witnesses.len(),
            });
        }
        let mut seen = vec![false; members.len()];
        for w in &witnesses {
            match seen.get_mut(w.minimizer) {
                Some(s) if !*s => *s = true,
                _ => {
                    return Err(Error::precondition(format!(
                        "witness minimizer {} is out of range or repeated",
                        w.minimizer
                    )))
                }
            }
        }
        Ok(Certificate { members, witnesses })
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn witnesses(&self) -> &[Witness] {
        &self.witnesses
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Witness of member `j`.
    pub fn witness_of(&self, j: usize) -> Option<&Point> {
        self.witnesses.iter().find(|w| w.minimizer == j).map(|w| &w.point)
    }

    pub fn polys(&self) -> Vec<TropPoly> {
        self.members.iter().map(|m| m.poly.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub verified: bool,
    pub diagnostic: Option<String>,
}

impl Verification {
    fn ok() -> Self {
        Verification {
            verified: true,
            diagnostic: None,
        }
    }

    fn fail(msg: String) -> Self {
        Verification {
            verified: false,
            diagnostic: Some(msg),
        }
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.diagnostic {
            None => f.write_str("verified"),
            Some(d) => write!(f, "refuted: {d}"),
        }
    }
}

/// Exact check of the strict inequalities at every witness. Indices in the
/// diagnostic are 1-based.
pub fn verify_certificate(cert: &Certificate, v: &Prevariety) -> Verification {
    for (k, w) in cert.witnesses.iter().enumerate() {
        let k1 = k + 1;
        match v.contains(&w.point) {
            Ok(true) => {}
            Ok(false) => return Verification::fail(format!("witness {k1} {} is not in the prevariety", w.point)),
            Err(e) => return Verification::fail(format!("witness {k1}: {e}")),
        }
        let j = w.minimizer;
        let values: Vec<PerturbedScalar> = match cert
            .members
            .iter()
            .map(|m| eval(&m.poly, &w.point).map(|x| &x + &m.b))
            .collect::<Result<_>>()
        {
            Ok(vals) => vals,
            Err(e) => return Verification::fail(format!("witness {k1}: {e}")),
        };
        for (i, val) in values.iter().enumerate() {
            if i == j {
                continue;
            }
            if *val == values[j] {
                return Verification::fail(format!(
                    "tie at witness {k1}: members {} and {} both attain {}",
                    j + 1,
                    i + 1,
                    val
                ));
            }
            if *val < values[j] {
                return Verification::fail(format!(
                    "at witness {k1} member {} ({}) undercuts member {} ({})",
                    i + 1,
                    val,
                    j + 1,
                    values[j]
                ));
            }
        }
    }
    Verification::ok()
}

/// Builds a certificate from candidate witnesses, or `None` when the
/// evaluation matrix is tropically singular.
pub fn certify_from_points(fs: &[TropPoly], vs: &[Point], v: &Prevariety) -> Result<Option<Certificate>> {
    if fs.len() != vs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            found: vs.len(),
        });
    }
    if fs.is_empty() {
        return Err(Error::precondition("nothing to certify"));
    }
    for p in vs {
        if !v.contains(p)? {
            return Err(Error::precondition(format!("point {p} is not in the prevariety")));
        }
    }
    let a = build_eval_matrix(fs, vs)?;
    let m = match min_matching(&a) {
        Ok(m) => m,
        Err(Error::NoFiniteMatching) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !m.unique {
        return Ok(None);
    }
    let diag = a.permute_cols(&m.permutation);
    let w = dual_potentials(&diag)?;
    let members = fs
        .iter()
        .zip(w)
        .map(|(f, b)| Member { poly: f.clone(), b })
        .collect();
    let witnesses = m
        .permutation
        .iter()
        .enumerate()
        .map(|(i, &col)| Witness {
            point: vs[col].clone(),
            minimizer: i,
        })
        .collect();
    let cert = Certificate::new(members, witnesses)?;
    let check = verify_certificate(&cert, v);
    if !check.verified {
        return Err(Error::Construction(format!(
            "constructed certificate fails: {}",
            check.diagnostic.unwrap_or_default()
        )));
    }
    let witness_pts: Vec<Point> = cert.witnesses.iter().map(|w| w.point.clone()).collect();
    debug_assert!(is_trop_nonsingular(&build_eval_matrix(&cert.polys(), &witness_pts)?)?);
    Ok(Some(cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prevariety::{Halfspace, Polyhedron};
    use crate::scalar::q;

    fn diagonal() -> Prevariety {
        let p = Polyhedron::new(2, vec![Halfspace::eq(vec![q(1), q(-1)], q(0)).unwrap()]).unwrap();
        Prevariety::from_polyhedra(2, vec![p]).unwrap()
    }

    fn mono(e: &[u32]) -> TropPoly {
        TropPoly::from_ints(&[(e, 0)]).unwrap()
    }

    #[test]
    fn certify_two_monomials_on_diagonal() {
        let v = diagonal();
        let fs = vec![mono(&[0, 0]), mono(&[1, 1])];
        let cert = certify_from_points(&fs, &[Point::from_ints(&[1, 1]), Point::from_ints(&[0, 0])], &v)
            .unwrap()
            .unwrap();
        assert!(verify_certificate(&cert, &v).verified);
        assert_eq!(cert.witness_of(0), Some(&Point::from_ints(&[1, 1])));
        assert_eq!(cert.witness_of(1), Some(&Point::from_ints(&[0, 0])));
    }

    #[test]
    fn singular_points_fail() {
        let v = diagonal();
        let fs = vec![mono(&[0, 0]), mono(&[1, 1])];
        let r = certify_from_points(&fs, &[Point::from_ints(&[0, 0]), Point::from_ints(&[0, 0])], &v).unwrap();
        assert!(r.is_none());
        let off = certify_from_points(&fs, &[Point::from_ints(&[0, 0]), Point::from_ints(&[1, 0])], &v);
        assert!(off.is_err());
    }

    #[test]
    fn single_member_is_vacuous() {
        let v = Prevariety::from_points(&[Point::from_ints(&[5, 0])]).unwrap();
        let cert = certify_from_points(&[mono(&[1, 0])], &[Point::from_ints(&[5, 0])], &v)
            .unwrap()
            .unwrap();
        assert_eq!(cert.members()[0].b, PerturbedScalar::zero());
        assert!(verify_certificate(&cert, &v).verified);
    }

    #[test]
    fn tie_diagnostic() {
        let v = diagonal();
        let members = vec![
            Member { poly: mono(&[0, 0]), b: PerturbedScalar::zero() },
            Member { poly: mono(&[1, 1]), b: PerturbedScalar::zero() },
        ];
        let witnesses = vec![
            Witness { point: Point::from_ints(&[0, 0]), minimizer: 0 },
            Witness { point: Point::from_ints(&[0, 0]), minimizer: 1 },
        ];
        let cert = Certificate::new(members, witnesses).unwrap();
        let r = verify_certificate(&cert, &v);
        assert!(!r.verified);
        assert!(r.diagnostic.unwrap().starts_with("tie at witness 1"));
    }

    #[test]
    fn malformed_witness_assignment() {
        let members = vec![Member { poly: mono(&[0, 0]), b: PerturbedScalar::zero() }];
        let w = vec![Witness { point: Point::from_ints(&[0, 0]), minimizer: 3 }];
        assert!(Certificate::new(members, w).is_err());
    }
}
