//! JSON model files: one geometry (polyhedra, segments or a star) and an
//! optional certificate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::independence::{Certificate, Member, Witness};
use crate::linalg;
use crate::poly::{Monomial, Point, TropPoly};
use crate::prevariety::{star_to_prevariety, Halfspace, ParamBound, Polyhedron, Prevariety, Relation, Segment, Star};
use crate::scalar::{format_rational, parse_rational, PerturbedScalar, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawModel {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polyhedra: Option<Vec<RawPolyhedron>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<RawSegment>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<RawStar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<RawCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPolyhedron {
    pub constraints: Vec<RawConstraint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConstraint {
    pub normal: Vec<String>,
    pub rel: String,
    #[serde(rename = "const")]
    pub constant: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSegment {
    pub base: Vec<String>,
    pub dir: Vec<i64>,
    pub t: [String; 2],
    /// Whether each finite end is included; both by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed: Option<[bool; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStar {
    pub apex: Vec<String>,
    pub dirs: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCertificate {
    pub members: Vec<RawMember>,
    pub witnesses: Vec<RawWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMember {
    pub poly: Vec<RawTerm>,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTerm {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawWitness {
    pub point: Vec<String>,
    /// Zero-based index into `members`.
    pub minimizer: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Geometry {
    Polyhedra(Vec<Polyhedron>),
    Segments(Vec<Segment>),
    Star(Star),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub dim: usize,
    pub geometry: Geometry,
    pub certificate: Option<Certificate>,
    /// Normalizations applied while parsing.
    pub warnings: Vec<String>,
}

impl Model {
    pub fn prevariety(&self) -> Result<Prevariety> {
        match &self.geometry {
            Geometry::Polyhedra(ps) => Prevariety::from_polyhedra(self.dim, ps.clone()),
            Geometry::Segments(ss) => Prevariety::from_segments(self.dim, ss.clone()),
            Geometry::Star(s) => Ok(star_to_prevariety(s)),
        }
    }

    pub fn star(&self) -> Option<&Star> {
        match &self.geometry {
            Geometry::Star(s) => Some(s),
            _ => None,
        }
    }
}

fn rationals(field: &str, xs: &[String]) -> Result<Vec<Q>> {
    xs.iter()
        .map(|x| parse_rational(x).map_err(|e| Error::parse(field, e.to_string())))
        .collect()
}

fn bound(field: &str, s: &str) -> Result<ParamBound> {
    match s.trim() {
        "inf" | "+inf" => Ok(ParamBound::PosInf),
        "-inf" => Ok(ParamBound::NegInf),
        x => parse_rational(x)
            .map(ParamBound::Finite)
            .map_err(|e| Error::parse(field, e.to_string())),
    }
}

fn bound_text(b: &ParamBound) -> String {
    match b {
        ParamBound::Finite(v) => format_rational(v),
        other => other.to_string(),
    }
}

/// Divides by the gcd of the entries, recording a warning when it is not 1.
fn primitive(field: &str, d: &[i64], warnings: &mut Vec<String>) -> Result<Vec<i64>> {
    let g = d.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
    if g == 0 {
        return Err(Error::parse(field, "zero direction"));
    }
    if g != 1 {
        let out: Vec<i64> = d.iter().map(|x| x / g).collect();
        warnings.push(format!("{field}: direction {d:?} rescaled to {out:?}"));
        return Ok(out);
    }
    Ok(d.to_vec())
}

fn check_dim(field: &str, dim: &mut Option<usize>, found: usize) -> Result<()> {
    match *dim {
        None => {
            *dim = Some(found);
            Ok(())
        }
        Some(d) if d == found => Ok(()),
        Some(d) => Err(Error::parse(field, format!("expected {d} coordinates, found {found}"))),
    }
}

pub fn parse_model(text: &str) -> Result<Model> {
    let raw: RawModel = serde_json::from_str(text).map_err(|e| Error::parse("model", e.to_string()))?;
    from_raw(&raw)
}

pub fn from_raw(raw: &RawModel) -> Result<Model> {
    let shapes = [raw.polyhedra.is_some(), raw.segments.is_some(), raw.star.is_some()];
    if shapes.iter().filter(|&&x| x).count() != 1 {
        return Err(Error::parse(
            "model",
            "exactly one of \"polyhedra\", \"segments\" or \"star\" must be present",
        ));
    }
    let mut warnings = Vec::new();
    let mut dim = None;
    let geometry = if let Some(ps) = &raw.polyhedra {
        let mut out = Vec::new();
        for (i, p) in ps.iter().enumerate() {
            let mut hs = Vec::new();
            for (j, c) in p.constraints.iter().enumerate() {
                let field = format!("polyhedra[{i}].constraints[{j}]");
                let normal = rationals(&format!("{field}.normal"), &c.normal)?;
                check_dim(&field, &mut dim, normal.len())?;
                let rel = match c.rel.as_str() {
                    "=" => Relation::Eq,
                    ">=" => Relation::Ge,
                    "<=" => Relation::Ge,
                    other => return Err(Error::parse(format!("{field}.rel"), format!("unknown relation {other:?}"))),
                };
                let constant = parse_rational(&c.constant).map_err(|e| Error::parse(format!("{field}.const"), e.to_string()))?;
                let h = if c.rel == "<=" {
                    Halfspace::le(normal, constant)
                } else {
                    Halfspace::new(normal, rel, constant)
                };
                hs.push(h.map_err(|e| Error::parse(&field, e.to_string()))?);
            }
            let n = dim.ok_or_else(|| Error::parse(format!("polyhedra[{i}]"), "no constraints"))?;
            out.push(Polyhedron::new(n, hs).map_err(|e| Error::parse(format!("polyhedra[{i}]"), e.to_string()))?);
        }
        Geometry::Polyhedra(out)
    } else if let Some(ss) = &raw.segments {
        let mut out = Vec::new();
        for (i, s) in ss.iter().enumerate() {
            let field = format!("segments[{i}]");
            let base = rationals(&format!("{field}.base"), &s.base)?;
            check_dim(&field, &mut dim, base.len())?;
            if s.dir.len() != base.len() {
                return Err(Error::parse(format!("{field}.dir"), "length differs from base"));
            }
            let lo = bound(&format!("{field}.t"), &s.t[0])?;
            let hi = bound(&format!("{field}.t"), &s.t[1])?;
            let g = s.dir.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            let dir = primitive(&format!("{field}.dir"), &s.dir, &mut warnings)?;
            // rescaling the direction rescales the parameter range
            let scale = |b: ParamBound| match b {
                ParamBound::Finite(v) => ParamBound::Finite(v * Q::from_integer(g.into())),
                other => other,
            };
            let [lc, hc] = s.closed.unwrap_or([true, true]);
            let seg = Segment::with_flags(Point::new(base), dir, scale(lo), scale(hi), lc, hc)
                .map_err(|e| Error::parse(&field, e.to_string()))?;
            out.push(seg);
        }
        Geometry::Segments(out)
    } else {
        let s = raw.star.as_ref().expect("checked above");
        let apex = rationals("star.apex", &s.apex)?;
        dim = Some(apex.len());
        let mut dirs = Vec::new();
        for (i, d) in s.dirs.iter().enumerate() {
            if d.len() != apex.len() {
                return Err(Error::parse(format!("star.dirs[{i}]"), "length differs from apex"));
            }
            dirs.push(primitive(&format!("star.dirs[{i}]"), d, &mut warnings)?);
        }
        Geometry::Star(Star::new(Point::new(apex), dirs).map_err(|e| Error::parse("star", e.to_string()))?)
    };
    let dim = dim.ok_or_else(|| Error::parse("model", "empty geometry"))?;
    let certificate = raw.certificate.as_ref().map(|c| certificate_from_raw(c, dim)).transpose()?;
    Ok(Model {
        dim,
        geometry,
        certificate,
        warnings,
    })
}

pub fn certificate_from_raw(raw: &RawCertificate, dim: usize) -> Result<Certificate> {
    let mut members = Vec::new();
    for (i, m) in raw.members.iter().enumerate() {
        let field = format!("certificate.members[{i}]");
        let terms = m
            .poly
            .iter()
            .map(|t| {
                let c: PerturbedScalar = t.coeff.parse().map_err(|e: Error| Error::parse(format!("{field}.poly"), e.to_string()))?;
                Ok((Monomial(t.exponents.clone()), c))
            })
            .collect::<Result<Vec<_>>>()?;
        let poly = TropPoly::new(dim, terms).map_err(|e| Error::parse(format!("{field}.poly"), e.to_string()))?;
        let b = m.b.parse().map_err(|e: Error| Error::parse(format!("{field}.b"), e.to_string()))?;
        members.push(Member { poly, b });
    }
    let witnesses = raw
        .witnesses
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let point = rationals(&format!("certificate.witnesses[{i}].point"), &w.point)?;
            if point.len() != dim {
                return Err(Error::parse(format!("certificate.witnesses[{i}].point"), "wrong dimension"));
            }
            Ok(Witness {
                point: Point::new(point),
                minimizer: w.minimizer,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Certificate::new(members, witnesses).map_err(|e| Error::parse("certificate", e.to_string()))
}

fn texts(xs: &[Q]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

pub fn certificate_to_raw(cert: &Certificate) -> RawCertificate {
    RawCertificate {
        members: cert
            .members()
            .iter()
            .map(|m| RawMember {
                poly: m
                    .poly
                    .terms()
                    .iter()
                    .map(|t| RawTerm {
                        exponents: t.monomial.0.clone(),
                        coeff: t.coeff.to_string(),
                    })
                    .collect(),
                b: m.b.to_string(),
            })
            .collect(),
        witnesses: cert
            .witnesses()
            .iter()
            .map(|w| RawWitness {
                point: texts(&w.point.0),
                minimizer: w.minimizer,
            })
            .collect(),
    }
}

pub fn to_raw(model: &Model) -> RawModel {
    let mut raw = RawModel::default();
    match &model.geometry {
        Geometry::Polyhedra(ps) => {
            raw.polyhedra = Some(
                ps.iter()
                    .map(|p| RawPolyhedron {
                        constraints: p
                            .constraints()
                            .iter()
                            .map(|h| RawConstraint {
                                normal: texts(h.normal()),
                                rel: match h.relation() {
                                    Relation::Eq => "=".into(),
                                    Relation::Ge => ">=".into(),
                                },
                                constant: format_rational(h.constant()),
                            })
                            .collect(),
                    })
                    .collect(),
            )
        }
        Geometry::Segments(ss) => {
            raw.segments = Some(
                ss.iter()
                    .map(|s| {
                        // infinite ends carry no flag of their own
                        let lc = s.lo_closed() || s.lo().finite().is_none();
                        let hc = s.hi_closed() || s.hi().finite().is_none();
                        RawSegment {
                            base: texts(&s.base().0),
                            dir: s.direction().to_vec(),
                            t: [bound_text(s.lo()), bound_text(s.hi())],
                            closed: (!(lc && hc)).then_some([lc, hc]),
                        }
                    })
                    .collect(),
            )
        }
        Geometry::Star(s) => {
            raw.star = Some(RawStar {
                apex: texts(&s.apex().0),
                dirs: s.directions().to_vec(),
            })
        }
    }
    raw.certificate = model.certificate.as_ref().map(certificate_to_raw);
    raw
}

pub fn model_to_json(model: &Model) -> String {
    serde_json::to_string_pretty(&to_raw(model)).expect("model serializes")
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(&certificate_to_raw(cert)).expect("certificate serializes")
}

/// Integer directions of a rational vector, for callers building segments.
pub fn integer_direction(d: &[Q]) -> Vec<i64> {
    linalg::primitive_int(d)
        .iter()
        .map(|x| i64::try_from(x).expect("direction fits in i64"))
        .collect()
}
