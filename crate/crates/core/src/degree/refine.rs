//! Newton lifts of planar certificates on one-dimensional prevarieties and
//! the degree-`kr` refinement built along the edges of their adjacency graph.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::envelope::{lower_envelope, Envelope, Line};
use crate::error::{Error, Result};
use crate::fm::{self, Ineq};
use crate::independence::{verify_certificate, Certificate, Member, Witness};
use crate::poly::{Monomial, Point, TropPoly};
use crate::prevariety::{Branch, Prevariety, Segment};
use crate::scalar::{q, PerturbedScalar, Q};

/// Adjacent envelope pieces on one branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftEdge {
    pub a: usize,
    pub b: usize,
    pub branch: usize,
    /// Parameter of the shared vertex on the branch.
    pub vertex: PerturbedScalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonLift {
    pub support: Vec<Monomial>,
    pub coefficients: Vec<Q>,
    /// Member `j` is lifted by `weights[j] * eta`.
    pub weights: Vec<Q>,
    pub branches: Vec<Branch>,
    /// `None` for point branches.
    pub envelopes: Vec<Option<Envelope<PerturbedScalar>>>,
    pub edges: Vec<LiftEdge>,
    pub components: usize,
}

fn perturbed(a: &Q, w: &Q) -> PerturbedScalar {
    PerturbedScalar::finite(a.clone()) + PerturbedScalar::eta(w.clone())
}

fn branch_lines<T: Clone>(seg: &Segment, support: &[Monomial], offsets: &[T], add: impl Fn(Q, &T) -> T) -> Vec<Line<T>> {
    let dir = seg.direction_q();
    support
        .iter()
        .zip(offsets)
        .map(|(m, a)| Line {
            slope: m.dot(&dir),
            offset: add(m.dot(&seg.base().0), a),
        })
        .collect()
}

fn generic(env: &Envelope<PerturbedScalar>) -> bool {
    env.pieces.iter().all(|p| p.strict_winner().is_some())
        && env.vertices.iter().all(|v| env.ties_at(&v.t).len() == 2)
}

fn count_components(n: usize, edges: &[LiftEdge]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in edges {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        parent[ra] = rb;
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

type WeightScheme = fn(usize) -> Q;

const SCHEMES: [WeightScheme; 3] = [
    |j| q((j * j) as i64),
    |j| q(1i64 << j.min(62)),
    |j| q((j * j * j) as i64),
];

pub fn build_newton_lift(cert: &Certificate, v: &Prevariety) -> Result<NewtonLift> {
    if v.ambient_dim() != 2 {
        return Err(Error::precondition("the Newton lift is built in the plane only"));
    }
    if v.dimension() != Some(1) {
        return Err(Error::NotOneDimensional(format!("dimension {:?}", v.dimension())));
    }
    let check = verify_certificate(cert, v);
    if !check.verified {
        return Err(Error::precondition(format!("certificate does not verify: {check}")));
    }
    let mut support = Vec::new();
    let mut coefficients = Vec::new();
    for (j, m) in cert.members().iter().enumerate() {
        let term = m
            .poly
            .as_single_term()
            .ok_or_else(|| Error::precondition(format!("member {} is not a monomial", j + 1)))?;
        let a = (m.b.clone() + term.coeff.clone())
            .base_value()
            .filter(|_| m.b.eps().is_zero() && term.coeff.eps().is_zero())
            .cloned()
            .ok_or_else(|| Error::precondition(format!("member {} has a non-real coefficient", j + 1)))?;
        support.push(term.monomial.clone());
        coefficients.push(a);
    }
    let branches = v.branches()?;
    let c = branches.len();

    for scheme in SCHEMES {
        let weights: Vec<Q> = (1..=support.len()).map(scheme).collect();
        let offsets: Vec<PerturbedScalar> = coefficients.iter().zip(&weights).map(|(a, w)| perturbed(a, w)).collect();
        let envelopes: Vec<Option<Envelope<PerturbedScalar>>> = branches
            .iter()
            .map(|br| match br {
                Branch::Point(_) => None,
                Branch::Segment(seg) => {
                    let lines = branch_lines(seg, &support, &offsets, |x, a| PerturbedScalar::finite(x) + a.clone());
                    Some(lower_envelope(lines, seg.lo(), seg.hi()))
                }
            })
            .collect();
        if !envelopes.iter().flatten().all(generic) {
            continue;
        }
        let edges: Vec<LiftEdge> = envelopes
            .iter()
            .enumerate()
            .filter_map(|(l, e)| e.as_ref().map(|e| (l, e)))
            .flat_map(|(l, e)| {
                e.vertices.iter().map(move |vx| LiftEdge {
                    a: vx.left,
                    b: vx.right,
                    branch: l,
                    vertex: vx.t.clone(),
                })
            })
            .collect();
        let components = count_components(support.len(), &edges);
        if components > c {
            return Err(Error::Construction(format!(
                "adjacency graph has {components} components on {c} branches"
            )));
        }
        return Ok(NewtonLift {
            support,
            coefficients,
            weights,
            branches,
            envelopes,
            edges,
            components,
        });
    }
    Err(Error::Construction("no perturbation weights separate the envelope vertices".into()))
}

impl NewtonLift {
    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    /// Whether the lifted endpoints of `edge` span an edge of the lower hull
    /// of the lifted support: some plane touches both and stays strictly
    /// below every other lifted point.
    pub fn is_lower_hull_edge(&self, edge: &LiftEdge) -> bool {
        let lifted = |j: usize| perturbed(&self.coefficients[j], &self.weights[j]);
        let coords = |j: usize| -> Vec<Q> {
            let m = self.support[j].as_rational();
            vec![m[0].clone(), m[1].clone(), q(1)]
        };
        let mut sys: Vec<Ineq<PerturbedScalar>> = Vec::new();
        for j in [edge.a, edge.b] {
            sys.extend(Ineq::eq(coords(j), lifted(j)));
        }
        for j in (0..self.support.len()).filter(|&j| j != edge.a && j != edge.b) {
            let neg: Vec<Q> = coords(j).iter().map(|x| -x).collect();
            sys.push(Ineq::gt(neg, lifted(j).scale(&q(-1))));
        }
        fm::feasible(3, &sys)
    }

    /// Realizes the symbolic perturbation at a concrete `eta0` that keeps the
    /// envelope combinatorics and the certificate valid.
    fn realize(&self, cert: &Certificate, v: &Prevariety) -> Result<(Q, Vec<Q>, Vec<Q>)> {
        let mut eta0 = Q::zero();
        for attempt in 0..80 {
            if attempt == 1 {
                eta0 = q(1);
            } else if attempt > 1 {
                eta0 /= q(2);
            }
            let coeffs: Vec<Q> = self.coefficients.iter().zip(&self.weights).map(|(a, w)| a + w * &eta0).collect();
            let mut ts = Vec::new();
            let mut same = true;
            for (br, env) in self.branches.iter().zip(&self.envelopes) {
                let (Branch::Segment(seg), Some(env)) = (br, env) else { continue };
                let lines = branch_lines(seg, &self.support, &coeffs, |x, a| x + a);
                let real = lower_envelope(lines, seg.lo(), seg.hi());
                let shape = |e: &Envelope<Q>| e.pieces.iter().map(|p| p.lines.clone()).collect::<Vec<_>>();
                let sym: Vec<Vec<usize>> = env.pieces.iter().map(|p| p.lines.clone()).collect();
                if shape(&real) != sym || real.vertices.iter().any(|vx| real.ties_at(&vx.t).len() != 2) {
                    same = false;
                    break;
                }
                ts.extend(real.vertices.iter().map(|vx| vx.t.clone()));
            }
            if !same {
                continue;
            }
            let shifted = with_coefficients(cert, &self.support, &coeffs)?;
            if verify_certificate(&shifted, v).verified {
                return Ok((eta0, coeffs, ts));
            }
        }
        Err(Error::BudgetExceeded("no admissible value for the perturbation parameter".into()))
    }
}

fn with_coefficients(cert: &Certificate, support: &[Monomial], coeffs: &[Q]) -> Result<Certificate> {
    let members = support
        .iter()
        .zip(coeffs)
        .map(|(m, a)| Member {
            poly: TropPoly::monomial(m.clone()),
            b: PerturbedScalar::finite(a.clone()),
        })
        .collect();
    Certificate::new(members, cert.witnesses().to_vec())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    pub certificate: Certificate,
    pub r: u32,
    pub epsilon: Q,
    pub eta: Q,
    /// `(|S| - c) r`
    pub guaranteed: i64,
}

fn scale_monomial(m: &Monomial, f: u32) -> Monomial {
    Monomial(m.0.iter().map(|e| e * f).collect())
}

pub fn refine_certificate(cert: &Certificate, v: &Prevariety, r: u32) -> Result<Refinement> {
    if r == 0 {
        return Err(Error::precondition("r must be at least 1"));
    }
    let lift = build_newton_lift(cert, v)?;
    let guaranteed = (cert.len() as i64 - lift.branch_count() as i64) * r as i64;
    if r == 1 {
        return Ok(Refinement {
            certificate: cert.clone(),
            r,
            epsilon: Q::zero(),
            eta: Q::zero(),
            guaranteed,
        });
    }
    let (eta, coeffs, vertex_ts) = lift.realize(cert, v)?;

    // one edge per unordered pair, with its realized vertex
    let mut edges: BTreeMap<(usize, usize), (usize, Q)> = BTreeMap::new();
    for (e, t) in lift.edges.iter().zip(&vertex_ts) {
        edges.entry((e.a.min(e.b), e.a.max(e.b))).or_insert((e.branch, t.clone()));
    }

    // smallest gap between the envelope and a non-minimizing member at a vertex
    let mut slack: Option<Q> = None;
    for (e, t) in lift.edges.iter().zip(&vertex_ts) {
        let Branch::Segment(seg) = &lift.branches[e.branch] else { continue };
        let x = seg.point_at(t);
        let value = lift.support[e.a].dot(&x.0) + &coeffs[e.a];
        for j in (0..lift.support.len()).filter(|&j| j != e.a && j != e.b) {
            let gap = lift.support[j].dot(&x.0) + &coeffs[j] - &value;
            if slack.as_ref().is_none_or(|s| &gap < s) {
                slack = Some(gap);
            }
        }
    }
    let rq = q(r as i64);
    let mut epsilon = slack.unwrap_or_else(|| q(1)) / (q(4) * &rq * &rq);
    debug_assert!(epsilon.is_positive());

    for _ in 0..64 {
        let mut chosen: BTreeMap<Monomial, (Q, Point)> = BTreeMap::new();
        let mut offer = |m: Monomial, b: Q, p: Point| match chosen.get(&m) {
            Some((old, _)) if old <= &b => {}
            _ => {
                chosen.insert(m, (b, p));
            }
        };
        for (j, m) in lift.support.iter().enumerate() {
            let w = cert.witness_of(j).expect("every member has a witness").clone();
            offer(scale_monomial(m, r), &coeffs[j] * &rq, w);
        }
        // the bump -eps p (r - p) is strictly convex in p, so every p wins
        // near the shared vertex
        for (&(a, b), (l, tv)) in &edges {
            let Branch::Segment(seg) = &lift.branches[*l] else { continue };
            let dir = seg.direction_q();
            let (ma, mb) = (&lift.support[a], &lift.support[b]);
            let denom = ma.dot(&dir) - mb.dot(&dir);
            for p in 1..r {
                let exp = Monomial(
                    ma.0.iter()
                        .zip(&mb.0)
                        .map(|(x, y)| (r - p) * x + p * y)
                        .collect(),
                );
                let (pq, rp) = (q(p as i64), q((r - p) as i64));
                let bval = &rp * &coeffs[a] + &pq * &coeffs[b] - &epsilon * &pq * &rp;
                let t = tv - &epsilon * q(r as i64 - 2 * p as i64) / &denom;
                offer(exp, bval, seg.point_at(&t));
            }
        }
        let mut members = Vec::with_capacity(chosen.len());
        let mut witnesses = Vec::with_capacity(chosen.len());
        for (i, (m, (b, p))) in chosen.into_iter().enumerate() {
            members.push(Member {
                poly: TropPoly::monomial(m),
                b: PerturbedScalar::finite(b),
            });
            witnesses.push(Witness { point: p, minimizer: i });
        }
        let out = Certificate::new(members, witnesses)?;
        if verify_certificate(&out, v).verified {
            if (out.len() as i64) < guaranteed {
                return Err(Error::Construction(format!(
                    "refined certificate has {} members, below (|S| - c) r = {guaranteed}",
                    out.len()
                )));
            }
            return Ok(Refinement {
                certificate: out,
                r,
                epsilon,
                eta,
                guaranteed,
            });
        }
        epsilon /= q(2);
    }
    Err(Error::BudgetExceeded(format!("refinement did not verify; last epsilon {epsilon}")))
}
