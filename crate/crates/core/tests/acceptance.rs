//! Acceptance run: one PASS/FAIL line per criterion, with its time limit.
//! `cargo test --test acceptance -- --nocapture` is not needed; this target
//! has its own `main`.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::Rng;

use tropdeg::degree::{build_newton_lift, concave_slopes, refine_certificate, star_lower_construct, star_upper_check, ConcaveSlopes};
use tropdeg::envelope::{lower_envelope, Line};
use tropdeg::hilbert::{count_classes, line_formula_check, th_points, th_polyhedron, MonomialGrid, Shape, GRID_BUDGET};
use tropdeg::independence::{
    brute_force, dual_potentials, hungarian_matching, is_co_ordered, min_matching, search_max_independent,
    tropical_rank, verify_certificate, EvalMatrix, SearchOptions,
};
use tropdeg::model::parse_model;
use tropdeg::prevariety::{star_to_prevariety, Halfspace, ParamBound, Polyhedron, Segment, Star};
use tropdeg::scalar::q;
use tropdeg::{ExtRat, Point, Prevariety, Q};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: tropdeg::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn matching_oracle() -> Outcome {
    let mut rng = common::rng(1);
    let mut unique = 0;
    for i in 0..200 {
        let s = rng.gen_range(1..=6);
        // small integer ranges force ties, fractions exercise exactness
        let a = if i % 2 == 0 {
            common::square_matrix(&mut rng, s, 2, 1)
        } else {
            common::square_matrix(&mut rng, s, 10, 6)
        };
        let brute = lib(brute_force(&a))?;
        for (name, got) in [("min_matching", lib(min_matching(&a))?), ("hungarian", lib(hungarian_matching(&a))?)] {
            ensure(got.value == brute.value && got.unique == brute.unique, || {
                format!("{name} differs on instance {i}: {:?} vs {:?}", got, brute)
            })?;
        }
        unique += brute.unique as usize;
    }
    Ok(format!("200 matrices, {unique} with a unique optimum"))
}

fn diagonal_potentials() -> Outcome {
    let mut rng = common::rng(2);
    let mut done = 0;
    let mut tries = 0;
    while done < 100 {
        tries += 1;
        let s = rng.gen_range(1..=6);
        let a = common::square_matrix(&mut rng, s, 10, 4);
        let m = lib(min_matching(&a))?;
        if !m.unique {
            continue;
        }
        // move the optimum onto the diagonal
        let mut inv = vec![0; s];
        for (i, &j) in m.permutation.iter().enumerate() {
            inv[i] = j;
        }
        let a = a.permute_cols(&inv);
        let d = lib(min_matching(&a))?;
        ensure(d.unique && d.is_identity(), || "permuted optimum is not the diagonal".into())?;
        let w = lib(dual_potentials(&a))?;
        for i in 0..s {
            for l in (0..s).filter(|&l| l != i) {
                let lhs = a.get(i, i) + &w[i];
                let rhs = a.get(l, i) + &w[l];
                ensure(lhs < rhs, || format!("instance {done}: column {i}, row {l}: {lhs} >= {rhs}"))?;
            }
        }
        done += 1;
    }
    Ok(format!("100 matrices ({tries} drawn)"))
}

fn co_ordered_gram() -> Outcome {
    let mut rng = common::rng(3);
    for i in 0..100 {
        let s = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=3);
        let mut us: Vec<Vec<Q>> = Vec::new();
        while us.len() < s {
            let u: Vec<Q> = (0..m).map(|_| q(rng.gen_range(-3..=3))).collect();
            if !us.contains(&u) {
                us.push(u);
            }
        }
        // a strictly decreasing map per coordinate keeps the families co-ordered
        let maps: Vec<(Q, Q)> = (0..m)
            .map(|_| (common::rational(&mut rng, 3, 3).abs() + q(1), common::rational(&mut rng, 5, 2)))
            .collect();
        let vs: Vec<Vec<Q>> = us
            .iter()
            .map(|u| u.iter().zip(&maps).map(|(x, (a, b))| b - a * x).collect())
            .collect();
        ensure(is_co_ordered(&us, &vs), || format!("instance {i} is not co-ordered"))?;
        let gram: Vec<Vec<Q>> = us
            .iter()
            .map(|u| vs.iter().map(|v| u.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
            .collect();
        let r = lib(brute_force(&lib(EvalMatrix::from_rationals(gram))?))?;
        ensure(r.unique && r.is_identity(), || format!("instance {i}: diagonal is not the strict minimum"))?;
    }
    Ok("100 pairs".into())
}

fn random_segment(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> tropdeg::Result<Segment> {
    let base = common::point(rng, n, 5, 3);
    let dir = common::primitive(rng, n, 3);
    let a = common::rational(rng, 4, 2);
    let b = &a + common::rational(rng, 4, 2).abs() + q(1);
    let (lo, hi) = match rng.gen_range(0..4) {
        0 => (ParamBound::NegInf, ParamBound::PosInf),
        1 => (ParamBound::Finite(a), ParamBound::PosInf),
        2 => (ParamBound::NegInf, ParamBound::Finite(b)),
        _ => (ParamBound::Finite(a), ParamBound::Finite(b)),
    };
    Segment::new(base, dir, lo, hi)
}

fn random_plane_piece(rng: &mut rand_chacha::ChaCha8Rng) -> tropdeg::Result<Polyhedron> {
    let x0 = common::point(rng, 3, 4, 2);
    let normal: Vec<Q> = common::primitive(rng, 3, 3).into_iter().map(q).collect();
    let c: Q = normal.iter().zip(&x0.0).map(|(a, b)| a * b).sum();
    let mut cons = vec![Halfspace::eq(normal.clone(), c)?];
    for _ in 0..rng.gen_range(0..=2) {
        let h: Vec<Q> = common::primitive(rng, 3, 3).into_iter().map(q).collect();
        if h.iter().zip(&normal).all(|(a, b)| a == b) {
            continue;
        }
        // x0 satisfies it strictly, so the piece stays two-dimensional
        let hx: Q = h.iter().zip(&x0.0).map(|(a, b)| a * b).sum();
        cons.push(Halfspace::ge(h, hx - q(1))?);
    }
    Polyhedron::new(3, cons)
}

fn dimension_construction() -> Outcome {
    let mut rng = common::rng(4);
    let mut pieces: Vec<Polyhedron> = Vec::new();
    for n in [2, 3] {
        for _ in 0..20 {
            pieces.push(lib(random_segment(&mut rng, n))?.inner_polyhedron());
        }
    }
    while pieces.len() < 45 {
        let p = lib(random_plane_piece(&mut rng))?;
        if p.dim() == 2 {
            pieces.push(p);
        }
    }
    let mut checked = 0;
    for (i, p) in pieces.iter().enumerate() {
        let v = lib(Prevariety::from_polyhedra(p.ambient_dim(), vec![p.clone()]))?;
        for shape in [Shape::Simplex, Shape::Box] {
            for k in 1..=4 {
                let grid = MonomialGrid::new(p.ambient_dim(), k, shape);
                let rec = lib(th_polyhedron(p, &grid))?;
                let classes = lib(count_classes(p.basis(), &grid, GRID_BUDGET))?.count();
                let cert = rec.certificate.as_ref().ok_or_else(|| format!("piece {i}: no certificate"))?;
                ensure(cert.len() == classes && rec.lower == classes && rec.exact, || {
                    format!("piece {i} {shape} k={k}: certificate {} vs classes {classes}", cert.len())
                })?;
                let check = verify_certificate(cert, &v);
                ensure(check.verified, || format!("piece {i} {shape} k={k}: {check}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("40 segments and 5 planar pieces, {checked} certificates"))
}

fn zero_dimensional() -> Outcome {
    let mut rng = common::rng(5);
    for i in 0..30 {
        let s = 1 + i % 3;
        let mut pts: Vec<Point> = Vec::new();
        while pts.len() < s {
            let p = common::point(&mut rng, 2, 4, 2);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let v = lib(Prevariety::from_points(&pts))?;
        for shape in [Shape::Simplex, Shape::Box] {
            let grid = MonomialGrid::new(2, (2 * s) as u32, shape);
            let rec = lib(th_points(&pts, &grid, &SearchOptions::default()))?;
            let cert = rec.certificate.as_ref().ok_or_else(|| format!("set {i}: no certificate"))?;
            ensure(cert.len() == s && rec.lower == s && rec.exact, || format!("set {i}: size {} for s = {s}", cert.len()))?;
            let check = verify_certificate(cert, &v);
            ensure(check.verified, || format!("set {i}: {check}"))?;
        }
    }
    // exhaustive at tiny scale: two points, box k = 1
    let mut confirmed = 0;
    for i in 0..20 {
        let a = common::point(&mut rng, 2, 4, 2);
        let b = common::point(&mut rng, 2, 4, 2);
        if a == b {
            continue;
        }
        let pts = vec![a, b];
        let v = lib(Prevariety::from_points(&pts))?;
        let monomials = MonomialGrid::boxed(2, 1).enumerate();
        let out = lib(search_max_independent(&monomials, &v, &SearchOptions::default()))?;
        let vals: Vec<Vec<Q>> = monomials.iter().map(|m| pts.iter().map(|p| m.dot(&p.0)).collect()).collect();
        let rank = lib(tropical_rank(&lib(EvalMatrix::from_rationals(vals))?, usize::MAX))?;
        ensure(out.complete && out.size <= 2 && rank <= 2, || {
            format!("pair {i}: search {} (complete {}), rank {rank}", out.size, out.complete)
        })?;
        confirmed += 1;
    }
    Ok(format!("30 point sets; no size-3 certificate in {confirmed} exhaustive pairs"))
}

fn line_reconciliation() -> Outcome {
    for (p, qv, k, agree) in [(2, 3, 2, true), (1, 1, 2, false), (1, 0, 3, false)] {
        let c = lib(line_formula_check(p, qv, k))?;
        ensure(c.agree == agree, || format!("({p},{qv},{k}): closed form {} enumerated {}", c.closed_form, c.enumerated))?;
    }
    let mut rng = common::rng(6);
    let mut pairs: Vec<(i64, i64)> = Vec::new();
    while pairs.len() < 10 {
        let d = common::primitive(&mut rng, 2, 5);
        let pq = (d[0], d[1]);
        if !pairs.contains(&pq) {
            pairs.push(pq);
        }
    }
    for &(p, qv) in &pairs {
        // classes of the direction (q, -p) per k on the box grid
        let dir = vec![vec![q(qv), q(-p)]];
        let counts: Vec<usize> = (5..=21)
            .map(|k| count_classes(&dir, &MonomialGrid::boxed(2, k), GRID_BUDGET).map(|t| t.count()))
            .collect::<tropdeg::Result<_>>()
            .map_err(|e| e.to_string())?;
        let want = (p.abs() + qv.abs()) as usize;
        for (i, w) in counts.windows(2).enumerate() {
            ensure(w[1] - w[0] == want, || format!("({p},{qv}) k = {}: slope {} != {want}", 5 + i, w[1] - w[0]))?;
        }
    }
    Ok(format!("3 closed-form cases, slopes for {pairs:?}"))
}

const REFINE_MODELS: [&str; 5] = [
    include_str!("../models/refine_two_rays.json"),
    include_str!("../models/refine_opposite_rays.json"),
    include_str!("../models/refine_tropical_line.json"),
    include_str!("../models/refine_skew_star.json"),
    include_str!("../models/refine_wide_star.json"),
];

fn refinement() -> Outcome {
    let mut sizes = Vec::new();
    for (i, text) in REFINE_MODELS.iter().enumerate() {
        let model = lib(parse_model(text))?;
        let v = lib(model.prevariety())?;
        let cert = model.certificate.ok_or_else(|| format!("model {i} has no certificate"))?;
        let c = lib(v.branch_count())?;
        ensure(cert.len() <= 4 && (2..=3).contains(&c), || format!("model {i}: |S| = {}, c = {c}", cert.len()))?;
        let lift = lib(build_newton_lift(&cert, &v))?;
        ensure(lift.components <= c, || format!("model {i}: {} components > c = {c}", lift.components))?;
        for e in &lift.edges {
            ensure(lift.is_lower_hull_edge(e), || format!("model {i}: edge {}-{} not on the lower hull", e.a, e.b))?;
        }
        for r in [2, 3] {
            let out = lib(refine_certificate(&cert, &v, r))?;
            let check = verify_certificate(&out.certificate, &v);
            ensure(check.verified, || format!("model {i} r={r}: {check}"))?;
            let floor = (cert.len() as i64 - c as i64) * r as i64;
            ensure(out.certificate.len() as i64 >= floor, || {
                format!("model {i} r={r}: {} < {floor}", out.certificate.len())
            })?;
            sizes.push(out.certificate.len());
        }
    }
    Ok(format!("refined sizes {sizes:?}"))
}

fn tropical_line() -> Star {
    Star::new(Point::origin(2), vec![vec![1, 0], vec![0, 1], vec![-1, -1]]).expect("valid star")
}

fn star_lower() -> Outcome {
    let mut rng = common::rng(8);
    let mut stars = vec![tropical_line()];
    stars.extend((0..10).map(|_| common::star(&mut rng, 4, 3)));
    for st in &stars {
        let v = star_to_prevariety(st);
        let mut prev: Option<usize> = None;
        let c = match star_lower_construct(st, 1) {
            Err(tropdeg::Error::BelowThreshold { threshold, .. }) => threshold,
            Ok((con, _)) => con.c as u32,
            Err(e) => return Err(e.to_string()),
        };
        for k in c + 1..=c + 15 {
            let (con, cert) = lib(star_lower_construct(st, k))?;
            let dirs = st.directions();
            ensure(con.size() as i64 >= con.lower_target(), || {
                format!("{dirs:?} k={k}: |W| = {} < kB - D = {}", con.size(), con.lower_target())
            })?;
            let check = verify_certificate(&cert, &v);
            ensure(check.verified, || format!("{dirs:?} k={k}: {check}"))?;
            if let Some(p) = prev {
                if k >= c + 5 {
                    ensure(con.size() as i64 - p as i64 == con.b, || {
                        format!("{dirs:?} k={k}: difference {} != B = {}", con.size() as i64 - p as i64, con.b)
                    })?;
                }
            }
            prev = Some(con.size());
        }
    }
    Ok(format!("{} stars, 15 values of k each", stars.len()))
}

fn star_upper() -> Outcome {
    let mut rng = common::rng(9);
    let mut stars = vec![tropical_line()];
    stars.extend((0..4).map(|_| common::star(&mut rng, 3, 3)));
    // apex, unit points and midpoints only: small enough to exhaust
    let opts = SearchOptions {
        node_budget: 50_000_000,
        depth: 0,
    };
    let mut values = Vec::new();
    for st in &stars {
        for k in 1..=3 {
            let u = lib(star_upper_check(st, k, &opts))?;
            let dirs = st.directions();
            ensure(u.complete, || format!("{dirs:?} k={k}: search did not finish"))?;
            ensure(u.holds, || format!("{dirs:?} k={k}: {} > kB + 1 = {}", u.search, u.bound))?;
            values.push((u.search, u.bound));
        }
    }
    Ok(format!("(value, kB+1) {values:?}"))
}

fn concave_envelope() -> Outcome {
    let mut rng = common::rng(10);
    for i in 0..100 {
        let t = rng.gen_range(0..=6);
        let mut a = vec![common::rational(&mut rng, 5, 4).abs() + Q::new(1.into(), 8.into())];
        for _ in 0..t {
            let next = q(2) * &a[0] + common::rational(&mut rng, 3, 3).abs();
            a.insert(0, next);
        }
        let mut ext: Vec<ExtRat> = a.iter().cloned().map(ExtRat::Finite).collect();
        ext.extend(std::iter::repeat_n(ExtRat::Inf, rng.gen_range(0..=3)));

        let lines: Vec<Line<Q>> = a.iter().enumerate().map(|(j, aj)| Line::new(q(j as i64), aj.clone())).collect();
        let env = lower_envelope(lines, &ParamBound::Finite(q(0)), &ParamBound::PosInf);
        for j in 0..=t {
            let piece = env.winning_piece(j).ok_or_else(|| format!("sequence {i}: slope {j} never wins"))?;
            let z = piece.interior();
            let winners = env.ties_at(&z);
            ensure(winners == vec![j], || format!("sequence {i}: slope {j} not strict at {z}"))?;
        }
        match lib(concave_slopes(&ext))? {
            ConcaveSlopes::Attained { t: got, attained, .. } => {
                ensure(got == t && attained == (0..=t).collect::<Vec<_>>(), || {
                    format!("sequence {i}: t = {got}, attained {attained:?}, expected 0..={t}")
                })?;
            }
            other => return Err(format!("sequence {i}: {other:?}")),
        }
    }
    Ok("100 sequences".into())
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tropdeg");
    let model = concat!(env!("CARGO_MANIFEST_DIR"), "/models/tropical_line.json");
    let args = ["star", "--model", model, "--k-min", "1", "--k-max", "12", "--shape", "box", "--budget", "20000"];
    let run = |threads: Option<&str>| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(bin);
        cmd.args(args);
        if let Some(t) = threads {
            cmd.env("RAYON_NUM_THREADS", t);
        }
        let out = cmd.output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("exit {:?}", out.status.code()))?;
        Ok(out.stdout)
    };
    let reference = run(None)?;
    for threads in [None, Some("1"), Some("4")] {
        ensure(run(threads)? == reference, || format!("output differs with threads {threads:?}"))?;
    }
    Ok(format!("{} identical bytes over 4 runs", reference.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "matching oracle", limit: secs(10), check: matching_oracle },
        Criterion { id: 2, name: "diagonal potentials", limit: secs(5), check: diagonal_potentials },
        Criterion { id: 3, name: "co-ordered families", limit: secs(10), check: co_ordered_gram },
        Criterion { id: 4, name: "polyhedron certificates", limit: secs(60), check: dimension_construction },
        Criterion { id: 5, name: "finite point sets", limit: secs(60), check: zero_dimensional },
        Criterion { id: 6, name: "line closed form and slopes", limit: secs(30), check: line_reconciliation },
        Criterion { id: 7, name: "certificate refinement", limit: secs(60), check: refinement },
        Criterion { id: 8, name: "star lower bound", limit: secs(120), check: star_lower },
        Criterion { id: 9, name: "star upper bound", limit: secs(120), check: star_upper },
        Criterion { id: 10, name: "concave slopes", limit: secs(5), check: concave_envelope },
        Criterion { id: 11, name: "cli determinism", limit: secs(60), check: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let res = (c.check)();
        let took = start.elapsed();
        let (verdict, detail) = match &res {
            Ok(d) if took <= c.limit => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("over time limit; {d}")),
            Err(e) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {verdict} {:>7.2}s (limit {}s) {detail}",
            c.id,
            c.name,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
