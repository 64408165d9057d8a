//! Command dispatch behind the `tropdeg` binary. Every command turns a parsed
//! model plus options into a [`Report`]; the binary only does I/O.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::degree::{degree_bounds, refine_certificate, star_degree_bounds, star_sweep};
use crate::error::{Error, Result};
use crate::hilbert::{count_classes, hilbert_sweep, MonomialGrid, Shape, GRID_BUDGET};
use crate::independence::{
    brute_force, candidate_points, hungarian_matching, rank_by_search, search_max_independent, tropical_rank,
    verify_certificate, EvalMatrix, SearchOptions,
};
use crate::model::{certificate_to_raw, parse_model, Model};
use crate::prevariety::Prevariety;
use crate::report::{sha256_hex, Cell, Report};
use crate::scalar::{PerturbedScalar, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classes,
    Hilbert,
    Degree,
    Star,
    Verify,
    Refine,
    Oracle,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Classes,
        Command::Hilbert,
        Command::Degree,
        Command::Star,
        Command::Verify,
        Command::Refine,
        Command::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Classes => "classes",
            Command::Hilbert => "hilbert",
            Command::Degree => "degree",
            Command::Star => "star",
            Command::Verify => "verify",
            Command::Refine => "refine",
            Command::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidValue {
                value: s.to_string(),
                reason: "unknown command".into(),
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidValue {
                value: s.to_string(),
                reason: "expected csv or json".into(),
            }),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub k_min: u32,
    pub k_max: u32,
    pub shape: Shape,
    pub r: u32,
    /// Search node budget. `None` keeps the default and, for `star`, skips
    /// the exhaustive upper check.
    pub budget: Option<u64>,
    pub seed: u64,
    pub format: Format,
    /// Render rationals as decimals with this many digits.
    pub decimals: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            k_min: 1,
            k_max: 1,
            shape: Shape::Simplex,
            r: 2,
            budget: None,
            seed: 0,
            format: Format::Csv,
            decimals: None,
        }
    }
}

impl Options {
    fn search(&self) -> SearchOptions {
        let mut o = SearchOptions::default();
        if let Some(b) = self.budget {
            o.node_budget = b;
        }
        o
    }

    fn ks(&self) -> std::ops::RangeInclusive<u32> {
        self.k_min..=self.k_max
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub report: Report,
    /// A verification failed or the oracle disagreed.
    pub refuted: bool,
}

impl Outcome {
    pub fn render(&self, opts: &Options) -> String {
        match opts.format {
            Format::Csv => self.report.to_csv(opts.decimals),
            Format::Json => self.report.to_json(opts.decimals),
        }
    }
}

/// Process exit status for an error: budgets map to 3, everything else to 2.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded(_) | Error::GridTooLarge { .. } | Error::RankBudgetExceeded { .. } => 3,
        _ => 2,
    }
}

pub fn run(command: Command, model_text: &str, opts: &Options) -> Result<Outcome> {
    if opts.k_min > opts.k_max {
        return Err(Error::InvalidValue {
            value: format!("{}..{}", opts.k_min, opts.k_max),
            reason: "k range is empty".into(),
        });
    }
    let model = parse_model(model_text)?;
    let (mut report, refuted) = match command {
        Command::Classes => classes(&model, opts)?,
        Command::Hilbert => hilbert(&model, opts)?,
        Command::Degree => degree(&model, opts)?,
        Command::Star => star(&model, opts)?,
        Command::Verify => verify(&model)?,
        Command::Refine => refine(&model, opts)?,
        Command::Oracle => oracle(&model, opts)?,
    };
    let meta = &mut report.metadata;
    meta.insert("model_sha256".into(), sha256_hex(model_text.as_bytes()));
    meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    meta.insert("seed".into(), opts.seed.to_string());
    meta.insert(
        "options".into(),
        format!(
            "k_min={} k_max={} shape={} r={} budget={} format={} decimals={}",
            opts.k_min,
            opts.k_max,
            opts.shape,
            opts.r,
            opts.budget.map_or("default".into(), |b| b.to_string()),
            opts.format,
            opts.decimals.map_or("exact".into(), |d| d.to_string()),
        ),
    );
    let mut notes: Vec<String> = model.warnings.iter().map(|w| format!("warning: {w}")).collect();
    notes.append(&mut report.notes);
    report.notes = notes;
    Ok(Outcome { report, refuted })
}

fn classes(model: &Model, opts: &Options) -> Result<(Report, bool)> {
    let v = model.prevariety()?;
    let mut bases: Vec<Vec<Vec<Q>>> = v.pieces().iter().map(|p| p.basis().to_vec()).collect();
    bases.extend(v.segments().iter().map(|s| vec![s.direction_q()]));
    let rows: Vec<(u32, Vec<usize>)> = opts
        .ks()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let grid = MonomialGrid::new(v.ambient_dim(), k, opts.shape);
            let counts = bases
                .iter()
                .map(|b| count_classes(b, &grid, GRID_BUDGET).map(|t| t.count()))
                .collect::<Result<Vec<_>>>()?;
            Ok((k, counts))
        })
        .collect::<Result<_>>()?;
    let mut report = Report::new("classes", &["k", "shape", "pieces", "total"]);
    for (k, counts) in rows {
        let per: Vec<String> = counts.iter().map(usize::to_string).collect();
        report.push(vec![
            k.into(),
            opts.shape.to_string().into(),
            per.join(" ").into(),
            counts.iter().sum::<usize>().into(),
        ]);
    }
    Ok((report, false))
}

fn hilbert(model: &Model, opts: &Options) -> Result<(Report, bool)> {
    let v = model.prevariety()?;
    let records = hilbert_sweep(&v, opts.shape, opts.ks(), &opts.search())?;
    let mut report = Report::new("hilbert", &["k", "shape", "lower", "upper", "exact", "classes"]);
    for r in records {
        report.push(vec![
            r.k.into(),
            r.shape.to_string().into(),
            r.lower.into(),
            r.upper.into(),
            r.exact.into(),
            r.classes.into(),
        ]);
    }
    report.notes.push("lower is certified; upper is a proved bound; exact marks equality".into());
    Ok((report, false))
}

fn degree(model: &Model, opts: &Options) -> Result<(Report, bool)> {
    let bounds = match (model.star(), opts.shape) {
        (Some(s), Shape::Box) if s.dim() == 2 => star_degree_bounds(s, opts.k_max)?,
        _ => degree_bounds(&model.prevariety()?, opts.shape, opts.k_max, &opts.search())?,
    };
    let mut report = Report::new("degree", &["k_max", "shape", "lower", "upper"]);
    report.push(vec![
        opts.k_max.into(),
        opts.shape.to_string().into(),
        bounds.lower.into(),
        bounds.upper.into(),
    ]);
    report.notes = bounds.evidence;
    Ok((report, false))
}

fn star(model: &Model, opts: &Options) -> Result<(Report, bool)> {
    let s = model
        .star()
        .ok_or_else(|| Error::precondition("the star command needs a star model"))?;
    let b = crate::degree::star_b(s);
    let search = opts.budget.map(|_| opts.search());
    let rows = star_sweep(s, opts.ks(), search.as_ref())?;
    let mut report = Report::new("star", &["k", "B", "W", "kB-D", "kB+1", "search", "verified"]);
    let mut refuted = false;
    for r in rows {
        let holds = r.search.is_none_or(|v| v as i64 <= r.upper);
        if !holds {
            refuted = true;
            report.notes.push(format!("refuted: k = {}: search found {} > kB + 1", r.k, r.search.unwrap_or(0)));
        }
        report.push(vec![
            r.k.into(),
            b.into(),
            r.w.into(),
            r.lower_target.into(),
            r.upper.into(),
            r.search.into(),
            (r.verified && holds).into(),
        ]);
    }
    report.notes.push("W is empty for k <= C, where the recursion does not apply".into());
    Ok((report, refuted))
}

fn require_certificate(model: &Model) -> Result<&crate::independence::Certificate> {
    model
        .certificate
        .as_ref()
        .ok_or_else(|| Error::precondition("the model has no certificate"))
}

fn verify(model: &Model) -> Result<(Report, bool)> {
    let cert = require_certificate(model)?;
    let v = model.prevariety()?;
    let res = verify_certificate(cert, &v);
    let mut report = Report::new("verify", &["members", "verified"]);
    report.push(vec![cert.len().into(), res.verified.into()]);
    if let Some(d) = &res.diagnostic {
        report.notes.push(format!("refuted: {d}"));
    }
    Ok((report, !res.verified))
}

fn refine(model: &Model, opts: &Options) -> Result<(Report, bool)> {
    let cert = require_certificate(model)?;
    let v = model.prevariety()?;
    let out = refine_certificate(cert, &v, opts.r)?;
    let check = verify_certificate(&out.certificate, &v);
    let mut report = Report::new(
        "refine",
        &["r", "input", "members", "guaranteed", "epsilon", "eta", "verified"],
    );
    report.push(vec![
        out.r.into(),
        cert.len().into(),
        out.certificate.len().into(),
        out.guaranteed.into(),
        out.epsilon.into(),
        out.eta.into(),
        check.verified.into(),
    ]);
    let raw = certificate_to_raw(&out.certificate);
    let json = serde_json::to_value(&raw).expect("certificate serializes");
    report.payload = Some(json);
    if let Some(d) = check.diagnostic {
        report.notes.push(format!("refuted: {d}"));
    }
    Ok((report, !check.verified))
}

const ORACLE_MATRICES: usize = 100;
const ORACLE_RANKS: usize = 50;
/// Largest number of square submatrices the brute-force subset check enumerates.
const ORACLE_SUBSET_WORK: u64 = 200_000;

fn random_entry(rng: &mut ChaCha8Rng, inf_prob: f64) -> PerturbedScalar {
    if rng.gen_bool(inf_prob) {
        return PerturbedScalar::inf();
    }
    let d: i64 = rng.gen_range(1..=4);
    PerturbedScalar::finite(Q::new(rng.gen_range(-10 * d..=10 * d).into(), d.into()))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

#[derive(Default)]
struct Tally {
    instances: usize,
    agree: usize,
    skipped: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if ok {
            self.agree += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    fn row(&self, name: &str) -> Vec<Cell> {
        vec![
            name.into(),
            self.instances.into(),
            self.agree.into(),
            self.skipped.into(),
        ]
    }
}

fn oracle_matching(rng: &mut ChaCha8Rng) -> Result<Tally> {
    let mut t = Tally::default();
    for i in 0..ORACLE_MATRICES {
        let s = rng.gen_range(1..=7);
        let entries = (0..s).map(|_| (0..s).map(|_| random_entry(rng, 0.1)).collect()).collect();
        let a = EvalMatrix::new(entries)?;
        let ok = match (hungarian_matching(&a), brute_force(&a)) {
            (Ok(h), Ok(b)) => h.value == b.value && h.unique == b.unique && (!b.unique || h.permutation == b.permutation),
            (Err(Error::NoFiniteMatching), Err(Error::NoFiniteMatching)) => true,
            _ => false,
        };
        t.record(ok, || format!("matching instance {i} ({s}x{s})"));
    }
    Ok(t)
}

fn oracle_rank(rng: &mut ChaCha8Rng, node_budget: u64) -> Result<Tally> {
    let mut t = Tally::default();
    for i in 0..ORACLE_RANKS {
        let (m, n) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
        let vals: Vec<Vec<Q>> = (0..m)
            .map(|_| (0..n).map(|_| Q::from_integer(rng.gen_range(-3..=3).into())).collect())
            .collect();
        let brute = tropical_rank(&EvalMatrix::from_rationals(vals.clone())?, usize::MAX)?;
        let searched = rank_by_search(&vals, node_budget)?;
        t.record(brute == searched, || format!("rank instance {i}: search {searched}, brute force {brute}"));
    }
    Ok(t)
}

fn oracle_subsets(v: &Prevariety, opts: &Options) -> Result<Tally> {
    let mut t = Tally::default();
    let search = opts.search();
    for k in opts.ks() {
        let monomials = MonomialGrid::new(v.ambient_dim(), k, opts.shape).enumerate();
        let cands = candidate_points(&monomials, v, search.depth);
        let (m, c) = (monomials.len() as u64, cands.len() as u64);
        let work: u64 = (1..=m.min(c)).map(|r| binomial(m, r).saturating_mul(binomial(c, r))).sum();
        if work > ORACLE_SUBSET_WORK {
            t.skipped += 1;
            continue;
        }
        let vals: Vec<Vec<Q>> = monomials
            .iter()
            .map(|mo| cands.iter().map(|x| mo.dot(&x.0)).collect())
            .collect();
        let brute = tropical_rank(&EvalMatrix::from_rationals(vals)?, usize::MAX)?;
        let found = search_max_independent(&monomials, v, &search)?;
        let cert_ok = found
            .certificate
            .as_ref()
            .is_none_or(|c| verify_certificate(c, v).verified);
        let ok = cert_ok && if found.complete { found.size == brute } else { found.size <= brute };
        t.record(ok, || format!("subset k = {k}: search {}, brute force {brute}", found.size));
    }
    Ok(t)
}

fn oracle(model: &Model, opts: &Options) -> Result<(Report, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let v = model.prevariety()?;
    let checks = [
        ("matching", oracle_matching(&mut rng)?),
        ("rank", oracle_rank(&mut rng, opts.search().node_budget)?),
        ("subset", oracle_subsets(&v, opts)?),
    ];
    let mut report = Report::new("oracle", &["check", "instances", "agree", "skipped"]);
    let mut refuted = false;
    for (name, t) in &checks {
        report.push(t.row(name));
        if let Some(f) = &t.first_failure {
            refuted = true;
            report.notes.push(format!("disagreement: {f}"));
        }
    }
    if checks[2].1.skipped > 0 {
        report.notes.push("subset checks above the brute-force work limit are skipped".into());
    }
    Ok((report, refuted))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"{"star":{"apex":["0","0"],"dirs":[[1,0],[0,1],[-1,-1]]}}"#;
    const ANTI: &str = r#"{"segments": [{"base": ["0", "0"], "dir": [1, -1], "t": ["-inf", "inf"]}]}"#;

    fn opts(k_min: u32, k_max: u32) -> Options {
        Options {
            k_min,
            k_max,
            ..Options::default()
        }
    }

    fn column(report: &Report, name: &str) -> Vec<Cell> {
        let i = report.columns.iter().position(|c| c == name).unwrap();
        report.rows.iter().map(|r| r[i].clone()).collect()
    }

    #[test]
    fn star_rows() {
        let out = run(Command::Star, LINE, &opts(5, 8)).unwrap();
        assert!(!out.refuted);
        let w: Vec<Cell> = [7, 9, 11, 13].iter().map(|&x| Cell::Int(x)).collect();
        assert_eq!(column(&out.report, "W"), w);
        assert!(column(&out.report, "B").iter().all(|c| *c == Cell::Int(2)));
    }

    #[test]
    fn classes_anti_diagonal() {
        let out = run(Command::Classes, ANTI, &opts(1, 4)).unwrap();
        let t: Vec<Cell> = [3, 5, 7, 9].iter().map(|&x| Cell::Int(x)).collect();
        assert_eq!(column(&out.report, "total"), t);
    }

    #[test]
    fn empty_range_is_usage_error() {
        let err = run(Command::Classes, ANTI, &opts(3, 2)).unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn oracle_agrees() {
        let out = run(Command::Oracle, LINE, &opts(1, 1)).unwrap();
        assert!(!out.refuted, "{:?}", out.report.notes);
    }

    #[test]
    fn metadata_is_stable() {
        let a = run(Command::Star, LINE, &opts(5, 6)).unwrap().render(&opts(5, 6));
        let b = run(Command::Star, LINE, &opts(5, 6)).unwrap().render(&opts(5, 6));
        assert_eq!(a, b);
        assert!(a.contains("# model_sha256: "));
    }
}
