//! The logic behind the `fatdecomp` binary: running a pipeline on a graph,
//! checking certificates from scratch, and sweeping corpora.

use fatdecomp::cactus::{self, decompose_cactus};
use fatdecomp::corpus::NamedGraph;
use fatdecomp::decomp::io::{parse_decomposition, write_decomposition};
use fatdecomp::decomp::{irs, validate, GraphDecomposition};
use fatdecomp::minors::io::{parse_model, write_model};
use fatdecomp::minors::{fatness, is_minor_free, validate_model};
use fatdecomp::quasi::{from_decomposition, parse_qi, verify_qi, write_qi};
use fatdecomp::sp::{decompose_series_parallel_with, Constants, SpConfig, DEFAULT_BUDGET};
use fatdecomp::{Dist, Error, Graph, MinorModel, Outcome, Pattern};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_WITNESS: i32 = 10;
pub const EXIT_BUDGET: i32 = 20;

/// Environment variable holding the default search budget.
pub const BUDGET_ENV: &str = "FATDECOMP_BUDGET";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    K4,
    K4minus,
}

impl Target {
    pub fn pattern(self) -> Pattern {
        match self {
            Target::K4 => Pattern::K4,
            Target::K4minus => Pattern::K4Minus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Target::K4 => "k4",
            Target::K4minus => "k4minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Decomposition,
    Model,
    Qi,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub target: Target,
    pub fat: usize,
    pub budget: u64,
    /// Menger factor of the scaled K4 constants, if any.
    pub scaled: Option<usize>,
}

impl RunOptions {
    pub fn new(target: Target, fat: usize) -> Self {
        RunOptions { target, fat, budget: DEFAULT_BUDGET, scaled: None }
    }

    /// `(orw, irs)` bounds a decomposition must meet.
    pub fn bounds(&self) -> Result<(usize, usize), Error> {
        match self.target {
            Target::K4minus => {
                if self.fat == 0 {
                    return Err(Error::domain("fatness K must be at least 1"));
                }
                Ok(cactus::bounds(self.fat))
            }
            Target::K4 => Ok(self.constants()?.bounds()),
        }
    }

    fn constants(&self) -> Result<Constants, Error> {
        match self.scaled {
            Some(m) => Constants::scaled(self.fat, m),
            None => Constants::new(self.fat),
        }
    }
}

/// Which way a run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    Decomposition,
    Witness,
    BudgetError,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub orw: Option<usize>,
    pub irs: Option<usize>,
    pub nodes: Option<usize>,
    pub fatness: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    /// SHA-256 of the input bytes.
    pub input_digest: String,
    pub vertices: usize,
    pub edges: usize,
    pub target: Target,
    pub fat: usize,
    pub scaled_constants: Option<usize>,
    pub bounds: (usize, usize),
    pub branch: Branch,
    pub metrics: Metrics,
    pub error: Option<String>,
    pub wall_ms: u128,
}

/// What a run produced besides its report.
#[derive(Clone, Debug)]
pub enum Certificate {
    Decomposition { text: String, qi: String },
    Witness { text: String },
    None,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs the pipeline for `opts.target`.
pub fn run_pipeline(g: &Graph, opts: &RunOptions) -> Result<Outcome, Error> {
    match opts.target {
        Target::K4minus => {
            if opts.scaled.is_some() {
                return Err(Error::domain("scaled constants only apply to the k4 target"));
            }
            decompose_cactus(g, opts.fat)
        }
        Target::K4 => {
            let config = SpConfig { constants: opts.constants()?, budget: opts.budget };
            decompose_series_parallel_with(g, &config)
        }
    }
}

/// Re-checks a pipeline outcome from the definitions: a valid honest
/// decomposition within the bounds on a pattern-free graph with a working
/// quasi-isometry, or a valid model of the pattern with fatness at least `K`.
pub fn check_outcome(g: &Graph, opts: &RunOptions, out: &Outcome) -> Result<Metrics, String> {
    let (bo, bi) = opts.bounds().map_err(|e| e.to_string())?;
    match out {
        Outcome::Decomposition(d) => {
            let m = check_decomposition(g, d, Some(opts.target), Some((bo, bi)))?;
            let q = from_decomposition(g, d).map_err(|e| e.to_string())?;
            verify_qi(g, &d.graph, &q).map_err(|e| format!("quasi-isometry: {e}"))?;
            Ok(m)
        }
        Outcome::Witness(model) => check_model(g, model, Some(opts.target), opts.fat),
    }
}

/// Validity, honesty, optional pattern-freeness of `H` and optional bounds.
pub fn check_decomposition(
    g: &Graph,
    d: &GraphDecomposition,
    target: Option<Target>,
    bounds: Option<(usize, usize)>,
) -> Result<Metrics, String> {
    let rep = validate(g, d);
    if let Some(v) = rep.first_violation() {
        return Err(v);
    }
    let (o, s) = (rep.orw(), irs(d));
    if let Some((bo, bi)) = bounds {
        if !o.at_most(bo) {
            return Err(format!("bag radius {o} exceeds {bo}"));
        }
        if !s.at_most(bi) {
            return Err(format!("spread {s} exceeds {bi}"));
        }
    }
    if let Some(t) = target {
        if !is_minor_free(&d.graph, t.pattern()) {
            return Err(format!("the decomposition graph has a {} minor", t.pattern().name()));
        }
    }
    Ok(Metrics { orw: o.finite(), irs: s.finite(), nodes: Some(d.bags.len()), fatness: None })
}

pub fn check_model(g: &Graph, m: &MinorModel, target: Option<Target>, k: usize) -> Result<Metrics, String> {
    validate_model(g, m).map_err(|e| e.to_string())?;
    if let Some(t) = target {
        if m.pattern != t.pattern().graph() {
            return Err(format!("the model is not a model of {}", t.pattern().name()));
        }
    }
    let f = fatness(g, m).map_err(|e| e.to_string())?;
    if f < Dist::Finite(k) {
        return Err(format!("the model is {f}-fat, below {k}"));
    }
    Ok(Metrics { fatness: Some(f.finite().unwrap_or(usize::MAX)), ..Metrics::default() })
}

/// Parses, runs and self-checks one decomposition request.
pub fn decompose(input: &[u8], opts: &RunOptions) -> Result<(RunReport, Certificate), Error> {
    let text = std::str::from_utf8(input).map_err(|_| Error::parse(0, "input is not UTF-8"))?;
    let g = fatdecomp::graph::io::parse_edge_list(text)?;
    let bounds = opts.bounds()?;
    let start = Instant::now();
    let result = run_pipeline(&g, opts);
    let mut report = RunReport {
        input_digest: digest(input),
        vertices: g.n(),
        edges: g.m(),
        target: opts.target,
        fat: opts.fat,
        scaled_constants: opts.scaled,
        bounds,
        branch: Branch::BudgetError,
        metrics: Metrics::default(),
        error: None,
        wall_ms: 0,
    };
    let cert = match result {
        Ok(out) => {
            report.metrics = check_outcome(&g, opts, &out).map_err(|e| {
                Error::internal(format!("the pipeline emitted a certificate that fails its check: {e}"))
            })?;
            match out {
                Outcome::Decomposition(d) => {
                    report.branch = Branch::Decomposition;
                    let q = from_decomposition(&g, &d)?;
                    Certificate::Decomposition { text: write_decomposition(&d), qi: write_qi(&q) }
                }
                Outcome::Witness(m) => {
                    report.branch = Branch::Witness;
                    Certificate::Witness { text: write_model(&m) }
                }
            }
        }
        Err(e @ Error::Budget { .. }) => {
            report.error = Some(e.to_string());
            Certificate::None
        }
        Err(e) => return Err(e),
    };
    report.wall_ms = start.elapsed().as_millis();
    Ok((report, cert))
}

pub fn exit_code(branch: Branch) -> i32 {
    match branch {
        Branch::Decomposition => EXIT_OK,
        Branch::Witness => EXIT_WITNESS,
        Branch::BudgetError => EXIT_BUDGET,
    }
}

/// Exit code for an error that stopped a command before it had an answer.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Domain(_) => EXIT_INPUT,
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_FAILED,
    }
}

/// Extra inputs of `verify`.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub target: Option<Target>,
    /// For models: the required fatness. For decompositions, together with
    /// `target`: check the bounds for this `K`.
    pub fat: Option<usize>,
    pub scaled: Option<usize>,
    /// The decomposition a quasi-isometry was read off.
    pub decomposition: Option<String>,
}

/// Checks a certificate. `Ok(Err(msg))` means it parsed but is invalid;
/// `Err` means the files could not be read as the stated kind.
pub fn verify(graph: &str, cert: &str, kind: Kind, opts: &VerifyOptions) -> Result<Result<String, String>, Error> {
    let g = fatdecomp::graph::io::parse_edge_list(graph)?;
    Ok(match kind {
        Kind::Decomposition => {
            let (d, support) = parse_decomposition(cert)?;
            if support.is_some() {
                return Err(Error::domain("a partial decomposition is not a certificate for the whole graph"));
            }
            let bounds = match (opts.target, opts.fat) {
                (Some(t), Some(k)) => {
                    let ro = RunOptions { target: t, fat: k, budget: 0, scaled: opts.scaled };
                    Some(ro.bounds()?)
                }
                _ => None,
            };
            check_decomposition(&g, &d, opts.target, bounds)
                .map(|m| format!("valid decomposition: {} nodes, orw {:?}, irs {:?}", d.bags.len(), m.orw, m.irs))
        }
        Kind::Model => {
            let m = parse_model(cert)?;
            let k = opts.fat.unwrap_or(1);
            check_model(&g, &m, opts.target, k).map(|x| format!("valid model, fatness {:?}", x.fatness))
        }
        Kind::Qi => {
            let q = parse_qi(cert)?;
            let dtext = opts
                .decomposition
                .as_deref()
                .ok_or_else(|| Error::domain("checking a quasi-isometry needs --decomposition"))?;
            let (d, _) = parse_decomposition(dtext)?;
            verify_qi(&g, &d.graph, &q)
                .map(|_| format!("valid quasi-isometry with M = {}, A = {}", q.m, q.a))
                .map_err(|e| e.to_string())
        }
    })
}

/// One row of a corpus sweep.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusRow {
    pub name: String,
    pub vertices: usize,
    pub target: Target,
    pub fat: usize,
    pub branch: Option<Branch>,
    pub metrics: Metrics,
    pub verified: bool,
    pub error: Option<String>,
    pub wall_ms: u128,
}

pub fn run_one(ng: &NamedGraph, opts: &RunOptions) -> CorpusRow {
    let start = Instant::now();
    let mut row = CorpusRow {
        name: ng.name.clone(),
        vertices: ng.graph.n(),
        target: opts.target,
        fat: opts.fat,
        branch: None,
        metrics: Metrics::default(),
        verified: false,
        error: None,
        wall_ms: 0,
    };
    match run_pipeline(&ng.graph, opts) {
        Ok(out) => {
            row.branch = Some(match out {
                Outcome::Decomposition(_) => Branch::Decomposition,
                Outcome::Witness(_) => Branch::Witness,
            });
            match check_outcome(&ng.graph, opts, &out) {
                Ok(m) => {
                    row.metrics = m;
                    row.verified = true;
                }
                Err(e) => row.error = Some(e),
            }
        }
        Err(e) => {
            if matches!(e, Error::Budget { .. }) {
                row.branch = Some(Branch::BudgetError);
            }
            row.error = Some(e.to_string());
        }
    }
    row.wall_ms = start.elapsed().as_millis();
    row
}

/// Runs every graph against every option set, in parallel across runs.
/// Rows come back in input order.
pub fn run_corpus(graphs: &[NamedGraph], runs: &[RunOptions]) -> Vec<CorpusRow> {
    use rayon::prelude::*;
    let jobs: Vec<(&NamedGraph, &RunOptions)> =
        runs.iter().flat_map(|o| graphs.iter().map(move |g| (g, o))).collect();
    jobs.par_iter().map(|(g, o)| run_one(g, o)).collect()
}

/// Corpus exit code: budget errors only fail the sweep when not allowed.
pub fn corpus_exit(rows: &[CorpusRow], allow_budget: bool) -> i32 {
    let bad = rows.iter().any(|r| !r.verified && r.branch != Some(Branch::BudgetError));
    let budget = rows.iter().any(|r| r.branch == Some(Branch::BudgetError));
    if bad {
        EXIT_INVALID
    } else if budget && !allow_budget {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

/// Parses `3` or `1..4` (inclusive) or `1,2,5`.
pub fn parse_k_range(s: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::domain(format!("bad fatness range {s:?}"));
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if out.is_empty() || out.contains(&0) {
        return Err(Error::domain("fatness values must be at least 1"));
    }
    Ok(out)
}

pub fn format_row(r: &CorpusRow) -> String {
    let branch = match r.branch {
        Some(Branch::Decomposition) => "decomposition",
        Some(Branch::Witness) => "witness",
        Some(Branch::BudgetError) => "budget-error",
        None => "error",
    };
    let opt = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    format!(
        "{:<24} {:>6} {:<8} K={:<3} {:<14} orw={:<6} irs={:<4} nodes={:<6} fat={:<5} verified={}{}",
        r.name,
        r.vertices,
        r.target.name(),
        r.fat,
        branch,
        opt(r.metrics.orw),
        opt(r.metrics.irs),
        opt(r.metrics.nodes),
        opt(r.metrics.fatness),
        r.verified,
        r.error.as_ref().map_or(String::new(), |e| format!("  ({e})")),
    )
}
