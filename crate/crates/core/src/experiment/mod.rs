//! Seeded experiment harness.
//!
//! Every runner fans its `(grid point, seed)` jobs out over the rayon pool,
//! then sorts the collected rows by configuration coordinates, so the output
//! does not depend on the schedule or on the thread count.

mod fit;
mod record;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::census::{self, CensusOptions};
use crate::error::{Error, Result};
use crate::extract::{
    self, default_t, deletion_t, exact_search, mean_sd, Algorithm, ExtractionResult,
};
use crate::hosts::{self, binomial};
use crate::hypergraph::Hypergraph;
use crate::template::{self, Template};

pub use fit::{exponent_bracket, fit_power_law, PowerFit};
pub use record::{gnuplot_script, read_csv, to_csv, to_json, ExperimentRecord, COLUMNS};

/// Fixed defaults, also quoted by the command-line help.
pub const DEFAULT_TRIALS: u64 = 32;
pub const DEFAULT_SEEDS: std::ops::Range<u64> = 0..20;
/// Largest clique size solved exactly in `lower_scaling`.
pub const EXACT_CLIQUE_MAX: u32 = 7;
/// Largest `n` for `steiner_probe` without `allow_large`.
pub const STEINER_MAX_N: u32 = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    LowerScaling,
    GnpSweep,
    ExponentFit,
    Census,
    Concentration,
    SteinerProbe,
}

impl Kind {
    pub const ALL: [Kind; 6] = [
        Kind::LowerScaling,
        Kind::GnpSweep,
        Kind::ExponentFit,
        Kind::Census,
        Kind::Concentration,
        Kind::SteinerProbe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::LowerScaling => "lower_scaling",
            Kind::GnpSweep => "gnp_sweep",
            Kind::ExponentFit => "exponent_fit",
            Kind::Census => "census",
            Kind::Concentration => "concentration",
            Kind::SteinerProbe => "steiner_probe",
        }
    }

    fn default_algorithms(self) -> Vec<Algorithm> {
        use Algorithm::*;
        match self {
            Kind::LowerScaling => vec![RandomHom, Star, PureDeletion],
            Kind::SteinerProbe => vec![Star, PureDeletion, Exact],
            Kind::Census => vec![],
            _ => vec![RandomHom, Deletion, Star, PureDeletion],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Kind::ALL.iter().map(|k| k.as_str()).collect();
                Error::InvalidParameter(format!(
                    "unknown experiment kind {s:?} (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub r: usize,
    pub n: Vec<u32>,
    /// Edge probabilities; alternative to `x`.
    pub p: Vec<f64>,
    /// `p = n^(x - r)`; alternative to `p`.
    pub x: Vec<f64>,
    /// Clique sizes for `lower_scaling`.
    pub t: Vec<u32>,
    pub copies: Vec<u32>,
    /// `None` picks the kind's default set.
    pub algorithms: Option<Vec<Algorithm>>,
    pub trials: u64,
    pub seeds: Vec<u64>,
    pub budget: u64,
    pub verify_cap: usize,
    pub triangle_cap: Option<u64>,
    /// Largest edge count in a census.
    pub mmax: usize,
    pub work_limit: u64,
    pub allow_large: bool,
    /// Record wall-clock `runtime_ms`; off for byte-identical output.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: Kind::GnpSweep,
            r: 3,
            n: Vec::new(),
            p: Vec::new(),
            x: Vec::new(),
            t: Vec::new(),
            copies: Vec::new(),
            algorithms: None,
            trials: DEFAULT_TRIALS,
            seeds: DEFAULT_SEEDS.collect(),
            budget: extract::DEFAULT_BUDGET,
            verify_cap: template::DEFAULT_VERIFY_CAP,
            triangle_cap: None,
            mmax: 4,
            work_limit: census::DEFAULT_WORK_LIMIT,
            allow_large: false,
            timing: true,
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Parses `a,b,c`; integer lists also accept half-open ranges `lo..hi`.
pub fn parse_list<T>(key: &str, value: &str) -> Result<Vec<T>>
where
    T: FromStr + TryFrom<u64>,
{
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let bad = || invalid(format!("{key}: bad range {item:?} (use lo..hi)"));
            let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
            for v in lo..hi {
                out.push(T::try_from(v).map_err(|_| bad())?);
            }
        } else {
            out.push(
                item.parse()
                    .map_err(|_| invalid(format!("{key}: cannot parse {item:?}")))?,
            );
        }
    }
    Ok(out)
}

fn parse_floats(key: &str, value: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| invalid(format!("{key}: cannot parse {s:?} as a number")))
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| invalid(format!("{key}: cannot parse {value:?}")))
}

impl ExperimentConfig {
    /// Keys accepted by [`ExperimentConfig::set`].
    pub const KEYS: [&'static str; 17] = [
        "kind",
        "r",
        "n",
        "p",
        "x",
        "t",
        "copies",
        "algorithms",
        "trials",
        "seeds",
        "budget",
        "verify_cap",
        "triangle_cap",
        "mmax",
        "work_limit",
        "allow_large",
        "timing",
    ];

    /// Sets one field from its textual form (lists are comma separated).
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "kind" => self.kind = value.trim().parse()?,
            "r" => self.r = parse_one(key, value)?,
            "n" => self.n = parse_list(key, value)?,
            "p" => self.p = parse_floats(key, value)?,
            "x" => self.x = parse_floats(key, value)?,
            "t" => self.t = parse_list(key, value)?,
            "copies" => self.copies = parse_list(key, value)?,
            "algorithms" | "algo" => {
                self.algorithms = Some(
                    value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::parse)
                        .collect::<Result<_>>()?,
                )
            }
            "trials" => self.trials = parse_one(key, value)?,
            "seeds" => self.seeds = parse_list(key, value)?,
            "budget" => self.budget = parse_one(key, value)?,
            "verify_cap" => self.verify_cap = parse_one(key, value)?,
            "triangle_cap" => self.triangle_cap = Some(parse_one(key, value)?),
            "mmax" => self.mmax = parse_one(key, value)?,
            "work_limit" => self.work_limit = parse_one(key, value)?,
            "allow_large" => self.allow_large = parse_one(key, value)?,
            "timing" => self.timing = parse_one(key, value)?,
            _ => {
                return Err(invalid(format!(
                    "unknown experiment key {key:?} (expected one of {})",
                    Self::KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn algorithms(&self) -> Vec<Algorithm> {
        self.algorithms
            .clone()
            .unwrap_or_else(|| self.kind.default_algorithms())
    }

    /// Checks the grids the kind needs; messages name the missing key.
    pub fn validate(&self) -> Result<()> {
        let kind = self.kind;
        let need = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(invalid(format!("{kind} needs {what}")))
            }
        };
        need(self.r >= 3, "r >= 3")?;
        need(
            !self.seeds.is_empty(),
            "a non-empty seed list (seeds = 0..20)",
        )?;
        need(self.trials >= 1, "trials >= 1")?;
        need(self.budget >= 1, "budget >= 1")?;
        if let Some(a) = &self.algorithms {
            need(
                !a.is_empty() || kind == Kind::Census,
                "at least one algorithm",
            )?;
        }
        for &p in &self.p {
            need(p > 0.0 && p <= 1.0, "every p in (0, 1]")?;
        }
        for &x in &self.x {
            need(x >= 0.0 && x <= self.r as f64, "every x in [0, r]")?;
        }
        for &n in &self.n {
            need(n as usize >= self.r, "every n >= r")?;
        }
        match kind {
            Kind::LowerScaling => {
                need(
                    !self.t.is_empty(),
                    "a non-empty clique-size grid (t = 5,7,9)",
                )?;
                need(
                    !self.copies.is_empty(),
                    "a non-empty copies grid (copies = 10)",
                )?;
                for &t in &self.t {
                    need(t as usize >= self.r, "every clique size t >= r")?;
                }
                need(self.copies.iter().all(|&c| c >= 1), "copies >= 1")
            }
            Kind::GnpSweep | Kind::Concentration => {
                need(!self.n.is_empty(), "a non-empty n grid")?;
                need(
                    self.p.is_empty() != self.x.is_empty(),
                    "exactly one of the p and x grids",
                )
            }
            Kind::ExponentFit => {
                let mut ns = self.n.clone();
                ns.sort_unstable();
                ns.dedup();
                need(ns.len() >= 2, "at least two distinct n values")?;
                need(!self.x.is_empty(), "a non-empty x grid")?;
                need(self.p.is_empty(), "an x grid rather than a p grid")
            }
            Kind::Census => {
                need(!self.n.is_empty(), "a non-empty n grid")?;
                need(self.r == 3, "r = 3")
            }
            Kind::SteinerProbe => {
                need(!self.n.is_empty(), "a non-empty n grid")?;
                need(self.r >= 4, "r >= 4")?;
                need(
                    self.allow_large || self.n.iter().all(|&n| n <= STEINER_MAX_N),
                    "n <= 14 (set allow_large to go further)",
                )
            }
        }
    }
}

/// Records plus, for `exponent_fit`, the fitted slopes.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub records: Vec<ExperimentRecord>,
    pub fits: Vec<FitRow>,
}

/// Dispatches on `config.kind`.
pub fn run(config: &ExperimentConfig) -> Result<Outcome> {
    let records = match config.kind {
        Kind::LowerScaling => run_lower_scaling(config)?,
        Kind::GnpSweep => run_gnp_sweep(config)?,
        Kind::ExponentFit => return run_exponent_fit(config),
        Kind::Census => run_census(config)?,
        Kind::Concentration => run_concentration(config)?,
        Kind::SteinerProbe => run_steiner_probe(config)?,
    };
    Ok(Outcome {
        records,
        fits: Vec::new(),
    })
}

/// One grid point: how to build its host for a seed and which reference
/// columns its rows carry.
struct Point {
    n: u32,
    p: Option<f64>,
    x: Option<f64>,
    copies: Option<u32>,
    host: HostRecipe,
    /// Edge probability used to size the deletion template; `None` uses
    /// the host's own density.
    density: Option<f64>,
    refs: Vec<(String, f64)>,
}

#[derive(Clone, Copy)]
enum HostRecipe {
    Gnp { p: f64 },
    Cliques { copies: u32, t: u32 },
    Steiner,
}

impl Point {
    fn build(&self, r: usize, seed: u64) -> Result<Hypergraph> {
        match self.host {
            HostRecipe::Gnp { p } => hosts::gnp(self.n, r, p, seed),
            HostRecipe::Cliques { copies, t } => hosts::disjoint_cliques(copies, t, r),
            HostRecipe::Steiner => hosts::partial_steiner(self.n, r, seed),
        }
    }
}

/// Per-row reference values that depend on the row's value.
type RowRefs = dyn Fn(&Point, f64, f64) -> Vec<(String, f64)> + Sync;

fn elapsed_ms(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn template_of(t_target: u64, cfg: &ExperimentConfig) -> Result<Template> {
    template::template_for_capped(t_target, cfg.r, cfg.verify_cap)
}

fn run_algorithm(
    algo: Algorithm,
    host: &Hypergraph,
    point: &Point,
    seed: u64,
    cfg: &ExperimentConfig,
) -> Result<(ExtractionResult, Option<u64>)> {
    let r = cfg.r;
    match algo {
        Algorithm::Star => Ok((extract::star_extract(host)?, None)),
        Algorithm::PureDeletion => Ok((extract::pure_deletion(host, cfg.triangle_cap)?, None)),
        Algorithm::RandomHom => {
            let tpl = template_of(default_t(r, host.max_degree() as u64), cfg)?;
            let res = extract::random_hom_extract(host, &tpl, cfg.trials, seed)?;
            Ok((res, Some(tpl.t)))
        }
        Algorithm::Deletion => {
            let density = point.density.unwrap_or_else(|| {
                host.m() as f64 / binomial(point.n as u64, r as u64).max(1) as f64
            });
            let tpl = template_of(deletion_t(r, point.n, density), cfg)?;
            let res =
                extract::deletion_extract(host, Some(&tpl), cfg.trials, seed, cfg.triangle_cap)?;
            Ok((res, Some(tpl.t)))
        }
        Algorithm::Exact => {
            let out = exact_search(host, cfg.budget, cfg.triangle_cap)?;
            if !out.optimal {
                return Err(Error::BudgetExhausted {
                    budget: cfg.budget,
                    best_kept: out.result.value,
                    upper_bound: out.upper_bound,
                });
            }
            Ok((out.result, None))
        }
    }
}

/// Rows for one `(point, seed)`: one per algorithm plus `best`.
fn run_job(
    kind: Kind,
    point: &Point,
    seed: u64,
    cfg: &ExperimentConfig,
    row_refs: &RowRefs,
    precomputed: &[(Algorithm, ExtractionResult, u64)],
) -> Result<Vec<ExperimentRecord>> {
    let host = point.build(cfg.r, seed)?;
    let e = host.m() as u64;
    let triangles = host.count_loose_triangles();
    let base = ExperimentRecord {
        kind,
        r: cfg.r,
        n: point.n,
        p: point.p,
        x: point.x,
        t_template: None,
        copies: point.copies,
        seed: Some(seed),
        algo: String::new(),
        edges_host: e,
        triangles_host: Some(triangles),
        value: 0,
        certified: true,
        trials: None,
        trial_mean: None,
        trial_sd: None,
        runtime_ms: 0,
        refs: Vec::new(),
    };
    let mut rows = Vec::new();
    for algo in cfg.algorithms() {
        let pre = precomputed.iter().find(|(a, _, _)| *a == algo);
        if kind == Kind::LowerScaling && algo == Algorithm::Exact && pre.is_none() {
            // clique too large to solve; no exact row at this point
            continue;
        }
        let (res, t, ms) = match pre {
            Some((_, res, ms)) => (res.clone(), None, *ms),
            None => {
                let start = Instant::now();
                let (res, t) = run_algorithm(algo, &host, point, seed, cfg)?;
                (res, t, elapsed_ms(start, cfg.timing))
            }
        };
        let randomized = matches!(algo, Algorithm::RandomHom | Algorithm::Deletion);
        rows.push(ExperimentRecord {
            algo: algo.as_str().into(),
            t_template: t,
            value: res.value as u128,
            certified: res.certified,
            trials: randomized.then_some(cfg.trials),
            trial_mean: randomized.then_some(res.trial_mean),
            trial_sd: randomized.then_some(res.trial_sd),
            runtime_ms: ms,
            refs: row_refs(point, res.value as f64, e as f64),
            ..base.clone()
        });
    }
    let best = rows.iter().map(|r| r.value).max().unwrap_or(0);
    rows.push(ExperimentRecord {
        algo: "best".into(),
        value: best,
        certified: rows.iter().all(|r| r.certified),
        runtime_ms: rows.iter().map(|r| r.runtime_ms).sum(),
        refs: row_refs(point, best as f64, e as f64),
        ..base
    });
    Ok(rows)
}

/// Per-point rows across seeds, one per algorithm (and `best`).
fn aggregate(
    point: &Point,
    rows: &[ExperimentRecord],
    row_refs: &RowRefs,
) -> Vec<ExperimentRecord> {
    let mut algos: Vec<&str> = Vec::new();
    for r in rows {
        if !algos.contains(&r.algo.as_str()) {
            algos.push(&r.algo);
        }
    }
    algos
        .into_iter()
        .map(|algo| {
            let group: Vec<&ExperimentRecord> = rows.iter().filter(|r| r.algo == algo).collect();
            let (mean, sd) = mean_sd(group.iter().map(|r| r.value as f64));
            let mean_edges =
                group.iter().map(|r| r.edges_host as f64).sum::<f64>() / group.len() as f64;
            let first = group[0];
            let t = first.t_template;
            ExperimentRecord {
                seed: None,
                t_template: if group.iter().all(|r| r.t_template == t) {
                    t
                } else {
                    None
                },
                edges_host: group.iter().map(|r| r.edges_host).max().unwrap_or(0),
                triangles_host: group.iter().map(|r| r.triangles_host).max().flatten(),
                value: group.iter().map(|r| r.value).max().unwrap_or(0),
                certified: group.iter().all(|r| r.certified),
                trials: Some(group.len() as u64),
                trial_mean: Some(mean),
                trial_sd: Some(sd),
                runtime_ms: group.iter().map(|r| r.runtime_ms).sum(),
                refs: row_refs(point, mean, mean_edges),
                ..first.clone()
            }
        })
        .collect()
}

fn run_points(
    kind: Kind,
    points: &[Point],
    cfg: &ExperimentConfig,
    row_refs: &RowRefs,
    precomputed: &[Vec<(Algorithm, ExtractionResult, u64)>],
) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|i| cfg.seeds.iter().map(move |&s| (i, s)))
        .collect();
    let results: Vec<(usize, Vec<ExperimentRecord>)> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let pre = precomputed.get(i).map_or(&[][..], Vec::as_slice);
            run_job(kind, &points[i], seed, cfg, row_refs, pre).map(|rows| (i, rows))
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    for (i, point) in points.iter().enumerate() {
        let rows: Vec<ExperimentRecord> = results
            .iter()
            .filter(|(j, _)| *j == i)
            .flat_map(|(_, rows)| rows.iter().cloned())
            .collect();
        records.extend(aggregate(point, &rows, row_refs));
        records.extend(rows);
    }
    records.sort_by(ExperimentRecord::coordinate_cmp);
    Ok(records)
}

/// `x = r + log_n p`.
fn x_of(r: usize, n: u32, p: f64) -> f64 {
    r as f64 + p.ln() / (n as f64).ln()
}

/// Points of a `(n, p or x)` grid on G(n, p) hosts.
fn gnp_points(
    cfg: &ExperimentConfig,
    refs: impl Fn(u32, f64, f64) -> Vec<(String, f64)>,
) -> Vec<Point> {
    let mut points = Vec::new();
    for &n in &cfg.n {
        let pairs: Vec<(f64, f64)> = if cfg.x.is_empty() {
            cfg.p.iter().map(|&p| (p, x_of(cfg.r, n, p))).collect()
        } else {
            cfg.x
                .iter()
                .map(|&x| (((n as f64).powf(x - cfg.r as f64)).min(1.0), x))
                .collect()
        };
        for (p, x) in pairs {
            points.push(Point {
                n,
                p: Some(p),
                x: Some(x),
                copies: None,
                host: HostRecipe::Gnp { p },
                density: Some(p),
                refs: refs(n, p, x),
            });
        }
    }
    points
}

fn point_refs(point: &Point) -> Vec<(String, f64)> {
    point.refs.clone()
}

/// Envelope references of the random-host bounds: `p C(n, r)` and
/// `p^(1/(2r-3)) n^2` (the cube-root law for r = 3), the latter also with
/// one `ln n` factor; `mid_range` flags `3/2 < x <= 4, x < r`, where the
/// lower-bound analysis subsamples and the extractors run unchanged.
fn envelope_refs(r: usize, n: u32, p: f64, x: f64) -> Vec<(String, f64)> {
    let nf = n as f64;
    let root = p.powf(1.0 / (2.0 * r as f64 - 3.0)) * nf * nf;
    vec![
        ("ref_linear".into(), p * binomial(n as u64, r as u64) as f64),
        ("ref_root".into(), root),
        ("ref_root_log".into(), root * nf.ln()),
        (
            "mid_range".into(),
            f64::from(u8::from(x > 1.5 && x <= 4.0 && x < r as f64)),
        ),
    ]
}

/// Extraction values on G(n, p) over a p (or x) grid, with the envelope
/// reference columns.
pub fn run_gnp_sweep(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    let r = cfg.r;
    let points = gnp_points(cfg, |n, p, x| envelope_refs(r, n, p, x));
    run_points(
        Kind::GnpSweep,
        &points,
        cfg,
        &|pt, _, _| point_refs(pt),
        &[],
    )
}

/// Repeats the pipeline at fixed `(n, p)` over the seeds; the aggregate rows
/// carry the spread, beside the martingale scale `sqrt(C(n, r))`.
pub fn run_concentration(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    let r = cfg.r;
    let points = gnp_points(cfg, |n, _, _| {
        vec![(
            "azuma_scale".into(),
            (binomial(n as u64, r as u64) as f64).sqrt(),
        )]
    });
    run_points(
        Kind::Concentration,
        &points,
        cfg,
        &|pt, _, _| point_refs(pt),
        &[],
    )
}

/// Disjoint cliques `copies x K_t`, extracted with the template sized from
/// the maximum degree, beside `Δ^(-(r-2)/(r-1))` and, for small cliques,
/// the exact optimum assembled from one solved clique.
pub fn run_lower_scaling(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let r = cfg.r;
    let mut points = Vec::new();
    let mut precomputed = Vec::new();
    for &t in &cfg.t {
        // solved once per clique size, shared by every copies value and seed
        let single = if t <= EXACT_CLIQUE_MAX {
            let start = Instant::now();
            let clique = hosts::complete(t, r)?;
            let res = exact_search(&clique, cfg.budget, cfg.triangle_cap)?;
            if !res.optimal {
                return Err(Error::BudgetExhausted {
                    budget: cfg.budget,
                    best_kept: res.result.value,
                    upper_bound: res.upper_bound,
                });
            }
            Some((res.result.kept_edges, elapsed_ms(start, cfg.timing)))
        } else {
            None
        };
        for &copies in &cfg.copies {
            let delta = binomial(t as u64 - 1, r as u64 - 1) as f64;
            let n = copies * t;
            points.push(Point {
                n,
                p: None,
                x: None,
                copies: Some(copies),
                host: HostRecipe::Cliques { copies, t },
                density: None,
                refs: vec![
                    ("clique".into(), t as f64),
                    ("delta".into(), delta),
                    (
                        "ref_curve".into(),
                        delta.powf(-((r as f64 - 2.0) / (r as f64 - 1.0))),
                    ),
                    ("ref_star".into(), copies as f64 * delta),
                ],
            });
            let mut pre = Vec::new();
            if let Some((kept, ms)) = &single {
                let host = hosts::disjoint_cliques(copies, t, r)?;
                let block = binomial(t as u64, r as u64) as usize;
                let all: Vec<usize> = (0..copies as usize)
                    .flat_map(|c| kept.iter().map(move |&e| c * block + e))
                    .collect();
                let res = ExtractionResult::certify(
                    &host,
                    Algorithm::Exact,
                    extract::ExtractionParams {
                        budget: Some(cfg.budget),
                        ..Default::default()
                    },
                    all,
                    &[],
                )?;
                pre.push((Algorithm::Exact, res, *ms));
            }
            precomputed.push(pre);
        }
    }
    let mut cfg = cfg.clone();
    // exact rows appear exactly where the clique was solved
    let mut algos = cfg.algorithms();
    if !algos.contains(&Algorithm::Exact) {
        algos.push(Algorithm::Exact);
    }
    cfg.algorithms = Some(algos);
    let row_refs = |pt: &Point, value: f64, edges: f64| {
        let mut refs = point_refs(pt);
        refs.push((
            "ratio".into(),
            if edges > 0.0 { value / edges } else { 0.0 },
        ));
        refs
    };
    run_points(Kind::LowerScaling, &points, &cfg, &row_refs, &precomputed)
}

/// Greedy partial Steiner hosts (every 3-set in at most one edge), solved
/// exactly, beside `value / n^2`.
pub fn run_steiner_probe(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    let points: Vec<Point> = cfg
        .n
        .iter()
        .map(|&n| Point {
            n,
            p: None,
            x: None,
            copies: None,
            host: HostRecipe::Steiner,
            density: None,
            refs: Vec::new(),
        })
        .collect();
    let row_refs = |pt: &Point, value: f64, edges: f64| {
        let n = pt.n as f64;
        vec![
            ("growth".into(), value / (n * n)),
            (
                "ratio".into(),
                if edges > 0.0 { value / edges } else { 0.0 },
            ),
        ]
    };
    run_points(Kind::SteinerProbe, &points, cfg, &row_refs, &[])
}

/// Census of loose-triangle-free 3-graphs. Rows use `edges_host` for the
/// edge count `m` and `value` for N(n, m); `algo` is `census`.
pub fn run_census(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let opts = CensusOptions {
        work_limit: cfg.work_limit,
        allow_large: cfg.allow_large,
    };
    let mut records = Vec::new();
    for &n in &cfg.n {
        let start = Instant::now();
        let rows = census::count_tfree(n, cfg.mmax, &opts)?;
        let report = census::compare_bound(&rows)?;
        let ms = elapsed_ms(start, cfg.timing);
        for row in report.rows {
            let count = row
                .count
                .to_string()
                .parse::<u128>()
                .map_err(|_| invalid(format!("N({n}, {}) does not fit in 128 bits", row.m)))?;
            let m = row.m as u64;
            let lower = census::big_binomial(binomial(n as u64 - 1, 2), m);
            let upper = census::big_binomial(binomial(n as u64, 3), m);
            records.push(ExperimentRecord {
                kind: Kind::Census,
                r: 3,
                n,
                p: None,
                x: None,
                t_template: None,
                copies: None,
                seed: None,
                algo: "census".into(),
                edges_host: m,
                triangles_host: None,
                value: count,
                certified: true,
                trials: None,
                trial_mean: None,
                trial_sd: None,
                runtime_ms: ms,
                refs: vec![
                    ("log_bound".into(), row.log_bound),
                    ("ratio".into(), row.ratio),
                    ("star_lower".into(), census::ln_big(&lower).exp()),
                    ("trivial_upper".into(), census::ln_big(&upper).exp()),
                ],
            });
        }
    }
    records.sort_by(ExperimentRecord::coordinate_cmp);
    Ok(records)
}

/// Fitted slope of one algorithm's mean value against `n` at fixed `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitRow {
    pub kind: Kind,
    pub r: usize,
    pub x: Option<f64>,
    pub algo: String,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    /// Reference bracket for the exponent at this `x`.
    pub ref_lower: Option<f64>,
    pub ref_upper: Option<f64>,
}

/// Fits `trial_mean ~ n^slope` over the aggregate rows of every
/// `(kind, r, x, algo)` group that spans at least two values of `n`.
/// Groups whose means are not all positive are skipped.
pub fn fit_records(records: &[ExperimentRecord]) -> Vec<FitRow> {
    let mut keys: Vec<(Kind, usize, Option<f64>, String)> = Vec::new();
    for rec in records.iter().filter(|r| r.seed.is_none()) {
        let key = (rec.kind, rec.r, rec.x, rec.algo.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut fits = Vec::new();
    for (kind, r, x, algo) in keys {
        let pts: Vec<(f64, f64)> = records
            .iter()
            .filter(|q| {
                q.seed.is_none() && q.kind == kind && q.r == r && q.x == x && q.algo == algo
            })
            .map(|q| (q.n as f64, q.trial_mean.unwrap_or(q.value as f64)))
            .collect();
        let Ok(f) = fit_power_law(&pts) else {
            continue;
        };
        let bracket = x.map(|x| exponent_bracket(r, x));
        fits.push(FitRow {
            kind,
            r,
            x,
            algo,
            slope: f.slope,
            intercept: f.intercept,
            points: f.points,
            ref_lower: bracket.map(|b| b.0),
            ref_upper: bracket.map(|b| b.1),
        });
    }
    fits
}

pub fn fits_to_csv(fits: &[FitRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "kind",
        "r",
        "x",
        "algo",
        "slope",
        "intercept",
        "points",
        "ref_lower",
        "ref_upper",
    ])?;
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for f in fits {
        w.write_record([
            f.kind.as_str().to_string(),
            f.r.to_string(),
            opt(f.x),
            f.algo.clone(),
            f.slope.to_string(),
            f.intercept.to_string(),
            f.points.to_string(),
            opt(f.ref_lower),
            opt(f.ref_upper),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// G(n, n^(x-r)) over an n grid at each fixed x, then log-log slopes of the
/// mean values. The slopes are measurements; the bracket columns are the
/// limiting exponents, not something finite n is expected to hit.
pub fn run_exponent_fit(cfg: &ExperimentConfig) -> Result<Outcome> {
    let r = cfg.r;
    let points = gnp_points(cfg, |n, p, x| {
        let (lo, hi) = exponent_bracket(r, x);
        let mut refs = envelope_refs(r, n, p, x);
        refs.push(("ref_exp_lower".into(), lo));
        refs.push(("ref_exp_upper".into(), hi));
        refs
    });
    let records = run_points(
        Kind::ExponentFit,
        &points,
        cfg,
        &|pt, _, _| point_refs(pt),
        &[],
    )?;
    let fits = fit_records(&records);
    Ok(Outcome { records, fits })
}

/// Checks the per-seed `best` rows: `best <= e(host)` and
/// `best >= max(star, e - R)`; every row certified.
pub fn check_envelope(records: &[ExperimentRecord]) -> Result<()> {
    for rec in records {
        if !rec.certified {
            return Err(invalid(format!("uncertified row {rec:?}")));
        }
        if rec.seed.is_none() || rec.algo != "best" {
            continue;
        }
        let star = records
            .iter()
            .find(|q| q.algo == "star" && q.seed == rec.seed && q.coordinate_cmp_point(rec))
            .map_or(0, |q| q.value);
        let floor = rec
            .triangles_host
            .map_or(0, |t| rec.edges_host.saturating_sub(t)) as u128;
        if rec.value > rec.edges_host as u128 || rec.value < star.max(floor) {
            return Err(invalid(format!(
                "envelope violated at n = {}, p = {:?}, seed = {:?}: best {} vs e {} / star {} / e - R {}",
                rec.n, rec.p, rec.seed, rec.value, rec.edges_host, star, floor
            )));
        }
    }
    Ok(())
}

impl ExperimentRecord {
    /// Same kind, r, n, p, x and copies.
    fn coordinate_cmp_point(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.r == other.r
            && self.n == other.n
            && self.p == other.p
            && self.x == other.x
            && self.copies == other.copies
    }
}
