//! `loosetri`: generate hosts and templates, extract loose-triangle-free
//! subgraphs, solve exactly, count, and run seeded experiments.
//!
//! Exit status: 0 on success, 1 on invalid input, 2 when a node budget,
//! triangle cap or census work limit runs out.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::ConfigFile;
use loosetri::apfree::{Ambient, ApFreeSet};
use loosetri::census::{self, CensusOptions};
use loosetri::experiment::{self, ExperimentConfig, Kind};
use loosetri::extract::{self, Algorithm, ExtractionResult};
use loosetri::hosts;
use loosetri::template::{self, Template};
use loosetri::{Hypergraph, HypergraphFile};

const KNOWN_KEYS: &[&str] = &[
    // global
    "seed",
    "trials",
    "out",
    "format",
    "threads",
    "verify_cap",
    "no_timestamp",
    // gen / template / extract / exact / census
    "family",
    "n",
    "r",
    "p",
    "copies",
    "t",
    "a",
    "host",
    "algo",
    "template",
    "budget",
    "triangle_cap",
    "mmax",
    "work_limit",
    "allow_large",
    // experiment / fit
    "kind",
    "x",
    "algorithms",
    "seeds",
    "gnuplot",
    "fit_out",
    "input",
];

#[derive(Parser, Debug)]
#[command(
    name = "loosetri",
    version,
    about = "Loose-triangle-free subgraphs of uniform hypergraphs",
    after_help = "Randomized defaults are fixed: --trials 32, experiment seeds 0..20 (0 to 19).\n\
                  Every flag can also be set in a --config file of `key = value` lines\n\
                  (`#` starts a comment; keys are flag names, `-` or `_`); flags win.\n\
                  Exit status: 0 success, 1 invalid input, 2 budget/cap/work limit exhausted."
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for hosts and extractors [default: 0]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Trials per randomized extraction [default: 32]
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Output file [default: stdout]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format [default: csv]
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Worker threads [default: all cores]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest template edge count certified by enumeration [default: 100000]
    #[arg(long, global = true)]
    verify_cap: Option<usize>,
    /// Omit the timestamp header and record runtime_ms as 0 (byte-identical reruns)
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Config file of `key = value` lines
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Subcommand, Debug)]
#[allow(clippy::large_enum_variant)] // parsed once
enum Command {
    /// Generate a host hypergraph file
    Gen(GenArgs),
    /// Build and certify a template H(A, Z_t)
    Template(TemplateArgs),
    /// Extract a loose-triangle-free subgraph of a host file
    Extract(ExtractArgs),
    /// Maximum loose-triangle-free subgraph by branch and bound
    Exact(ExactArgs),
    /// Count loose-triangle-free 3-graphs on n labeled vertices
    Census(CensusArgs),
    /// Run a seeded experiment grid
    Experiment(ExperimentArgs),
    /// Fit log-log slopes to an experiment CSV
    Fit(FitArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// gnp, cliques, star, complete or steiner
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    /// Uniformity [default: 3]
    #[arg(long)]
    r: Option<usize>,
    /// Edge probability (gnp)
    #[arg(long)]
    p: Option<f64>,
    /// Number of cliques (cliques)
    #[arg(long)]
    copies: Option<u32>,
    /// Clique size (cliques)
    #[arg(long)]
    t: Option<u32>,
}

#[derive(Args, Debug)]
struct TemplateArgs {
    /// Target modulus; the next prime at least max(t, r) is used unless --a is given
    #[arg(long)]
    t: Option<u64>,
    /// Uniformity [default: 3]
    #[arg(long)]
    r: Option<usize>,
    /// Explicit difference set (comma separated); --t must then be prime
    #[arg(long)]
    a: Option<String>,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    /// Host hypergraph file
    #[arg(long)]
    host: Option<PathBuf>,
    /// random_hom, deletion, star, pure_deletion or exact
    #[arg(long)]
    algo: Option<String>,
    /// Template file (random_hom, deletion); sized automatically if absent
    #[arg(long)]
    template: Option<PathBuf>,
    /// Abort when the host has more loose triangles than this [default: 100000000]
    #[arg(long)]
    triangle_cap: Option<u64>,
    /// Node budget for exact [default: 10000000]
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    host: Option<PathBuf>,
    /// Node budget [default: 10000000]
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    triangle_cap: Option<u64>,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    n: Option<u32>,
    /// Largest edge count [default: 4]
    #[arg(long)]
    mmax: Option<usize>,
    /// DFS node limit [default: 2000000000]
    #[arg(long)]
    work_limit: Option<u64>,
    /// Allow n > 8 or mmax > 8
    #[arg(long)]
    allow_large: bool,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    /// lower_scaling, gnp_sweep, exponent_fit, census, concentration or steiner_probe
    #[arg(long)]
    kind: Option<String>,
    /// Uniformity [default: 3]
    #[arg(long)]
    r: Option<usize>,
    /// n grid, e.g. 20,40,80 or 10..15
    #[arg(long)]
    n: Option<String>,
    /// p grid, e.g. 0.01,0.02
    #[arg(long)]
    p: Option<String>,
    /// x grid (p = n^(x - r))
    #[arg(long)]
    x: Option<String>,
    /// Clique-size grid (lower_scaling)
    #[arg(long)]
    t: Option<String>,
    /// Copies grid (lower_scaling)
    #[arg(long)]
    copies: Option<String>,
    /// Algorithms, comma separated [default: per kind]
    #[arg(long)]
    algorithms: Option<String>,
    /// Seed list [default: 0..20]; a lone --seed means that single seed
    #[arg(long)]
    seeds: Option<String>,
    /// Node budget for exact solves [default: 10000000]
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    triangle_cap: Option<u64>,
    /// Census: largest edge count [default: 4]
    #[arg(long)]
    mmax: Option<usize>,
    /// Census: DFS node limit
    #[arg(long)]
    work_limit: Option<u64>,
    /// Lift the census and steiner_probe size limits
    #[arg(long)]
    allow_large: bool,
    /// Also write a gnuplot script for the output to this path
    #[arg(long)]
    gnuplot: Option<PathBuf>,
    /// exponent_fit: write the slope table here [default: stderr]
    #[arg(long)]
    fit_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Experiment CSV with aggregate rows
    #[arg(long)]
    input: Option<PathBuf>,
}

struct Ctx {
    file: ConfigFile,
    seed: u64,
    trials: u64,
    out: Option<PathBuf>,
    format: Format,
    verify_cap: usize,
    no_timestamp: bool,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text)
                .with_context(|| format!("cannot write {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn timestamp(&self) -> Option<String> {
        if self.no_timestamp {
            return None;
        }
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Some(format!("unix={secs}"))
    }

    fn required<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.file.pick(flag, key)?.ok_or_else(|| {
            anyhow!(
                "missing --{} (or `{key} = ...` in the config file)",
                key.replace('_', "-")
            )
        })
    }

    fn flag_bool(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.file.get::<bool>(key)?.unwrap_or(false))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let exhausted = e
                .chain()
                .filter_map(|c| c.downcast_ref::<loosetri::Error>())
                .any(loosetri::Error::is_exhaustion);
            ExitCode::from(if exhausted { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let g = cli.global;
    let file = match &g.config {
        Some(path) => ConfigFile::load(path, KNOWN_KEYS)?,
        None => ConfigFile::default(),
    };
    let threads = file.pick(g.threads, "threads")?;
    if let Some(t) = threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot size the worker pool")?;
    }
    let explicit_seed = file.pick(g.seed, "seed")?;
    let ctx = Ctx {
        seed: explicit_seed.unwrap_or(0),
        trials: file
            .pick(g.trials, "trials")?
            .unwrap_or(experiment::DEFAULT_TRIALS),
        out: file.pick(g.out, "out")?,
        format: file.pick(g.format, "format")?.unwrap_or(Format::Csv),
        verify_cap: file
            .pick(g.verify_cap, "verify_cap")?
            .unwrap_or(template::DEFAULT_VERIFY_CAP),
        no_timestamp: g.no_timestamp || file.get::<bool>("no_timestamp")?.unwrap_or(false),
        file,
    };
    if ctx.trials == 0 {
        bail!("--trials must be at least 1");
    }
    match cli.command {
        Command::Gen(a) => gen(&ctx, a),
        Command::Template(a) => make_template(&ctx, a),
        Command::Extract(a) => run_extract(&ctx, a),
        Command::Exact(a) => run_exact(&ctx, a),
        Command::Census(a) => run_census(&ctx, a),
        Command::Experiment(a) => run_experiment(&ctx, a, explicit_seed),
        Command::Fit(a) => run_fit(&ctx, a),
    }
}

fn gen(ctx: &Ctx, a: GenArgs) -> Result<()> {
    let family: String = ctx.required(a.family, "family")?;
    let r: usize = ctx.file.pick(a.r, "r")?.unwrap_or(3);
    let seed = ctx.seed;
    let (graph, comment) = match family.as_str() {
        "gnp" => {
            let n: u32 = ctx.required(a.n, "n")?;
            let p: f64 = ctx.required(a.p, "p")?;
            (
                hosts::gnp(n, r, p, seed)?,
                format!("gnp n={n} r={r} p={p} seed={seed}"),
            )
        }
        "cliques" => {
            let copies: u32 = ctx.required(a.copies, "copies")?;
            let t: u32 = ctx.required(a.t, "t")?;
            (
                hosts::disjoint_cliques(copies, t, r)?,
                format!("cliques copies={copies} t={t} r={r}"),
            )
        }
        "star" => {
            let n: u32 = ctx.required(a.n, "n")?;
            (hosts::star(n, r)?, format!("star n={n} r={r}"))
        }
        "complete" => {
            let n: u32 = ctx.required(a.n, "n")?;
            (hosts::complete(n, r)?, format!("complete n={n} r={r}"))
        }
        "steiner" => {
            let n: u32 = ctx.required(a.n, "n")?;
            (
                hosts::partial_steiner(n, r, seed)?,
                format!("steiner n={n} r={r} seed={seed}"),
            )
        }
        other => {
            bail!("unknown family {other:?} (expected gnp, cliques, star, complete or steiner)")
        }
    };
    let file = HypergraphFile {
        comments: vec![format!(" {comment}")],
        graph,
    };
    ctx.emit(&file.to_text())
}

fn make_template(ctx: &Ctx, a: TemplateArgs) -> Result<()> {
    let t: u64 = ctx.required(a.t, "t")?;
    let r: usize = ctx.file.pick(a.r, "r")?.unwrap_or(3);
    let list: Option<String> = ctx.file.pick(a.a, "a")?;
    let tpl = match list {
        Some(list) => {
            let elements = list
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| anyhow!("--a: expected comma-separated integers, got {list:?}"))?;
            let set = ApFreeSet::user(elements, Ambient::Cyclic(t), template::required_order(r))?;
            template::rs_template_capped(&set, t, r, ctx.verify_cap)?
        }
        None => template::template_for_capped(t, r, ctx.verify_cap)?,
    };
    ctx.emit(&tpl.to_text())
}

fn read_host(path: &Path) -> Result<Hypergraph> {
    Ok(HypergraphFile::read(path)
        .with_context(|| format!("cannot load host {}", path.display()))?
        .graph)
}

fn read_template(path: &Path, verify_cap: usize) -> Result<Template> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read template {}", path.display()))?;
    Template::from_text(&text, verify_cap)
        .with_context(|| format!("cannot load template {}", path.display()))
}

fn result_text(ctx: &Ctx, res: &ExtractionResult, extra: &[(&str, String)]) -> Result<String> {
    match ctx.format {
        Format::Json => {
            let mut v = serde_json::to_value(res)?;
            for (k, val) in extra {
                v[*k] = serde_json::Value::from(val.as_str());
            }
            Ok(serde_json::to_string_pretty(&v)? + "\n")
        }
        Format::Csv => {
            let kept: Vec<String> = res.kept_edges.iter().map(usize::to_string).collect();
            let mut header = vec![
                "algo",
                "value",
                "certified",
                "t_template",
                "trials",
                "seed",
                "trial_mean",
                "trial_sd",
                "host_digest",
                "kept_edges",
            ];
            let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
            let mut row = vec![
                res.algorithm.to_string(),
                res.value.to_string(),
                res.certified.to_string(),
                opt(res.params.t),
                opt(res.params.trials),
                opt(res.params.seed),
                res.trial_mean.to_string(),
                res.trial_sd.to_string(),
                res.host_digest.clone(),
                kept.join(" "),
            ];
            for (k, v) in extra {
                header.push(k);
                row.push(v.clone());
            }
            Ok(format!("{}\n{}\n", header.join(","), row.join(",")))
        }
    }
}

fn run_extract(ctx: &Ctx, a: ExtractArgs) -> Result<()> {
    let host_path: PathBuf = ctx.required(a.host, "host")?;
    let algo: Algorithm = ctx.required::<String>(a.algo, "algo")?.parse()?;
    let cap = ctx.file.pick(a.triangle_cap, "triangle_cap")?;
    let budget = ctx
        .file
        .pick(a.budget, "budget")?
        .unwrap_or(extract::DEFAULT_BUDGET);
    let template_path: Option<PathBuf> = ctx.file.pick(a.template, "template")?;
    let host = read_host(&host_path)?;
    let r = host.r();
    let template = |t_target: u64| -> Result<Template> {
        match &template_path {
            Some(p) => read_template(p, ctx.verify_cap),
            None => Ok(template::template_for_capped(t_target, r, ctx.verify_cap)?),
        }
    };
    let res = match algo {
        Algorithm::Star => extract::star_extract(&host)?,
        Algorithm::PureDeletion => extract::pure_deletion(&host, cap)?,
        Algorithm::RandomHom => {
            let tpl = template(extract::default_t(r, host.max_degree() as u64))?;
            extract::random_hom_extract(&host, &tpl, ctx.trials, ctx.seed)?
        }
        Algorithm::Deletion => {
            let density =
                host.m() as f64 / hosts::binomial(host.n() as u64, r as u64).max(1) as f64;
            let tpl = template(extract::deletion_t(r, host.n(), density))?;
            extract::deletion_extract(&host, Some(&tpl), ctx.trials, ctx.seed, cap)?
        }
        Algorithm::Exact => {
            let out = extract::exact_search(&host, budget, cap)?;
            exact_or_exhausted(out, budget)?
        }
    };
    ctx.emit(&result_text(ctx, &res, &[])?)
}

fn exact_or_exhausted(out: extract::ExactOutcome, budget: u64) -> Result<ExtractionResult> {
    if out.optimal {
        Ok(out.result)
    } else {
        Err(loosetri::Error::BudgetExhausted {
            budget,
            best_kept: out.result.value,
            upper_bound: out.upper_bound,
        }
        .into())
    }
}

fn run_exact(ctx: &Ctx, a: ExactArgs) -> Result<()> {
    let host_path: PathBuf = ctx.required(a.host, "host")?;
    let budget = ctx
        .file
        .pick(a.budget, "budget")?
        .unwrap_or(extract::DEFAULT_BUDGET);
    let cap = ctx.file.pick(a.triangle_cap, "triangle_cap")?;
    let host = read_host(&host_path)?;
    let out = extract::exact_search(&host, budget, cap)?;
    let nodes = out.nodes.to_string();
    let res = exact_or_exhausted(out, budget)?;
    ctx.emit(&result_text(ctx, &res, &[("nodes", nodes)])?)
}

fn run_census(ctx: &Ctx, a: CensusArgs) -> Result<()> {
    let n: u32 = ctx.required(a.n, "n")?;
    let mmax: usize = ctx.file.pick(a.mmax, "mmax")?.unwrap_or(4);
    let opts = CensusOptions {
        work_limit: ctx
            .file
            .pick(a.work_limit, "work_limit")?
            .unwrap_or(census::DEFAULT_WORK_LIMIT),
        allow_large: ctx.flag_bool(a.allow_large, "allow_large")?,
    };
    let rows = census::count_tfree(n, mmax, &opts)?;
    let report = census::compare_bound(&rows)?;
    match ctx.format {
        Format::Csv => ctx.emit(&report.to_csv()?),
        Format::Json => ctx.emit(&(serde_json::to_string_pretty(&report.rows)? + "\n")),
    }
}

fn run_experiment(ctx: &Ctx, a: ExperimentArgs, explicit_seed: Option<u64>) -> Result<()> {
    let mut cfg = ExperimentConfig {
        trials: ctx.trials,
        verify_cap: ctx.verify_cap,
        timing: !ctx.no_timestamp,
        ..Default::default()
    };
    // file first, flags override
    for (key, value) in ctx.file.entries() {
        if ExperimentConfig::KEYS.contains(&key) {
            cfg.set(key, value)?;
        }
    }
    let flags: [(&str, Option<String>); 13] = [
        ("kind", a.kind),
        ("r", a.r.map(|v| v.to_string())),
        ("n", a.n),
        ("p", a.p),
        ("x", a.x),
        ("t", a.t),
        ("copies", a.copies),
        ("algorithms", a.algorithms),
        ("seeds", a.seeds),
        ("budget", a.budget.map(|v| v.to_string())),
        ("triangle_cap", a.triangle_cap.map(|v| v.to_string())),
        ("mmax", a.mmax.map(|v| v.to_string())),
        ("work_limit", a.work_limit.map(|v| v.to_string())),
    ];
    let seeds_given = flags[8].1.is_some() || ctx.file.raw("seeds").is_some();
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    if a.allow_large {
        cfg.allow_large = true;
    }
    // the global trials / verify_cap flags win over the file values
    cfg.trials = ctx.trials;
    cfg.verify_cap = ctx.verify_cap;
    if !seeds_given {
        if let Some(s) = explicit_seed {
            cfg.seeds = vec![s];
        }
    }
    cfg.validate()?;
    let outcome = experiment::run(&cfg)?;
    let text = match ctx.format {
        Format::Csv => experiment::to_csv(&outcome.records, ctx.timestamp().as_deref())?,
        Format::Json => experiment::to_json(&outcome.records)?,
    };
    ctx.emit(&text)?;
    if let Some(path) = ctx.file.pick(a.gnuplot, "gnuplot")? {
        let data = ctx
            .out
            .as_ref()
            .map_or("data.csv".to_string(), |p| p.display().to_string());
        std::fs::write(&path, experiment::gnuplot_script(cfg.kind, &data))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if cfg.kind == Kind::ExponentFit {
        let table = experiment::fits_to_csv(&outcome.fits)?;
        match ctx.file.pick(a.fit_out, "fit_out")? {
            Some(path) => std::fs::write(&path, table)
                .with_context(|| format!("cannot write {}", path.display()))?,
            None => eprint!("{table}"),
        }
    }
    Ok(())
}

fn run_fit(ctx: &Ctx, a: FitArgs) -> Result<()> {
    let input: PathBuf = ctx.required(a.input, "input")?;
    let text = std::fs::read_to_string(&input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let records =
        experiment::read_csv(&text).with_context(|| format!("cannot parse {}", input.display()))?;
    let fits = experiment::fit_records(&records);
    if fits.is_empty() {
        bail!(
            "no fittable groups in {}: need aggregate rows (empty seed) spanning at least two n values",
            input.display()
        );
    }
    match ctx.format {
        Format::Csv => ctx.emit(&experiment::fits_to_csv(&fits)?),
        Format::Json => {
            let rows: Vec<serde_json::Value> = fits
                .iter()
                .map(|f| {
                    serde_json::json!({
                        "kind": f.kind.as_str(), "r": f.r, "x": f.x, "algo": f.algo,
                        "slope": f.slope, "intercept": f.intercept, "points": f.points,
                        "ref_lower": f.ref_lower, "ref_upper": f.ref_upper,
                    })
                })
                .collect();
            ctx.emit(&(serde_json::to_string_pretty(&rows)? + "\n"))
        }
    }
}
