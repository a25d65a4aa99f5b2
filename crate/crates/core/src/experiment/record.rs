//! Experiment rows and their CSV / JSON / gnuplot forms.

use std::cmp::Ordering;
use std::fmt::Write as _;

use super::Kind;
use crate::error::{Error, Result};

/// The fixed leading columns, in order. Experiment-specific reference
/// columns follow them.
pub const COLUMNS: [&str; 17] = [
    "kind",
    "r",
    "n",
    "p",
    "x",
    "t_template",
    "copies",
    "seed",
    "algo",
    "edges_host",
    "triangles_host",
    "value",
    "certified",
    "trials",
    "trial_mean",
    "trial_sd",
    "runtime_ms",
];

/// One output row.
///
/// Per-seed rows carry one algorithm's result, or `algo = "best"` for the
/// maximum over algorithms. Aggregate rows have no seed: `trials` is then
/// the number of seeds, `trial_mean`/`trial_sd` are taken across seeds and
/// `value`, `edges_host`, `triangles_host` are maxima across seeds.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRecord {
    pub kind: Kind,
    pub r: usize,
    pub n: u32,
    pub p: Option<f64>,
    pub x: Option<f64>,
    pub t_template: Option<u64>,
    pub copies: Option<u32>,
    pub seed: Option<u64>,
    pub algo: String,
    pub edges_host: u64,
    pub triangles_host: Option<u64>,
    pub value: u128,
    pub certified: bool,
    pub trials: Option<u64>,
    pub trial_mean: Option<f64>,
    pub trial_sd: Option<f64>,
    pub runtime_ms: u64,
    /// Named reference values appended after the fixed columns.
    pub refs: Vec<(String, f64)>,
}

/// Row order used by `algo`: algorithms first in their declared order, then
/// `best`, then anything else by name.
fn algo_rank(a: &str) -> (usize, &str) {
    let pos = crate::extract::Algorithm::ALL
        .iter()
        .position(|x| x.as_str() == a);
    match (pos, a) {
        (Some(i), _) => (i, ""),
        (None, "best") => (10, ""),
        (None, other) => (11, other),
    }
}

fn cmp_opt_f64(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(a), Some(b)) => a.total_cmp(&b),
        (a, b) => a.is_some().cmp(&b.is_some()),
    }
}

impl ExperimentRecord {
    pub fn ref_value(&self, name: &str) -> Option<f64> {
        self.refs.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    /// Ordering by configuration coordinates; aggregate rows (no seed) sort
    /// after the per-seed rows of the same point.
    pub fn coordinate_cmp(&self, other: &Self) -> Ordering {
        (self.kind, self.r, self.n)
            .cmp(&(other.kind, other.r, other.n))
            .then_with(|| cmp_opt_f64(self.p, other.p))
            .then_with(|| cmp_opt_f64(self.x, other.x))
            .then_with(|| self.copies.cmp(&other.copies))
            .then_with(|| match (self.seed, other.seed) {
                (Some(a), Some(b)) => a.cmp(&b),
                (a, b) => b.is_some().cmp(&a.is_some()),
            })
            .then_with(|| self.edges_host.cmp(&other.edges_host))
            .then_with(|| algo_rank(&self.algo).cmp(&algo_rank(&other.algo)))
            .then_with(|| self.t_template.cmp(&other.t_template))
    }

    fn cells(&self) -> Vec<Cell> {
        let mut cells = vec![
            Cell::Str(self.kind.as_str().to_string()),
            Cell::Int(self.r as u128),
            Cell::Int(self.n as u128),
            Cell::opt_float(self.p),
            Cell::opt_float(self.x),
            Cell::opt_int(self.t_template),
            Cell::opt_int(self.copies.map(u64::from)),
            Cell::opt_int(self.seed),
            Cell::Str(self.algo.clone()),
            Cell::Int(self.edges_host as u128),
            Cell::opt_int(self.triangles_host),
            Cell::Int(self.value),
            Cell::Bool(self.certified),
            Cell::opt_int(self.trials),
            Cell::opt_float(self.trial_mean),
            Cell::opt_float(self.trial_sd),
            Cell::Int(self.runtime_ms as u128),
        ];
        cells.extend(self.refs.iter().map(|&(_, v)| Cell::Float(v)));
        cells
    }

    fn header(&self) -> Vec<String> {
        COLUMNS
            .iter()
            .map(|c| c.to_string())
            .chain(self.refs.iter().map(|(k, _)| k.clone()))
            .collect()
    }
}

enum Cell {
    Str(String),
    Int(u128),
    Float(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn opt_int(v: Option<u64>) -> Cell {
        v.map_or(Cell::Empty, |v| Cell::Int(v as u128))
    }

    fn opt_float(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Float)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => fmt_float(*f),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Str(s) => serde_json::Value::from(s.as_str()).to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) if f.is_finite() => fmt_float(*f),
            Cell::Float(_) | Cell::Empty => "null".into(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Shortest round-trip decimal; non-finite values as `nan` / `inf`.
fn fmt_float(f: f64) -> String {
    if f.is_nan() {
        "nan".into()
    } else if f.is_infinite() {
        if f > 0.0 { "inf" } else { "-inf" }.into()
    } else if f == f.trunc() && f.abs() < 1e15 {
        format!("{f:.1}")
    } else {
        format!("{f}")
    }
}

fn check_columns(records: &[ExperimentRecord]) -> Result<Vec<String>> {
    let Some(first) = records.first() else {
        return Ok(COLUMNS.iter().map(|c| c.to_string()).collect());
    };
    let header = first.header();
    if let Some(bad) = records.iter().find(|r| r.header() != header) {
        return Err(Error::InvalidParameter(format!(
            "records disagree on reference columns: {:?} vs {:?}",
            &header[COLUMNS.len()..],
            &bad.header()[COLUMNS.len()..]
        )));
    }
    Ok(header)
}

/// CSV text. With `timestamp`, a `# generated <timestamp>` line comes first.
pub fn to_csv(records: &[ExperimentRecord], timestamp: Option<&str>) -> Result<String> {
    let header = check_columns(records)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in records {
        w.write_record(r.cells().iter().map(Cell::csv))?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.into_error()))?)
        .expect("csv is utf-8");
    Ok(match timestamp {
        Some(ts) => format!("# generated {ts}\n{body}"),
        None => body,
    })
}

/// JSON array mirroring the CSV: one object per row, same keys, same order.
pub fn to_json(records: &[ExperimentRecord]) -> Result<String> {
    let header = check_columns(records)?;
    let mut out = String::from("[");
    for (i, r) in records.iter().enumerate() {
        out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
        for (j, (k, c)) in header.iter().zip(r.cells()).enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}: {}", serde_json::Value::from(k.as_str()), c.json());
        }
        out.push('}');
    }
    out.push_str(if records.is_empty() { "]\n" } else { "\n]\n" });
    Ok(out)
}

/// Parses CSV written by [`to_csv`] (leading `#` lines are skipped).
pub fn read_csv(text: &str) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.len() < COLUMNS.len() || header[..COLUMNS.len()] != COLUMNS {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected the columns {} first", COLUMNS.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let bad = |col: &str, v: &str| Error::Parse {
            line,
            msg: format!("bad value {v:?} in column {col}"),
        };
        let get = |c: usize| row.get(c).unwrap_or("");
        let int = |c: usize| -> Result<Option<u128>> {
            let v = get(c);
            if v.is_empty() {
                Ok(None)
            } else {
                v.parse().map(Some).map_err(|_| bad(COLUMNS[c], v))
            }
        };
        let float = |c: usize, name: &str| -> Result<Option<f64>> {
            let v = row.get(c).unwrap_or("");
            if v.is_empty() {
                Ok(None)
            } else {
                v.parse().map(Some).map_err(|_| bad(name, v))
            }
        };
        let need = |c: usize| -> Result<u128> { int(c)?.ok_or_else(|| bad(COLUMNS[c], "")) };
        let narrow = |v: Option<u128>| v.map(|v| v as u64);
        let mut refs = Vec::new();
        for (c, name) in header.iter().enumerate().skip(COLUMNS.len()) {
            refs.push((name.clone(), float(c, name)?.unwrap_or(f64::NAN)));
        }
        out.push(ExperimentRecord {
            kind: get(0).parse()?,
            r: need(1)? as usize,
            n: need(2)? as u32,
            p: float(3, "p")?,
            x: float(4, "x")?,
            t_template: narrow(int(5)?),
            copies: int(6)?.map(|v| v as u32),
            seed: narrow(int(7)?),
            algo: get(8).to_string(),
            edges_host: need(9)? as u64,
            triangles_host: narrow(int(10)?),
            value: need(11)?,
            certified: get(12).parse().map_err(|_| bad("certified", get(12)))?,
            trials: narrow(int(13)?),
            trial_mean: float(14, "trial_mean")?,
            trial_sd: float(15, "trial_sd")?,
            runtime_ms: need(16)? as u64,
            refs,
        });
    }
    Ok(out)
}

/// A gnuplot script plotting `csv_path` for the given experiment kind.
pub fn gnuplot_script(kind: Kind, csv_path: &str) -> String {
    let (xcol, xlabel, logscale) = match kind {
        Kind::GnpSweep | Kind::Concentration => ("p", "p", "set logscale xy"),
        Kind::ExponentFit | Kind::SteinerProbe => ("n", "n", "set logscale xy"),
        Kind::LowerScaling => ("n", "n (copies x clique size)", "set logscale x"),
        Kind::Census => ("edges_host", "m", "set logscale y"),
    };
    let ycol = if kind == Kind::Census {
        "value"
    } else {
        "trial_mean"
    };
    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script for {} output", kind.as_str());
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnhead left top");
    let _ = writeln!(s, "{logscale}");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ycol}'");
    // aggregate rows have an empty seed column
    let _ = writeln!(
        s,
        "plot '{csv_path}' using (strcol('seed') eq '' ? column('{xcol}') : NaN):(column('{ycol}')) with linespoints title '{ycol}'"
    );
    s
}
