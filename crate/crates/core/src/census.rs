//! Exact counts of labeled loose-triangle-free 3-graphs on `n` vertices
//! with `m` edges, for tiny `n`.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hosts::{binomial, for_each_combination};
use crate::hypergraph::intersection_size;

/// Default size limits; larger inputs need an explicit `allow_large`.
pub const DEFAULT_MAX_N: u32 = 8;
pub const DEFAULT_MAX_M: usize = 8;
/// Default DFS node limit.
pub const DEFAULT_WORK_LIMIT: u64 = 2_000_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub n: u32,
    pub m: usize,
    #[serde(serialize_with = "ser_big")]
    pub count: BigUint,
    /// `3m * ln(n^2 / m)`, the natural log of `(n^2/m)^(3m)`; 0 for m = 0.
    pub log_bound: f64,
    /// `ln(count) / log_bound`; 0 for m = 0.
    pub ratio: f64,
}

fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub work_limit: u64,
    /// Permits `n > 8` or `m_max > 8`.
    pub allow_large: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            work_limit: DEFAULT_WORK_LIMIT,
            allow_large: false,
        }
    }
}

/// `C(N, k)` as a big integer.
pub fn big_binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Natural log of a big integer (exact enough for reporting).
pub fn ln_big(v: &BigUint) -> f64 {
    match v.to_f64() {
        Some(f) if f.is_finite() => f.ln(),
        _ => {
            let shift = v.bits().saturating_sub(64);
            (v >> shift).to_f64().unwrap_or(f64::MAX).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// Counts T-free edge subsets of each size `0..=m_max`, extending a DFS only
/// with higher-indexed candidates. `edges` fixes the enumeration order.
pub fn count_by_size(edges: &[[u32; 3]], m_max: usize, work_limit: u64) -> Result<Vec<u128>> {
    let nodes = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let mut total = vec![0u128; m_max + 1];
    total[0] = 1;
    if m_max == 0 {
        return Ok(total);
    }
    let parts: Vec<Vec<u128>> = (0..edges.len())
        .into_par_iter()
        .map(|first| {
            let mut counts = vec![0u128; m_max + 1];
            let mut chosen = vec![first];
            dfs(
                edges,
                &mut chosen,
                m_max,
                &mut counts,
                &nodes,
                &abort,
                work_limit,
            );
            counts
        })
        .collect();
    if abort.load(Ordering::Relaxed) {
        return Err(Error::WorkLimitExceeded { limit: work_limit });
    }
    for part in parts {
        for (t, c) in total.iter_mut().zip(part) {
            *t += c;
        }
    }
    Ok(total)
}

/// Whether adding `c` to `chosen` completes a loose triangle.
fn closes_triangle(edges: &[[u32; 3]], chosen: &[usize], c: &[u32; 3]) -> bool {
    for (x, &a) in chosen.iter().enumerate() {
        let ea = &edges[a];
        if intersection_size(ea, c) != 1 {
            continue;
        }
        let u = common(ea, c);
        for &b in &chosen[x + 1..] {
            let eb = &edges[b];
            if intersection_size(eb, c) == 1 && common(eb, c) != u && intersection_size(ea, eb) == 1
            {
                return true;
            }
        }
    }
    false
}

fn common(a: &[u32; 3], b: &[u32; 3]) -> u32 {
    *a.iter().find(|v| b.contains(v)).expect("edges intersect")
}

fn dfs(
    edges: &[[u32; 3]],
    chosen: &mut Vec<usize>,
    m_max: usize,
    counts: &mut [u128],
    nodes: &AtomicU64,
    abort: &AtomicBool,
    limit: u64,
) {
    counts[chosen.len()] += 1;
    if chosen.len() == m_max || abort.load(Ordering::Relaxed) {
        return;
    }
    if nodes.fetch_add(1, Ordering::Relaxed) >= limit {
        abort.store(true, Ordering::Relaxed);
        return;
    }
    let last = *chosen.last().unwrap();
    for c in last + 1..edges.len() {
        if closes_triangle(edges, chosen, &edges[c]) {
            continue;
        }
        if chosen.len() + 1 == m_max {
            counts[m_max] += 1;
            continue;
        }
        chosen.push(c);
        dfs(edges, chosen, m_max, counts, nodes, abort, limit);
        chosen.pop();
    }
}

/// All triples of `0..n` in lexicographic order.
pub fn triples(n: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for_each_combination(n, 3, |c| out.push([c[0], c[1], c[2]]));
    out
}

/// N_3(n, m) for `m = 0..=m_max`.
pub fn count_tfree(n: u32, m_max: usize, opts: &CensusOptions) -> Result<Vec<CensusRow>> {
    if !opts.allow_large && (n > DEFAULT_MAX_N || m_max > DEFAULT_MAX_M) {
        return Err(Error::InvalidParameter(format!(
            "census (n = {n}, m_max = {m_max}) exceeds the default limits n <= {DEFAULT_MAX_N}, \
             m_max <= {DEFAULT_MAX_M}; the DFS visits up to C(C(n,3), m_max) nodes, \
             pass allow_large to run it anyway"
        )));
    }
    let counts = count_by_size(&triples(n), m_max, opts.work_limit)?;
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(m, c)| row(n, m, BigUint::from(c)))
        .collect())
}

fn row(n: u32, m: usize, count: BigUint) -> CensusRow {
    let (log_bound, ratio) = if m == 0 {
        (0.0, 0.0)
    } else {
        let lb = 3.0 * m as f64 * ((n as f64 * n as f64) / m as f64).ln();
        let ratio = if count.is_zero() || lb <= 0.0 {
            f64::NAN
        } else {
            ln_big(&count) / lb
        };
        (lb, ratio)
    };
    CensusRow {
        n,
        m,
        count,
        log_bound,
        ratio,
    }
}

/// Rows checked against the trivial sandwich
/// `C(C(n-1,2), m) <= N_3(n,m) <= C(C(n,3), m)`.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub rows: Vec<CensusRow>,
}

impl CensusReport {
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "m", "count", "log_bound", "ratio"])?;
        for r in &self.rows {
            w.write_record([
                r.n.to_string(),
                r.m.to_string(),
                r.count.to_string(),
                format!("{:.6}", r.log_bound),
                format!("{:.6}", r.ratio),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

/// Checks every row against the trivial bounds. The `(n^2/m)^(3m)` bound is
/// asymptotic and is only reported through `log_bound` and `ratio`.
pub fn compare_bound(rows: &[CensusRow]) -> Result<CensusReport> {
    for r in rows {
        let n = r.n as u64;
        let upper = big_binomial(binomial(n, 3), r.m as u64);
        if r.count > upper {
            return Err(Error::InvalidParameter(format!(
                "N_3({}, {}) = {} exceeds C(C(n,3), m) = {upper}",
                r.n, r.m, r.count
            )));
        }
        let lower = big_binomial(binomial(n.saturating_sub(1), 2), r.m as u64);
        if r.count < lower {
            return Err(Error::InvalidParameter(format!(
                "N_3({}, {}) = {} is below the star count {lower}",
                r.n, r.m, r.count
            )));
        }
    }
    Ok(CensusReport {
        rows: rows.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(n: u32, m_max: usize) -> Vec<u64> {
        count_tfree(n, m_max, &CensusOptions::default())
            .unwrap()
            .iter()
            .map(|r| r.count.to_u64().unwrap())
            .collect()
    }

    #[test]
    fn small_rows() {
        assert_eq!(counts(6, 3), vec![1, 20, 190, 1020]);
        assert_eq!(counts(5, 3), vec![1, 10, 45, 120]);
        assert_eq!(counts(3, 2), vec![1, 1, 0]);
    }

    #[test]
    fn m_zero_row() {
        let rows = count_tfree(7, 0, &CensusOptions::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].count, BigUint::from(1u32));
        assert_eq!(rows[0].ratio, 0.0);
    }

    #[test]
    fn limits() {
        assert!(count_tfree(9, 2, &CensusOptions::default()).is_err());
        let opts = CensusOptions {
            work_limit: 10,
            allow_large: false,
        };
        assert!(matches!(
            count_tfree(6, 4, &opts),
            Err(Error::WorkLimitExceeded { limit: 10 })
        ));
    }

    #[test]
    fn order_independence() {
        let mut edges = triples(6);
        let base = count_by_size(&edges, 4, u64::MAX).unwrap();
        edges.reverse();
        edges.swap(0, 7);
        edges.swap(3, 15);
        assert_eq!(count_by_size(&edges, 4, u64::MAX).unwrap(), base);
    }

    #[test]
    fn report_and_csv() {
        let rows = count_tfree(6, 3, &CensusOptions::default()).unwrap();
        let report = compare_bound(&rows).unwrap();
        let csv = report.to_csv().unwrap();
        assert!(csv.starts_with("n,m,count,log_bound,ratio\n6,0,1,0.000000,0.000000\n"));
        assert!(csv.contains("\n6,3,1020,"));
        let mut bad = rows.clone();
        bad[2].count = BigUint::from(10_000u32);
        assert!(compare_bound(&bad).is_err());
    }

    #[test]
    fn big_helpers() {
        assert_eq!(big_binomial(20, 3), BigUint::from(1140u32));
        assert_eq!(big_binomial(3, 4), BigUint::zero());
        let big = big_binomial(2000, 1000);
        let approx = ln_big(&big);
        assert!((approx - 1382.27).abs() < 0.1, "{approx}");
    }
}
