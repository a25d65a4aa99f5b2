//! Loose-triangle-free subgraph extraction.
//!
//! Every extractor returns an [`ExtractionResult`] whose kept edges have been
//! re-checked by triangle enumeration; a failed re-check is an error, never
//! a result with `certified = false`.

mod conflict;
mod deletion;
mod exact;
mod random_hom;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub use conflict::{conflict_hypergraph, ConflictHypergraph};
pub use deletion::{deletion_extract, greedy_deletion, pure_deletion};
pub use exact::{exact_max_tfree, exact_search, ExactOutcome, DEFAULT_BUDGET};
pub use random_hom::{random_hom_extract, random_hom_trial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    RandomHom,
    Deletion,
    Star,
    PureDeletion,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::RandomHom,
        Algorithm::Deletion,
        Algorithm::Star,
        Algorithm::PureDeletion,
        Algorithm::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::RandomHom => "random_hom",
            Algorithm::Deletion => "deletion",
            Algorithm::Star => "star",
            Algorithm::PureDeletion => "pure_deletion",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown algorithm {s:?} (expected one of random_hom, deletion, star, pure_deletion, exact)"
                ))
            })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtractionParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub template_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtractionResult {
    pub host_digest: String,
    pub algorithm: Algorithm,
    pub params: ExtractionParams,
    /// Ascending host edge indices.
    pub kept_edges: Vec<usize>,
    pub certified: bool,
    pub value: usize,
    /// Mean kept-edge count over trials (equals `value` for deterministic
    /// algorithms).
    pub trial_mean: f64,
    /// Sample standard deviation over trials; 0 for a single trial.
    pub trial_sd: f64,
}

impl ExtractionResult {
    /// Re-checks that `kept_edges` spans a loose-triangle-free subgraph of
    /// `host` and packages the result.
    pub(crate) fn certify(
        host: &Hypergraph,
        algorithm: Algorithm,
        params: ExtractionParams,
        kept_edges: Vec<usize>,
        trial_values: &[usize],
    ) -> Result<Self> {
        if !is_valid_subset(host, &kept_edges) {
            return Err(Error::CertificationFailed(format!(
                "{algorithm}: kept edges are not a strictly increasing subset of the host"
            )));
        }
        if !host.subgraph(&kept_edges).is_tfree() {
            return Err(Error::CertificationFailed(format!(
                "{algorithm}: kept subgraph contains a loose triangle"
            )));
        }
        let value = kept_edges.len();
        let (trial_mean, trial_sd) = if trial_values.is_empty() {
            (value as f64, 0.0)
        } else {
            mean_sd(trial_values.iter().map(|&v| v as f64))
        };
        Ok(Self {
            host_digest: host.digest(),
            algorithm,
            params,
            kept_edges,
            certified: true,
            value,
            trial_mean,
            trial_sd,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn is_valid_subset(host: &Hypergraph, kept: &[usize]) -> bool {
    kept.windows(2).all(|w| w[0] < w[1]) && kept.last().is_none_or(|&i| i < host.m())
}

/// Mean and sample standard deviation (0 for fewer than two samples).
pub fn mean_sd(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = values.into_iter().collect();
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Picks the best trial: largest value, then lexicographically smallest
/// kept-edge list. Independent of the order trials finished in.
pub(crate) fn best_trial(trials: Vec<Vec<usize>>) -> Vec<usize> {
    trials
        .into_iter()
        .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)))
        .unwrap_or_default()
}

/// All edges through a maximum-degree vertex (lowest id on ties).
pub fn star_extract(host: &Hypergraph) -> Result<ExtractionResult> {
    let kept = host
        .max_degree_vertex()
        .map(|v| host.incident(v).iter().map(|&i| i as usize).collect())
        .unwrap_or_default();
    ExtractionResult::certify(
        host,
        Algorithm::Star,
        ExtractionParams::default(),
        kept,
        &[],
    )
}

/// `ceil(r * (r * max_deg)^(1/(r-1)))`, computed exactly as the least `t`
/// with `t^(r-1) >= r^r * max_deg`.
pub fn default_t(r: usize, max_deg: u64) -> u64 {
    assert!(r >= 2, "uniformity must be at least 2");
    let target = (r as u128).pow(r as u32) * max_deg.max(1) as u128;
    let guess = (r as f64 * ((r as f64) * max_deg.max(1) as f64).powf(1.0 / (r as f64 - 1.0)))
        .ceil() as u64;
    let fits = |t: u64| {
        (t as u128)
            .checked_pow(r as u32 - 1)
            .is_none_or(|p| p >= target)
    };
    let mut t = guess.saturating_sub(2).max(1);
    while !fits(t) {
        t += 1;
    }
    t
}

/// Template size for deletion on G(n,p): `ceil(p^(2/(2r-3)) * sqrt(n))`,
/// at least 2.
pub fn deletion_t(r: usize, n: u32, p: f64) -> u64 {
    let e = 2.0 / (2.0 * r as f64 - 3.0);
    ((p.powf(e) * (n as f64).sqrt()).ceil() as u64).max(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts;

    #[test]
    fn default_t_examples() {
        assert_eq!(default_t(3, 3), 9);
        assert_eq!(default_t(3, 27), 27);
        assert_eq!(default_t(4, 16), 16);
        assert_eq!(default_t(3, 15), 21);
        for r in 3..6usize {
            for d in 1..200u64 {
                let exact = r as f64 * ((r as f64) * d as f64).powf(1.0 / (r as f64 - 1.0));
                let t = default_t(r, d);
                assert!((t as f64) >= exact - 1e-9 && (t as f64) < exact + 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn deletion_t_floor() {
        assert_eq!(deletion_t(3, 60, 0.001), 2);
        assert_eq!(deletion_t(3, 100, 1.0), 10);
    }

    #[test]
    fn star_examples() {
        let k6 = hosts::complete(6, 3).unwrap();
        let res = star_extract(&k6).unwrap();
        assert_eq!(res.value, 10);
        assert!(res.certified);
        assert_eq!(star_extract(&Hypergraph::empty(5, 3)).unwrap().value, 0);
        assert_eq!(star_extract(&Hypergraph::empty(0, 3)).unwrap().value, 0);
        let s = hosts::star(8, 3).unwrap();
        assert_eq!(star_extract(&s).unwrap().value, 21);
    }

    #[test]
    fn best_trial_reduction() {
        let best = best_trial(vec![vec![3, 4], vec![1, 5], vec![0], vec![1, 2]]);
        assert_eq!(best, vec![1, 2]);
        assert!(best_trial(vec![]).is_empty());
    }

    #[test]
    fn stats() {
        assert_eq!(mean_sd([4.0]), (4.0, 0.0));
        let (m, s) = mean_sd([1.0, 2.0, 3.0]);
        assert!((m - 2.0).abs() < 1e-12 && (s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("bogus".parse::<Algorithm>().is_err());
    }
}
