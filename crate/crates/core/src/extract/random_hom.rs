use rand::Rng;
use rayon::prelude::*;

use super::{best_trial, Algorithm, ExtractionParams, ExtractionResult};
use crate::error::{Error, Result};
use crate::hypergraph::{intersection_size, Hypergraph, Vertex};
use crate::seeds;
use crate::template::Template;

fn check(host: &Hypergraph, template: &Template) -> Result<()> {
    if host.r() != template.r {
        return Err(Error::UniformityMismatch {
            left: host.r(),
            right: template.r,
        });
    }
    if !template.verified {
        return Err(Error::UnverifiedTemplate {
            edges: template.graph.m(),
            cap: crate::template::DEFAULT_VERIFY_CAP,
        });
    }
    Ok(())
}

/// Draws a uniform map from host vertices to template vertices.
pub(crate) fn random_map(n: u32, template: &Template, rng: &mut impl Rng) -> Vec<Vertex> {
    let size = template.vertex_count() as u32;
    (0..n).map(|_| rng.gen_range(0..size)).collect()
}

/// Sorted image of `e`, or `None` unless it is an edge of the template.
pub(crate) fn image_edge(
    e: &[Vertex],
    chi: &[Vertex],
    template: &Template,
    buf: &mut Vec<Vertex>,
) -> bool {
    buf.clear();
    buf.extend(e.iter().map(|&v| chi[v as usize]));
    buf.sort_unstable();
    if buf.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    // template edges meet every part exactly once
    if buf
        .iter()
        .enumerate()
        .any(|(i, &x)| template.part_of(x) != i)
    {
        return false;
    }
    template.graph.edge_index(buf).is_some()
}

/// One trial: the host edges kept under the map drawn for `(seed, trial)`.
///
/// An edge `e` is kept iff its image is a template edge and no host edge
/// meeting `e` in exactly one vertex maps entirely inside the image of `e`.
pub fn random_hom_trial(
    host: &Hypergraph,
    template: &Template,
    seed: u64,
    trial: u64,
) -> Vec<usize> {
    let mut rng = seeds::trial_rng(seed, trial);
    let chi = random_map(host.n(), template, &mut rng);
    let mut buf = Vec::with_capacity(host.r());
    let mut kept = Vec::new();
    for (i, e) in host.edges().enumerate() {
        if !image_edge(e, &chi, template, &mut buf) {
            continue;
        }
        let blocked = e.iter().any(|&v| {
            host.incident(v).iter().any(|&j| {
                let f = host.edge(j as usize);
                j as usize != i
                    && intersection_size(e, f) == 1
                    && f.iter()
                        .all(|&u| buf.binary_search(&chi[u as usize]).is_ok())
            })
        });
        if !blocked {
            kept.push(i);
        }
    }
    kept
}

/// Best of `trials` independent random-homomorphism trials.
pub fn random_hom_extract(
    host: &Hypergraph,
    template: &Template,
    trials: u64,
    seed: u64,
) -> Result<ExtractionResult> {
    check(host, template)?;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let runs: Vec<Vec<usize>> = (0..trials)
        .into_par_iter()
        .map(|i| random_hom_trial(host, template, seed, i))
        .collect();
    let values: Vec<usize> = runs.iter().map(Vec::len).collect();
    let params = ExtractionParams {
        t: Some(template.t),
        trials: Some(trials),
        seed: Some(seed),
        template_digest: Some(template.graph.digest()),
        budget: None,
    };
    ExtractionResult::certify(
        host,
        Algorithm::RandomHom,
        params,
        best_trial(runs),
        &values,
    )
}
