use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::random_hom::{image_edge, random_map};
use super::{best_trial, Algorithm, ExtractionParams, ExtractionResult};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, LooseTriangle};
use crate::seeds;
use crate::template::Template;

/// Greedy hitting set for the triangles of `graph`: repeatedly deletes the
/// edge lying in the most surviving triangles (lowest index on ties).
/// Returns the kept edge indices of `graph`.
pub fn greedy_deletion(m: usize, triangles: &[LooseTriangle]) -> Vec<usize> {
    let mut by_edge: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (t, tri) in triangles.iter().enumerate() {
        for &e in &tri.edges {
            by_edge[e as usize].push(t as u32);
        }
    }
    let mut load: Vec<usize> = by_edge.iter().map(Vec::len).collect();
    let mut alive = vec![true; triangles.len()];
    let mut deleted = vec![false; m];
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = load
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0)
        .map(|(e, &l)| (l, Reverse(e)))
        .collect();
    while let Some((l, Reverse(e))) = heap.pop() {
        if deleted[e] || l != load[e] || l == 0 {
            continue;
        }
        deleted[e] = true;
        for &t in &by_edge[e] {
            let t = t as usize;
            if !alive[t] {
                continue;
            }
            alive[t] = false;
            for &f in &triangles[t].edges {
                let f = f as usize;
                if f != e {
                    load[f] -= 1;
                    if load[f] > 0 {
                        heap.push((load[f], Reverse(f)));
                    }
                }
            }
        }
        load[e] = 0;
    }
    (0..m).filter(|&e| !deleted[e]).collect()
}

/// Greedy deletion on a sub-hypergraph given by strictly increasing host
/// indices `edges`; returns kept host indices.
fn delete_on(host: &Hypergraph, edges: &[usize], cap: Option<u64>) -> Result<Vec<usize>> {
    let sub = host.subgraph(edges);
    let triangles = sub.loose_triangles_within(cap)?;
    Ok(greedy_deletion(sub.m(), &triangles)
        .into_iter()
        .map(|i| edges[i])
        .collect())
}

/// Greedy deletion applied to the whole host.
pub fn pure_deletion(host: &Hypergraph, cap: Option<u64>) -> Result<ExtractionResult> {
    let all: Vec<usize> = (0..host.m()).collect();
    let kept = delete_on(host, &all, cap)?;
    ExtractionResult::certify(
        host,
        Algorithm::PureDeletion,
        ExtractionParams::default(),
        kept,
        &[],
    )
}

/// Keeps host edges whose image under a random map is a template edge,
/// then deletes greedily until no loose triangle remains; best of `trials`.
/// With no template this is [`pure_deletion`].
pub fn deletion_extract(
    host: &Hypergraph,
    template: Option<&Template>,
    trials: u64,
    seed: u64,
    cap: Option<u64>,
) -> Result<ExtractionResult> {
    let Some(template) = template else {
        return pure_deletion(host, cap);
    };
    if host.r() != template.r {
        return Err(Error::UniformityMismatch {
            left: host.r(),
            right: template.r,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let runs: Vec<Vec<usize>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = seeds::trial_rng(seed, i);
            let chi = random_map(host.n(), template, &mut rng);
            let mut buf = Vec::with_capacity(host.r());
            let survivors: Vec<usize> = host
                .edges()
                .enumerate()
                .filter(|(_, e)| image_edge(e, &chi, template, &mut buf))
                .map(|(i, _)| i)
                .collect();
            delete_on(host, &survivors, cap)
        })
        .collect::<Result<_>>()?;
    let values: Vec<usize> = runs.iter().map(Vec::len).collect();
    let params = ExtractionParams {
        t: Some(template.t),
        trials: Some(trials),
        seed: Some(seed),
        template_digest: Some(template.graph.digest()),
        budget: None,
    };
    ExtractionResult::certify(host, Algorithm::Deletion, params, best_trial(runs), &values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts;
    use crate::template::template_for;

    #[test]
    fn tfree_host_is_kept_whole() {
        let s = hosts::star(10, 3).unwrap();
        let res = deletion_extract(&s, None, 1, 0, None).unwrap();
        assert_eq!(res.value, s.m());
        assert_eq!(res.algorithm, Algorithm::PureDeletion);
    }

    #[test]
    fn pure_deletion_floor() {
        for seed in 0..10 {
            let g = hosts::gnp(12, 3, 0.25, seed).unwrap();
            let r = g.count_loose_triangles() as i64;
            let res = pure_deletion(&g, None).unwrap();
            assert!(res.value as i64 >= g.m() as i64 - r);
        }
        let k6 = hosts::complete(6, 3).unwrap();
        let res = pure_deletion(&k6, None).unwrap();
        assert!(res.value >= 1 && res.value <= 20);
    }

    #[test]
    fn greedy_prefers_heaviest_edge() {
        // triangles {0,1,2} and {0,3,4}: deleting edge 0 clears both
        let tri = |a, b, c| LooseTriangle {
            edges: [a, b, c],
            links: [0, 0, 0],
        };
        let kept = greedy_deletion(5, &[tri(0, 1, 2), tri(0, 3, 4)]);
        assert_eq!(kept, vec![1, 2, 3, 4]);
        // tie: lowest index goes first
        assert_eq!(greedy_deletion(3, &[tri(0, 1, 2)]), vec![1, 2]);
    }

    #[test]
    fn templated_deletion_is_certified_and_deterministic() {
        let g = hosts::gnp(18, 3, 0.3, 2).unwrap();
        let tpl = template_for(5, 3).unwrap();
        let a = deletion_extract(&g, Some(&tpl), 8, 3, None).unwrap();
        let b = deletion_extract(&g, Some(&tpl), 8, 3, None).unwrap();
        assert_eq!(a, b);
        assert!(a.certified);
    }

    #[test]
    fn cap_is_propagated() {
        let k7 = hosts::complete(7, 3).unwrap();
        assert!(matches!(
            pure_deletion(&k7, Some(10)),
            Err(Error::TriangleCapExceeded { .. })
        ));
    }
}
