mod common;

use proptest::collection::{btree_set, vec};
use proptest::prelude::*;

use loosetri::apfree::{verify_no_3ap, Ambient};
use loosetri::extract::{self, exact_max_tfree, star_extract, DEFAULT_BUDGET};
use loosetri::template::template_for;
use loosetri::{hosts, Hypergraph, HypergraphFile};

/// Arbitrary r-graph on at most `max_n` vertices with at most `max_m` edges.
fn hypergraph(r: usize, max_n: u32, max_m: usize) -> impl Strategy<Value = Hypergraph> {
    (r as u32..=max_n).prop_flat_map(move |n| {
        vec(btree_set(0..n, r), 0..=max_m)
            .prop_map(move |edges| Hypergraph::build(n, r, edges.into_iter().map(Vec::from_iter)))
            .prop_filter_map("duplicate edges", |g| g.ok())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn triangle_count_matches_oracle(g in hypergraph(3, 9, 25)) {
        let naive = common::triangles(&common::edge_list(&g));
        prop_assert_eq!(g.count_loose_triangles(), naive.len() as u64);
        prop_assert_eq!(g.is_tfree(), naive.is_empty());
    }

    #[test]
    fn four_uniform_count_matches_oracle(g in hypergraph(4, 10, 25)) {
        let naive = common::triangles(&common::edge_list(&g));
        prop_assert_eq!(g.count_loose_triangles(), naive.len() as u64);
    }

    #[test]
    fn text_format_round_trips(g in hypergraph(3, 12, 30)) {
        let text = HypergraphFile::new(g.clone()).to_text();
        let back = HypergraphFile::parse(&text).unwrap();
        prop_assert_eq!(back.graph, g);
    }

    #[test]
    fn deterministic_extractors_are_sound(g in hypergraph(3, 9, 20)) {
        let edges = common::edge_list(&g);
        let naive_r = common::triangles(&edges).len();
        let star = star_extract(&g).unwrap();
        let floor = extract::pure_deletion(&g, None).unwrap();
        prop_assert!(common::kept_is_tfree(&g, &star.kept_edges));
        prop_assert!(common::kept_is_tfree(&g, &floor.kept_edges));
        prop_assert_eq!(star.value, g.max_degree());
        prop_assert!(floor.value >= g.m().saturating_sub(naive_r));
    }

    #[test]
    fn exact_is_optimal(g in hypergraph(3, 7, 14)) {
        let res = exact_max_tfree(&g, DEFAULT_BUDGET).unwrap();
        prop_assert!(common::kept_is_tfree(&g, &res.kept_edges));
        prop_assert_eq!(res.value, common::max_tfree(&common::edge_list(&g)));
    }

    #[test]
    fn union_adds_triangles(a in hypergraph(3, 7, 12), b in hypergraph(3, 7, 12)) {
        let u = a.disjoint_union(&b).unwrap();
        prop_assert_eq!(u.m(), a.m() + b.m());
        prop_assert_eq!(
            u.count_loose_triangles(),
            a.count_loose_triangles() + b.count_loose_triangles()
        );
    }

    #[test]
    fn random_hom_is_seeded_and_sound(g in hypergraph(3, 10, 25), seed in 0u64..1000) {
        let tpl = template_for(extract::default_t(3, g.max_degree() as u64), 3).unwrap();
        let a = extract::random_hom_extract(&g, &tpl, 3, seed).unwrap();
        let b = extract::random_hom_extract(&g, &tpl, 3, seed).unwrap();
        prop_assert!(common::kept_is_tfree(&g, &a.kept_edges));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gnp_is_seeded(n in 4u32..14, p in 0.0f64..1.0, seed in any::<u64>()) {
        prop_assert_eq!(hosts::gnp(n, 3, p, seed).unwrap(), hosts::gnp(n, 3, p, seed).unwrap());
    }

    #[test]
    fn apfree_verifier_matches_oracle(set in btree_set(0u64..40, 0..8), t in 41u64..60) {
        let s: Vec<u64> = set.into_iter().collect();
        prop_assert_eq!(verify_no_3ap(&s, Ambient::Interval(40)), !common::has_3ap(&s, None));
        prop_assert_eq!(verify_no_3ap(&s, Ambient::Cyclic(t)), !common::has_3ap(&s, Some(t)));
    }
}

#[test]
fn steiner_hosts_are_partial_packings() {
    for seed in 0..5 {
        let g = hosts::partial_steiner(11, 4, seed).unwrap();
        let edges = common::edge_list(&g);
        for (i, e) in edges.iter().enumerate() {
            for f in &edges[i + 1..] {
                let shared = e.iter().filter(|v| f.contains(v)).count();
                assert!(shared <= 2, "two edges share a triple");
            }
        }
    }
}
