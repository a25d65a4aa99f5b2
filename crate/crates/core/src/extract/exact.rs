//! Exact maximum loose-triangle-free subgraph by branch and bound.
//!
//! Works on the hitting-set view: every loose triangle must lose at least
//! one edge, and the optimum deletes as few edges as possible. Each node
//! picks an unhit triangle with the fewest free edges `f1..fk` and branches
//! into "delete f1", "keep f1, delete f2", "keep f1, f2, delete f3", so the
//! branches are disjoint. Nodes are pruned when the deletions so far plus a
//! lower bound on the deletions still needed reach the incumbent.

use super::{deletion::greedy_deletion, Algorithm, ExtractionParams, ExtractionResult};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, LooseTriangle};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Free,
    Kept,
    Deleted,
}

/// Outcome of a possibly interrupted search.
#[derive(Clone, Debug)]
pub struct ExactOutcome {
    /// Best subgraph found (certified). Optimal iff `optimal`.
    pub result: ExtractionResult,
    pub optimal: bool,
    /// Proven upper bound on the maximum; equals `result.value` when optimal.
    pub upper_bound: usize,
    pub nodes: u64,
}

struct Search<'a> {
    triangles: &'a [[u32; 3]],
    by_edge: Vec<Vec<u32>>,
    state: Vec<State>,
    /// Deleted edges per triangle.
    hits: Vec<u8>,
    unhit: usize,
    deletions: usize,
    best_deletions: usize,
    best_state: Vec<State>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    mark: Vec<u32>,
    stamp: u32,
}

impl<'a> Search<'a> {
    fn new(m: usize, triangles: &'a [[u32; 3]], budget: u64, incumbent: &[usize]) -> Self {
        let mut by_edge = vec![Vec::new(); m];
        for (t, tri) in triangles.iter().enumerate() {
            for &e in tri {
                by_edge[e as usize].push(t as u32);
            }
        }
        let mut best_state = vec![State::Deleted; m];
        for &e in incumbent {
            best_state[e] = State::Free;
        }
        Self {
            triangles,
            by_edge,
            state: vec![State::Free; m],
            hits: vec![0; triangles.len()],
            unhit: triangles.len(),
            deletions: 0,
            best_deletions: m - incumbent.len(),
            best_state,
            nodes: 0,
            budget,
            exhausted: false,
            mark: vec![0; m],
            stamp: 0,
        }
    }

    fn delete(&mut self, e: usize) {
        self.state[e] = State::Deleted;
        self.deletions += 1;
        for &t in &self.by_edge[e] {
            let h = &mut self.hits[t as usize];
            if *h == 0 {
                self.unhit -= 1;
            }
            *h += 1;
        }
    }

    fn undelete(&mut self, e: usize) {
        self.state[e] = State::Free;
        self.deletions -= 1;
        for &t in &self.by_edge[e] {
            let h = &mut self.hits[t as usize];
            *h -= 1;
            if *h == 0 {
                self.unhit += 1;
            }
        }
    }

    fn free_edges(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        self.triangles[t]
            .iter()
            .map(|&e| e as usize)
            .filter(|&e| self.state[e] == State::Free)
    }

    /// Lower bound on further deletions, or `None` if some unhit triangle has
    /// no free edge left. Also returns the branching triangle.
    fn bound(&mut self) -> Option<(usize, Option<usize>)> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        let mut packing = 0usize;
        let mut pick: Option<(usize, usize)> = None;
        // unhit triangles with fewer free edges are packed first
        for want in 1..=3 {
            for t in 0..self.triangles.len() {
                if self.hits[t] != 0 {
                    continue;
                }
                let free = self.free_edges(t).count();
                if free == 0 {
                    return None;
                }
                if free != want {
                    continue;
                }
                if pick.is_none() {
                    pick = Some((t, free));
                }
                if self.free_edges(t).all(|e| self.mark[e] != self.stamp) {
                    let stamp = self.stamp;
                    for e in self.triangles[t] {
                        if self.state[e as usize] == State::Free {
                            self.mark[e as usize] = stamp;
                        }
                    }
                    packing += 1;
                }
            }
        }
        Some((packing, pick.map(|(t, _)| t)))
    }

    fn run(&mut self) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if self.unhit == 0 {
            if self.deletions < self.best_deletions {
                self.best_deletions = self.deletions;
                self.best_state.clone_from(&self.state);
            }
            return;
        }
        let Some((lower, Some(t))) = self.bound() else {
            return;
        };
        if self.deletions + lower.max(1) >= self.best_deletions {
            return;
        }
        let free: Vec<usize> = self.free_edges(t).collect();
        for &e in &free {
            self.delete(e);
            self.run();
            self.undelete(e);
            if self.exhausted {
                break;
            }
            // later branches keep this edge
            self.state[e] = State::Kept;
        }
        for &e in &free {
            self.state[e] = State::Free;
        }
    }
}

/// Groups triangles into components of the "shares an edge" relation.
/// Components are independent, so their optima add up.
fn components(m: usize, triangles: &[LooseTriangle]) -> Vec<Vec<usize>> {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut parent: Vec<usize> = (0..m).collect();
    for t in triangles {
        let [a, b, c] = t.edges.map(|e| e as usize);
        for (x, y) in [(a, b), (a, c)] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent[rx.max(ry)] = rx.min(ry);
            }
        }
    }
    let mut index = vec![usize::MAX; m];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, t) in triangles.iter().enumerate() {
        let root = find(&mut parent, t.edges[0] as usize);
        if index[root] == usize::MAX {
            index[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[root]].push(i);
    }
    groups
}

/// Runs the branch and bound with a node budget and reports the best
/// subgraph found, whether it is proven optimal, and a proven upper bound.
///
/// Edges in no triangle are kept outright; each triangle component is
/// searched separately, all drawing on the one node budget.
pub fn exact_search(host: &Hypergraph, budget: u64, cap: Option<u64>) -> Result<ExactOutcome> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let m = host.m();
    let triangles: Vec<LooseTriangle> = host.loose_triangles_within(cap)?;

    let mut deleted = vec![false; m];
    let mut local = vec![u32::MAX; m];
    let mut nodes = 0u64;
    let mut optimal = true;
    let mut upper_bound = m;
    for group in components(m, &triangles) {
        let mut edges: Vec<usize> = group
            .iter()
            .flat_map(|&t| triangles[t].edges.map(|e| e as usize))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        for (i, &e) in edges.iter().enumerate() {
            local[e] = i as u32;
        }
        let sub: Vec<LooseTriangle> = group
            .iter()
            .map(|&t| LooseTriangle {
                edges: triangles[t].edges.map(|e| local[e as usize]),
                links: triangles[t].links,
            })
            .collect();
        let tri: Vec<[u32; 3]> = sub.iter().map(|t| t.edges).collect();
        let incumbent = greedy_deletion(edges.len(), &sub);

        let mut search = Search::new(edges.len(), &tri, budget - nodes, &incumbent);
        let root_lower = search.bound().map_or(0, |(lb, _)| lb);
        search.run();
        nodes += search.nodes.min(budget - nodes);
        for (i, &e) in edges.iter().enumerate() {
            deleted[e] = search.best_state[i] == State::Deleted;
        }
        if search.exhausted {
            optimal = false;
            upper_bound -= root_lower;
        } else {
            upper_bound -= search.best_deletions;
        }
    }

    let kept: Vec<usize> = (0..m).filter(|&e| !deleted[e]).collect();
    let params = ExtractionParams {
        budget: Some(budget),
        ..ExtractionParams::default()
    };
    let result = ExtractionResult::certify(host, Algorithm::Exact, params, kept, &[])?;
    Ok(ExactOutcome {
        result,
        optimal,
        upper_bound,
        nodes,
    })
}

/// Maximum loose-triangle-free subgraph, or [`Error::BudgetExhausted`] with
/// the best-known bound pair when the node budget runs out.
pub fn exact_max_tfree(host: &Hypergraph, budget: u64) -> Result<ExtractionResult> {
    let out = exact_search(host, budget, None)?;
    if out.optimal {
        Ok(out.result)
    } else {
        Err(Error::BudgetExhausted {
            budget,
            best_kept: out.result.value,
            upper_bound: out.upper_bound,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts;

    /// Brute force over all edge subsets, largest first.
    fn naive_max(g: &Hypergraph) -> usize {
        let m = g.m();
        assert!(m <= 20);
        let tri: Vec<u32> = g
            .loose_triangles(None)
            .triangles
            .iter()
            .map(|t| t.edges.iter().fold(0u32, |acc, &e| acc | 1 << e))
            .collect();
        (0u32..(1 << m))
            .filter(|mask| tri.iter().all(|t| mask & t != *t))
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn small_cliques() {
        let k5 = hosts::complete(5, 3).unwrap();
        assert_eq!(exact_max_tfree(&k5, DEFAULT_BUDGET).unwrap().value, 10);
        let k6 = hosts::complete(6, 3).unwrap();
        let v6 = exact_max_tfree(&k6, DEFAULT_BUDGET).unwrap().value;
        assert_eq!(v6, naive_max(&k6));
        assert!(v6 >= 10);
    }

    #[test]
    fn random_instances_match_brute_force() {
        for seed in 0..30 {
            let g = hosts::gnp(7, 3, 0.4, seed).unwrap();
            if g.m() > 16 {
                continue;
            }
            let got = exact_max_tfree(&g, DEFAULT_BUDGET).unwrap();
            assert_eq!(got.value, naive_max(&g), "seed {seed}");
            assert!(got.certified);
        }
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        let k7 = hosts::complete(7, 3).unwrap();
        match exact_max_tfree(&k7, 3) {
            Err(Error::BudgetExhausted {
                best_kept,
                upper_bound,
                ..
            }) => assert!(best_kept <= upper_bound && upper_bound <= 35),
            other => panic!("expected exhaustion, got {other:?}"),
        }
        let out = exact_search(&k7, 3, None).unwrap();
        assert!(!out.optimal);
        assert!(out.result.certified);
        assert!(exact_search(&k7, 0, None).is_err());
    }

    #[test]
    fn tfree_host_is_its_own_optimum() {
        let s = hosts::star(9, 4).unwrap();
        let out = exact_search(&s, 10, None).unwrap();
        assert!(out.optimal);
        assert_eq!(out.result.value, s.m());
    }

    #[test]
    fn components_are_solved_separately() {
        let k7 = hosts::complete(7, 3).unwrap();
        let single = exact_search(&k7, DEFAULT_BUDGET, None).unwrap();
        let three = hosts::disjoint_cliques(3, 7, 3).unwrap();
        let out = exact_search(&three, DEFAULT_BUDGET, None).unwrap();
        assert!(out.optimal);
        assert_eq!(out.result.value, 3 * single.result.value);
        assert_eq!(out.nodes, 3 * single.nodes);
        // a budget that covers one clique but not three
        let out = exact_search(&three, single.nodes + 1, None).unwrap();
        assert!(!out.optimal);
        assert!(out.result.certified);
        assert!(out.result.value <= out.upper_bound);
        assert!(out.upper_bound >= 3 * single.result.value);
    }
}
