//! Brute-force oracles. Deliberately naive: nothing here uses the crate's
//! indices, enumerators or verifiers, only plain edge lists.

#![allow(dead_code)]

use std::collections::HashSet;

use loosetri::Hypergraph;

pub fn edge_list(g: &Hypergraph) -> Vec<Vec<u32>> {
    g.edges().map(<[u32]>::to_vec).collect()
}

fn meet(a: &[u32], b: &[u32]) -> usize {
    a.iter().filter(|v| b.contains(v)).count()
}

fn is_loose(a: &[u32], b: &[u32], c: &[u32]) -> bool {
    meet(a, b) == 1
        && meet(b, c) == 1
        && meet(a, c) == 1
        && !a.iter().any(|v| b.contains(v) && c.contains(v))
}

/// All loose triangles as sorted index triples, by checking every triple.
pub fn triangles(edges: &[Vec<u32>]) -> Vec<[usize; 3]> {
    let m = edges.len();
    let mut out = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if meet(&edges[a], &edges[b]) != 1 {
                continue;
            }
            for c in b + 1..m {
                if is_loose(&edges[a], &edges[b], &edges[c]) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn is_tfree(edges: &[Vec<u32>]) -> bool {
    let m = edges.len();
    for a in 0..m {
        for b in a + 1..m {
            if meet(&edges[a], &edges[b]) != 1 {
                continue;
            }
            for c in b + 1..m {
                if is_loose(&edges[a], &edges[b], &edges[c]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_linear(edges: &[Vec<u32>]) -> bool {
    let mut pairs = HashSet::new();
    for e in edges {
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                if !pairs.insert((e[i].min(e[j]), e[i].max(e[j]))) {
                    return false;
                }
            }
        }
    }
    true
}

/// Kept edges of `host` listed by index, checked as a plain edge list.
pub fn kept_is_tfree(host: &Hypergraph, kept: &[usize]) -> bool {
    let all = edge_list(host);
    let sub: Vec<Vec<u32>> = kept.iter().map(|&i| all[i].clone()).collect();
    kept.windows(2).all(|w| w[0] < w[1]) && is_tfree(&sub)
}

/// Largest triangle-free edge subset, by trying all `2^m` subsets.
pub fn max_tfree(edges: &[Vec<u32>]) -> usize {
    let m = edges.len();
    assert!(m <= 24, "brute force over 2^{m} subsets");
    let masks: Vec<u32> = triangles(edges)
        .iter()
        .map(|t| t.iter().fold(0u32, |acc, &e| acc | 1 << e))
        .collect();
    (0u32..1 << m)
        .filter(|s| masks.iter().all(|t| s & t != *t))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

/// Any `x < y < z` with `x + z = 2y` (in Z, or mod `t`).
pub fn has_3ap(set: &[u64], modulus: Option<u64>) -> bool {
    let members: HashSet<u64> = set.iter().copied().collect();
    for &x in set {
        for &z in set {
            if x == z {
                continue;
            }
            match modulus {
                None => {
                    if (x + z) % 2 == 0 && members.contains(&((x + z) / 2)) {
                        let y = (x + z) / 2;
                        if y != x && y != z {
                            return true;
                        }
                    }
                }
                Some(t) => {
                    for &y in set {
                        if y != x && y != z && (x + z) % t == (2 * y) % t {
                            return true;
                        }
                    }
                }
            }
        }
    }
    false
}

/// Number of `m`-edge triangle-free subsets of the complete 3-graph on `n`
/// vertices, by filtering every subset.
pub fn census(n: u32, m: usize) -> u64 {
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push(vec![a, b, c]);
            }
        }
    }
    let mut count = 0;
    let mut pick: Vec<usize> = (0..m).collect();
    let total = triples.len();
    if m > total {
        return 0;
    }
    loop {
        let sub: Vec<Vec<u32>> = pick.iter().map(|&i| triples[i].clone()).collect();
        if is_tfree(&sub) {
            count += 1;
        }
        // next combination
        let mut i = m;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            if pick[i] < total - m + i {
                break;
            }
            if i == 0 {
                return count;
            }
        }
        pick[i] += 1;
        for j in i + 1..m {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
