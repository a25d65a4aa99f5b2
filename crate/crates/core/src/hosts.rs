//! Host hypergraph families: random G(n,p), disjoint cliques, stars,
//! complete hypergraphs and greedy partial Steiner packings.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::seeds;

/// Largest candidate pool the packing generator will materialize.
const MAX_STEINER_CANDIDATES: u64 = 20_000_000;

/// Which host family to build, with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum HostSpec {
    Gnp { n: u32, r: usize, p: f64, seed: u64 },
    Cliques { copies: u32, t: u32, r: usize },
    Star { n: u32, r: usize },
    Complete { n: u32, r: usize },
    Steiner { n: u32, r: usize, seed: u64 },
    File { path: std::path::PathBuf },
}

impl HostSpec {
    pub fn build(&self) -> Result<Hypergraph> {
        match *self {
            HostSpec::Gnp { n, r, p, seed } => gnp(n, r, p, seed),
            HostSpec::Cliques { copies, t, r } => disjoint_cliques(copies, t, r),
            HostSpec::Star { n, r } => star(n, r),
            HostSpec::Complete { n, r } => complete(n, r),
            HostSpec::Steiner { n, r, seed } => partial_steiner(n, r, seed),
            HostSpec::File { ref path } => Hypergraph::read_file(path),
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Calls `f` on every r-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: u32, r: usize, mut f: impl FnMut(&[Vertex])) {
    if r as u64 > n as u64 {
        return;
    }
    if r == 0 {
        f(&[]);
        return;
    }
    let mut c: Vec<Vertex> = (0..r as u32).collect();
    loop {
        f(&c);
        // rightmost position that can still advance
        let mut i = r;
        while i > 0 {
            i -= 1;
            if c[i] < n - (r - i) as u32 {
                c[i] += 1;
                for j in i + 1..r {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return;
            }
        }
    }
}

fn check_uniformity(n: u32, r: usize) -> Result<()> {
    if r < 2 || r > n as usize {
        Err(Error::InvalidUniformity { n, r })
    } else {
        Ok(())
    }
}

/// K_n^r.
pub fn complete(n: u32, r: usize) -> Result<Hypergraph> {
    check_uniformity(n, r)?;
    let mut flat = Vec::with_capacity(binomial(n as u64, r as u64) as usize * r);
    for_each_combination(n, r, |c| flat.extend_from_slice(c));
    Ok(Hypergraph::from_sorted_flat(n, r, flat))
}

/// G^r_{n,p}: every r-subset kept independently with probability `p`,
/// candidates visited in lexicographic order with one uniform draw each.
pub fn gnp(n: u32, r: usize, p: f64, seed: u64) -> Result<Hypergraph> {
    check_uniformity(n, r)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} not in [0, 1]")));
    }
    let mut rng = seeds::host_rng(seed);
    let mut flat = Vec::new();
    for_each_combination(n, r, |c| {
        if rng.gen::<f64>() < p {
            flat.extend_from_slice(c);
        }
    });
    Ok(Hypergraph::from_sorted_flat(n, r, flat))
}

/// `copies` vertex-disjoint copies of K_t^r.
pub fn disjoint_cliques(copies: u32, t: u32, r: usize) -> Result<Hypergraph> {
    if (t as usize) < r {
        return Err(Error::InvalidParameter(format!(
            "clique size t = {t} smaller than r = {r}"
        )));
    }
    let clique = complete(t, r)?;
    let mut flat = Vec::with_capacity(clique.m() * r * copies as usize);
    for c in 0..copies {
        for e in clique.edges() {
            flat.extend(e.iter().map(|&v| v + c * t));
        }
    }
    Ok(Hypergraph::from_sorted_flat(copies * t, r, flat))
}

/// S_n^r: every r-set containing vertex 0.
pub fn star(n: u32, r: usize) -> Result<Hypergraph> {
    check_uniformity(n, r)?;
    let mut flat = Vec::new();
    for_each_combination(n - 1, r - 1, |c| {
        flat.push(0);
        flat.extend(c.iter().map(|&v| v + 1));
    });
    Ok(Hypergraph::from_sorted_flat(n, r, flat))
}

/// Greedy random packing in which every 3-set of vertices lies in at most
/// one edge. Candidates are visited in a seed-shuffled order.
pub fn partial_steiner(n: u32, r: usize, seed: u64) -> Result<Hypergraph> {
    if r < 4 || (n as usize) < r {
        return Err(Error::InvalidParameter(format!(
            "partial Steiner packing needs r >= 4 and n >= r (got n = {n}, r = {r})"
        )));
    }
    let pool = binomial(n as u64, r as u64);
    if pool > MAX_STEINER_CANDIDATES {
        return Err(Error::InvalidParameter(format!(
            "C({n}, {r}) = {pool} candidates exceeds {MAX_STEINER_CANDIDATES}"
        )));
    }
    let mut candidates = Vec::with_capacity(pool as usize * r);
    for_each_combination(n, r, |c| candidates.extend_from_slice(c));
    let mut order: Vec<u32> = (0..pool as u32).collect();
    order.shuffle(&mut seeds::steiner_rng(seed));

    let nn = n as usize;
    let mut covered = vec![false; nn * nn * nn];
    let triple = |a: Vertex, b: Vertex, c: Vertex| (a as usize * nn + b as usize) * nn + c as usize;
    let mut accepted: Vec<Vec<Vertex>> = Vec::new();
    for idx in order {
        let e = &candidates[idx as usize * r..(idx as usize + 1) * r];
        let mut free = true;
        'check: for a in 0..r {
            for b in a + 1..r {
                for c in b + 1..r {
                    if covered[triple(e[a], e[b], e[c])] {
                        free = false;
                        break 'check;
                    }
                }
            }
        }
        if free {
            for a in 0..r {
                for b in a + 1..r {
                    for c in b + 1..r {
                        covered[triple(e[a], e[b], e[c])] = true;
                    }
                }
            }
            accepted.push(e.to_vec());
        }
    }
    Hypergraph::build(n, r, accepted)
}
