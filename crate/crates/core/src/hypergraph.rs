//! Canonical r-uniform hypergraphs and loose-triangle enumeration.
//!
//! Vertices are `0..n`. Edges are strictly increasing r-tuples stored in
//! lexicographic order; the position of an edge in that order is its index
//! everywhere else in the crate (extraction results, files, census).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Default cap on the number of loose triangles materialized by
/// [`Hypergraph::loose_triangles`].
pub const DEFAULT_TRIANGLE_CAP: u64 = 100_000_000;

/// Outer edges processed per parallel block while enumerating with a cap.
const ENUM_BLOCK: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: u32,
    r: usize,
    edges: Vec<Vertex>,
    incidence: Vec<Vec<u32>>,
    pair_index: HashMap<(Vertex, Vertex), Vec<u32>>,
}

/// Three edges pairwise meeting in exactly one vertex, with no common vertex.
///
/// `edges` is sorted; `links` are `[x_ij, x_jk, x_ik]` for `edges = [i, j, k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LooseTriangle {
    pub edges: [u32; 3],
    pub links: [Vertex; 3],
}

#[derive(Clone, Debug, Default)]
pub struct TriangleScan {
    pub triangles: Vec<LooseTriangle>,
    /// Set when the cap stopped the enumeration early.
    pub truncated: bool,
}

impl Hypergraph {
    /// Builds a canonical hypergraph from an edge list. Vertex order inside
    /// an edge is irrelevant; the edge list is sorted lexicographically.
    pub fn build<E>(n: u32, r: usize, edge_list: impl IntoIterator<Item = E>) -> Result<Self>
    where
        E: AsRef<[Vertex]>,
    {
        let mut edges: Vec<Vec<Vertex>> = Vec::new();
        for (index, e) in edge_list.into_iter().enumerate() {
            let e = e.as_ref();
            if e.len() != r {
                return Err(Error::WrongArity {
                    index,
                    expected: r,
                    found: e.len(),
                });
            }
            let mut e = e.to_vec();
            e.sort_unstable();
            if let Some(&vertex) = e.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex, n });
            }
            if let Some(w) = e.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex {
                    index,
                    vertex: w[0],
                });
            }
            edges.push(e);
        }
        if !edges.is_empty() && (r < 2 || r > n as usize) {
            return Err(Error::InvalidUniformity { n, r });
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].clone()));
        }
        Ok(Self::from_sorted_flat(n, r, edges.concat()))
    }

    pub fn empty(n: u32, r: usize) -> Self {
        Self::from_sorted_flat(n, r, Vec::new())
    }

    /// `flat` must already be canonical: valid edges in strictly increasing
    /// lexicographic order.
    pub(crate) fn from_sorted_flat(n: u32, r: usize, flat: Vec<Vertex>) -> Self {
        let m = flat.len().checked_div(r).unwrap_or(0);
        let mut incidence = vec![Vec::new(); n as usize];
        let mut pair_index: HashMap<(Vertex, Vertex), Vec<u32>> = HashMap::new();
        for i in 0..m {
            let e = &flat[i * r..(i + 1) * r];
            for (a, &u) in e.iter().enumerate() {
                incidence[u as usize].push(i as u32);
                for &w in &e[a + 1..] {
                    pair_index.entry((u, w)).or_default().push(i as u32);
                }
            }
        }
        Self {
            n,
            r,
            edges: flat,
            incidence,
            pair_index,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len().checked_div(self.r).unwrap_or(0)
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.edges[i * self.r..(i + 1) * self.r]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        (0..self.m()).map(move |i| self.edge(i))
    }

    /// Edge indices containing `v`, ascending.
    pub fn incident(&self, v: Vertex) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// Edge indices containing both `a` and `b`, ascending.
    pub fn edges_with_pair(&self, a: Vertex, b: Vertex) -> &[u32] {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pair_index.get(&key).map_or(&[], Vec::as_slice)
    }

    /// Index of `e` (any vertex order) in canonical order, if present.
    pub fn edge_index(&self, e: &[Vertex]) -> Option<usize> {
        if e.len() != self.r {
            return None;
        }
        let mut key = e.to_vec();
        key.sort_unstable();
        let (mut lo, mut hi) = (0usize, self.m());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(&key[..]) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.incidence[v as usize].len())
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// A vertex of maximum degree, lowest id on ties. `None` when n = 0.
    pub fn max_degree_vertex(&self) -> Option<Vertex> {
        let mut best: Option<(usize, Vertex)> = None;
        for (v, inc) in self.incidence.iter().enumerate() {
            if best.is_none_or(|(d, _)| inc.len() > d) {
                best = Some((inc.len(), v as Vertex));
            }
        }
        best.map(|(_, v)| v)
    }

    /// Number of edges containing every vertex of `set`.
    pub fn codegree(&self, set: &[Vertex]) -> Result<usize> {
        for &v in set {
            self.check_vertex(v)?;
        }
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        match set.len() {
            0 => Ok(self.m()),
            1 => Ok(self.incidence[set[0] as usize].len()),
            _ => Ok(self
                .edges_with_pair(set[0], set[1])
                .iter()
                .filter(|&&i| is_subset(&set[2..], self.edge(i as usize)))
                .count()),
        }
    }

    /// True iff every pair of vertices lies in at most one edge.
    pub fn is_linear(&self) -> bool {
        self.pair_index.values().all(|edges| edges.len() <= 1)
    }

    /// Vertex ranks by `(degree, id)`. Each triangle is found exactly once,
    /// from its lowest-ranked link, which keeps high-degree hubs (star
    /// centres) from generating quadratically many useless edge pairs.
    fn ranks(&self) -> Vec<u32> {
        let mut order: Vec<Vertex> = (0..self.n).collect();
        order.sort_unstable_by_key(|&v| (self.incidence[v as usize].len(), v));
        let mut rank = vec![0u32; self.n as usize];
        for (r, &v) in order.iter().enumerate() {
            rank[v as usize] = r as u32;
        }
        rank
    }

    /// Calls `f` for every loose triangle whose lowest-ranked link is `v`.
    /// Returning `false` from `f` stops the scan; the return value reports
    /// whether the scan ran to completion.
    fn triangles_at(
        &self,
        v: Vertex,
        rank: &[u32],
        mut f: impl FnMut(LooseTriangle) -> bool,
    ) -> bool {
        let rv = rank[v as usize];
        let above = |x: &Vertex| *x != v && rank[*x as usize] > rv;
        // only edges with another vertex ranked above v can carry such a link
        let at: Vec<usize> = self
            .incident(v)
            .iter()
            .map(|&i| i as usize)
            .filter(|&i| self.edge(i).iter().any(above))
            .collect();
        for (p, &i) in at.iter().enumerate() {
            let ei = self.edge(i);
            for &j in &at[p + 1..] {
                let ej = self.edge(j);
                if intersection_size(ei, ej) != 1 {
                    continue;
                }
                for &x in ei.iter().filter(|x| above(x)) {
                    for &y in ej.iter().filter(|y| above(y)) {
                        for &k in self.edges_with_pair(x, y) {
                            let k = k as usize;
                            let ek = self.edge(k);
                            if intersection_size(ek, ei) != 1 || intersection_size(ek, ej) != 1 {
                                continue;
                            }
                            // i < j always; place k and relabel links
                            let t = if k > j {
                                LooseTriangle {
                                    edges: [i as u32, j as u32, k as u32],
                                    links: [v, y, x],
                                }
                            } else if k > i {
                                LooseTriangle {
                                    edges: [i as u32, k as u32, j as u32],
                                    links: [x, y, v],
                                }
                            } else {
                                LooseTriangle {
                                    edges: [k as u32, i as u32, j as u32],
                                    links: [x, v, y],
                                }
                            };
                            if !f(t) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Enumerates loose triangles, sorted by edge indices. Stops after `cap`
    /// triangles (default [`DEFAULT_TRIANGLE_CAP`]) and flags the result as
    /// truncated; the truncated prefix is deterministic but not sorted.
    pub fn loose_triangles(&self, cap: Option<u64>) -> TriangleScan {
        let cap = cap.unwrap_or(DEFAULT_TRIANGLE_CAP);
        let rank = self.ranks();
        let n = self.n as usize;
        let mut out = TriangleScan::default();
        let mut start = 0;
        while start < n {
            let end = (start + ENUM_BLOCK).min(n);
            let blocks: Vec<Vec<LooseTriangle>> = (start..end)
                .into_par_iter()
                .map(|v| {
                    let mut local = Vec::new();
                    self.triangles_at(v as Vertex, &rank, |t| {
                        local.push(t);
                        (local.len() as u64) <= cap
                    });
                    local
                })
                .collect();
            for block in blocks {
                let room = cap - out.triangles.len() as u64;
                if block.len() as u64 > room {
                    out.triangles.extend_from_slice(&block[..room as usize]);
                    out.truncated = true;
                    return out;
                }
                out.triangles.extend(block);
            }
            start = end;
        }
        out.triangles.par_sort_unstable();
        out
    }

    /// Enumerates all loose triangles, failing when more than `cap` exist.
    pub fn loose_triangles_within(&self, cap: Option<u64>) -> Result<Vec<LooseTriangle>> {
        let scan = self.loose_triangles(cap);
        if scan.truncated {
            Err(Error::TriangleCapExceeded {
                cap: cap.unwrap_or(DEFAULT_TRIANGLE_CAP),
            })
        } else {
            Ok(scan.triangles)
        }
    }

    /// R(G): the number of loose triangles, without materializing them.
    pub fn count_loose_triangles(&self) -> u64 {
        let rank = self.ranks();
        (0..self.n)
            .into_par_iter()
            .map(|v| {
                let mut c = 0u64;
                self.triangles_at(v, &rank, |_| {
                    c += 1;
                    true
                });
                c
            })
            .sum()
    }

    pub fn is_tfree(&self) -> bool {
        let rank = self.ranks();
        (0..self.n)
            .into_par_iter()
            .all(|v| self.triangles_at(v, &rank, |_| false))
    }

    /// Sub-hypergraph on the same vertex set keeping the listed edges.
    /// `kept` must be strictly increasing edge indices; edge `kept[q]` of
    /// `self` becomes edge `q` of the result.
    pub fn subgraph(&self, kept: &[usize]) -> Self {
        debug_assert!(kept.windows(2).all(|w| w[0] < w[1]));
        let mut flat = Vec::with_capacity(kept.len() * self.r);
        for &i in kept {
            flat.extend_from_slice(self.edge(i));
        }
        Self::from_sorted_flat(self.n, self.r, flat)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.r != other.r {
            return Err(Error::UniformityMismatch {
                left: self.r,
                right: other.r,
            });
        }
        let mut flat = self.edges.clone();
        flat.extend(other.edges.iter().map(|&v| v + self.n));
        Ok(Self::from_sorted_flat(self.n + other.n, self.r, flat))
    }
}

/// Size of the intersection of two sorted vertex slices.
pub fn intersection_size(a: &[Vertex], b: &[Vertex]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}
