use crate::error::Result;
use crate::hypergraph::Hypergraph;

/// 3-graph on the host's edge indices whose edges are the host's loose
/// triangles. Independent sets are exactly the loose-triangle-free
/// subgraphs of the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictHypergraph {
    pub graph: Hypergraph,
}

impl ConflictHypergraph {
    pub fn is_independent(&self, edge_indices: &[usize]) -> bool {
        self.graph.subgraph_on_vertices(edge_indices).m() == 0
    }
}

pub fn conflict_hypergraph(host: &Hypergraph, cap: Option<u64>) -> Result<ConflictHypergraph> {
    let triangles = host.loose_triangles_within(cap)?;
    let graph = Hypergraph::build(host.m() as u32, 3, triangles.iter().map(|t| t.edges))?;
    Ok(ConflictHypergraph { graph })
}

impl Hypergraph {
    /// Induced sub-hypergraph on a vertex subset (edges entirely inside it),
    /// keeping the original vertex ids.
    pub fn subgraph_on_vertices(&self, vertices: &[usize]) -> Hypergraph {
        let mut inside = vec![false; self.n() as usize];
        for &v in vertices {
            inside[v] = true;
        }
        let kept: Vec<usize> = (0..self.m())
            .filter(|&i| self.edge(i).iter().all(|&v| inside[v as usize]))
            .collect();
        self.subgraph(&kept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts;

    #[test]
    fn examples() {
        let s = hosts::star(8, 3).unwrap();
        assert_eq!(conflict_hypergraph(&s, None).unwrap().graph.m(), 0);

        let tri = Hypergraph::build(6, 3, [[0, 1, 2], [2, 3, 4], [0, 4, 5]]).unwrap();
        let c = conflict_hypergraph(&tri, None).unwrap();
        assert_eq!((c.graph.n(), c.graph.m()), (3, 1));

        let k6 = hosts::complete(6, 3).unwrap();
        let c = conflict_hypergraph(&k6, None).unwrap();
        assert_eq!((c.graph.n(), c.graph.m()), (20, 120));
        assert!(conflict_hypergraph(&k6, Some(5)).is_err());
    }

    #[test]
    fn independent_sets_are_tfree_subgraphs() {
        let g = hosts::gnp(9, 3, 0.3, 11).unwrap();
        let c = conflict_hypergraph(&g, None).unwrap();
        let m = g.m().min(14);
        for mask in 0u32..(1 << m) {
            let sel: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            assert_eq!(c.is_independent(&sel), g.subgraph(&sel).is_tfree());
        }
    }
}
