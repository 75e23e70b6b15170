//! k-uniform hypergraphs, their line graphs, and pruned component search.

mod search;
pub mod text;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::ProjectedConfig;

pub(crate) use search::ComponentSearch;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("edge {edge} has {distinct} distinct vertices, expected {k}")]
    EdgeArity {
        edge: usize,
        distinct: usize,
        k: usize,
    },
    #[error("edge {edge} contains vertex {vertex}, but n = {n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("uniformity k must be at least 1")]
    ZeroUniformity,
}

/// A k-uniform hypergraph on vertices `0..n` with an incidence index.
///
/// Edges are stored as sorted vertex arrays. Use [`Hypergraph::validate`] to
/// construct one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
    max_degree: usize,
    simple: bool,
}

impl Hypergraph {
    /// Checks a raw edge list and builds the incidence index.
    ///
    /// Edges may be given in any vertex order; repeated vertices inside an
    /// edge count once, so `{0, 0, 1}` has arity 2. Non-simple inputs are
    /// accepted and flagged.
    pub fn validate(
        n: usize,
        k: usize,
        raw_edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, HypergraphError> {
        if k == 0 {
            return Err(HypergraphError::ZeroUniformity);
        }
        let mut edges = Vec::new();
        for (idx, mut edge) in raw_edges.into_iter().enumerate() {
            if let Some(&vertex) = edge.iter().find(|&&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange {
                    edge: idx,
                    vertex,
                    n,
                });
            }
            edge.sort_unstable();
            edge.dedup();
            if edge.len() != k {
                return Err(HypergraphError::EdgeArity {
                    edge: idx,
                    distinct: edge.len(),
                    k,
                });
            }
            edges.push(edge);
        }

        let mut incidence = vec![Vec::new(); n];
        for (e, edge) in edges.iter().enumerate() {
            for &v in edge {
                incidence[v].push(e);
            }
        }
        let max_degree = incidence.iter().map(Vec::len).max().unwrap_or(0);
        let simple = is_linear(&edges);
        Ok(Self {
            n,
            k,
            edges,
            incidence,
            max_degree,
            simple,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    /// Edge ids containing `v`, ascending.
    #[inline]
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Maximum degree Δ.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// True iff every two distinct edges share at most one vertex.
    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn line_graph(&self) -> LineGraph {
        LineGraph::new(self)
    }

    /// Whether `e` is satisfied by `y`: two vertices of `e` in the domain of
    /// `y` carry different buckets.
    #[inline]
    pub fn satisfied_by(&self, e: usize, y: &ProjectedConfig) -> bool {
        edge_satisfied_by(&self.edges[e], y)
    }

    /// Whether colouring `colours` (indexed by vertex) leaves edge `e`
    /// non-monochromatic.
    #[inline]
    pub fn edge_proper(&self, e: usize, colours: &[u32]) -> bool {
        let edge = &self.edges[e];
        let first = colours[edge[0]];
        edge[1..].iter().any(|&v| colours[v] != first)
    }

    /// True iff no edge is monochromatic under the full colouring `colours`.
    pub fn is_proper(&self, colours: &[u32]) -> bool {
        (0..self.edges.len()).all(|e| self.edge_proper(e, colours))
    }

    /// Component of `start` in the hypergraph obtained by deleting edges
    /// satisfied by `y`.
    ///
    /// The search stops as soon as more than `cap` edges have been found, in
    /// which case the returned component is truncated and flagged. Pass
    /// `usize::MAX` for an uncapped search.
    pub fn pruned_component(&self, y: &ProjectedConfig, start: usize, cap: usize) -> Component {
        let mut search = ComponentSearch::new(self);
        search.begin();
        let mut out = Component::default();
        search.component(self, y, start, cap, &mut out);
        out
    }

    /// All components of the pruned hypergraph, one per vertex class.
    pub fn pruned_components(&self, y: &ProjectedConfig) -> Vec<Component> {
        let mut search = ComponentSearch::new(self);
        search.begin();
        let mut out = Vec::new();
        for v in 0..self.n {
            if search.is_visited(v) {
                continue;
            }
            let mut comp = Component::default();
            search.component(self, y, v, usize::MAX, &mut comp);
            out.push(comp);
        }
        out
    }
}

/// Satisfaction test on a raw edge.
#[inline]
pub fn edge_satisfied_by(edge: &[usize], y: &ProjectedConfig) -> bool {
    let mut seen: Option<u32> = None;
    for &v in edge {
        if let Some(b) = y.get(v) {
            match seen {
                None => seen = Some(b),
                Some(first) if first != b => return true,
                Some(_) => {}
            }
        }
    }
    false
}

fn is_linear(edges: &[Vec<usize>]) -> bool {
    let mut pairs = HashSet::new();
    for edge in edges {
        for (i, &a) in edge.iter().enumerate() {
            for &b in &edge[i + 1..] {
                if !pairs.insert((a, b)) {
                    return false;
                }
            }
        }
    }
    true
}

/// A connected piece of the pruned hypergraph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Vertex set, ascending.
    pub vertices: Vec<usize>,
    /// Edge ids, ascending.
    pub edges: Vec<usize>,
    /// Set when the search was cut off after exceeding its edge cap.
    pub cap_exceeded: bool,
}

impl Component {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
}

/// Line graph: one node per hyperedge, adjacent when the edges intersect.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineGraph {
    adjacency: Vec<Vec<usize>>,
    max_degree: usize,
}

impl LineGraph {
    pub fn new(h: &Hypergraph) -> Self {
        let mut adjacency = Vec::with_capacity(h.num_edges());
        for (e, edge) in h.edges().iter().enumerate() {
            let mut nbrs: Vec<usize> = edge
                .iter()
                .flat_map(|&v| h.incident(v).iter().copied())
                .filter(|&f| f != e)
                .collect();
            nbrs.sort_unstable();
            nbrs.dedup();
            adjacency.push(nbrs);
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Self {
            adjacency,
            max_degree,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbours(&self, e: usize) -> &[usize] {
        &self.adjacency[e]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Unordered adjacent pairs `(e, f)` with `e < f`.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(e, nbrs)| nbrs.iter().filter(move |&&f| f > e).map(move |&f| (e, f)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, k: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::validate(n, k, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn validate_single_edge() {
        let g = h(3, 3, &[&[0, 1, 2]]);
        assert_eq!(g.max_degree(), 1);
        assert!(g.is_simple());
    }

    #[test]
    fn validate_two_edges_sharing_a_vertex() {
        let g = h(5, 3, &[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.degree(2), 2);
        assert!(g.is_simple());
    }

    #[test]
    fn validate_flags_non_simple() {
        let g = h(4, 3, &[&[0, 1, 2], &[0, 1, 3]]);
        assert!(!g.is_simple());
    }

    #[test]
    fn validate_errors() {
        assert_eq!(
            Hypergraph::validate(4, 3, vec![vec![0, 1, 1]]),
            Err(HypergraphError::EdgeArity {
                edge: 0,
                distinct: 2,
                k: 3
            })
        );
        assert_eq!(
            Hypergraph::validate(3, 3, vec![vec![0, 1, 2], vec![0, 1, 3]]),
            Err(HypergraphError::VertexOutOfRange {
                edge: 1,
                vertex: 3,
                n: 3
            })
        );
        assert!(Hypergraph::validate(3, 0, Vec::<Vec<usize>>::new()).is_err());
    }

    #[test]
    fn edges_are_canonicalised() {
        let g = h(4, 3, &[&[3, 0, 2]]);
        assert_eq!(g.edge(0), &[0, 2, 3]);
        assert_eq!(g.incident(2), &[0]);
    }

    #[test]
    fn line_graph_examples() {
        let g = h(5, 3, &[&[0, 1, 2], &[2, 3, 4]]);
        assert_eq!(g.line_graph().edge_pairs(), vec![(0, 1)]);

        let single = h(3, 3, &[&[0, 1, 2]]);
        assert!(single.line_graph().edge_pairs().is_empty());

        let tri = h(6, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 0]]);
        assert_eq!(tri.line_graph().edge_pairs(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn satisfied_by_examples() {
        let g = h(6, 3, &[&[0, 1, 2]]);
        assert!(g.satisfied_by(0, &ProjectedConfig::from_pairs(6, &[(0, 1), (1, 2)])));
        assert!(!g.satisfied_by(0, &ProjectedConfig::from_pairs(6, &[(0, 1), (1, 1)])));
        assert!(!g.satisfied_by(0, &ProjectedConfig::from_pairs(6, &[(5, 1)])));
    }

    fn path3() -> Hypergraph {
        h(7, 3, &[&[0, 1, 2], &[2, 3, 4], &[4, 5, 6]])
    }

    #[test]
    fn pruned_component_all_satisfied() {
        let g = path3();
        let y = ProjectedConfig::full(vec![1, 2, 1, 2, 1, 2, 1]);
        let c = g.pruned_component(&y, 3, 10);
        assert_eq!(c.vertices, vec![3]);
        assert!(c.edges.is_empty());
        assert!(!c.cap_exceeded);
    }

    #[test]
    fn pruned_component_full_path() {
        let g = path3();
        let c = g.pruned_component(&ProjectedConfig::empty(7), 0, 10);
        assert_eq!(c.edges, vec![0, 1, 2]);
        assert_eq!(c.vertices, (0..7).collect::<Vec<_>>());
        assert!(!c.cap_exceeded);
    }

    #[test]
    fn pruned_component_cap_trips_on_second_edge() {
        let g = path3();
        let c = g.pruned_component(&ProjectedConfig::empty(7), 0, 1);
        assert!(c.cap_exceeded);
        assert_eq!(c.edges.len(), 2);
    }

    #[test]
    fn pruned_component_cap_is_strict() {
        let g = path3();
        let c = g.pruned_component(&ProjectedConfig::empty(7), 0, 3);
        assert!(!c.cap_exceeded);
        let c = g.pruned_component(&ProjectedConfig::empty(7), 0, 2);
        assert!(c.cap_exceeded);
    }
}
