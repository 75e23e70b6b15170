use crate::config::ProjectedConfig;

use super::{Component, Hypergraph};

/// Reusable DFS state for pruned-component discovery.
///
/// Marks are epoch-stamped so a round (`begin`) costs O(1) instead of
/// clearing per-vertex arrays. Within one round, vertices and edges already
/// claimed by an earlier component are skipped.
pub(crate) struct ComponentSearch {
    vertex_mark: Vec<u32>,
    edge_mark: Vec<u32>,
    epoch: u32,
    stack: Vec<usize>,
}

impl ComponentSearch {
    pub(crate) fn new(h: &Hypergraph) -> Self {
        Self {
            vertex_mark: vec![0; h.n()],
            edge_mark: vec![0; h.num_edges()],
            epoch: 0,
            stack: Vec::new(),
        }
    }

    pub(crate) fn begin(&mut self) {
        if self.epoch == u32::MAX {
            self.vertex_mark.fill(0);
            self.edge_mark.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
    }

    #[inline]
    pub(crate) fn is_visited(&self, v: usize) -> bool {
        self.vertex_mark[v] == self.epoch
    }

    /// Fills `out` with the pruned component of `start`. Returns `false` if
    /// the edge count exceeded `cap`, leaving `out` truncated.
    ///
    /// Visit order: vertices are popped LIFO; each vertex scans its incident
    /// edges in ascending id and pushes unseen edge vertices in ascending id.
    pub(crate) fn component(
        &mut self,
        h: &Hypergraph,
        y: &ProjectedConfig,
        start: usize,
        cap: usize,
        out: &mut Component,
    ) -> bool {
        let epoch = self.epoch;
        out.vertices.clear();
        out.edges.clear();
        out.cap_exceeded = false;

        self.vertex_mark[start] = epoch;
        out.vertices.push(start);
        self.stack.clear();
        self.stack.push(start);

        'dfs: while let Some(u) = self.stack.pop() {
            for &e in h.incident(u) {
                if self.edge_mark[e] == epoch {
                    continue;
                }
                self.edge_mark[e] = epoch;
                if h.satisfied_by(e, y) {
                    continue;
                }
                out.edges.push(e);
                if out.edges.len() > cap {
                    out.cap_exceeded = true;
                    break 'dfs;
                }
                for &w in h.edge(e) {
                    if self.vertex_mark[w] != epoch {
                        self.vertex_mark[w] = epoch;
                        out.vertices.push(w);
                        self.stack.push(w);
                    }
                }
            }
        }
        out.vertices.sort_unstable();
        out.edges.sort_unstable();
        !out.cap_exceeded
    }
}
