//! 2-block-trees: the generator, the validity predicate, block dropping, and
//! the DFS encoding together with exhaustive checkers.
//!
//! A 2-block-tree with block size `θ` in a graph `G` is a family of vertex
//! sets `C_1..C_ℓ` with
//!
//! - (B1) `|C_i| = θ` and `G[C_i]` connected,
//! - (B2) `dist_G(C_i, C_j) ≥ 2` for `i ≠ j`,
//! - (B3) the family connected in `G²`.
//!
//! Everything here works on an arbitrary [`Graph`]; use
//! [`Graph::from_line_graph`] to run it on the line graph of a hypergraph.
//! Exhaustive routines use `u128` vertex masks and so accept graphs with at
//! most 128 vertices.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::LineGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlockTreeError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("enumeration exceeded budget of {0} objects")]
    BudgetExceeded(usize),
    #[error("generator could not continue at round {round}: {reason}")]
    GeneratorStuck { round: usize, reason: String },
}

fn invalid(msg: impl Into<String>) -> BlockTreeError {
    BlockTreeError::InvalidInput(msg.into())
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Self-loops are dropped, parallel edges merged. Panics on out-of-range
    /// endpoints.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { adj }
    }

    pub fn from_line_graph(lg: &LineGraph) -> Self {
        Self {
            adj: lg.adjacency().to_vec(),
        }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::new(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::new(n, &edges)
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Self::new(leaves + 1, &edges)
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::new(n, &edges)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// Whether `G[set]` is connected (the empty set counts as connected).
    pub fn is_connected_subset(&self, set: &[usize]) -> bool {
        self.is_connected_within(set, |v| set.contains(&v))
    }

    fn is_connected_within(&self, set: &[usize], member: impl Fn(usize) -> bool) -> bool {
        let Some(&start) = set.first() else {
            return true;
        };
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if member(w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == set.len()
    }

    /// BFS distance from the nearest vertex of `set`, capped: vertices
    /// farther than `max_depth` get `None`.
    fn distances_from(&self, set: &[usize], max_depth: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for &v in set {
            if dist[v].is_none() {
                dist[v] = Some(0);
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            if d == max_depth {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `Γ^i(set)`: vertices at distance exactly `i` from `set`, ascending.
    pub fn ring(&self, set: &[usize], i: usize) -> Vec<usize> {
        self.distances_from(set, i)
            .into_iter()
            .enumerate()
            .filter_map(|(v, d)| (d == Some(i)).then_some(v))
            .collect()
    }

    /// `dist_G(a, b)`, or `None` if disconnected.
    pub fn set_distance(&self, a: &[usize], b: &[usize]) -> Option<usize> {
        let dist = self.distances_from(a, usize::MAX);
        b.iter().filter_map(|&v| dist[v]).min()
    }

    /// Connected induced subgraphs of size `size` that contain `v`, sorted
    /// lexicographically as ascending vertex lists. Only vertices with
    /// `allowed[u]` are used when a mask is given.
    pub fn connected_sets_containing(
        &self,
        v: usize,
        size: usize,
        allowed: Option<&[bool]>,
        budget: usize,
    ) -> Result<Vec<Vec<usize>>, BlockTreeError> {
        let mut out = Vec::new();
        self.for_each_connected_set(v, size, allowed, &mut |set| {
            if out.len() == budget {
                return false;
            }
            let mut s = set.to_vec();
            s.sort_unstable();
            out.push(s);
            true
        });
        if out.len() == budget && budget != usize::MAX {
            // re-run in counting mode to see whether the budget was hit
            let mut total = 0usize;
            self.for_each_connected_set(v, size, allowed, &mut |_| {
                total += 1;
                total <= budget
            });
            if total > budget {
                return Err(BlockTreeError::BudgetExceeded(budget));
            }
        }
        out.sort();
        Ok(out)
    }

    /// Calls `f` once per connected induced subgraph of size `size`
    /// containing `v`; `f` returns `false` to stop early.
    ///
    /// Include/exclude branching over a growing frontier: every such set is
    /// produced exactly once.
    fn for_each_connected_set(
        &self,
        v: usize,
        size: usize,
        allowed: Option<&[bool]>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) {
        let ok = |u: usize| allowed.is_none_or(|a| a[u]);
        if size == 0 || !ok(v) {
            return;
        }
        let mut blocked = vec![false; self.n()];
        blocked[v] = true;
        let mut frontier = Vec::new();
        for &w in &self.adj[v] {
            if ok(w) {
                blocked[w] = true;
                frontier.push(w);
            }
        }
        let mut current = vec![v];
        self.grow(&mut current, frontier, &mut blocked, size, &ok, f);
    }

    fn grow(
        &self,
        current: &mut Vec<usize>,
        mut frontier: Vec<usize>,
        blocked: &mut [bool],
        size: usize,
        ok: &dyn Fn(usize) -> bool,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if current.len() == size {
            return f(current);
        }
        let Some(w) = frontier.pop() else {
            return true;
        };
        // include w
        let mut added = Vec::new();
        for &x in &self.adj[w] {
            if !blocked[x] && ok(x) {
                blocked[x] = true;
                added.push(x);
            }
        }
        let mut with_w = frontier.clone();
        with_w.extend_from_slice(&added);
        current.push(w);
        let cont = self.grow(current, with_w, blocked, size, ok, f);
        current.pop();
        for &x in &added {
            blocked[x] = false;
        }
        if !cont {
            return false;
        }
        // exclude w (it stays blocked until its owner unwinds)
        self.grow(current, frontier, blocked, size, ok, f)
    }
}

/// Exact number of connected induced size-`size` subgraphs containing `v`.
pub fn count_connected_subgraphs(
    g: &Graph,
    v: usize,
    size: usize,
    budget: u64,
) -> Result<u64, BlockTreeError> {
    if v >= g.n() {
        return Err(invalid(format!("vertex {v} outside graph of {} vertices", g.n())));
    }
    if size == 0 {
        return Err(invalid("subgraph size must be at least 1"));
    }
    let mut count = 0u64;
    let mut over = false;
    g.for_each_connected_set(v, size, None, &mut |_| {
        count += 1;
        if count > budget {
            over = true;
            return false;
        }
        true
    });
    if over {
        return Err(BlockTreeError::BudgetExceeded(budget as usize));
    }
    Ok(count)
}

/// The counting bound `(e·d)^{ℓ-1} / 2` on connected induced subgraphs of
/// size `ℓ` through a vertex, `d` the maximum degree. Stated for `ℓ ≥ 2`;
/// at `ℓ = 1` it is `1/2` while the true count is 1.
pub fn connected_subgraph_bound(max_degree: usize, size: usize) -> f64 {
    (std::f64::consts::E * max_degree as f64).powi(size as i32 - 1) / 2.0
}

/// The bound `(θ e^θ d^{θ+1})^ℓ` on 2-block-trees through a vertex.
pub fn block_tree_count_bound(theta: usize, max_degree: usize, ell: usize) -> f64 {
    let t = theta as f64;
    (t * t.exp() * (max_degree as f64).powi(theta as i32 + 1)).powi(ell as i32)
}

/// Output of the 2-block-tree generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRun {
    /// Blocks `C_1..C_ℓ` in generation order, each ascending.
    pub blocks: Vec<Vec<usize>>,
    /// The vertex `u_i` each block was grown from.
    pub anchors: Vec<usize>,
    /// Working set left at termination (empty on every valid input).
    pub residual: Vec<usize>,
}

impl GeneratorRun {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

fn normalise_set(g: &Graph, set: &[usize], what: &str) -> Result<Vec<usize>, BlockTreeError> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != set.len() {
        return Err(invalid(format!("{what} has repeated vertices")));
    }
    if let Some(&v) = s.iter().find(|&&v| v >= g.n()) {
        return Err(invalid(format!("{what} contains vertex {v} >= n = {}", g.n())));
    }
    Ok(s)
}

/// Runs the 2-block-tree generator on `G[C]` from `u`.
///
/// Each round picks an anchor (`u` first, then the smallest vertex of the
/// working set adjacent to something already removed), takes the
/// lexicographically smallest connected `θ`-set through it inside the working
/// set, deletes that block with its neighbourhood, then deletes every
/// remaining component smaller than `θ`. Distances and neighbourhoods are
/// taken in `G[C]`.
pub fn generate_block_tree(
    g: &Graph,
    u: usize,
    c: &[usize],
    theta: usize,
) -> Result<GeneratorRun, BlockTreeError> {
    if theta == 0 {
        return Err(invalid("theta must be at least 1"));
    }
    let c = normalise_set(g, c, "C")?;
    if c.binary_search(&u).is_err() {
        return Err(invalid(format!("u = {u} is not in C")));
    }
    if c.len() <= theta {
        return Err(invalid(format!("|C| = {} must exceed theta = {theta}", c.len())));
    }
    if !g.is_connected_subset(&c) {
        return Err(invalid("G[C] is not connected"));
    }

    let n = g.n();
    let mut in_c = vec![false; n];
    for &v in &c {
        in_c[v] = true;
    }
    let mut alive = in_c.clone();
    let mut alive_count = c.len();
    let mut blocks = Vec::new();
    let mut anchors = Vec::new();

    while alive_count >= theta {
        let round = blocks.len() + 1;
        let anchor = if round == 1 {
            u
        } else {
            c.iter()
                .copied()
                .find(|&w| alive[w] && g.neighbours(w).iter().any(|&x| in_c[x] && !alive[x]))
                .ok_or_else(|| BlockTreeError::GeneratorStuck {
                    round,
                    reason: "no live vertex borders the removed set".into(),
                })?
        };
        let block = g
            .connected_sets_containing(anchor, theta, Some(&alive), usize::MAX)?
            .into_iter()
            .next()
            .ok_or_else(|| BlockTreeError::GeneratorStuck {
                round,
                reason: format!("no connected {theta}-set through {anchor}"),
            })?;

        for &v in &block {
            for &w in g.neighbours(v) {
                if in_c[w] && alive[w] {
                    alive[w] = false;
                    alive_count -= 1;
                }
            }
        }
        for &v in &block {
            if alive[v] {
                alive[v] = false;
                alive_count -= 1;
            }
        }

        // drop live components smaller than θ
        let live: Vec<usize> = c.iter().copied().filter(|&v| alive[v]).collect();
        let mut seen = vec![false; n];
        for &start in &live {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &w in g.neighbours(x) {
                    if alive[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            if comp.len() < theta {
                for &x in &comp {
                    alive[x] = false;
                }
                alive_count -= comp.len();
            }
        }

        blocks.push(block);
        anchors.push(anchor);
    }

    let residual = c.iter().copied().filter(|&v| alive[v]).collect();
    Ok(GeneratorRun {
        blocks,
        anchors,
        residual,
    })
}

/// Pairwise relations between blocks, assuming each block is valid.
struct BlockRelations {
    /// `dist(C_i, C_j) ≥ 2` for all `i ≠ j`.
    separated: bool,
    /// `adj[i]`: blocks within distance 2 of block `i`.
    adj: Vec<Vec<usize>>,
}

fn block_relations(g: &Graph, blocks: &[Vec<usize>]) -> BlockRelations {
    let mut separated = true;
    let mut adj = vec![Vec::new(); blocks.len()];
    for (i, a) in blocks.iter().enumerate() {
        let dist = g.distances_from(a, 2);
        for (j, b) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = b.iter().filter_map(|&v| dist[v]).min();
            match d {
                Some(0) | Some(1) => separated = false,
                Some(2) => adj[i].push(j),
                _ => {}
            }
        }
    }
    BlockRelations { separated, adj }
}

fn is_connected_graph(adj: &[Vec<usize>]) -> bool {
    if adj.is_empty() {
        return true;
    }
    let mut seen = vec![false; adj.len()];
    seen[0] = true;
    let mut stack = vec![0];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == adj.len()
}

/// Checks (B1), (B2) and (B3) exactly. An empty family is rejected.
pub fn is_block_tree(g: &Graph, blocks: &[Vec<usize>], theta: usize) -> bool {
    if blocks.is_empty() || theta == 0 {
        return false;
    }
    for block in blocks {
        let mut b = block.clone();
        b.sort_unstable();
        b.dedup();
        if b.len() != theta || b.len() != block.len() || b.iter().any(|&v| v >= g.n()) {
            return false;
        }
        if !g.is_connected_subset(&b) {
            return false;
        }
    }
    let rel = block_relations(g, blocks);
    rel.separated && is_connected_graph(&rel.adj)
}

/// Removes one block so that the rest is still a 2-block-tree containing `v`.
///
/// The dropped block is a leaf of a BFS spanning tree of the block graph
/// rooted at the block holding `v`: the last block in BFS order.
pub fn drop_block(
    g: &Graph,
    blocks: &[Vec<usize>],
    v: usize,
) -> Result<Vec<Vec<usize>>, BlockTreeError> {
    if blocks.len() < 2 {
        return Err(invalid("need at least two blocks to drop one"));
    }
    let theta = blocks[0].len();
    if !is_block_tree(g, blocks, theta) {
        return Err(invalid("input is not a 2-block-tree"));
    }
    let root = blocks
        .iter()
        .position(|b| b.contains(&v))
        .ok_or_else(|| invalid(format!("vertex {v} is in no block")))?;
    let rel = block_relations(g, blocks);
    let mut seen = vec![false; blocks.len()];
    seen[root] = true;
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let b = order[i];
        i += 1;
        for &c in &rel.adj[b] {
            if !seen[c] {
                seen[c] = true;
                order.push(c);
            }
        }
    }
    let leaf = *order.last().expect("non-empty");
    debug_assert_ne!(leaf, root);
    Ok(blocks
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != leaf)
        .map(|(_, b)| b.clone())
        .collect())
}

/// One visited node of the encoding tree: its parent (by visit index) and its
/// 1-based child rank under that parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeNode {
    pub parent: Option<usize>,
    pub rank: usize,
}

/// DFS encoding of a 2-block-tree: the shape of the DFS tree inside the
/// infinite `θd²`-ary tree, and for each visited block the index `Ξ_t` of
/// that block among connected `θ`-sets through its entry vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Encoding {
    /// Nodes in visit (preorder) order; node 0 is the root.
    pub tree: Vec<TreeNode>,
    /// `Ξ_1..Ξ_ℓ`, 1-based.
    pub xi: Vec<usize>,
}

impl Encoding {
    pub fn max_rank(&self) -> usize {
        self.tree.iter().map(|n| n.rank).max().unwrap_or(0)
    }

    pub fn max_xi(&self) -> usize {
        self.xi.iter().copied().max().unwrap_or(0)
    }
}

/// Lexicographic indexing of connected `θ`-sets through each vertex,
/// computed on demand.
pub struct AnchoredIndex<'g> {
    g: &'g Graph,
    theta: usize,
    cache: HashMap<usize, Vec<Vec<usize>>>,
}

impl<'g> AnchoredIndex<'g> {
    pub fn new(g: &'g Graph, theta: usize) -> Self {
        Self {
            g,
            theta,
            cache: HashMap::new(),
        }
    }

    fn sets(&mut self, u: usize) -> &[Vec<usize>] {
        let (g, theta) = (self.g, self.theta);
        self.cache.entry(u).or_insert_with(|| {
            g.connected_sets_containing(u, theta, None, usize::MAX)
                .expect("unbounded enumeration")
        })
    }

    /// `Υ_u(C)`: 1-based position of `C` among the sets through `u`.
    pub fn index(&mut self, u: usize, block: &[usize]) -> Option<usize> {
        let mut b = block.to_vec();
        b.sort_unstable();
        self.sets(u).binary_search(&b).ok().map(|i| i + 1)
    }
}

/// Encodes a 2-block-tree containing `v`.
pub fn encode(g: &Graph, v: usize, blocks: &[Vec<usize>]) -> Result<Encoding, BlockTreeError> {
    let theta = blocks.first().map(Vec::len).unwrap_or(0);
    if !is_block_tree(g, blocks, theta) {
        return Err(invalid("input is not a 2-block-tree"));
    }
    let mut index = AnchoredIndex::new(g, theta);
    encode_with(g, v, blocks, &mut index)
}

fn encode_with(
    g: &Graph,
    v: usize,
    blocks: &[Vec<usize>],
    index: &mut AnchoredIndex<'_>,
) -> Result<Encoding, BlockTreeError> {
    let mut owner: HashMap<usize, usize> = HashMap::new();
    for (i, b) in blocks.iter().enumerate() {
        for &x in b {
            owner.insert(x, i);
        }
    }
    let &start = owner
        .get(&v)
        .ok_or_else(|| invalid(format!("vertex {v} is in no block")))?;

    struct Dfs<'a, 'g> {
        g: &'a Graph,
        blocks: &'a [Vec<usize>],
        owner: &'a HashMap<usize, usize>,
        index: &'a mut AnchoredIndex<'g>,
        visited: Vec<bool>,
        enc: Encoding,
    }

    impl Dfs<'_, '_> {
        fn visit(&mut self, i: usize, entry: usize, node: TreeNode) {
            self.visited[i] = true;
            let xi = self
                .index
                .index(entry, &self.blocks[i])
                .expect("block is a connected set through its entry vertex");
            self.enc.xi.push(xi);
            let me = self.enc.tree.len();
            self.enc.tree.push(node);
            let ring = self.g.ring(&self.blocks[i], 2);
            for (pos, &w) in ring.iter().enumerate() {
                let Some(&j) = self.owner.get(&w) else {
                    continue;
                };
                if !self.visited[j] {
                    self.visit(
                        j,
                        w,
                        TreeNode {
                            parent: Some(me),
                            rank: pos + 1,
                        },
                    );
                }
            }
        }
    }

    let mut dfs = Dfs {
        g,
        blocks,
        owner: &owner,
        index,
        visited: vec![false; blocks.len()],
        enc: Encoding {
            tree: Vec::new(),
            xi: Vec::new(),
        },
    };
    dfs.visit(start, v, TreeNode { parent: None, rank: 0 });
    debug_assert!(dfs.visited.iter().all(|&b| b));
    Ok(dfs.enc)
}

fn mask_of(set: &[usize]) -> u128 {
    set.iter().fold(0u128, |m, &v| m | (1u128 << v))
}

/// Every 2-block-tree with block size `theta` and `ell` blocks that contains
/// `v`, each as a lexicographically sorted list of ascending blocks; the list
/// itself is sorted.
pub fn enumerate_block_trees(
    g: &Graph,
    v: usize,
    theta: usize,
    ell: usize,
    budget: usize,
) -> Result<Vec<Vec<Vec<usize>>>, BlockTreeError> {
    let n = g.n();
    if n > 128 {
        return Err(invalid("exhaustive enumeration supports at most 128 vertices"));
    }
    if v >= n || theta == 0 || ell == 0 {
        return Err(invalid("need v < n, theta >= 1, ell >= 1"));
    }

    let mut all: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        for s in g.connected_sets_containing(u, theta, None, usize::MAX)? {
            if s[0] == u {
                all.push(s);
            }
        }
    }
    all.sort();

    let masks: Vec<u128> = all.iter().map(|s| mask_of(s)).collect();
    let nbr_mask: Vec<u128> = (0..n).map(|u| mask_of(g.neighbours(u))).collect();
    let expand = |m: u128| -> u128 {
        let mut out = m;
        let mut rest = m;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= nbr_mask[u];
        }
        out
    };
    let closed: Vec<u128> = masks.iter().map(|&m| expand(m)).collect();
    let ball2: Vec<u128> = closed.iter().map(|&m| expand(m)).collect();

    // block-graph adjacency: separated (dist >= 2) and within distance 2
    let sets = all.len();
    let mut adj = vec![Vec::new(); sets];
    for i in 0..sets {
        for (j, &m) in masks.iter().enumerate() {
            if i != j && m & closed[i] == 0 && m & ball2[i] != 0 {
                adj[i].push(j);
            }
        }
    }

    let mut out = Vec::new();
    let vbit = 1u128 << v;
    for root in (0..sets).filter(|&i| masks[i] & vbit != 0) {
        let mut blocked = vec![false; sets];
        blocked[root] = true;
        let mut frontier = Vec::new();
        for &j in &adj[root] {
            blocked[j] = true;
            frontier.push(j);
        }
        let mut current = vec![root];
        let mut ctx = FamilyCtx {
            adj: &adj,
            masks: &masks,
            closed: &closed,
            ell,
            budget,
            found: Vec::new(),
            over: false,
        };
        ctx.grow(&mut current, closed[root], frontier, &mut blocked);
        if ctx.over {
            return Err(BlockTreeError::BudgetExceeded(budget));
        }
        for fam in ctx.found {
            let mut blocks: Vec<Vec<usize>> = fam.iter().map(|&i| all[i].clone()).collect();
            blocks.sort();
            out.push(blocks);
            if out.len() > budget {
                return Err(BlockTreeError::BudgetExceeded(budget));
            }
        }
    }
    out.sort();
    Ok(out)
}

struct FamilyCtx<'a> {
    adj: &'a [Vec<usize>],
    masks: &'a [u128],
    closed: &'a [u128],
    ell: usize,
    budget: usize,
    found: Vec<Vec<usize>>,
    over: bool,
}

impl FamilyCtx<'_> {
    fn grow(&mut self, current: &mut Vec<usize>, taken: u128, mut frontier: Vec<usize>, blocked: &mut [bool]) {
        if self.over {
            return;
        }
        if current.len() == self.ell {
            self.found.push(current.clone());
            if self.found.len() > self.budget {
                self.over = true;
            }
            return;
        }
        let Some(w) = frontier.pop() else {
            return;
        };
        // include w, if it keeps every pair at distance >= 2
        if self.masks[w] & taken == 0 {
            let mut added = Vec::new();
            for &x in &self.adj[w] {
                if !blocked[x] {
                    blocked[x] = true;
                    added.push(x);
                }
            }
            let mut with_w = frontier.clone();
            with_w.extend_from_slice(&added);
            current.push(w);
            self.grow(current, taken | self.closed[w], with_w, blocked);
            current.pop();
            for &x in &added {
                blocked[x] = false;
            }
        }
        self.grow(current, taken, frontier, blocked);
    }
}

/// A 2-block-tree as its list of blocks.
pub type BlockFamily = Vec<Vec<usize>>;

/// Result of encoding every 2-block-tree of a given shape through a vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InjectivityReport {
    pub vertex: usize,
    pub theta: usize,
    pub ell: usize,
    pub max_degree: usize,
    pub trees: usize,
    pub distinct_encodings: usize,
    /// `(θ e^θ d^{θ+1})^ℓ`.
    pub count_bound: f64,
    pub max_rank: usize,
    /// `θ d²`.
    pub rank_limit: usize,
    pub max_xi: usize,
    /// `⌈(ed)^{θ-1}/2⌉`.
    pub xi_limit: usize,
    /// Up to 5 pairs of distinct trees sharing an encoding.
    pub collisions: Vec<(BlockFamily, BlockFamily)>,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.distinct_encodings == self.trees
    }

    pub fn within_count_bound(&self) -> bool {
        self.trees as f64 <= self.count_bound
    }

    pub fn passed(&self) -> bool {
        self.injective()
            && self.within_count_bound()
            && (self.trees == 0 || (self.max_rank <= self.rank_limit && self.max_xi <= self.xi_limit))
    }
}

/// Enumerates all `(θ, ℓ)` 2-block-trees through `v`, encodes each, and
/// reports injectivity together with the count and range bounds.
pub fn check_injective(
    g: &Graph,
    v: usize,
    theta: usize,
    ell: usize,
    budget: usize,
) -> Result<InjectivityReport, BlockTreeError> {
    let trees = enumerate_block_trees(g, v, theta, ell, budget)?;
    let mut index = AnchoredIndex::new(g, theta);
    let mut seen: HashMap<Encoding, usize> = HashMap::new();
    let mut collisions = Vec::new();
    let (mut max_rank, mut max_xi) = (0, 0);
    for (t, tree) in trees.iter().enumerate() {
        let enc = encode_with(g, v, tree, &mut index)?;
        max_rank = max_rank.max(enc.max_rank());
        max_xi = max_xi.max(enc.max_xi());
        if let Some(&prev) = seen.get(&enc) {
            if collisions.len() < 5 {
                collisions.push((trees[prev].clone(), tree.clone()));
            }
        } else {
            seen.insert(enc, t);
        }
    }
    // an edgeless graph also has maximum degree at most 1
    let d = g.max_degree().max(1);
    Ok(InjectivityReport {
        vertex: v,
        theta,
        ell,
        max_degree: g.max_degree(),
        trees: trees.len(),
        distinct_encodings: seen.len(),
        count_bound: block_tree_count_bound(theta, d, ell),
        max_rank,
        rank_limit: theta * d * d,
        max_xi,
        xi_limit: connected_subgraph_bound(d, theta).ceil() as usize,
        collisions,
    })
}

/// Every vertex set `C` with `min_size <= |C| <= max_size` and `G[C]`
/// connected, as ascending lists in lexicographic order.
pub fn connected_subsets(
    g: &Graph,
    min_size: usize,
    max_size: usize,
) -> Result<Vec<Vec<usize>>, BlockTreeError> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        for size in min_size.max(1)..=max_size.min(g.n()) {
            for s in g.connected_sets_containing(v, size, None, usize::MAX)? {
                if s[0] == v {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Checks performed on one generator run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorCheck {
    pub u: usize,
    pub c: Vec<usize>,
    pub theta: usize,
    pub ell: usize,
    pub working_set_empty: bool,
    pub deterministic: bool,
    pub is_block_tree: bool,
    pub starts_at_u: bool,
    pub inside_c: bool,
    /// Largest component of `G[C]` after deleting every `Γ(C_i)`.
    pub largest_residual_component: usize,
    /// Every non-first anchor lies at distance exactly 2 (in `G[C]`) from an
    /// earlier block.
    pub anchors_at_distance_two: bool,
}

impl GeneratorCheck {
    pub fn passed(&self) -> bool {
        self.working_set_empty
            && self.deterministic
            && self.is_block_tree
            && self.starts_at_u
            && self.inside_c
            && self.largest_residual_component <= self.theta
            && self.anchors_at_distance_two
    }
}

/// Runs the generator twice and checks termination, determinism, validity in
/// `G`, the residual-component bound, and the distance-2 anchor property.
pub fn check_generator(
    g: &Graph,
    u: usize,
    c: &[usize],
    theta: usize,
) -> Result<GeneratorCheck, BlockTreeError> {
    let run = generate_block_tree(g, u, c, theta)?;
    let again = generate_block_tree(g, u, c, theta)?;
    let c_sorted = normalise_set(g, c, "C")?;
    let in_c: Vec<bool> = (0..g.n()).map(|v| c_sorted.binary_search(&v).is_ok()).collect();

    // induced subgraph G[C] for distances inside C
    let sub_edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(a, b)| in_c[a] && in_c[b])
        .collect();
    let gc = Graph::new(g.n(), &sub_edges);

    let mut removed = vec![false; g.n()];
    for block in &run.blocks {
        for w in gc.ring(block, 1) {
            removed[w] = true;
        }
    }
    let keep: Vec<usize> = c_sorted.iter().copied().filter(|&v| !removed[v]).collect();
    let mut largest = 0;
    let mut seen = vec![false; g.n()];
    for &s in &keep {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &w in gc.neighbours(x) {
                if in_c[w] && !removed[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        largest = largest.max(size);
    }

    let anchors_ok = (1..run.len()).all(|l| {
        (0..l).any(|j| gc.set_distance(&run.blocks[j], &[run.anchors[l]]) == Some(2))
    });

    Ok(GeneratorCheck {
        u,
        c: c_sorted.clone(),
        theta,
        ell: run.len(),
        working_set_empty: run.residual.is_empty(),
        deterministic: run == again,
        is_block_tree: is_block_tree(g, &run.blocks, theta) && is_block_tree(&gc, &run.blocks, theta),
        starts_at_u: run.blocks.first().is_some_and(|b| b.contains(&u)),
        inside_c: run.blocks.iter().flatten().all(|&v| in_c[v]),
        largest_residual_component: largest,
        anchors_at_distance_two: anchors_ok,
    })
}

/// Aggregate of generator checks over every connected `C` with
/// `θ < |C| <= max_size` and every `u ∈ C`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSweep {
    pub runs: usize,
    pub failures: Vec<GeneratorCheck>,
    /// Histogram of output tree sizes ℓ.
    pub ell_histogram: BTreeMap<usize, usize>,
}

pub fn sweep_generator(
    g: &Graph,
    theta: usize,
    max_size: usize,
) -> Result<GeneratorSweep, BlockTreeError> {
    let mut sweep = GeneratorSweep::default();
    for c in connected_subsets(g, theta + 1, max_size)? {
        for &u in &c {
            let check = check_generator(g, u, &c, theta)?;
            sweep.runs += 1;
            *sweep.ell_histogram.entry(check.ell).or_insert(0) += 1;
            if !check.passed() {
                sweep.failures.push(check);
            }
        }
    }
    Ok(sweep)
}
