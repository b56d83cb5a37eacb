//! Multigraphs modelling dual graphs of nodal curves.
//!
//! Loops and parallel edges are allowed. Every edge carries a reference
//! orientation `source -> target`; orientations, circuits and circulations are
//! all expressed relative to it. Vertices and edges are kept sorted by id, and
//! index-based accessors refer to that order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {edge} references undeclared vertex {vertex}")]
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("edge {0} is not an edge of the graph")]
    UnknownEdge(EdgeId),
    #[error("too many vertices for a vertex set ({0} > 64)")]
    TooManyVertices(usize),
}

impl GraphError {
    pub fn name(&self) -> &'static str {
        match self {
            GraphError::DuplicateVertex(_) => "DuplicateVertex",
            GraphError::DuplicateEdge(_) => "DuplicateEdge",
            GraphError::UnknownEndpoint { .. } => "UnknownEndpoint",
            GraphError::UnknownEdge(_) => "UnknownEdge",
            GraphError::TooManyVertices(_) => "TooManyVertices",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    pub fn new(id: u32, source: u32, target: u32) -> Self {
        Edge {
            id: EdgeId(id),
            source: VertexId(source),
            target: VertexId(target),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// A finite multigraph with a reference orientation on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    ends: Vec<(usize, usize)>,
}

impl MultiGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        if vertices.len() > 64 {
            return Err(GraphError::TooManyVertices(vertices.len()));
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable_by_key(|e| e.id);
        if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateEdge(w[0].id));
        }
        let mut ends = Vec::with_capacity(edges.len());
        for e in &edges {
            let lookup = |v: VertexId| {
                vertices
                    .binary_search(&v)
                    .map_err(|_| GraphError::UnknownEndpoint { edge: e.id, vertex: v })
            };
            ends.push((lookup(e.source)?, lookup(e.target)?));
        }
        Ok(MultiGraph { vertices, edges, ends })
    }

    /// Builds a graph on vertices `0..n` from `(source, target)` pairs; edge
    /// ids are assigned `0..` in the given order.
    pub fn from_pairs(n: u32, pairs: &[(u32, u32)]) -> Result<Self, GraphError> {
        MultiGraph::new(
            (0..n).map(VertexId),
            pairs.iter().enumerate().map(|(i, &(s, t))| Edge::new(i as u32, s, t)),
        )
    }

    /// One vertex with `n` loops.
    pub fn bouquet(n: usize) -> Self {
        let pairs = vec![(0, 0); n];
        MultiGraph::from_pairs(1, &pairs).expect("bouquet is well formed")
    }

    /// Two vertices joined by `n` parallel edges, all oriented `0 -> 1`.
    pub fn banana(n: usize) -> Self {
        let pairs = vec![(0, 1); n];
        MultiGraph::from_pairs(2, &pairs).expect("banana is well formed")
    }

    /// Path on `n` vertices.
    pub fn path(n: u32) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        MultiGraph::from_pairs(n.max(1), &pairs).expect("path is well formed")
    }

    /// Cycle on `n >= 1` vertices (a single loop for `n = 1`).
    pub fn cycle(n: u32) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_pairs(n, &pairs).expect("cycle is well formed")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&e, |x| x.id).ok()
    }

    /// Endpoint indices `(source, target)` of the edge at index `i`.
    pub fn ends(&self, i: usize) -> (usize, usize) {
        self.ends[i]
    }

    pub fn edge_indices(&self, ids: &BTreeSet<EdgeId>) -> Result<Vec<usize>, GraphError> {
        ids.iter()
            .map(|&e| self.edge_index(e).ok_or(GraphError::UnknownEdge(e)))
            .collect()
    }

    /// Number of edge endpoints at each vertex; loops count twice.
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertices.len()];
        for &(s, t) in &self.ends {
            val[s] += 1;
            val[t] += 1;
        }
        val
    }

    /// Connected-component label of every vertex using only the edges whose
    /// index satisfies `use_edge`. Labels are `0..count` in order of first
    /// appearance.
    pub fn component_labels_filtered(&self, use_edge: impl Fn(usize) -> bool) -> (Vec<usize>, usize) {
        let n = self.vertices.len();
        let mut adj = vec![Vec::new(); n];
        for (i, &(s, t)) in self.ends.iter().enumerate() {
            if use_edge(i) && s != t {
                adj[s].push(t);
                adj[t].push(s);
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = count;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels_filtered(|_| true).1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// First Betti number `#E - #V + #components`.
    pub fn b1(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertices.len()
    }

    /// Edges whose removal increases the number of connected components.
    pub fn separating_edges(&self) -> BTreeSet<EdgeId> {
        self.bridge_mask()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| self.edges[i].id)
            .collect()
    }

    /// Bridge flag per edge index, via DFS low-points. The parent edge is
    /// skipped by index, so parallel edges correctly protect each other.
    pub(crate) fn bridge_mask(&self) -> Vec<bool> {
        let n = self.vertices.len();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, &(s, t)) in self.ends.iter().enumerate() {
            if s != t {
                adj[s].push((t, i));
                adj[t].push((s, i));
            }
        }
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut bridge = vec![false; self.edges.len()];
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // frame: (vertex, parent edge, next adjacency position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(frame) = stack.last_mut() {
                let (v, pe, pos) = *frame;
                if pos < adj[v].len() {
                    frame.2 += 1;
                    let (w, ei) = adj[v][pos];
                    if ei == pe {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, ei, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(u, _, _)) = stack.last() {
                        low[u] = low[u].min(low[v]);
                        if low[v] > disc[u] {
                            bridge[pe] = true;
                        }
                    }
                }
            }
        }
        bridge
    }

    /// Contracts every edge *not* in `keep`. Each merged class of vertices is
    /// named after its smallest original vertex id; kept edges retain their
    /// ids and reference orientation (and may become loops).
    pub fn contract_edges(&self, keep: &BTreeSet<EdgeId>) -> Result<Contraction, GraphError> {
        let keep_idx = self.edge_indices(keep)?;
        let mut kept = vec![false; self.edges.len()];
        for i in keep_idx {
            kept[i] = true;
        }
        let mut uf = UnionFind::new(self.vertices.len());
        for (i, &(s, t)) in self.ends.iter().enumerate() {
            if !kept[i] {
                uf.union(s, t);
            }
        }
        let mut rep_name: BTreeMap<usize, VertexId> = BTreeMap::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            rep_name.entry(uf.find(i)).or_insert(v);
        }
        let vertex_map: BTreeMap<VertexId, VertexId> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, rep_name[&uf.find(i)]))
            .collect();
        let graph = MultiGraph::new(
            rep_name.values().copied(),
            self.edges.iter().zip(&kept).filter(|(_, &k)| k).map(|(e, _)| Edge {
                id: e.id,
                source: vertex_map[&e.source],
                target: vertex_map[&e.target],
            }),
        )?;
        Ok(Contraction { graph, vertex_map })
    }

    /// Subgraph on all vertices with only the edges at the given indices.
    pub fn edge_subgraph(&self, keep: impl Fn(usize) -> bool) -> MultiGraph {
        MultiGraph {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(i, _)| keep(*i))
                .map(|(_, e)| *e)
                .collect(),
            ends: self
                .ends
                .iter()
                .enumerate()
                .filter(|(i, _)| keep(*i))
                .map(|(_, e)| *e)
                .collect(),
        }
    }

    /// The graph with every bridge deleted (vertices kept).
    pub fn without_bridges(&self) -> MultiGraph {
        let bridges = self.bridge_mask();
        self.edge_subgraph(|i| !bridges[i])
    }
}

/// Result of [`MultiGraph::contract_edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub graph: MultiGraph,
    /// The surjection from old vertices onto the contracted graph's vertices.
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// A set of vertices of a fixed graph, stored as a bitmask over vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        VertexSet(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        VertexSet(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn minus(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// All nonempty proper subsets of `self`, in increasing bitmask order.
    pub fn proper_subsets(self) -> impl Iterator<Item = VertexSet> {
        let full = self.0;
        // standard submask walk, collected in ascending order
        let mut subs = Vec::new();
        let mut s = full.wrapping_sub(1) & full;
        while s != 0 {
            subs.push(VertexSet(s));
            s = (s - 1) & full;
        }
        subs.reverse();
        subs.into_iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// A direction for every edge of a graph, relative to its reference orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Orientation {
    pub assignment: BTreeMap<EdgeId, Direction>,
}

impl Orientation {
    /// Oriented `(tail, head)` endpoint indices of the edge at index `i`.
    pub fn directed_ends(&self, g: &MultiGraph, i: usize) -> (usize, usize) {
        let (s, t) = g.ends(i);
        match self.assignment[&g.edges()[i].id] {
            Direction::Forward => (s, t),
            Direction::Backward => (t, s),
        }
    }

    pub fn is_total_on(&self, g: &MultiGraph) -> bool {
        self.assignment.len() == g.num_edges() && g.edges().iter().all(|e| self.assignment.contains_key(&e.id))
    }
}

/// All orientations in which every edge lies on a directed cycle.
///
/// Enumerates the `2^#E` assignments in lexicographic order of the direction
/// vector (edges by id, `Forward < Backward`) and keeps those for which each
/// weakly connected component is strongly connected. A graph with a bridge has
/// none; an edgeless graph has exactly the empty orientation.
pub fn totally_cyclic_orientations(g: &MultiGraph) -> Vec<Orientation> {
    if !g.separating_edges().is_empty() {
        return Vec::new();
    }
    let m = g.num_edges();
    assert!(m < 63, "orientation enumeration is exponential in #E");
    let weak = g.component_count();
    let mut out = Vec::new();
    let mut heads: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for mask in 0u64..(1u64 << m) {
        for h in heads.iter_mut() {
            h.clear();
        }
        for i in 0..m {
            let (s, t) = g.ends(i);
            if s == t {
                continue;
            }
            if mask >> (m - 1 - i) & 1 == 0 {
                heads[s].push(t);
            } else {
                heads[t].push(s);
            }
        }
        if strongly_connected_count(&heads) == weak {
            let assignment = g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let dir = if mask >> (m - 1 - i) & 1 == 0 {
                        Direction::Forward
                    } else {
                        Direction::Backward
                    };
                    (e.id, dir)
                })
                .collect();
            out.push(Orientation { assignment });
        }
    }
    out
}

/// Number of strongly connected components (iterative Tarjan).
fn strongly_connected_count(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut count = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    count += 1;
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        if w == v {
                            break;
                        }
                    }
                }
            }
        }
    }
    count
}

/// A simple directed cycle, as a cyclic sequence of traversed edges.
///
/// Stored in canonical rotation: the edge with the smallest id comes first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrientedCircuit {
    pub edges: Vec<(EdgeId, Direction)>,
}

impl OrientedCircuit {
    fn canonical(mut edges: Vec<(EdgeId, Direction)>) -> Self {
        let pos = edges
            .iter()
            .enumerate()
            .min_by_key(|(_, (e, _))| *e)
            .map(|(i, _)| i)
            .unwrap_or(0);
        edges.rotate_left(pos);
        OrientedCircuit { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The same cycle traversed the other way round.
    pub fn reversed(&self) -> Self {
        let edges = self.edges.iter().rev().map(|&(e, d)| (e, d.flip())).collect();
        OrientedCircuit::canonical(edges)
    }

    /// Sort key: sorted support, then directions in support order.
    pub fn sort_key(&self) -> (Vec<EdgeId>, Vec<Direction>) {
        let mut pairs = self.edges.clone();
        pairs.sort();
        pairs.into_iter().unzip()
    }

    /// Checks that the edges form a closed head-to-tail walk in `g` with no
    /// repeated vertex.
    pub fn is_valid_in(&self, g: &MultiGraph) -> bool {
        if self.edges.is_empty() {
            return false;
        }
        let mut tails = Vec::with_capacity(self.edges.len());
        let mut prev_head = None;
        for &(e, d) in &self.edges {
            let Some(i) = g.edge_index(e) else {
                return false;
            };
            let (s, t) = g.ends(i);
            let (tail, head) = if d == Direction::Forward { (s, t) } else { (t, s) };
            if let Some(h) = prev_head {
                if h != tail {
                    return false;
                }
            }
            tails.push(tail);
            prev_head = Some(head);
        }
        if prev_head != Some(tails[0]) {
            return false;
        }
        let distinct: BTreeSet<_> = tails.iter().collect();
        distinct.len() == tails.len()
    }
}

/// All simple directed cycles of `g` (each undirected circuit yields two).
///
/// Backtracking from each start vertex `r` through vertices of larger index
/// only, so each oriented circuit is found exactly once with `r` its smallest
/// vertex. Loops are handled separately as length-one cycles.
pub fn oriented_circuits(g: &MultiGraph) -> Vec<OrientedCircuit> {
    let n = g.num_vertices();
    let mut out = Vec::new();
    // incidence: (neighbor, edge index, direction of traversal from this vertex)
    let mut inc: Vec<Vec<(usize, usize, Direction)>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        let (s, t) = g.ends(i);
        if s == t {
            out.push(OrientedCircuit::canonical(vec![(e.id, Direction::Forward)]));
            out.push(OrientedCircuit::canonical(vec![(e.id, Direction::Backward)]));
            continue;
        }
        inc[s].push((t, i, Direction::Forward));
        inc[t].push((s, i, Direction::Backward));
    }
    let mut on_path = vec![false; n];
    let mut path: Vec<(EdgeId, Direction)> = Vec::new();
    for root in 0..n {
        on_path[root] = true;
        extend_path(g, &inc, root, root, &mut on_path, &mut path, &mut out);
        on_path[root] = false;
    }
    out.sort_by_key(|c| c.sort_key());
    out
}

fn extend_path(
    g: &MultiGraph,
    inc: &[Vec<(usize, usize, Direction)>],
    root: usize,
    v: usize,
    on_path: &mut [bool],
    path: &mut Vec<(EdgeId, Direction)>,
    out: &mut Vec<OrientedCircuit>,
) {
    for &(w, i, d) in &inc[v] {
        let id = g.edges()[i].id;
        if w == root {
            // a 2-cycle must return along a different parallel edge
            if path.is_empty() || (path.len() == 1 && path[0].0 == id) {
                continue;
            }
            path.push((id, d));
            out.push(OrientedCircuit::canonical(path.clone()));
            path.pop();
        } else if w > root && !on_path[w] {
            on_path[w] = true;
            path.push((id, d));
            extend_path(g, inc, root, w, on_path, path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// An integer flow on the edges of a fixed graph, aligned with its edge order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circulation {
    pub flow: Vec<i64>,
}

impl Circulation {
    pub fn zero(num_edges: usize) -> Self {
        Circulation {
            flow: vec![0; num_edges],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.flow.iter().all(|&x| x == 0)
    }

    /// Sum of absolute values.
    pub fn l1(&self) -> u64 {
        self.flow.iter().map(|x| x.unsigned_abs()).sum()
    }

    pub fn negated(&self) -> Self {
        Circulation {
            flow: self.flow.iter().map(|x| -x).collect(),
        }
    }

    /// Net outflow minus inflow at each vertex (indices as in `g`).
    pub fn boundary(&self, g: &MultiGraph) -> Vec<i64> {
        let mut b = vec![0; g.num_vertices()];
        for (i, &f) in self.flow.iter().enumerate() {
            let (s, t) = g.ends(i);
            b[s] += f;
            b[t] -= f;
        }
        b
    }

    pub fn has_zero_boundary(&self, g: &MultiGraph) -> bool {
        self.flow.len() == g.num_edges() && self.boundary(g).iter().all(|&x| x == 0)
    }

    pub fn to_map(&self, g: &MultiGraph) -> BTreeMap<EdgeId, i64> {
        g.edges()
            .iter()
            .zip(&self.flow)
            .filter(|(_, &f)| f != 0)
            .map(|(e, &f)| (e.id, f))
            .collect()
    }
}

/// The `±1` indicator flow of a circuit relative to reference orientations.
pub fn circuit_to_circulation(c: &OrientedCircuit, g: &MultiGraph) -> Result<Circulation, GraphError> {
    let mut flow = vec![0; g.num_edges()];
    for &(e, d) in &c.edges {
        let i = g.edge_index(e).ok_or(GraphError::UnknownEdge(e))?;
        flow[i] += d.sign();
    }
    Ok(Circulation { flow })
}
