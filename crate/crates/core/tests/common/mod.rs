#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use jacloc_core::curve::{CurveGraph, LineBundleDatum, Polarization, SheafDatum};
use jacloc_core::graph::{EdgeId, MultiGraph, VertexId};
use rand::Rng;

/// Edge list on vertices `0..n`, endpoints stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SmallGraph {
    pub n: u32,
    pub edges: Vec<(u32, u32)>,
}

impl SmallGraph {
    pub fn to_multigraph(&self) -> MultiGraph {
        MultiGraph::from_pairs(self.n, &self.edges).unwrap()
    }

    fn relabeled(&self, perm: &[u32]) -> Vec<(u32, u32)> {
        let mut e: Vec<(u32, u32)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a as usize], perm[b as usize]);
                (x.min(y), x.max(y))
            })
            .collect();
        e.sort();
        e
    }

    /// Lexicographically least edge list over all relabelings.
    fn canonical(&self) -> Vec<(u32, u32)> {
        let mut perm: Vec<u32> = (0..self.n).collect();
        let mut best = self.relabeled(&perm);
        heap_permutations(&mut perm, self.n as usize, &mut |p| {
            let e = self.relabeled(p);
            if e < best {
                best = e;
            }
        });
        best
    }

    fn is_connected(&self) -> bool {
        let mut parent: Vec<u32> = (0..self.n).collect();
        fn find(p: &mut [u32], x: u32) -> u32 {
            let mut r = x;
            while p[r as usize] != r {
                r = p[r as usize];
            }
            r
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra as usize] = rb;
        }
        let root = find(&mut parent, 0);
        (0..self.n).all(|v| find(&mut parent, v) == root)
    }
}

fn heap_permutations(p: &mut [u32], k: usize, visit: &mut impl FnMut(&[u32])) {
    if k <= 1 {
        visit(p);
        return;
    }
    for i in 0..k {
        heap_permutations(p, k - 1, visit);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

/// Connected multigraphs (loops and parallel edges allowed) with at most
/// `max_edges` edges, one per isomorphism class. Includes the single vertex.
pub fn connected_multigraphs(max_edges: usize) -> Vec<SmallGraph> {
    let mut seen: BTreeSet<(u32, Vec<(u32, u32)>)> = BTreeSet::new();
    for m in 0..=max_edges {
        for n in 1..=(m as u32 + 1) {
            let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
            let mut chosen = Vec::with_capacity(m);
            multisets(&pairs, 0, m, &mut chosen, &mut |edges| {
                let g = SmallGraph {
                    n,
                    edges: edges.to_vec(),
                };
                if g.is_connected() {
                    seen.insert((n, g.canonical()));
                }
            });
        }
    }
    seen.into_iter().map(|(n, edges)| SmallGraph { n, edges }).collect()
}

fn multisets(
    pairs: &[(u32, u32)],
    start: usize,
    left: usize,
    chosen: &mut Vec<(u32, u32)>,
    visit: &mut impl FnMut(&[(u32, u32)]),
) {
    if left == 0 {
        visit(chosen);
        return;
    }
    for i in start..pairs.len() {
        chosen.push(pairs[i]);
        multisets(pairs, i, left - 1, chosen, visit);
        chosen.pop();
    }
}

/// Multigraphs without isolated vertices and with at most `max_edges` edges,
/// as disjoint unions of connected ones, plus the single vertex.
pub fn multigraphs_without_isolated(max_edges: usize) -> Vec<SmallGraph> {
    let pieces: Vec<SmallGraph> = connected_multigraphs(max_edges)
        .into_iter()
        .filter(|g| !g.edges.is_empty())
        .collect();
    let mut out = vec![SmallGraph { n: 1, edges: vec![] }];
    let mut stack: Vec<usize> = Vec::new();
    unions(&pieces, 0, max_edges, &mut stack, &mut out);
    out
}

fn unions(pieces: &[SmallGraph], start: usize, budget: usize, stack: &mut Vec<usize>, out: &mut Vec<SmallGraph>) {
    for i in start..pieces.len() {
        let m = pieces[i].edges.len();
        if m > budget {
            continue;
        }
        stack.push(i);
        let mut g = SmallGraph { n: 0, edges: vec![] };
        for &j in stack.iter() {
            let off = g.n;
            g.edges.extend(pieces[j].edges.iter().map(|&(a, b)| (a + off, b + off)));
            g.n += pieces[j].n;
        }
        out.push(g);
        unions(pieces, i, budget - m, stack, out);
        stack.pop();
    }
}

pub fn rational_curve(g: &MultiGraph) -> CurveGraph {
    CurveGraph::rational(g.clone()).unwrap()
}

/// Nonfree sets of every subset of the edges.
pub fn all_sigmas(g: &MultiGraph) -> Vec<BTreeSet<EdgeId>> {
    let ids: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    (0u32..1 << ids.len())
        .map(|mask| {
            ids.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect()
        })
        .collect()
}

pub fn zero_sheaf(c: &CurveGraph, sigma: BTreeSet<EdgeId>) -> SheafDatum {
    SheafDatum::new(c.graph().vertices().iter().map(|&v| (v, 0)).collect(), sigma)
}

/// Connected multigraph on `1..=max_vertices` vertices: a random spanning
/// tree plus up to `max_extra` further edges (loops allowed).
pub fn random_connected(rng: &mut impl Rng, max_vertices: u32, max_extra: usize) -> MultiGraph {
    let n = rng.gen_range(1..=max_vertices);
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.gen_range(0..v), v));
    }
    for _ in 0..rng.gen_range(0..=max_extra) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        pairs.push((a, b));
    }
    MultiGraph::from_pairs(n, &pairs).unwrap()
}

pub fn random_curve(rng: &mut impl Rng, max_vertices: u32, max_extra: usize, max_genus: u32) -> CurveGraph {
    let g = random_connected(rng, max_vertices, max_extra);
    let genus: BTreeMap<VertexId, u32> = g
        .vertices()
        .iter()
        .map(|&v| (v, rng.gen_range(0..=max_genus)))
        .collect();
    CurveGraph::new(g, &genus).unwrap()
}

/// A Deligne–Mumford stable curve of genus at least 2.
pub fn random_stable_curve(rng: &mut impl Rng) -> CurveGraph {
    loop {
        let c = random_curve(rng, 4, 5, 2);
        if c.is_stable() && c.arithmetic_genus() >= 2 {
            return c;
        }
    }
}

pub fn random_sigma(rng: &mut impl Rng, g: &MultiGraph) -> BTreeSet<EdgeId> {
    g.edges().iter().filter(|_| rng.gen_bool(0.5)).map(|e| e.id).collect()
}

pub fn random_polarization(rng: &mut impl Rng, c: &CurveGraph, max: i64) -> Polarization {
    let degs: Vec<i64> = (0..c.num_components()).map(|_| rng.gen_range(1..=max)).collect();
    Polarization::from_degrees(c, &degs).unwrap()
}

/// Random multidegree with the given total.
pub fn random_line_bundle(rng: &mut impl Rng, c: &CurveGraph, total: i64, spread: i64) -> LineBundleDatum {
    let n = c.num_components();
    let mut degs: Vec<i64> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
    let s: i64 = degs.iter().sum();
    degs[n - 1] += total - s;
    LineBundleDatum::from_degrees(c, &degs)
}

/// Independent union-find count of the components of `(V, E ∖ sigma)`.
pub fn components_without(g: &MultiGraph, sigma: &BTreeSet<EdgeId>) -> usize {
    let n = g.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for e in g.edges() {
        if sigma.contains(&e.id) {
            continue;
        }
        let a = g.vertex_index(e.source).unwrap();
        let b = g.vertex_index(e.target).unwrap();
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

/// Edges whose deletion disconnects the graph, by deleting each in turn.
pub fn bridges_by_deletion(g: &MultiGraph) -> BTreeSet<EdgeId> {
    let base = components_without(g, &BTreeSet::new());
    g.edges()
        .iter()
        .filter(|e| components_without(g, &BTreeSet::from([e.id])) > base)
        .map(|e| e.id)
        .collect()
}

pub fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
