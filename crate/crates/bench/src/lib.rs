//! Shared fixtures for the benchmarks.

use jacloc_core::{CurveGraph, MultiGraph, PhiParameter, SheafDatum};

/// Complete graph on `n` vertices.
pub fn complete(n: u32) -> MultiGraph {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    MultiGraph::from_pairs(n, &pairs).expect("complete graph")
}

/// Cycle of `n` vertices with every edge doubled.
pub fn doubled_cycle(n: u32) -> MultiGraph {
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|i| [(i, (i + 1) % n); 2]).collect();
    MultiGraph::from_pairs(n, &pairs).expect("doubled cycle")
}

/// Graphs used across the enumeration benches, labelled for criterion.
pub fn graphs() -> Vec<(&'static str, MultiGraph)> {
    vec![
        ("banana4", MultiGraph::banana(4)),
        ("banana6", MultiGraph::banana(6)),
        ("k4", complete(4)),
        ("doubled_cycle3", doubled_cycle(3)),
        ("bouquet3", MultiGraph::bouquet(3)),
    ]
}

/// Graphs for which the Hilbert-Samuel function stays cheap.
pub fn toric_graphs() -> Vec<(&'static str, MultiGraph)> {
    graphs().into_iter().filter(|(name, _)| *name != "banana6").collect()
}

/// Rational curve on `graph` with a line bundle of degree 0 at every vertex
/// and `phi = 0`.
pub fn balanced(graph: MultiGraph) -> (CurveGraph, SheafDatum, PhiParameter) {
    let curve = CurveGraph::rational(graph).expect("connected");
    let n = curve.num_components();
    let sheaf = SheafDatum::line_bundle(&curve, &vec![0; n]);
    let phi = PhiParameter::from_fractions(&curve, &vec![(0, 1); n]).expect("sums to zero");
    (curve, sheaf, phi)
}

/// Rational curve on `graph`, all nodes non-free, degrees chosen so the
/// total degree is `-#E`.
pub fn all_nonfree(graph: MultiGraph) -> (CurveGraph, SheafDatum) {
    let curve = CurveGraph::rational(graph).expect("connected");
    let n = curve.num_components();
    let e = curve.graph().num_edges() as i64;
    let mut degrees = vec![-(e / n as i64); n];
    degrees[0] -= e % n as i64;
    let nonfree: Vec<u32> = (0..e as u32).collect();
    let sheaf = SheafDatum::with_nonfree(&curve, &degrees, &nonfree);
    (curve, sheaf)
}
