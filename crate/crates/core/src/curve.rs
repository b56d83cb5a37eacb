//! Nodal curves through their dual graphs: genus bookkeeping, degrees of the
//! dualizing sheaf, sheaf multidegrees restricted to subcurves, and the rank of
//! the automorphism torus of a sheaf.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, MultiGraph, VertexId, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("dual graph of a curve must be connected")]
    Disconnected,
    #[error("no genus given for vertex {0}")]
    MissingGenus(VertexId),
    #[error("genus given for undeclared vertex {0}")]
    UnknownVertex(VertexId),
    #[error("missing degree for vertex {0}")]
    MissingDegree(VertexId),
    #[error("polarization degree on {0} must be positive")]
    NonPositivePolarization(VertexId),
    #[error("subcurve must be a nonempty proper subset of the components")]
    ImproperSubcurve,
}

impl CurveError {
    pub fn name(&self) -> &'static str {
        match self {
            CurveError::Graph(g) => g.name(),
            CurveError::Disconnected => "Disconnected",
            CurveError::MissingGenus(_) => "MissingGenus",
            CurveError::UnknownVertex(_) => "UnknownVertex",
            CurveError::MissingDegree(_) => "MissingDegree",
            CurveError::NonPositivePolarization(_) => "NonPositivePolarization",
            CurveError::ImproperSubcurve => "ImproperSubcurve",
        }
    }
}

/// A connected nodal curve: its dual graph plus the geometric genus of each
/// irreducible component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveGraph {
    graph: MultiGraph,
    genus: Vec<u32>,
}

impl CurveGraph {
    pub fn new(graph: MultiGraph, genus_of: &BTreeMap<VertexId, u32>) -> Result<Self, CurveError> {
        if !graph.is_connected() {
            return Err(CurveError::Disconnected);
        }
        if let Some(v) = genus_of.keys().find(|v| graph.vertex_index(**v).is_none()) {
            return Err(CurveError::UnknownVertex(*v));
        }
        let genus = graph
            .vertices()
            .iter()
            .map(|v| genus_of.get(v).copied().ok_or(CurveError::MissingGenus(*v)))
            .collect::<Result<_, _>>()?;
        Ok(CurveGraph { graph, genus })
    }

    /// Every component rational.
    pub fn rational(graph: MultiGraph) -> Result<Self, CurveError> {
        let genus = graph.vertices().iter().map(|&v| (v, 0)).collect();
        CurveGraph::new(graph, &genus)
    }

    /// Two rational components meeting in three nodes (genus 2).
    pub fn dollar_sign() -> Self {
        CurveGraph::rational(MultiGraph::banana(3)).expect("connected")
    }

    /// Irreducible curve of arithmetic genus `g >= 1` with a single node.
    pub fn one_node_irreducible(g: u32) -> Self {
        assert!(g >= 1);
        let genus = BTreeMap::from([(VertexId(0), g - 1)]);
        CurveGraph::new(MultiGraph::bouquet(1), &genus).expect("connected")
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn genus_of(&self, v: VertexId) -> Option<u32> {
        self.graph.vertex_index(v).map(|i| self.genus[i])
    }

    pub fn genera(&self) -> &[u32] {
        &self.genus
    }

    pub fn num_components(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.num_components())
    }

    /// `Σ_v genus(v) + b₁(Γ_X)`.
    pub fn arithmetic_genus(&self) -> u64 {
        self.genus.iter().map(|&g| g as u64).sum::<u64>() + self.graph.b1() as u64
    }

    /// Degree of the dualizing sheaf restricted to the components in `y`:
    /// `Σ_{v∈y} (2 g_v − 2 + val(v))`, loops counted twice in the valence.
    pub fn omega_degree(&self, y: VertexSet) -> i64 {
        let val = self.graph.valences();
        y.indices().map(|i| 2 * self.genus[i] as i64 - 2 + val[i] as i64).sum()
    }

    /// Degree of the dualizing sheaf, `2g − 2`.
    pub fn omega_degree_total(&self) -> i64 {
        2 * self.arithmetic_genus() as i64 - 2
    }

    /// Edge indices with exactly one endpoint in `y`.
    pub fn cut_edge_indices(&self, y: VertexSet) -> Vec<usize> {
        self.cut_within(y, self.all_vertices())
    }

    /// Edge indices with one endpoint in `y` and the other in `support ∖ y`.
    pub(crate) fn cut_within(&self, y: VertexSet, support: VertexSet) -> Vec<usize> {
        (0..self.graph.num_edges())
            .filter(|&i| {
                let (s, t) = self.graph.ends(i);
                let (a, b) = (y.contains(s), y.contains(t));
                let (sa, sb) = (support.contains(s), support.contains(t));
                sa && sb && a != b
            })
            .collect()
    }

    pub fn cut_edges(&self, y: &Subcurve) -> BTreeSet<EdgeId> {
        self.cut_edge_indices(y.vertices())
            .into_iter()
            .map(|i| self.graph.edges()[i].id)
            .collect()
    }

    /// All subcurves (nonempty proper vertex subsets, possibly disconnected).
    pub fn subcurves(&self) -> impl Iterator<Item = Subcurve> {
        self.all_vertices().proper_subsets().map(Subcurve)
    }

    pub fn vertex_set(&self, ids: &BTreeSet<VertexId>) -> Result<VertexSet, CurveError> {
        let idx = ids
            .iter()
            .map(|&v| self.graph.vertex_index(v).ok_or(CurveError::UnknownVertex(v)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(VertexSet::from_indices(idx))
    }

    pub fn vertex_ids(&self, set: VertexSet) -> BTreeSet<VertexId> {
        set.indices().map(|i| self.graph.vertices()[i]).collect()
    }

    /// Rank of the automorphism torus `T_Σ`: the number of connected
    /// components of the graph with the edges of `Σ` removed.
    pub fn aut_torus_rank(&self, sheaf: &SheafDatum) -> Result<usize, CurveError> {
        let nonfree = self.nonfree_mask(sheaf)?;
        Ok(self.graph.component_labels_filtered(|i| !nonfree[i]).1)
    }

    pub(crate) fn nonfree_mask(&self, sheaf: &SheafDatum) -> Result<Vec<bool>, CurveError> {
        let mut mask = vec![false; self.graph.num_edges()];
        for i in self.graph.edge_indices(&sheaf.nonfree)? {
            mask[i] = true;
        }
        Ok(mask)
    }

    /// Values of a per-vertex map in vertex order; every vertex must appear
    /// and no undeclared vertex may appear.
    pub(crate) fn aligned<T: Clone>(&self, map: &BTreeMap<VertexId, T>) -> Result<Vec<T>, CurveError> {
        if let Some(v) = map.keys().find(|v| self.graph.vertex_index(**v).is_none()) {
            return Err(CurveError::UnknownVertex(*v));
        }
        self.graph
            .vertices()
            .iter()
            .map(|v| map.get(v).cloned().ok_or(CurveError::MissingDegree(*v)))
            .collect()
    }

    /// Whether some nontrivial permutation of the components preserves the
    /// genera and the number of edges between every pair of components.
    pub fn has_graph_symmetry(&self) -> bool {
        let n = self.num_components();
        let mut mult = vec![vec![0usize; n]; n];
        for i in 0..self.graph.num_edges() {
            let (s, t) = self.graph.ends(i);
            mult[s][t] += 1;
            if s != t {
                mult[t][s] += 1;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut found = false;
        permutations(&mut perm, 0, &mut |p| {
            if found || p.iter().enumerate().all(|(i, &x)| i == x) {
                return;
            }
            let ok = (0..n).all(|i| self.genus[i] == self.genus[p[i]])
                && (0..n).all(|i| (0..n).all(|j| mult[i][j] == mult[p[i]][p[j]]));
            if ok {
                found = true;
            }
        });
        found
    }

    /// Deligne–Mumford stability: `2 g_v − 2 + val(v) > 0` for every component.
    pub fn is_stable(&self) -> bool {
        let val = self.graph.valences();
        (0..self.num_components()).all(|i| 2 * self.genus[i] as i64 - 2 + val[i] as i64 > 0)
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// A nonempty proper set of components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subcurve(VertexSet);

impl Subcurve {
    pub fn new(curve: &CurveGraph, set: VertexSet) -> Result<Self, CurveError> {
        let full = curve.all_vertices();
        if set.is_empty() || !set.is_subset(full) || set == full {
            return Err(CurveError::ImproperSubcurve);
        }
        Ok(Subcurve(set))
    }

    pub fn from_ids(curve: &CurveGraph, ids: &[u32]) -> Result<Self, CurveError> {
        let ids = ids.iter().map(|&i| VertexId(i)).collect();
        Subcurve::new(curve, curve.vertex_set(&ids)?)
    }

    pub fn vertices(&self) -> VertexSet {
        self.0
    }

    pub fn complement(&self, curve: &CurveGraph) -> Subcurve {
        Subcurve(curve.all_vertices().minus(self.0))
    }
}

/// Combinatorial data of a rank-1 torsion-free sheaf: the degree on each
/// component and the set `Σ` of nodes where the sheaf is not locally free.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SheafDatum {
    pub component_degree: BTreeMap<VertexId, i64>,
    pub nonfree: BTreeSet<EdgeId>,
}

impl SheafDatum {
    pub fn new(component_degree: BTreeMap<VertexId, i64>, nonfree: BTreeSet<EdgeId>) -> Self {
        SheafDatum {
            component_degree,
            nonfree,
        }
    }

    /// A line bundle with the given multidegree listed in vertex order.
    pub fn line_bundle(curve: &CurveGraph, degrees: &[i64]) -> Self {
        SheafDatum::with_nonfree(curve, degrees, &[])
    }

    pub fn with_nonfree(curve: &CurveGraph, degrees: &[i64], nonfree: &[u32]) -> Self {
        assert_eq!(degrees.len(), curve.num_components());
        SheafDatum {
            component_degree: curve
                .graph()
                .vertices()
                .iter()
                .copied()
                .zip(degrees.iter().copied())
                .collect(),
            nonfree: nonfree.iter().map(|&e| EdgeId(e)).collect(),
        }
    }

    pub fn validate(&self, curve: &CurveGraph) -> Result<(), CurveError> {
        curve.aligned(&self.component_degree)?;
        curve.graph().edge_indices(&self.nonfree)?;
        Ok(())
    }

    /// `deg(I) = Σ_v deg(I_{X_v}) + #Σ`.
    pub fn total_degree(&self) -> i64 {
        self.component_degree.values().sum::<i64>() + self.nonfree.len() as i64
    }

    /// `deg(I_Y)`: the component degrees over `y` plus the nonfree nodes with
    /// both branches on `y` (loops included).
    pub fn restricted_degree(&self, curve: &CurveGraph, y: VertexSet) -> Result<i64, CurveError> {
        let deg = curve.aligned(&self.component_degree)?;
        let nonfree = curve.nonfree_mask(self)?;
        let g = curve.graph();
        let internal = (0..g.num_edges())
            .filter(|&i| {
                let (s, t) = g.ends(i);
                nonfree[i] && y.contains(s) && y.contains(t)
            })
            .count() as i64;
        Ok(y.indices().map(|i| deg[i]).sum::<i64>() + internal)
    }

    /// Checks `deg(I_Y) + deg(I_{Y^c}) + #(Σ ∩ cut(Y)) = deg(I)`.
    pub fn degree_complement_identity_check(&self, curve: &CurveGraph, y: &Subcurve) -> Result<bool, CurveError> {
        let nonfree = curve.nonfree_mask(self)?;
        let cut_nonfree = curve
            .cut_edge_indices(y.vertices())
            .into_iter()
            .filter(|&i| nonfree[i])
            .count() as i64;
        let lhs = self.restricted_degree(curve, y.vertices())?
            + self.restricted_degree(curve, y.complement(curve).vertices())?
            + cut_nonfree;
        Ok(lhs == self.total_degree())
    }

    /// `I ⊗ M`: shifts every component degree by `M`; `Σ` is unchanged.
    pub fn twist(&self, m: &LineBundleDatum) -> SheafDatum {
        let mut component_degree = self.component_degree.clone();
        for (v, d) in &m.component_degree {
            *component_degree.entry(*v).or_insert(0) += d;
        }
        SheafDatum {
            component_degree,
            nonfree: self.nonfree.clone(),
        }
    }
}

/// Multidegree of an ample line bundle `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarization {
    pub component_degree: BTreeMap<VertexId, i64>,
}

impl Polarization {
    pub fn new(component_degree: BTreeMap<VertexId, i64>) -> Result<Self, CurveError> {
        if let Some((v, _)) = component_degree.iter().find(|(_, &d)| d <= 0) {
            return Err(CurveError::NonPositivePolarization(*v));
        }
        Ok(Polarization { component_degree })
    }

    pub fn from_degrees(curve: &CurveGraph, degrees: &[i64]) -> Result<Self, CurveError> {
        assert_eq!(degrees.len(), curve.num_components());
        Polarization::new(
            curve
                .graph()
                .vertices()
                .iter()
                .copied()
                .zip(degrees.iter().copied())
                .collect(),
        )
    }

    pub fn total_degree(&self) -> i64 {
        self.component_degree.values().sum()
    }
}

/// Multidegree of an arbitrary line bundle `M`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LineBundleDatum {
    pub component_degree: BTreeMap<VertexId, i64>,
}

impl LineBundleDatum {
    pub fn from_degrees(curve: &CurveGraph, degrees: &[i64]) -> Self {
        assert_eq!(degrees.len(), curve.num_components());
        LineBundleDatum {
            component_degree: curve
                .graph()
                .vertices()
                .iter()
                .copied()
                .zip(degrees.iter().copied())
                .collect(),
        }
    }

    pub fn trivial(curve: &CurveGraph) -> Self {
        LineBundleDatum::from_degrees(curve, &vec![0; curve.num_components()])
    }

    pub fn total_degree(&self) -> i64 {
        self.component_degree.values().sum()
    }

    pub fn negated(&self) -> Self {
        LineBundleDatum {
            component_degree: self.component_degree.iter().map(|(&v, &d)| (v, -d)).collect(),
        }
    }
}
