//! Presentations of the complete local rings at a point `[I]` of the
//! compactified Jacobian (or of the universal one) and the numerical
//! invariants read off from them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{CurveError, CurveGraph, SheafDatum};
use crate::graph::{oriented_circuits, EdgeId, GraphError, MultiGraph, VertexId};
use crate::toric::{
    circuit_generators, local_component_count, multiplicity_in, universal_generators, weight_of, Mode, MonomialAB,
    ToricError, TorusWeight, DEFAULT_T_MAX,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error("{ring} would need {count} W-variables")]
    NegativeVariableCount { ring: RingName, count: i64 },
    #[error("cross-check failed: {0}")]
    CrossCheckFailed(String),
}

impl LocalError {
    pub fn name(&self) -> &'static str {
        match self {
            LocalError::Curve(e) => e.name(),
            LocalError::Graph(e) => e.name(),
            LocalError::Toric(e) => e.name(),
            LocalError::NegativeVariableCount { .. } => "NegativeVariableCount",
            LocalError::CrossCheckFailed(_) => "CrossCheckFailed",
        }
    }
}

type Result<T> = std::result::Result<T, LocalError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RingName {
    #[serde(rename = "A_hat")]
    AHat,
    #[serde(rename = "B_hat")]
    BHat,
    S1,
    S2,
    #[serde(rename = "R_I")]
    RI,
    #[serde(rename = "R_XI")]
    RXI,
    #[serde(rename = "InvariantRing_R_I")]
    InvariantRI,
    #[serde(rename = "InvariantRing_R_XI")]
    InvariantRXI,
}

impl RingName {
    pub const ALL: [RingName; 8] = [
        RingName::AHat,
        RingName::BHat,
        RingName::S1,
        RingName::S2,
        RingName::RI,
        RingName::RXI,
        RingName::InvariantRI,
        RingName::InvariantRXI,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RingName::AHat => "A_hat",
            RingName::BHat => "B_hat",
            RingName::S1 => "S1",
            RingName::S2 => "S2",
            RingName::RI => "R_I",
            RingName::RXI => "R_XI",
            RingName::InvariantRI => "InvariantRing_R_I",
            RingName::InvariantRXI => "InvariantRing_R_XI",
        }
    }
}

impl fmt::Display for RingName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RingName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RingName::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| format!("unknown ring name {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VariableKind {
    #[serde(rename = "X_e")]
    X,
    #[serde(rename = "Y_e")]
    Y,
    #[serde(rename = "T_e")]
    T,
    #[serde(rename = "W_i")]
    W,
    #[serde(rename = "u")]
    U,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "t")]
    Param,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub symbol: String,
    pub kind: VariableKind,
    /// Edge id for edge variables, 1-based index for `W_i`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<u32>,
}

/// `left·right = 0`, or `left·right = equals`. Serialized as its display
/// form, e.g. `"X_e0*Y_e0 = 0"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub left: String,
    pub right: String,
    pub equals: Option<String>,
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*{} = {}",
            self.left,
            self.right,
            self.equals.as_deref().unwrap_or("0")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// A circuit monomial `X^{c+} Y^{c-}`, with its circulation.
    Circuit {
        flow: BTreeMap<EdgeId, i64>,
        monomial: String,
    },
    /// A single variable of the ambient ring.
    Variable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RingPresentation {
    pub name: RingName,
    /// Node the ring is attached to, for the per-node pieces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeId>,
    pub variables: Vec<Variable>,
    pub relations: Vec<Relation>,
    pub torus_weights: BTreeMap<String, TorusWeight>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Generator>>,
}

impl RingPresentation {
    pub fn count_kind(&self, kind: VariableKind) -> usize {
        self.variables.iter().filter(|v| v.kind == kind).count()
    }

    fn empty(name: RingName) -> Self {
        RingPresentation {
            name,
            edge: None,
            variables: Vec::new(),
            relations: Vec::new(),
            torus_weights: BTreeMap::new(),
            generators: None,
        }
    }

    fn push_var(&mut self, symbol: String, kind: VariableKind, index: Option<u32>) {
        self.variables.push(Variable { symbol, kind, index });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Moduli {
    Jacobian,
    UniversalJacobian,
}

/// Properties that hold at every point but are not computed here.
pub const ASSERTED_PROPERTIES: [&str; 3] = ["Gorenstein", "slc", "seminormal"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalReport {
    pub moduli: Moduli,
    pub smooth: bool,
    pub local_dimension: i64,
    pub embedding_dimension: i64,
    pub multiplicity: u64,
    pub component_count: usize,
    pub invariant_ring_dimension: usize,
    pub g_sigma: i64,
    pub aut_torus_rank: usize,
    pub oriented_circuits: usize,
    pub gamma_vertices: Vec<VertexId>,
    pub gamma_edges: Vec<EdgeId>,
    /// Multiplicity and embedding dimension in universal mode are not pinned
    /// down by any worked example.
    pub experimental: bool,
    pub asserted_properties: Vec<&'static str>,
}

/// The graph `Γ_X(Σ)`: the dual graph with every node outside `Σ` contracted.
pub fn gamma_of(curve: &CurveGraph, sheaf: &SheafDatum) -> Result<MultiGraph> {
    sheaf.validate(curve)?;
    Ok(curve.graph().contract_edges(&sheaf.nonfree)?.graph)
}

/// Number of `W` variables of `R_I` (`g − b1(Γ)`) or `R_(X,I)`
/// (`4g − 3 − b1(Γ) − #E(Γ)`).
pub fn w_count(curve: &CurveGraph, gamma: &MultiGraph, ring: RingName) -> i64 {
    let g = curve.arithmetic_genus() as i64;
    let b1 = gamma.b1() as i64;
    match ring {
        RingName::RI | RingName::InvariantRI => g - b1,
        RingName::RXI | RingName::InvariantRXI => 4 * g - 3 - b1 - gamma.num_edges() as i64,
        _ => 0,
    }
}

fn x_sym(e: EdgeId) -> String {
    format!("X_{e}")
}
fn y_sym(e: EdgeId) -> String {
    format!("Y_{e}")
}
fn t_sym(e: EdgeId) -> String {
    format!("T_{e}")
}

fn edge_variables(p: &mut RingPresentation, gamma: &MultiGraph, with_t: bool) -> Result<()> {
    for e in gamma.edges() {
        p.push_var(x_sym(e.id), VariableKind::X, Some(e.id.0));
        p.push_var(y_sym(e.id), VariableKind::Y, Some(e.id.0));
        if with_t {
            p.push_var(t_sym(e.id), VariableKind::T, Some(e.id.0));
        }
        p.relations.push(Relation {
            left: x_sym(e.id),
            right: y_sym(e.id),
            equals: with_t.then(|| t_sym(e.id)),
        });
        let mut x = MonomialAB::default();
        x.x_exp.insert(e.id, 1);
        let mut y = MonomialAB::default();
        y.y_exp.insert(e.id, 1);
        p.torus_weights.insert(x_sym(e.id), weight_of(&x, gamma)?);
        p.torus_weights.insert(y_sym(e.id), weight_of(&y, gamma)?);
        if with_t {
            p.torus_weights.insert(t_sym(e.id), zero_weight(gamma));
        }
    }
    Ok(())
}

fn zero_weight(gamma: &MultiGraph) -> TorusWeight {
    TorusWeight {
        weight: gamma.vertices().iter().map(|&v| (v, 0)).collect(),
    }
}

fn w_variables(p: &mut RingPresentation, gamma: &MultiGraph, count: i64) {
    for i in 1..=count {
        let sym = format!("W_{i}");
        p.torus_weights.insert(sym.clone(), zero_weight(gamma));
        p.push_var(sym, VariableKind::W, Some(i as u32));
    }
}

fn checked_w(curve: &CurveGraph, gamma: &MultiGraph, ring: RingName) -> Result<i64> {
    let count = w_count(curve, gamma, ring);
    if count < 0 {
        return Err(LocalError::NegativeVariableCount { ring, count });
    }
    Ok(count)
}

fn node_ring(name: RingName, edge: Option<EdgeId>) -> RingPresentation {
    let mut p = RingPresentation::empty(name);
    p.edge = edge;
    let (u, v, t) = match edge {
        Some(e) => (format!("U_{e}_l"), format!("U_{e}_r"), format!("t_{e}")),
        None => ("u".to_string(), "v".to_string(), "t".to_string()),
    };
    let idx = edge.map(|e| e.0);
    if name == RingName::S2 {
        p.push_var(t.clone(), VariableKind::Param, idx);
    }
    p.push_var(u.clone(), VariableKind::U, idx);
    p.push_var(v.clone(), VariableKind::V, idx);
    p.relations.push(Relation {
        left: u,
        right: v,
        equals: (name == RingName::S2).then_some(t),
    });
    p
}

/// The named ring at the point `[I]`, with variables, relations and torus
/// weights over `Γ_X(Σ)`.
pub fn presentation(curve: &CurveGraph, sheaf: &SheafDatum, which: RingName) -> Result<RingPresentation> {
    let gamma = gamma_of(curve, sheaf)?;
    let mut p = RingPresentation::empty(which);
    match which {
        RingName::S1 | RingName::S2 => return Ok(node_ring(which, None)),
        RingName::AHat => edge_variables(&mut p, &gamma, false)?,
        RingName::BHat => edge_variables(&mut p, &gamma, true)?,
        RingName::RI | RingName::InvariantRI => {
            let w = checked_w(curve, &gamma, which)?;
            edge_variables(&mut p, &gamma, false)?;
            w_variables(&mut p, &gamma, w);
            if which == RingName::InvariantRI {
                let mut gens: Vec<Generator> = circuit_generators(&gamma)
                    .iter()
                    .map(|c| Generator::Circuit {
                        flow: c.circulation.to_map(&gamma),
                        monomial: c.to_monomial(&gamma).to_string(),
                    })
                    .collect();
                gens.extend((1..=w).map(|i| Generator::Variable(format!("W_{i}"))));
                p.generators = Some(gens);
            }
        }
        RingName::RXI | RingName::InvariantRXI => {
            let w = checked_w(curve, &gamma, which)?;
            edge_variables(&mut p, &gamma, true)?;
            w_variables(&mut p, &gamma, w);
            if which == RingName::InvariantRXI {
                let mut gens: Vec<Generator> = Vec::new();
                for m in universal_generators(&gamma) {
                    let t = m.t_exp.as_ref().and_then(|t| t.keys().next().copied());
                    match t {
                        Some(e) => gens.push(Generator::Variable(t_sym(e))),
                        None => {
                            let flow = m
                                .signed_exponents(&gamma)
                                .expect("generator edges belong to the graph")
                                .to_map(&gamma);
                            let mut shown = m.clone();
                            shown.t_exp = None;
                            gens.push(Generator::Circuit {
                                flow,
                                monomial: shown.to_string(),
                            });
                        }
                    }
                }
                gens.extend((1..=w).map(|i| Generator::Variable(format!("W_{i}"))));
                p.generators = Some(gens);
            }
        }
    }
    Ok(p)
}

/// One copy of `S1` (or `S2` for the universal deformation) per node in `Σ`,
/// with variables `U_e_l`, `U_e_r` for the two branches.
pub fn deformation_ring_local_pieces(sheaf: &SheafDatum, moduli: Moduli) -> Vec<RingPresentation> {
    let name = match moduli {
        Moduli::Jacobian => RingName::S1,
        Moduli::UniversalJacobian => RingName::S2,
    };
    sheaf.nonfree.iter().map(|&e| node_ring(name, Some(e))).collect()
}

pub fn local_report(curve: &CurveGraph, sheaf: &SheafDatum, moduli: Moduli) -> Result<LocalReport> {
    local_report_with(curve, sheaf, moduli, DEFAULT_T_MAX)
}

/// Numerical invariants at `[I]`, with `t_max` bounding the Hilbert–Samuel
/// computation. All internal consistency checks are enforced.
pub fn local_report_with(curve: &CurveGraph, sheaf: &SheafDatum, moduli: Moduli, t_max: u32) -> Result<LocalReport> {
    let gamma = gamma_of(curve, sheaf)?;
    let g = curve.arithmetic_genus() as i64;
    let b1 = gamma.b1();
    let circuits = oriented_circuits(&gamma).len();
    let aut_torus_rank = curve.aut_torus_rank(sheaf)?;
    let report = match moduli {
        Moduli::Jacobian => {
            let bridges = curve.graph().separating_edges();
            let smooth = sheaf.nonfree.is_subset(&bridges);
            LocalReport {
                moduli,
                smooth,
                local_dimension: g,
                embedding_dimension: circuits as i64 + g - b1 as i64,
                multiplicity: multiplicity_in(&gamma, Mode::A, t_max)?,
                component_count: local_component_count(&gamma),
                invariant_ring_dimension: b1,
                g_sigma: g - b1 as i64,
                aut_torus_rank,
                oriented_circuits: circuits,
                gamma_vertices: gamma.vertices().to_vec(),
                gamma_edges: gamma.edges().iter().map(|e| e.id).collect(),
                experimental: false,
                asserted_properties: ASSERTED_PROPERTIES.to_vec(),
            }
        }
        Moduli::UniversalJacobian => {
            let m = checked_w(curve, &gamma, RingName::RXI)?;
            let nonloop = gamma.edges().iter().filter(|e| !e.is_loop()).count();
            let local_dimension = 4 * g - 3;
            let embedding_dimension = (circuits + nonloop) as i64 + m;
            LocalReport {
                moduli,
                smooth: embedding_dimension == local_dimension,
                local_dimension,
                embedding_dimension,
                multiplicity: multiplicity_in(&gamma, Mode::B, t_max)?,
                component_count: 1,
                invariant_ring_dimension: b1 + gamma.num_edges(),
                g_sigma: g - b1 as i64,
                aut_torus_rank,
                oriented_circuits: circuits,
                gamma_vertices: gamma.vertices().to_vec(),
                gamma_edges: gamma.edges().iter().map(|e| e.id).collect(),
                experimental: true,
                asserted_properties: ASSERTED_PROPERTIES.to_vec(),
            }
        }
    };
    cross_check(&report, gamma.num_vertices())?;
    Ok(report)
}

fn cross_check(r: &LocalReport, gamma_vertices: usize) -> Result<()> {
    let fail = |what: &str| Err(LocalError::CrossCheckFailed(what.to_string()));
    if r.embedding_dimension < r.local_dimension {
        return fail("embedding dimension below dimension");
    }
    if r.smooth != (r.multiplicity == 1) {
        return fail("smoothness disagrees with multiplicity");
    }
    if r.smooth != (r.embedding_dimension == r.local_dimension) {
        return fail("smoothness disagrees with embedding dimension");
    }
    if r.smooth && r.component_count != 1 {
        return fail("smooth point on several components");
    }
    if r.aut_torus_rank != gamma_vertices {
        return fail("automorphism torus rank differs from #V(Γ)");
    }
    Ok(())
}
