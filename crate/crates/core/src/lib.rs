//! Local structure of compactified Jacobians of nodal curves.
//!
//! A nodal curve is described by its dual graph with a genus on each vertex.
//! [`stability`] decides slope and φ-(semi/poly)stability of rank-1
//! torsion-free sheaves, [`toric`] works with the torus-invariant monomials
//! attached to the graph `Γ_X(Σ)` of nodes where the sheaf fails to be
//! locally free, and [`local`] turns these into ring presentations and local
//! invariants (smoothness, embedding dimension, multiplicity, number of local
//! components). [`io`] holds the JSON problem format used by the `jacloc`
//! binary.

use thiserror::Error;

pub mod curve;
pub mod graph;
pub mod io;
pub mod local;
pub mod stability;
pub mod toric;

pub use curve::{CurveError, CurveGraph, LineBundleDatum, Polarization, SheafDatum, Subcurve};
pub use graph::{
    Circulation, Direction, Edge, EdgeId, GraphError, MultiGraph, Orientation, OrientedCircuit, VertexId, VertexSet,
};
pub use local::{LocalError, LocalReport, Moduli, RingName, RingPresentation};
pub use stability::{PhiParameter, Rational, StabilityError, StabilityStatus, StabilityVerdict};
pub use toric::{Mode, MonomialAB, ToricError};

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read input: {0}")]
    Input(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("desk-scale limit: {0}")]
    ScaleLimit(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Local(#[from] LocalError),
}

fn curve_module(e: &CurveError) -> &'static str {
    match e {
        CurveError::Graph(_) => "graph",
        _ => "curve",
    }
}

fn toric_module(e: &ToricError) -> &'static str {
    match e {
        ToricError::Graph(_) => "graph",
        _ => "toric",
    }
}

impl Error {
    /// Module in which the underlying error originated.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Input(_) | Error::Schema(_) | Error::ScaleLimit(_) => "io",
            Error::Graph(_) => "graph",
            Error::Curve(e) => curve_module(e),
            Error::Stability(StabilityError::Curve(e)) => curve_module(e),
            Error::Stability(_) => "stability",
            Error::Toric(e) => toric_module(e),
            Error::Local(LocalError::Curve(e)) => curve_module(e),
            Error::Local(LocalError::Graph(_)) => "graph",
            Error::Local(LocalError::Toric(e)) => toric_module(e),
            Error::Local(_) => "local",
        }
    }

    /// Variant name of the underlying error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Input(_) => "InputUnreadable",
            Error::Schema(_) => "SchemaViolation",
            Error::ScaleLimit(_) => "ScaleLimit",
            Error::Graph(e) => e.name(),
            Error::Curve(e) => e.name(),
            Error::Stability(e) => e.name(),
            Error::Toric(e) => e.name(),
            Error::Local(e) => e.name(),
        }
    }

    /// 2 for malformed input, 4 for inputs beyond the enumeration limits, 3
    /// for every other failure.
    pub fn exit_code(&self) -> i32 {
        match self.module() {
            "io" if matches!(self, Error::ScaleLimit(_)) => 4,
            "io" | "graph" | "curve" => 2,
            _ => 3,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "error": {
                "module": self.module(),
                "kind": self.name(),
                "message": self.to_string(),
            }
        })
    }
}
