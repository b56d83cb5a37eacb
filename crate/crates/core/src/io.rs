//! The `jacloc/1` JSON problem format and the commands run on it.
//!
//! Every command returns a `serde_json::Value`; keys come out sorted, so
//! printing the value gives canonical output. Rationals are written as
//! strings `"p/q"` in lowest terms with `q > 0` (or `"n"` when integral).

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

use crate::curve::{CurveGraph, LineBundleDatum, Polarization, SheafDatum};
use crate::graph::{oriented_circuits, totally_cyclic_orientations, Edge, EdgeId, MultiGraph, VertexId};
use crate::local::{deformation_ring_local_pieces, gamma_of, local_report_with, presentation, Moduli, RingName};
use crate::stability::{
    count_stable_line_multidegrees, phi_polystable, phi_semistable, phi_to_polarization, slope_polystable,
    slope_semistable, slope_to_phi, PhiParameter, PolystabilityCertificate, Rational, StabilityVerdict,
};
use crate::toric::{invariant_monomials_upto, Mode, DEFAULT_T_MAX};
use crate::Error;

pub const SCHEMA: &str = "jacloc/1";

pub const MAX_VERTICES: usize = 12;
pub const MAX_EDGES: usize = 16;
/// Poly-stability walks all set partitions of the components.
pub const MAX_PARTITION_VERTICES: usize = 8;
/// Brute-force invariant enumeration limits.
pub const MAX_ENUMERATION_EDGES: usize = 8;
pub const MAX_DEGREE_BOUND: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub schema: String,
    pub curve: CurveSpec,
    #[serde(default)]
    pub sheaf: Option<SheafSpec>,
    #[serde(default)]
    pub polarization: Option<BTreeMap<u32, i64>>,
    #[serde(default, rename = "line_bundle_M")]
    pub line_bundle_m: Option<BTreeMap<u32, i64>>,
    #[serde(default)]
    pub d: Option<i64>,
    #[serde(default)]
    pub phi: Option<BTreeMap<u32, RationalValue>>,
    #[serde(default)]
    pub mode: Option<ModeSpec>,
    #[serde(default)]
    pub options: OptionsSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub vertices: Vec<VertexSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    pub id: u32,
    #[serde(default)]
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub id: u32,
    pub source: u32,
    pub target: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafSpec {
    pub degrees: BTreeMap<u32, i64>,
    #[serde(default)]
    pub nonfree: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Jacobian,
    Universal,
}

impl From<ModeSpec> for Moduli {
    fn from(m: ModeSpec) -> Self {
        match m {
            ModeSpec::Jacobian => Moduli::Jacobian,
            ModeSpec::Universal => Moduli::UniversalJacobian,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsSpec {
    #[serde(default)]
    pub degree_bound: Option<u32>,
    #[serde(default)]
    pub t_max: Option<u32>,
    #[serde(default)]
    pub presentations: Vec<RingName>,
}

/// An exact rational read from an integer or a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalValue(pub Rational);

impl<'de> Deserialize<'de> for RationalValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match Value::deserialize(deserializer)? {
            Value::String(s) => parse_rational(&s).map(RationalValue).map_err(serde::de::Error::custom),
            Value::Number(n) if n.is_i64() => Ok(RationalValue(Rational::from_integer(BigInt::from(
                n.as_i64().expect("checked"),
            )))),
            other => Err(serde::de::Error::custom(format!(
                "rationals must be integers or \"p/q\" strings, got {other}"
            ))),
        }
    }
}

/// Parses `"n"` or `"p/q"` (optional leading minus, decimal digits only).
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("not an exact rational: {s:?}");
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let unsigned = num.strip_prefix('-').unwrap_or(num);
    if !digits(unsigned) || !digits(den) {
        return Err(bad());
    }
    let p: BigInt = num.parse().map_err(|_| bad())?;
    let q: BigInt = den.parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(p, q))
}

pub fn rational_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// A problem with all domain objects built and checked.
#[derive(Debug, Clone)]
pub struct Problem {
    pub curve: CurveGraph,
    pub sheaf: Option<SheafDatum>,
    pub polarization: Option<Polarization>,
    pub line_bundle_m: Option<LineBundleDatum>,
    pub d: i64,
    pub phi: Option<PhiParameter>,
    pub mode: Moduli,
    pub degree_bound: Option<u32>,
    pub t_max: u32,
    pub presentations: Vec<RingName>,
}

fn vertex_map<T: Clone>(m: &BTreeMap<u32, T>) -> BTreeMap<VertexId, T> {
    m.iter().map(|(&k, v)| (VertexId(k), v.clone())).collect()
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if spec.schema != SCHEMA {
            return Err(Error::Schema(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                spec.schema
            )));
        }
        Ok(spec)
    }

    /// Builds the curve and every supplied datum, enforcing the desk-scale
    /// limits on the dual graph.
    pub fn build(&self) -> Result<Problem, Error> {
        let nv = self.curve.vertices.len();
        let ne = self.curve.edges.len();
        if nv > MAX_VERTICES || ne > MAX_EDGES {
            return Err(Error::ScaleLimit(format!(
                "dual graph has {nv} vertices and {ne} edges (limits {MAX_VERTICES} and {MAX_EDGES})"
            )));
        }
        let graph = MultiGraph::new(
            self.curve.vertices.iter().map(|v| VertexId(v.id)),
            self.curve.edges.iter().map(|e| Edge::new(e.id, e.source, e.target)),
        )?;
        let genus: BTreeMap<VertexId, u32> = self.curve.vertices.iter().map(|v| (VertexId(v.id), v.genus)).collect();
        let curve = CurveGraph::new(graph, &genus)?;
        let sheaf = match &self.sheaf {
            Some(s) => {
                let datum = SheafDatum::new(
                    vertex_map(&s.degrees),
                    s.nonfree.iter().map(|&e| EdgeId(e)).collect::<BTreeSet<_>>(),
                );
                datum.validate(&curve)?;
                Some(datum)
            }
            None => None,
        };
        let polarization = match &self.polarization {
            Some(l) => {
                let p = Polarization::new(vertex_map(l))?;
                curve.aligned(&p.component_degree)?;
                Some(p)
            }
            None => None,
        };
        let line_bundle_m = match &self.line_bundle_m {
            Some(m) => {
                let m = LineBundleDatum {
                    component_degree: vertex_map(m),
                };
                curve.aligned(&m.component_degree)?;
                Some(m)
            }
            None => None,
        };
        let phi = match &self.phi {
            Some(p) => Some(PhiParameter::new(
                p.iter().map(|(&k, v)| (VertexId(k), v.0.clone())).collect(),
            )?),
            None => None,
        };
        let d = self.d.unwrap_or_else(|| match (&line_bundle_m, &sheaf) {
            (Some(m), _) => -m.total_degree(),
            (None, Some(s)) => s.total_degree(),
            (None, None) => 0,
        });
        Ok(Problem {
            curve,
            sheaf,
            polarization,
            line_bundle_m,
            d,
            phi,
            mode: self.mode.map_or(Moduli::Jacobian, Moduli::from),
            degree_bound: self.options.degree_bound,
            t_max: self.options.t_max.unwrap_or(DEFAULT_T_MAX),
            presentations: self.options.presentations.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvertDirection {
    PolarizationToPhi,
    PhiToPolarization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Stability,
    Chambers,
    Convert(Option<ConvertDirection>),
    Orientations,
    Circuits,
    Presentation(RingName),
}

pub fn execute(problem: &Problem, command: &Command) -> Result<Value, Error> {
    match command {
        Command::Analyze => analyze(problem),
        Command::Stability => stability(problem),
        Command::Chambers => chambers(problem),
        Command::Convert(dir) => convert(problem, *dir),
        Command::Orientations => orientations(problem),
        Command::Circuits => circuits(problem),
        Command::Presentation(name) => present(problem, *name),
    }
}

fn require_sheaf(p: &Problem) -> Result<&SheafDatum, Error> {
    p.sheaf
        .as_ref()
        .ok_or_else(|| Error::Schema("this command needs a \"sheaf\"".into()))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn phi_json(phi: &PhiParameter) -> Value {
    let map: serde_json::Map<String, Value> = phi
        .value()
        .iter()
        .map(|(v, r)| (v.0.to_string(), rational_json(r)))
        .collect();
    Value::Object(map)
}

fn degrees_json(m: &BTreeMap<VertexId, i64>) -> Value {
    let map: serde_json::Map<String, Value> = m.iter().map(|(v, d)| (v.0.to_string(), json!(d))).collect();
    Value::Object(map)
}

fn verdict_json(curve: &CurveGraph, v: &StabilityVerdict) -> Value {
    let witnesses: Vec<Vec<u32>> = v
        .witnesses
        .iter()
        .map(|y| curve.vertex_ids(y.vertices()).iter().map(|v| v.0).collect())
        .collect();
    json!({ "status": v.status, "witnesses": witnesses })
}

fn polystable_json(c: &PolystabilityCertificate) -> Value {
    let partition = c.partition.as_ref().map(|parts| {
        parts
            .iter()
            .map(|w| w.iter().map(|v| v.0).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    });
    json!({ "polystable": c.polystable, "partition": partition })
}

fn check_partition_scale(p: &Problem) -> Result<(), Error> {
    let n = p.curve.num_components();
    if n > MAX_PARTITION_VERTICES {
        return Err(Error::ScaleLimit(format!(
            "poly-stability needs at most {MAX_PARTITION_VERTICES} components, got {n}"
        )));
    }
    Ok(())
}

/// Stability of the sheaf against φ or against `L` (exactly one must be
/// given).
fn stability_section(p: &Problem, sheaf: &SheafDatum) -> Result<Value, Error> {
    check_partition_scale(p)?;
    match (&p.phi, &p.polarization) {
        (Some(phi), None) => Ok(json!({
            "parameter": "phi",
            "phi": phi_json(phi),
            "verdict": verdict_json(&p.curve, &phi_semistable(&p.curve, sheaf, phi)?),
            "polystability": polystable_json(&phi_polystable(&p.curve, sheaf, phi)?),
        })),
        (None, Some(l)) => Ok(json!({
            "parameter": "polarization",
            "polarization": degrees_json(&l.component_degree),
            "verdict": verdict_json(&p.curve, &slope_semistable(&p.curve, sheaf, l)?),
            "polystability": polystable_json(&slope_polystable(&p.curve, sheaf, l)?),
        })),
        (Some(_), Some(_)) => Err(Error::Schema(
            "give either \"phi\" or \"polarization\", not both".into(),
        )),
        (None, None) => Err(Error::Schema("stability needs \"phi\" or \"polarization\"".into())),
    }
}

fn warnings(p: &Problem) -> Vec<String> {
    let mut out = Vec::new();
    if p.mode == Moduli::UniversalJacobian {
        if !p.curve.is_stable() {
            out.push("curve is not stable; the universal presentation assumes a stable curve".to_string());
        }
        if p.curve.has_graph_symmetry() {
            out.push(
                "weighted dual graph has a nontrivial symmetry; the curve may have extra automorphisms".to_string(),
            );
        }
        out.push("universal-mode multiplicity and embedding dimension are experimental".to_string());
    }
    out
}

fn analyze(p: &Problem) -> Result<Value, Error> {
    let sheaf = require_sheaf(p)?;
    let mut out = serde_json::Map::new();
    if p.phi.is_some() || p.polarization.is_some() {
        out.insert("stability".into(), stability_section(p, sheaf)?);
    }
    let report = local_report_with(&p.curve, sheaf, p.mode, p.t_max)?;
    out.insert("local_report".into(), to_value(&report));
    let mut rings = Vec::new();
    for &name in &p.presentations {
        rings.push(to_value(&presentation(&p.curve, sheaf, name)?));
    }
    out.insert("presentations".into(), Value::Array(rings));
    out.insert(
        "local_pieces".into(),
        to_value(&deformation_ring_local_pieces(sheaf, p.mode)),
    );
    if let Some(bound) = p.degree_bound {
        let gamma = gamma_of(&p.curve, sheaf)?;
        if bound > MAX_DEGREE_BOUND || gamma.num_edges() > MAX_ENUMERATION_EDGES {
            return Err(Error::ScaleLimit(format!(
                "invariant enumeration needs degree bound ≤ {MAX_DEGREE_BOUND} and at most {MAX_ENUMERATION_EDGES} edges"
            )));
        }
        let mode = match p.mode {
            Moduli::Jacobian => Mode::A,
            Moduli::UniversalJacobian => Mode::B,
        };
        let monomials: Vec<String> = invariant_monomials_upto(&gamma, bound, mode)?
            .iter()
            .map(|m| m.to_string())
            .collect();
        out.insert(
            "invariant_monomials".into(),
            json!({ "degree_bound": bound, "count": monomials.len(), "monomials": monomials }),
        );
    }
    out.insert("warnings".into(), to_value(&warnings(p)));
    Ok(Value::Object(out))
}

fn stability(p: &Problem) -> Result<Value, Error> {
    let sheaf = require_sheaf(p)?;
    stability_section(p, sheaf)
}

/// φ from the input, or from `(L, M, d)` when only a polarization is given.
fn phi_of(p: &Problem) -> Result<PhiParameter, Error> {
    match (&p.phi, &p.polarization) {
        (Some(phi), _) => Ok(phi.clone()),
        (None, Some(l)) => Ok(slope_to_phi(&p.curve, l, p.line_bundle_m.as_ref(), p.d)?),
        (None, None) => Err(Error::Schema("this command needs \"phi\" or \"polarization\"".into())),
    }
}

fn chambers(p: &Problem) -> Result<Value, Error> {
    let phi = phi_of(p)?;
    let ch = count_stable_line_multidegrees(&p.curve, &phi)?;
    let list = |v: &[BTreeMap<VertexId, i64>]| v.iter().map(degrees_json).collect::<Vec<_>>();
    Ok(json!({
        "phi": phi_json(&phi),
        "total_degree": phi.target_sum(),
        "stable_count": ch.stable.len(),
        "strictly_semistable_count": ch.strictly_semistable.len(),
        "stable": list(&ch.stable),
        "strictly_semistable": list(&ch.strictly_semistable),
    }))
}

fn convert(p: &Problem, dir: Option<ConvertDirection>) -> Result<Value, Error> {
    let dir = match dir {
        Some(d) => d,
        None if p.polarization.is_some() => ConvertDirection::PolarizationToPhi,
        None if p.phi.is_some() => ConvertDirection::PhiToPolarization,
        None => return Err(Error::Schema("convert needs \"phi\" or \"polarization\"".into())),
    };
    match dir {
        ConvertDirection::PolarizationToPhi => {
            let l = p
                .polarization
                .as_ref()
                .ok_or_else(|| Error::Schema("polarization-to-phi needs \"polarization\"".into()))?;
            let phi = slope_to_phi(&p.curve, l, p.line_bundle_m.as_ref(), p.d)?;
            Ok(json!({ "phi": phi_json(&phi), "total": phi.target_sum() }))
        }
        ConvertDirection::PhiToPolarization => {
            let phi = p
                .phi
                .as_ref()
                .ok_or_else(|| Error::Schema("phi-to-polarization needs \"phi\"".into()))?;
            let (l, m, d) = phi_to_polarization(&p.curve, phi)?;
            Ok(json!({
                "polarization": degrees_json(&l.component_degree),
                "line_bundle_M": degrees_json(&m.component_degree),
                "d": d,
            }))
        }
    }
}

fn orientations(p: &Problem) -> Result<Value, Error> {
    let all = totally_cyclic_orientations(p.curve.graph());
    Ok(json!({ "count": all.len(), "orientations": to_value(&all) }))
}

fn circuits(p: &Problem) -> Result<Value, Error> {
    let all = oriented_circuits(p.curve.graph());
    let list: Vec<Value> = all
        .iter()
        .map(|c| {
            Value::Array(
                c.edges
                    .iter()
                    .map(|(e, d)| json!({ "edge": e.0, "direction": d }))
                    .collect(),
            )
        })
        .collect();
    Ok(json!({ "count": all.len(), "circuits": list }))
}

fn present(p: &Problem, name: RingName) -> Result<Value, Error> {
    let sheaf = require_sheaf(p)?;
    let mut v = to_value(&presentation(&p.curve, sheaf, name)?);
    if matches!(
        name,
        RingName::BHat | RingName::S2 | RingName::RXI | RingName::InvariantRXI
    ) {
        let problem = Problem {
            mode: Moduli::UniversalJacobian,
            ..p.clone()
        };
        v["warnings"] = to_value(&warnings(&problem));
    }
    Ok(v)
}

/// Pretty-printed canonical JSON.
pub fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dollar(extra: &str) -> String {
        format!(
            r#"{{"schema": "jacloc/1",
                "curve": {{"vertices": [{{"id": 0}}, {{"id": 1}}],
                          "edges": [{{"id": 0, "source": 0, "target": 1}},
                                    {{"id": 1, "source": 0, "target": 1}},
                                    {{"id": 2, "source": 0, "target": 1}}]}}
                {extra}}}"#
        )
    }

    fn run(text: &str, cmd: Command) -> Result<Value, Error> {
        execute(&ProblemSpec::from_json(text)?.build()?, &cmd)
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2").unwrap().to_string(), "1/2");
        assert_eq!(parse_rational("-2/4").unwrap().to_string(), "-1/2");
        assert_eq!(parse_rational("6/3").unwrap().to_string(), "2");
        for bad in ["0.5", "1/0", "", "1/-2", "+1", "1 / 2", "1e3", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn schema_rejections() {
        let float = dollar(r#", "phi": {"0": 0.5, "1": -0.5}"#);
        assert_eq!(ProblemSpec::from_json(&float).unwrap_err().name(), "SchemaViolation");
        let decimal = dollar(r#", "phi": {"0": "0.5", "1": "-0.5"}"#);
        assert_eq!(ProblemSpec::from_json(&decimal).unwrap_err().exit_code(), 2);
        let unknown = dollar(r#", "colour": "blue""#);
        assert!(ProblemSpec::from_json(&unknown).is_err());
        let wrong = dollar("").replace("jacloc/1", "jacloc/2");
        assert!(ProblemSpec::from_json(&wrong).is_err());
    }

    #[test]
    fn chambers_and_convert() {
        let out = run(&dollar(r#", "phi": {"0": 0, "1": 0}"#), Command::Chambers).unwrap();
        assert_eq!(out["stable_count"], 3);
        let out = run(&dollar(r#", "polarization": {"0": 1, "1": 2}"#), Command::Convert(None)).unwrap();
        assert_eq!(out["phi"], json!({"0": "1/6", "1": "-1/6"}));
        let out = run(&dollar(r#", "phi": {"0": "1/6", "1": "-1/6"}"#), Command::Convert(None)).unwrap();
        assert_eq!(
            out["d"].as_i64().unwrap()
                + out["line_bundle_M"]["0"].as_i64().unwrap()
                + out["line_bundle_M"]["1"].as_i64().unwrap(),
            0
        );
    }

    #[test]
    fn analyze_dollar() {
        let text = dollar(r#", "sheaf": {"degrees": {"0": 0, "1": 0}}, "phi": {"0": "1/2", "1": "-1/2"}"#);
        let out = run(&text, Command::Analyze).unwrap();
        assert_eq!(out["stability"]["verdict"]["status"], "stable");
        assert_eq!(out["local_report"]["smooth"], true);
        let err = run(
            &dollar(r#", "sheaf": {"degrees": {"0": 1, "1": 0}}, "phi": {"0": 0, "1": 0}"#),
            Command::Stability,
        )
        .unwrap_err();
        assert_eq!(
            (err.module(), err.name(), err.exit_code()),
            ("stability", "DegreeMismatch", 3)
        );
    }

    #[test]
    fn m_degree_mismatch() {
        let text = dollar(r#", "polarization": {"0": 1, "1": 1}, "line_bundle_M": {"0": 1, "1": 0}, "d": 0"#);
        assert_eq!(
            run(&text, Command::Convert(None)).unwrap_err().name(),
            "MDegreeMismatch"
        );
        let text = dollar(r#", "polarization": {"0": 1, "1": 1}, "line_bundle_M": {"0": 1, "1": 0}"#);
        assert_eq!(run(&text, Command::Convert(None)).unwrap()["total"], 0);
    }

    #[test]
    fn output_round_trips() {
        let text = dollar(
            r#", "sheaf": {"degrees": {"0": -1, "1": -2}, "nonfree": [0, 1, 2]}, "phi": {"0": "1/2", "1": "-1/2"}, "options": {"presentations": ["R_I", "InvariantRing_R_I"], "degree_bound": 4}"#,
        );
        let out = run(&text, Command::Analyze).unwrap();
        let printed = render_json(&out);
        let reparsed: Value = serde_json::from_str(&printed).unwrap();
        assert_eq!(render_json(&reparsed), printed);
        assert_eq!(out["stability"]["polystability"]["partition"], json!([[0], [1]]));
    }

    #[test]
    fn scale_limit() {
        let vertices: Vec<String> = (0..13).map(|i| format!(r#"{{"id": {i}}}"#)).collect();
        let edges: Vec<String> = (0..12)
            .map(|i| format!(r#"{{"id": {i}, "source": {i}, "target": {}}}"#, i + 1))
            .collect();
        let text = format!(
            r#"{{"schema": "jacloc/1", "curve": {{"vertices": [{}], "edges": [{}]}}}}"#,
            vertices.join(","),
            edges.join(",")
        );
        let err = ProblemSpec::from_json(&text).unwrap().build().unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
