//! Torus-invariant monomials of the local rings attached to a graph.
//!
//! In mode [`Mode::A`] the ambient ring is `k[[X_e, Y_e]]/(X_e Y_e)`; a nonzero
//! monomial is `X^{c+} Y^{c-}` for an integer vector `c`, and it is invariant
//! exactly when `c` is a circulation. Two such monomials multiply to zero
//! unless their circulations are sign-compatible. In mode [`Mode::B`] the
//! relation is `X_e Y_e = T_e`, so monomials are arbitrary `X^a Y^b` and the
//! invariant ones have `a - b` a circulation.
//!
//! Everything here works at the level of these monoids. The Hilbert–Samuel
//! function counts monomials of order at most `t`, the order of a monomial
//! being its longest factorization into minimal generators.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    circuit_to_circulation, oriented_circuits, totally_cyclic_orientations, Circulation, EdgeId, GraphError,
    MultiGraph, VertexId,
};

pub const DEFAULT_T_MAX: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("finite differences did not stabilize by t = {t_max}")]
    NonStabilized { t_max: u32, values: Vec<u64> },
}

impl ToricError {
    pub fn name(&self) -> &'static str {
        match self {
            ToricError::Graph(g) => g.name(),
            ToricError::NonStabilized { .. } => "NonStabilized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// `X_e Y_e = 0`.
    A,
    /// `X_e Y_e = T_e`.
    B,
}

/// A monomial in `X_e, Y_e` (and `T_e` in mode B). Only nonzero exponents are
/// stored. Normal form has `min(x_exp(e), y_exp(e)) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct MonomialAB {
    pub x_exp: BTreeMap<EdgeId, u32>,
    pub y_exp: BTreeMap<EdgeId, u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_exp: Option<BTreeMap<EdgeId, u32>>,
}

impl MonomialAB {
    pub fn one(mode: Mode) -> Self {
        MonomialAB {
            t_exp: (mode == Mode::B).then(BTreeMap::new),
            ..Default::default()
        }
    }

    /// Total degree, with `T_e` of degree 2.
    pub fn degree(&self) -> u32 {
        let t: u32 = self.t_exp.iter().flat_map(|m| m.values()).sum();
        self.x_exp.values().sum::<u32>() + self.y_exp.values().sum::<u32>() + 2 * t
    }

    /// Zero in mode A: some edge has both `X_e` and `Y_e`.
    pub fn is_zero_in_a(&self) -> bool {
        self.x_exp.keys().any(|e| self.y_exp.contains_key(e))
    }

    /// Rewrites `X_e Y_e -> T_e` until `min(x, y) = 0` on every edge.
    pub fn normalized_b(&self) -> Self {
        let mut x = self.x_exp.clone();
        let mut y = self.y_exp.clone();
        let mut t = self.t_exp.clone().unwrap_or_default();
        for (e, ye) in self.y_exp.iter() {
            if let Some(&xe) = self.x_exp.get(e) {
                let m = xe.min(*ye);
                *t.entry(*e).or_insert(0) += m;
                for (map, v) in [(&mut x, xe), (&mut y, *ye)] {
                    if v == m {
                        map.remove(e);
                    } else {
                        map.insert(*e, v - m);
                    }
                }
            }
        }
        MonomialAB {
            x_exp: x,
            y_exp: y,
            t_exp: Some(t),
        }
    }

    /// Signed exponent vector `x_exp - y_exp` in the edge order of `g`.
    pub fn signed_exponents(&self, g: &MultiGraph) -> Result<Circulation, GraphError> {
        let mut flow = vec![0i64; g.num_edges()];
        for (sign, map) in [(1, &self.x_exp), (-1, &self.y_exp)] {
            for (&e, &k) in map {
                let i = g.edge_index(e).ok_or(GraphError::UnknownEdge(e))?;
                flow[i] += sign * i64::from(k);
            }
        }
        Ok(Circulation { flow })
    }
}

impl fmt::Display for MonomialAB {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        let empty = BTreeMap::new();
        let edges: BTreeSet<EdgeId> = self
            .x_exp
            .keys()
            .chain(self.y_exp.keys())
            .chain(self.t_exp.as_ref().unwrap_or(&empty).keys())
            .copied()
            .collect();
        for e in edges {
            for (sym, map) in [
                ("X", &self.x_exp),
                ("Y", &self.y_exp),
                ("T", self.t_exp.as_ref().unwrap_or(&empty)),
            ] {
                match map.get(&e) {
                    Some(1) => factors.push(format!("{sym}_{e}")),
                    Some(&k) => factors.push(format!("{sym}_{e}^{k}")),
                    None => {}
                }
            }
        }
        if factors.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&factors.join(" "))
        }
    }
}

/// Exponents of `λ_v` by which the torus scales a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorusWeight {
    pub weight: BTreeMap<VertexId, i64>,
}

impl TorusWeight {
    pub fn is_zero(&self) -> bool {
        self.weight.values().all(|&w| w == 0)
    }
}

/// `λ·X_e = λ_{s(e)} X_e λ_{t(e)}^{-1}`, `λ·Y_e = λ_{t(e)} Y_e λ_{s(e)}^{-1}`,
/// `λ·T_e = T_e`.
pub fn weight_of(m: &MonomialAB, g: &MultiGraph) -> Result<TorusWeight, GraphError> {
    let mut w = vec![0i64; g.num_vertices()];
    for (sign, map) in [(1, &m.x_exp), (-1, &m.y_exp)] {
        for (&e, &k) in map {
            let i = g.edge_index(e).ok_or(GraphError::UnknownEdge(e))?;
            let (s, t) = g.ends(i);
            w[s] += sign * i64::from(k);
            w[t] -= sign * i64::from(k);
        }
    }
    for e in m.t_exp.iter().flat_map(|t| t.keys()) {
        g.edge_index(*e).ok_or(GraphError::UnknownEdge(*e))?;
    }
    Ok(TorusWeight {
        weight: g.vertices().iter().copied().zip(w).collect(),
    })
}

/// Every nonzero normal-form monomial of degree at most `max_degree` with
/// zero torus weight, found by exhausting all exponent vectors. Sorted by
/// degree, then lexicographically.
pub fn invariant_monomials_upto(g: &MultiGraph, max_degree: u32, mode: Mode) -> Result<Vec<MonomialAB>, GraphError> {
    let ne = g.num_edges();
    let ids: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    let mut out = Vec::new();
    let mut signed = vec![0i64; ne];
    let mut t = vec![0u32; ne];
    let mut emit = |signed: &[i64], t: &[u32]| -> Result<(), GraphError> {
        let mut m = MonomialAB::one(mode);
        for i in 0..ne {
            match signed[i] {
                s if s > 0 => {
                    m.x_exp.insert(ids[i], s as u32);
                }
                s if s < 0 => {
                    m.y_exp.insert(ids[i], (-s) as u32);
                }
                _ => {}
            }
            if let Some(tm) = m.t_exp.as_mut() {
                if t[i] > 0 {
                    tm.insert(ids[i], t[i]);
                }
            }
        }
        if weight_of(&m, g)?.is_zero() {
            out.push(m);
        }
        Ok(())
    };
    enumerate_exponents(0, max_degree, mode, &mut signed, &mut t, &mut emit)?;
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    Ok(out)
}

type Emit<'a> = dyn FnMut(&[i64], &[u32]) -> Result<(), GraphError> + 'a;

fn enumerate_exponents(
    i: usize,
    budget: u32,
    mode: Mode,
    signed: &mut Vec<i64>,
    t: &mut Vec<u32>,
    emit: &mut Emit<'_>,
) -> Result<(), GraphError> {
    if i == signed.len() {
        return emit(signed, t);
    }
    let max_t = if mode == Mode::B { budget / 2 } else { 0 };
    for ti in 0..=max_t {
        let rest = budget - 2 * ti;
        for s in -(rest as i64)..=(rest as i64) {
            signed[i] = s;
            t[i] = ti;
            enumerate_exponents(i + 1, rest - s.unsigned_abs() as u32, mode, signed, t, emit)?;
        }
    }
    signed[i] = 0;
    t[i] = 0;
    Ok(())
}

/// A nonzero invariant monomial of mode A, identified with its circulation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirculationMonoidElement {
    pub circulation: Circulation,
}

impl CirculationMonoidElement {
    pub fn identity(num_edges: usize) -> Self {
        CirculationMonoidElement {
            circulation: Circulation::zero(num_edges),
        }
    }

    pub fn degree(&self) -> u64 {
        self.circulation.l1()
    }

    /// `X^{c+} Y^{c-}`.
    pub fn to_monomial(&self, g: &MultiGraph) -> MonomialAB {
        let mut m = MonomialAB::one(Mode::A);
        for (e, f) in g.edges().iter().zip(&self.circulation.flow) {
            if *f > 0 {
                m.x_exp.insert(e.id, *f as u32);
            } else if *f < 0 {
                m.y_exp.insert(e.id, (-*f) as u32);
            }
        }
        m
    }
}

/// Circulations of the oriented circuits, in circuit order.
pub fn circuit_generators(g: &MultiGraph) -> Vec<CirculationMonoidElement> {
    oriented_circuits(g)
        .iter()
        .map(|c| CirculationMonoidElement {
            circulation: circuit_to_circulation(c, g).expect("circuit edges belong to the graph"),
        })
        .collect()
}

/// Product in the monoid with zero: `None` when the two circulations have
/// strictly opposite signs on a common edge.
pub fn monoid_product(a: &CirculationMonoidElement, b: &CirculationMonoidElement) -> Option<CirculationMonoidElement> {
    let flow = conformal_sum(&a.circulation.flow, &b.circulation.flow)?;
    Some(CirculationMonoidElement {
        circulation: Circulation { flow },
    })
}

fn conformal_sum(a: &[i64], b: &[i64]) -> Option<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| if x.signum() * y.signum() < 0 { None } else { Some(x + y) })
        .collect()
}

/// All products of circuit generators of degree at most `max_degree`, as
/// monomials sorted like [`invariant_monomials_upto`].
pub fn generated_upto(g: &MultiGraph, max_degree: u32) -> Vec<MonomialAB> {
    let gens = circuit_generators(g);
    let mut seen: BTreeSet<CirculationMonoidElement> = BTreeSet::new();
    let identity = CirculationMonoidElement::identity(g.num_edges());
    let mut frontier = vec![identity.clone()];
    seen.insert(identity);
    while let Some(x) = frontier.pop() {
        for h in &gens {
            if x.degree() + h.degree() > u64::from(max_degree) {
                continue;
            }
            if let Some(p) = monoid_product(&x, h) {
                if seen.insert(p.clone()) {
                    frontier.push(p);
                }
            }
        }
    }
    let mut out: Vec<MonomialAB> = seen.iter().map(|c| c.to_monomial(g)).collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    out
}

/// Minimal generators of the mode-B invariant monoid: `X^{c+} Y^{c-}` for
/// each oriented circuit `c`, and `T_e` for each non-loop edge (for a loop,
/// `T_e = X_e Y_e` is already a product of the two loop circuits).
pub fn universal_generators(g: &MultiGraph) -> Vec<MonomialAB> {
    let mut out: Vec<MonomialAB> = circuit_generators(g)
        .iter()
        .map(|c| {
            let mut m = c.to_monomial(g);
            m.t_exp = Some(BTreeMap::new());
            m
        })
        .collect();
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        let mut m = MonomialAB::one(Mode::B);
        m.t_exp.as_mut().expect("mode B").insert(e.id, 1);
        out.push(m);
    }
    out
}

/// Minimal generators as exponent vectors of the graded monoid.
///
/// Mode A: signed flows of length `#E`. Mode B: `(a, b)` concatenated, length
/// `2·#E`.
fn monoid_generators(g: &MultiGraph, mode: Mode) -> Vec<Vec<i64>> {
    let ne = g.num_edges();
    let circuits = circuit_generators(g);
    match mode {
        Mode::A => circuits.into_iter().map(|c| c.circulation.flow).collect(),
        Mode::B => {
            let mut gens: Vec<Vec<i64>> = circuits
                .iter()
                .map(|c| {
                    let f = &c.circulation.flow;
                    f.iter()
                        .map(|&x| x.max(0))
                        .chain(f.iter().map(|&x| (-x).max(0)))
                        .collect()
                })
                .collect();
            for (i, e) in g.edges().iter().enumerate() {
                if !e.is_loop() {
                    let mut v = vec![0; 2 * ne];
                    v[i] = 1;
                    v[ne + i] = 1;
                    gens.push(v);
                }
            }
            gens
        }
    }
}

/// Incremental Hilbert–Samuel counter for one of the two monoids.
struct OrderCounter {
    mode: Mode,
    gens: Vec<Vec<i64>>,
    order: HashMap<Vec<i64>, u32>,
    /// elements needing exactly `k` generators at minimum, for the current `k`
    layer: Vec<Vec<i64>>,
    discovered: u32,
    by_order: Vec<u64>,
}

impl OrderCounter {
    fn new(g: &MultiGraph, mode: Mode) -> Self {
        let gens = monoid_generators(g, mode);
        let dim = match mode {
            Mode::A => g.num_edges(),
            Mode::B => 2 * g.num_edges(),
        };
        let zero = vec![0; dim];
        let mut order = HashMap::new();
        order.insert(zero.clone(), 0);
        OrderCounter {
            mode,
            gens,
            order,
            layer: vec![zero],
            discovered: 0,
            by_order: vec![1],
        }
    }

    fn product(&self, x: &[i64], h: &[i64]) -> Option<Vec<i64>> {
        match self.mode {
            Mode::A => conformal_sum(x, h),
            Mode::B => Some(x.iter().zip(h).map(|(a, b)| a + b).collect()),
        }
    }

    /// `h` divides `x` in the monoid.
    fn divides(&self, h: &[i64], x: &[i64]) -> bool {
        match self.mode {
            Mode::A => h
                .iter()
                .zip(x)
                .all(|(&a, &b)| a == 0 || (a.signum() == b.signum() && a.abs() <= b.abs())),
            Mode::B => h.iter().zip(x).all(|(a, b)| a <= b),
        }
    }

    /// Longest factorization of `x` into generators.
    fn ord(&mut self, x: &[i64]) -> u32 {
        if let Some(&k) = self.order.get(x) {
            return k;
        }
        let mut best = 0;
        for gi in 0..self.gens.len() {
            if self.divides(&self.gens[gi], x) {
                let rest: Vec<i64> = x.iter().zip(&self.gens[gi]).map(|(a, b)| a - b).collect();
                best = best.max(1 + self.ord(&rest));
            }
        }
        self.order.insert(x.to_vec(), best);
        best
    }

    /// Returns `HS(t)` for the next `t`; the first call gives `HS(0)`.
    fn next_value(&mut self) -> u64 {
        let t = self.discovered;
        if t > 0 {
            // every element of order ≤ t is a product of at most t generators
            let mut next = Vec::new();
            let mut fresh: BTreeSet<Vec<i64>> = BTreeSet::new();
            for x in &self.layer {
                for h in &self.gens {
                    if let Some(p) = self.product(x, h) {
                        if !self.order.contains_key(&p) && !fresh.contains(&p) {
                            fresh.insert(p.clone());
                            next.push(p);
                        }
                    }
                }
            }
            for x in &next {
                let k = self.ord(x) as usize;
                if self.by_order.len() <= k {
                    self.by_order.resize(k + 1, 0);
                }
                self.by_order[k] += 1;
            }
            self.layer = next;
        }
        self.discovered += 1;
        self.by_order.iter().take(t as usize + 1).sum()
    }
}

/// `HS(t)` for `t = 0..=t_max`: the number of invariant monomials of order at
/// most `t` (the length of `R/m^{t+1}`).
pub fn hilbert_samuel(g: &MultiGraph, t_max: u32) -> Vec<u64> {
    hilbert_samuel_in(g, Mode::A, t_max)
}

pub fn hilbert_samuel_in(g: &MultiGraph, mode: Mode, t_max: u32) -> Vec<u64> {
    let mut counter = OrderCounter::new(g, mode);
    (0..=t_max).map(|_| counter.next_value()).collect()
}

/// Krull dimension of the invariant ring: `b1` in mode A, `b1 + #E` in mode B.
pub fn invariant_dimension(g: &MultiGraph, mode: Mode) -> usize {
    match mode {
        Mode::A => g.b1(),
        Mode::B => g.b1() + g.num_edges(),
    }
}

/// Hilbert–Samuel multiplicity of the mode-A invariant ring, with the default
/// `t_max`.
pub fn multiplicity(g: &MultiGraph) -> Result<u64, ToricError> {
    multiplicity_in(g, Mode::A, DEFAULT_T_MAX)
}

/// The `d`-th finite difference of `HS`, `d` the dimension, once it has been
/// constant on `d + 2` consecutive values of `t`.
pub fn multiplicity_in(g: &MultiGraph, mode: Mode, t_max: u32) -> Result<u64, ToricError> {
    let d = invariant_dimension(g, mode);
    if d == 0 {
        return Ok(1);
    }
    let mut counter = OrderCounter::new(g, mode);
    let mut hs: Vec<i128> = Vec::new();
    let mut diffs: Vec<i128> = Vec::new();
    for t in 0..=t_max as usize {
        hs.push(i128::from(counter.next_value()));
        if t < d {
            continue;
        }
        diffs.push(finite_difference(&hs[t - d..=t]));
        let window = d + 2;
        if diffs.len() >= window
            && diffs[diffs.len() - window..]
                .iter()
                .all(|&x| x == diffs[diffs.len() - 1])
        {
            let e = diffs[diffs.len() - 1];
            return u64::try_from(e).map_err(|_| ToricError::NonStabilized {
                t_max,
                values: hs.iter().map(|&v| v as u64).collect(),
            });
        }
    }
    Err(ToricError::NonStabilized {
        t_max,
        values: hs.iter().map(|&v| v as u64).collect(),
    })
}

/// `Δ^{n-1}` of `values` evaluated at the last entry.
fn finite_difference(values: &[i128]) -> i128 {
    let mut v = values.to_vec();
    while v.len() > 1 {
        v = v.windows(2).map(|w| w[1] - w[0]).collect();
    }
    v[0]
}

/// Number of totally cyclic orientations of `g` once its bridges are deleted.
pub fn local_component_count(g: &MultiGraph) -> usize {
    totally_cyclic_orientations(&g.without_bridges()).len().max(1)
}
