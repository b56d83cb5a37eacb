//! Slope and φ-stability of rank-1 torsion-free sheaves, in exact rational
//! arithmetic.
//!
//! A φ-parameter assigns a rational number to every component with integral
//! total `d`; a sheaf `I` of degree `d` is φ-semistable when
//! `deg(I_Y) ≥ φ_Y − #cut(Y)/2` for every subcurve `Y`, and φ-stable when all
//! of these inequalities are strict. Slope stability with respect to an ample
//! `L` is tested directly from the Hilbert polynomials of `I` and of the
//! restrictions `i_*(I_Y)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::curve::{CurveError, CurveGraph, LineBundleDatum, Polarization, SheafDatum, Subcurve};
use crate::graph::{VertexId, VertexSet};

pub type Rational = BigRational;

pub(crate) fn int(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

fn half(x: i64) -> Rational {
    Rational::new(BigInt::from(x), BigInt::from(2))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("sheaf has degree {sheaf_degree} but the parameter sums to {target_sum}")]
    DegreeMismatch { sheaf_degree: i64, target_sum: i64 },
    #[error("line bundle M has total degree {m_degree}, expected {expected}")]
    MDegreeMismatch { m_degree: i64, expected: i64 },
    #[error("parameter entries sum to {0}, which is not an integer")]
    NonIntegralSum(String),
    #[error("parameter must sum to 0, got {0}")]
    PhiSumNotZero(i64),
}

impl StabilityError {
    pub fn name(&self) -> &'static str {
        match self {
            StabilityError::Curve(c) => c.name(),
            StabilityError::DegreeMismatch { .. } => "DegreeMismatch",
            StabilityError::MDegreeMismatch { .. } => "MDegreeMismatch",
            StabilityError::NonIntegralSum(_) => "NonIntegralSum",
            StabilityError::PhiSumNotZero(_) => "PhiSumNotZero",
        }
    }
}

type Result<T> = std::result::Result<T, StabilityError>;

/// Stability parameter: a rational number per component, summing to an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiParameter {
    value: BTreeMap<VertexId, Rational>,
    target_sum: i64,
}

impl PhiParameter {
    pub fn new(value: BTreeMap<VertexId, Rational>) -> Result<Self> {
        let sum: Rational = value.values().sum();
        if !sum.is_integer() {
            return Err(StabilityError::NonIntegralSum(sum.to_string()));
        }
        let target_sum = sum
            .to_integer()
            .to_i64()
            .ok_or_else(|| StabilityError::NonIntegralSum(sum.to_string()))?;
        Ok(PhiParameter { value, target_sum })
    }

    /// Values listed in the curve's vertex order.
    pub fn from_values(curve: &CurveGraph, values: &[Rational]) -> Result<Self> {
        assert_eq!(values.len(), curve.num_components());
        PhiParameter::new(
            curve
                .graph()
                .vertices()
                .iter()
                .copied()
                .zip(values.iter().cloned())
                .collect(),
        )
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fractions(curve: &CurveGraph, values: &[(i64, i64)]) -> Result<Self> {
        let v: Vec<Rational> = values
            .iter()
            .map(|&(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
            .collect();
        PhiParameter::from_values(curve, &v)
    }

    pub fn value(&self) -> &BTreeMap<VertexId, Rational> {
        &self.value
    }

    pub fn get(&self, v: VertexId) -> Option<&Rational> {
        self.value.get(&v)
    }

    pub fn target_sum(&self) -> i64 {
        self.target_sum
    }

    fn aligned(&self, curve: &CurveGraph) -> Result<Vec<Rational>> {
        Ok(curve.aligned(&self.value)?)
    }
}

/// `P(t) = leading·t + constant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertPolynomial {
    pub leading: i64,
    pub constant: Rational,
}

impl HilbertPolynomial {
    /// `constant / leading`.
    pub fn slope(&self) -> Rational {
        &self.constant / int(self.leading)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for StabilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StabilityStatus::Stable => "stable",
            StabilityStatus::StrictlySemistable => "strictly semistable",
            StabilityStatus::Unstable => "unstable",
        };
        f.write_str(s)
    }
}

/// Outcome of a semistability test. Witnesses are the violating subcurves
/// when unstable, otherwise the subcurves attaining equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    pub witnesses: Vec<Subcurve>,
}

impl StabilityVerdict {
    /// Folds per-subcurve comparisons of `deg(I_Y)` against its bound.
    fn from_comparisons(cmps: impl IntoIterator<Item = (Subcurve, Ordering)>) -> Self {
        let mut violations = Vec::new();
        let mut equalities = Vec::new();
        for (y, c) in cmps {
            match c {
                Ordering::Less => violations.push(y),
                Ordering::Equal => equalities.push(y),
                Ordering::Greater => {}
            }
        }
        if !violations.is_empty() {
            StabilityVerdict {
                status: StabilityStatus::Unstable,
                witnesses: violations,
            }
        } else if !equalities.is_empty() {
            StabilityVerdict {
                status: StabilityStatus::StrictlySemistable,
                witnesses: equalities,
            }
        } else {
            StabilityVerdict {
                status: StabilityStatus::Stable,
                witnesses: Vec::new(),
            }
        }
    }

    pub fn is_semistable(&self) -> bool {
        self.status != StabilityStatus::Unstable
    }
}

/// Poly-stability answer with the witnessing decomposition of the components
/// into supports of stable direct summands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolystabilityCertificate {
    pub polystable: bool,
    pub partition: Option<Vec<BTreeSet<VertexId>>>,
}

/// Hilbert polynomial of `I` (when `y` is `None`) or of `i_*(I_Y)` with
/// respect to `L`.
pub fn hilbert_polynomial(
    curve: &CurveGraph,
    sheaf: &SheafDatum,
    polarization: &Polarization,
    y: Option<&Subcurve>,
) -> Result<HilbertPolynomial> {
    let set = y.map_or(curve.all_vertices(), |y| y.vertices());
    hilbert_polynomial_on(curve, sheaf, polarization, set)
}

/// `deg(L|_Y)·t + deg(I_Y) − deg(ω_X|_Y)/2 + #cut(Y)/2`; for `Y = X` this is
/// `deg(L)·t + deg(I) + 1 − g`.
fn hilbert_polynomial_on(
    curve: &CurveGraph,
    sheaf: &SheafDatum,
    polarization: &Polarization,
    set: VertexSet,
) -> Result<HilbertPolynomial> {
    let l = curve.aligned(&polarization.component_degree)?;
    let leading = set.indices().map(|i| l[i]).sum();
    let constant = int(sheaf.restricted_degree(curve, set)?) - half(curve.omega_degree(set))
        + half(curve.cut_edge_indices(set).len() as i64);
    Ok(HilbertPolynomial { leading, constant })
}

/// Slope semistability with respect to `L`: for every subcurve `Y`,
/// `deg(I_Y) ≥ deg(L|_Y)/deg(L)·(deg(I) − deg(ω)/2) + deg(ω|_Y)/2 − #cut(Y)/2`.
pub fn slope_semistable(
    curve: &CurveGraph,
    sheaf: &SheafDatum,
    polarization: &Polarization,
) -> Result<StabilityVerdict> {
    sheaf.validate(curve)?;
    let l = curve.aligned(&polarization.component_degree)?;
    let total_l = int(polarization.total_degree());
    let excess = int(sheaf.total_degree()) - half(curve.omega_degree_total());
    let mut cmps = Vec::new();
    for y in curve.subcurves() {
        let set = y.vertices();
        let l_y = int(set.indices().map(|i| l[i]).sum());
        let bound =
            &l_y / &total_l * &excess + half(curve.omega_degree(set)) - half(curve.cut_edge_indices(set).len() as i64);
        let deg = int(sheaf.restricted_degree(curve, set)?);
        cmps.push((y, deg.cmp(&bound)));
    }
    Ok(StabilityVerdict::from_comparisons(cmps))
}

/// Slope poly-stability, decided from Hilbert-polynomial slopes: `I` is a
/// direct sum of pieces `I_W` (every node joining two pieces is nonfree), each
/// with slope equal to that of `I` and slope-stable on its support.
pub fn slope_polystable(
    curve: &CurveGraph,
    sheaf: &SheafDatum,
    polarization: &Polarization,
) -> Result<PolystabilityCertificate> {
    sheaf.validate(curve)?;
    let mu = hilbert_polynomial_on(curve, sheaf, polarization, curve.all_vertices())?.slope();
    let piece_ok = |w: VertexSet| -> Result<bool> {
        if hilbert_polynomial_on(curve, sheaf, polarization, w)?.slope() != mu {
            return Ok(false);
        }
        for y in w.proper_subsets() {
            if hilbert_polynomial_on(curve, sheaf, polarization, y)?.slope() <= mu {
                return Ok(false);
            }
        }
        Ok(true)
    };
    search_partitions(curve, sheaf, piece_ok)
}

/// φ-semistability: `deg(I_Y) ≥ φ_Y − #cut(Y)/2` for every subcurve `Y`.
///
/// Requires `deg(I) = Σφ`. In debug builds the verdict is recomputed from the
/// equivalent upper-bound form and compared.
pub fn phi_semistable(curve: &CurveGraph, sheaf: &SheafDatum, phi: &PhiParameter) -> Result<StabilityVerdict> {
    check_degree(sheaf, phi)?;
    let values = phi.aligned(curve)?;
    let verdict = phi_verdict_on(curve, sheaf, &values, curve.all_vertices())?;
    debug_assert_eq!(
        verdict.status,
        phi_verdict_upper(curve, sheaf, &values)?.status,
        "lower and upper bound forms disagree"
    );
    Ok(verdict)
}

fn check_degree(sheaf: &SheafDatum, phi: &PhiParameter) -> Result<()> {
    let sheaf_degree = sheaf.total_degree();
    if sheaf_degree != phi.target_sum {
        return Err(StabilityError::DegreeMismatch {
            sheaf_degree,
            target_sum: phi.target_sum,
        });
    }
    Ok(())
}

/// Lower-bound test for the piece of `I` supported on `support`, against the
/// parameter restricted to the support: `φ'_v = φ_v − (edges from v leaving
/// the support)/2`, with cuts taken inside the support.
fn phi_verdict_on(
    curve: &CurveGraph,
    sheaf: &SheafDatum,
    values: &[Rational],
    support: VertexSet,
) -> Result<StabilityVerdict> {
    let g = curve.graph();
    let mut restricted: Vec<Rational> = values.to_vec();
    for i in curve.cut_edge_indices(support) {
        let (s, t) = g.ends(i);
        for v in [s, t] {
            if support.contains(v) {
                restricted[v] -= half(1);
            }
        }
    }
    let mut cmps = Vec::new();
    for set in support.proper_subsets() {
        let phi_y: Rational = set.indices().map(|i| &restricted[i]).sum();
        let bound = phi_y - half(curve.cut_within(set, support).len() as i64);
        let deg = int(sheaf.restricted_degree(curve, set)?);
        cmps.push((Subcurve::new(curve, set)?, deg.cmp(&bound)));
    }
    Ok(StabilityVerdict::from_comparisons(cmps))
}

/// Upper-bound form on the whole curve:
/// `deg(I_Y) ≤ φ_Y + #cut(Y)/2 − #(Σ ∩ cut(Y))`.
pub(crate) fn phi_verdict_upper(
    curve: &CurveGraph,
    sheaf: &SheafDatum,
    values: &[Rational],
) -> Result<StabilityVerdict> {
    let nonfree = curve.nonfree_mask(sheaf)?;
    let mut cmps = Vec::new();
    for y in curve.subcurves() {
        let set = y.vertices();
        let cut = curve.cut_edge_indices(set);
        let nonfree_cut = cut.iter().filter(|&&i| nonfree[i]).count() as i64;
        let phi_y: Rational = set.indices().map(|i| &values[i]).sum();
        let bound = phi_y + half(cut.len() as i64) - int(nonfree_cut);
        let deg = int(sheaf.restricted_degree(curve, set)?);
        // deg ≤ bound reads as bound ≥ deg
        cmps.push((y, bound.cmp(&deg)));
    }
    Ok(StabilityVerdict::from_comparisons(cmps))
}

/// φ-poly-stability: a partition of the components such that every node
/// joining two parts is nonfree, each part `W` satisfies
/// `deg(I_W) = φ_W − #cut(W)/2`, and the piece on `W` is φ-stable on its
/// support. The trivial partition is tried first, so a stable sheaf is
/// certified by itself.
pub fn phi_polystable(curve: &CurveGraph, sheaf: &SheafDatum, phi: &PhiParameter) -> Result<PolystabilityCertificate> {
    check_degree(sheaf, phi)?;
    let values = phi.aligned(curve)?;
    let piece_ok = |w: VertexSet| -> Result<bool> {
        let phi_w: Rational = w.indices().map(|i| &values[i]).sum();
        let expected = phi_w - half(curve.cut_edge_indices(w).len() as i64);
        if int(sheaf.restricted_degree(curve, w)?) != expected {
            return Ok(false);
        }
        Ok(phi_verdict_on(curve, sheaf, &values, w)?.status == StabilityStatus::Stable)
    };
    search_partitions(curve, sheaf, piece_ok)
}

/// Walks set partitions of the components (restricted growth strings, trivial
/// partition first) looking for one whose blocks are joined only by nonfree
/// nodes and all pass `piece_ok`.
fn search_partitions(
    curve: &CurveGraph,
    sheaf: &SheafDatum,
    mut piece_ok: impl FnMut(VertexSet) -> Result<bool>,
) -> Result<PolystabilityCertificate> {
    let n = curve.num_components();
    let g = curve.graph();
    let nonfree = curve.nonfree_mask(sheaf)?;
    let mut cache: BTreeMap<VertexSet, bool> = BTreeMap::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let separable = (0..g.num_edges()).all(|i| {
            let (s, t) = g.ends(i);
            rgs[s] == rgs[t] || nonfree[i]
        });
        if separable {
            let parts: Vec<VertexSet> = (0..blocks)
                .map(|b| VertexSet::from_indices((0..n).filter(|&v| rgs[v] == b)))
                .collect();
            let mut all_ok = true;
            for &w in &parts {
                let ok = match cache.get(&w) {
                    Some(&ok) => ok,
                    None => {
                        let ok = piece_ok(w)?;
                        cache.insert(w, ok);
                        ok
                    }
                };
                if !ok {
                    all_ok = false;
                    break;
                }
            }
            if all_ok {
                return Ok(PolystabilityCertificate {
                    polystable: true,
                    partition: Some(parts.into_iter().map(|w| curve.vertex_ids(w)).collect()),
                });
            }
        }
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    Ok(PolystabilityCertificate {
        polystable: false,
        partition: None,
    })
}

/// Advances a restricted growth string in lexicographic order.
fn next_rgs(a: &mut [usize]) -> bool {
    let n = a.len();
    for i in (1..n).rev() {
        let max_prefix = a[..i].iter().copied().max().unwrap_or(0);
        if a[i] <= max_prefix {
            a[i] += 1;
            for x in a[i + 1..].iter_mut() {
                *x = 0;
            }
            return true;
        }
    }
    false
}

/// `φ(L, M)`: `φ_i = deg(M|_i) + deg(ω|_i)/2 + (d − deg(ω)/2)·deg(L|_i)/deg(L)`.
///
/// With `M` given it must have total degree `−d`, and the result sums to 0.
/// With `M` omitted the trivial bundle is used and the result sums to `d`
/// (for `d = 0` this is the plain slope-to-φ conversion).
pub fn slope_to_phi(
    curve: &CurveGraph,
    polarization: &Polarization,
    m: Option<&LineBundleDatum>,
    d: i64,
) -> Result<PhiParameter> {
    let l = curve.aligned(&polarization.component_degree)?;
    let m_deg = match m {
        Some(m) => {
            if m.total_degree() != -d {
                return Err(StabilityError::MDegreeMismatch {
                    m_degree: m.total_degree(),
                    expected: -d,
                });
            }
            curve.aligned(&m.component_degree)?
        }
        None => vec![0; curve.num_components()],
    };
    let total_l = int(polarization.total_degree());
    let excess = int(d) - half(curve.omega_degree_total());
    let values = (0..curve.num_components())
        .map(|i| int(m_deg[i]) + half(curve.omega_degree(VertexSet::singleton(i))) + &excess * int(l[i]) / &total_l)
        .collect::<Vec<_>>();
    PhiParameter::from_values(curve, &values)
}

/// Finds `(L, M, d)` with `φ(L, M) = φ` for a rational φ summing to 0.
///
/// Chooses `deg(M|_i) = ⌈φ_i − deg(ω|_i)/2⌉ − 1`, so that
/// `a_i = φ_i − deg(M|_i) − deg(ω|_i)/2 ∈ (0, 1]` and `d = −deg(M) > g − 1`,
/// then `deg(L|_i) = e·a_i/(d − g + 1)` for the least `e` making all of these
/// integers.
pub fn phi_to_polarization(curve: &CurveGraph, phi: &PhiParameter) -> Result<(Polarization, LineBundleDatum, i64)> {
    if phi.target_sum != 0 {
        return Err(StabilityError::PhiSumNotZero(phi.target_sum));
    }
    let values = phi.aligned(curve)?;
    let n = curve.num_components();
    let mut m_deg = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    for (i, phi_i) in values.iter().enumerate() {
        let shifted = phi_i - half(curve.omega_degree(VertexSet::singleton(i)));
        let mi = shifted.ceil().to_integer() - BigInt::one();
        a.push(&shifted - Rational::from_integer(mi.clone()));
        m_deg.push(mi.to_i64().expect("line bundle degree fits in i64"));
    }
    let d = -m_deg.iter().sum::<i64>();
    let genus = curve.arithmetic_genus() as i64;
    let denom = d - genus + 1;
    debug_assert!(denom > 0 && a.iter().all(|x| x.is_positive()));
    let q: Vec<Rational> = a.iter().map(|x| x / int(denom)).collect();
    let e = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let l_deg: Vec<i64> = q
        .iter()
        .map(|x| {
            let v = x * Rational::from_integer(e.clone());
            debug_assert!(v.is_integer());
            v.to_integer().to_i64().expect("polarization degree fits in i64")
        })
        .collect();
    let l = Polarization::from_degrees(curve, &l_deg)?;
    Ok((l, LineBundleDatum::from_degrees(curve, &m_deg), d))
}

/// `I ⊗ M`.
pub fn twist(sheaf: &SheafDatum, m: &LineBundleDatum) -> SheafDatum {
    sheaf.twist(m)
}

/// Stable and strictly semistable line-bundle multidegrees of total degree
/// `Σφ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chambers {
    pub stable: Vec<BTreeMap<VertexId, i64>>,
    pub strictly_semistable: Vec<BTreeMap<VertexId, i64>>,
}

/// Classifies every line-bundle multidegree in the box
/// `⌈φ_v − c_v/2⌉ ≤ d_v ≤ ⌊φ_v + c_v/2⌋` (`c_v` the non-loop valence) with
/// the right total. Semistable multidegrees always lie in this box.
pub fn count_stable_line_multidegrees(curve: &CurveGraph, phi: &PhiParameter) -> Result<Chambers> {
    let values = phi.aligned(curve)?;
    let n = curve.num_components();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for (i, v) in values.iter().enumerate() {
        let c = half(curve.cut_edge_indices(VertexSet::singleton(i)).len() as i64);
        lo.push((v - &c).ceil().to_integer().to_i64().expect("bounded"));
        hi.push((v + &c).floor().to_integer().to_i64().expect("bounded"));
    }
    let mut out = Chambers::default();
    let mut current = lo.clone();
    let target = phi.target_sum;
    // suffix bounds prune the box walk to the right total
    let mut suffix_lo = vec![0i64; n + 1];
    let mut suffix_hi = vec![0i64; n + 1];
    for i in (0..n).rev() {
        suffix_lo[i] = suffix_lo[i + 1] + lo[i];
        suffix_hi[i] = suffix_hi[i + 1] + hi[i];
    }
    let mut visit = |degrees: &[i64]| -> Result<()> {
        let sheaf = SheafDatum::line_bundle(curve, degrees);
        let verdict = phi_semistable(curve, &sheaf, phi)?;
        let md = sheaf.component_degree;
        match verdict.status {
            StabilityStatus::Stable => out.stable.push(md),
            StabilityStatus::StrictlySemistable => out.strictly_semistable.push(md),
            StabilityStatus::Unstable => {}
        }
        Ok(())
    };
    struct Walk<'a> {
        target: i64,
        lo: &'a [i64],
        hi: &'a [i64],
        suffix_lo: &'a [i64],
        suffix_hi: &'a [i64],
    }
    impl Walk<'_> {
        fn run(
            &self,
            i: usize,
            partial: i64,
            current: &mut [i64],
            visit: &mut dyn FnMut(&[i64]) -> Result<()>,
        ) -> Result<()> {
            if i == self.lo.len() {
                if partial == self.target {
                    visit(current)?;
                }
                return Ok(());
            }
            for x in self.lo[i]..=self.hi[i] {
                let rest = self.target - partial - x;
                if rest < self.suffix_lo[i + 1] || rest > self.suffix_hi[i + 1] {
                    continue;
                }
                current[i] = x;
                self.run(i + 1, partial + x, current, visit)?;
            }
            Ok(())
        }
    }
    let walk = Walk {
        target,
        lo: &lo,
        hi: &hi,
        suffix_lo: &suffix_lo,
        suffix_hi: &suffix_hi,
    };
    walk.run(0, 0, &mut current, &mut visit)?;
    Ok(out)
}

/// Zero as a rational, for callers building parameters.
pub fn zero() -> Rational {
    Rational::zero()
}
