mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use jacloc_core::curve::{CurveGraph, Polarization, SheafDatum, Subcurve};
use jacloc_core::graph::{
    circuit_to_circulation, oriented_circuits, totally_cyclic_orientations, Circulation, Direction, MultiGraph,
    VertexSet,
};
use jacloc_core::local::{gamma_of, local_report, presentation, Moduli, RingName};
use jacloc_core::stability::{
    count_stable_line_multidegrees, phi_polystable, phi_semistable, slope_polystable, slope_semistable, slope_to_phi,
    PhiParameter, Rational, StabilityStatus,
};
use jacloc_core::toric::{
    circuit_generators, hilbert_samuel, invariant_monomials_upto, local_component_count, multiplicity, weight_of, Mode,
    MonomialAB,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Whether every edge lies on a directed cycle: the head reaches the tail.
fn every_edge_on_cycle(g: &MultiGraph, dirs: &[Direction]) -> bool {
    let n = g.num_vertices();
    let arcs: Vec<(usize, usize)> = (0..g.num_edges())
        .map(|i| {
            let (s, t) = g.ends(i);
            if dirs[i] == Direction::Forward {
                (s, t)
            } else {
                (t, s)
            }
        })
        .collect();
    arcs.iter().all(|&(tail, head)| {
        let mut seen = vec![false; n];
        let mut stack = vec![head];
        seen[head] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &arcs {
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen[tail]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn betti_number_and_bridges(seed in any::<u64>()) {
        let g = random_connected(&mut rng(seed), 6, 5);
        prop_assert_eq!(g.b1(), g.num_edges() + 1 - g.num_vertices());
        prop_assert_eq!(g.separating_edges(), bridges_by_deletion(&g));
    }

    #[test]
    fn orientations_match_reachability_oracle(seed in any::<u64>()) {
        let g = random_connected(&mut rng(seed), 4, 4);
        let ne = g.num_edges();
        let mut oracle = 0;
        for mask in 0u32..1 << ne {
            let dirs: Vec<Direction> = (0..ne)
                .map(|i| if mask >> i & 1 == 0 { Direction::Forward } else { Direction::Backward })
                .collect();
            oracle += usize::from(every_edge_on_cycle(&g, &dirs));
        }
        let found = totally_cyclic_orientations(&g);
        prop_assert_eq!(found.len(), oracle);
        for o in &found {
            let dirs: Vec<Direction> = g.edges().iter().map(|e| o.assignment[&e.id]).collect();
            prop_assert!(every_edge_on_cycle(&g, &dirs));
        }
    }

    #[test]
    fn circuits_are_valid_and_paired(seed in any::<u64>()) {
        let g = random_connected(&mut rng(seed), 5, 4);
        let circuits = oriented_circuits(&g);
        let set: BTreeSet<_> = circuits.iter().map(|c| c.sort_key()).collect();
        prop_assert_eq!(set.len(), circuits.len());
        for c in &circuits {
            prop_assert!(c.is_valid_in(&g));
            prop_assert!(set.contains(&c.reversed().sort_key()));
            prop_assert!(circuit_to_circulation(c, &g).unwrap().has_zero_boundary(&g));
        }
    }

    #[test]
    fn complement_identity(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_curve(&mut r, 5, 4, 2);
        let sigma = random_sigma(&mut r, c.graph());
        let sheaf = SheafDatum::new(
            c.graph().vertices().iter().map(|&v| (v, r.gen_range(-3..=3))).collect(),
            sigma,
        );
        for y in c.subcurves() {
            prop_assert!(sheaf.degree_complement_identity_check(&c, &y).unwrap());
        }
    }

    #[test]
    fn gamma_vertices_equal_torus_rank(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_curve(&mut r, 5, 4, 1);
        let sigma = random_sigma(&mut r, c.graph());
        let sheaf = zero_sheaf(&c, sigma.clone());
        let gamma = gamma_of(&c, &sheaf).unwrap();
        prop_assert_eq!(gamma.num_vertices(), c.aut_torus_rank(&sheaf).unwrap());
        prop_assert_eq!(gamma.num_vertices(), components_without(c.graph(), &sigma));
        prop_assert!(gamma.b1() <= c.graph().b1());
    }

    #[test]
    fn phi_verdict_invariant_under_twist(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_curve(&mut r, 4, 4, 1);
        let sigma = random_sigma(&mut r, c.graph());
        let l = random_polarization(&mut r, &c, 3);
        let phi = slope_to_phi(&c, &l, None, 0).unwrap();
        let sheaf = SheafDatum::new(
            c.graph().vertices().iter().map(|&v| (v, r.gen_range(-2..=2))).collect(),
            sigma,
        );
        let shift = -sheaf.total_degree();
        let mut degs = sheaf.component_degree.clone();
        *degs.values_mut().next().unwrap() += shift;
        let sheaf = SheafDatum::new(degs, sheaf.nonfree.clone());
        let m = random_line_bundle(&mut r, &c, 2, 2);
        let shifted: BTreeMap<_, Rational> = phi
            .value()
            .iter()
            .map(|(v, x)| (*v, x + Rational::from_integer(BigInt::from(m.component_degree[v]))))
            .collect();
        let shifted = PhiParameter::new(shifted).unwrap();
        let a = phi_semistable(&c, &sheaf, &phi).unwrap();
        let b = phi_semistable(&c, &sheaf.twist(&m), &shifted).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(
            phi_polystable(&c, &sheaf, &phi).unwrap().polystable,
            phi_polystable(&c, &sheaf.twist(&m), &shifted).unwrap().polystable
        );
    }

    #[test]
    fn polystability_sits_between_stable_and_semistable(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = random_curve(&mut r, 4, 4, 1);
        let sigma = random_sigma(&mut r, c.graph());
        let l = random_polarization(&mut r, &c, 3);
        let d = sigma.len() as i64 + r.gen_range(-2..=2);
        let n = c.num_components();
        let free = d - sigma.len() as i64;
        let mut degs: Vec<i64> = (0..n).map(|_| r.gen_range(-2..=2)).collect();
        let s: i64 = degs.iter().sum();
        degs[n - 1] += free - s;
        let sheaf = SheafDatum::new(c.graph().vertices().iter().copied().zip(degs).collect(), sigma);
        let v = slope_semistable(&c, &sheaf, &l).unwrap();
        let p = slope_polystable(&c, &sheaf, &l).unwrap();
        if v.status == StabilityStatus::Stable {
            prop_assert!(p.polystable);
            prop_assert_eq!(p.partition.unwrap().len(), 1);
        }
        if p.polystable {
            prop_assert!(v.is_semistable());
        }
    }

    #[test]
    fn zero_weight_iff_circulation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_connected(&mut r, 4, 4);
        let mut m = MonomialAB::one(Mode::A);
        for e in g.edges() {
            match r.gen_range(-2i64..=2) {
                k if k > 0 => { m.x_exp.insert(e.id, k as u32); }
                k if k < 0 => { m.y_exp.insert(e.id, (-k) as u32); }
                _ => {}
            }
        }
        let flow = m.signed_exponents(&g).unwrap();
        prop_assert_eq!(weight_of(&m, &g).unwrap().is_zero(), flow.has_zero_boundary(&g));
    }
}

#[test]
fn circuit_generators_are_minimal() {
    for sg in connected_multigraphs(5) {
        let g = sg.to_multigraph();
        for c in circuit_generators(&g) {
            let support: Vec<usize> = (0..g.num_edges()).filter(|&i| c.circulation.flow[i] != 0).collect();
            // every sign-compatible y below c has entries in {0, c_e}
            for mask in 1u32..(1 << support.len()) - 1 {
                let mut flow = vec![0; g.num_edges()];
                for (k, &i) in support.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        flow[i] = c.circulation.flow[i];
                    }
                }
                assert!(!Circulation { flow }.has_zero_boundary(&g), "{sg:?}: {c:?} decomposes");
            }
        }
    }
}

#[test]
fn multiplicity_one_exactly_for_forests_of_bridges() {
    for sg in connected_multigraphs(4) {
        let g = sg.to_multigraph();
        let all_bridges = g.separating_edges().len() == g.num_edges();
        assert_eq!(multiplicity(&g).unwrap() == 1, all_bridges, "{sg:?}");
        if g.b1() == 1 {
            assert_eq!(multiplicity(&g).unwrap(), local_component_count(&g) as u64, "{sg:?}");
        }
    }
}

#[test]
fn hilbert_samuel_monotone() {
    for sg in connected_multigraphs(4) {
        let hs = hilbert_samuel(&sg.to_multigraph(), 8);
        assert_eq!(hs[0], 1);
        assert!(hs.windows(2).all(|w| w[0] <= w[1]), "{sg:?}: {hs:?}");
    }
}

#[test]
fn universal_counts_are_a_convolution() {
    for sg in connected_multigraphs(3) {
        let g = sg.to_multigraph();
        let ne = g.num_edges();
        for bound in 0..=5u32 {
            let a = invariant_monomials_upto(&g, bound, Mode::A).unwrap();
            let b = invariant_monomials_upto(&g, bound, Mode::B).unwrap();
            // #{t ∈ N^E : |t| = k} = binom(k + E - 1, E - 1)
            let t_count = |k: u64| {
                if ne == 0 {
                    u64::from(k == 0)
                } else {
                    binom(k + ne as u64 - 1, ne as u64 - 1)
                }
            };
            let expected: u64 = a
                .iter()
                .map(|m| (0..=u64::from((bound - m.degree()) / 2)).map(t_count).sum::<u64>())
                .sum();
            assert_eq!(b.len() as u64, expected, "{sg:?} D={bound}");
        }
    }
}

#[test]
fn invariant_generators_count_embedding_dimension() {
    for sg in connected_multigraphs(5) {
        let g = sg.to_multigraph();
        let c = rational_curve(&g);
        for sigma in all_sigmas(&g) {
            let s = zero_sheaf(&c, sigma);
            let r = local_report(&c, &s, Moduli::Jacobian).unwrap();
            // b1(Γ) ≤ b1(Γ_X) = g, so the W-count is never negative here
            let inv = presentation(&c, &s, RingName::InvariantRI).unwrap();
            assert_eq!(inv.generators.unwrap().len() as i64, r.embedding_dimension, "{sg:?}");
            assert!(r.embedding_dimension >= r.local_dimension);
            assert_eq!(r.invariant_ring_dimension, gamma_of(&c, &s).unwrap().b1());
        }
    }
}

#[test]
fn split_sheaves_are_polystable_by_both_routes() {
    let c = CurveGraph::dollar_sign();
    for (a, b) in [(1, 1), (1, 2), (2, 1), (3, 5)] {
        let l = Polarization::from_degrees(&c, &[a, b]).unwrap();
        for d0 in -4..=4 {
            for d1 in -4..=4 {
                let sheaf = SheafDatum::with_nonfree(&c, &[d0, d1], &[0, 1, 2]);
                let d = sheaf.total_degree();
                let phi = slope_to_phi(&c, &l, None, d).unwrap();
                let slope = slope_polystable(&c, &sheaf, &l).unwrap();
                let by_phi = phi_polystable(&c, &sheaf, &phi).unwrap();
                assert_eq!(slope.polystable, by_phi.polystable, "L=({a},{b}) I=({d0},{d1})");
                assert_eq!(slope.partition, by_phi.partition);
                assert_eq!(
                    slope_semistable(&c, &sheaf, &l).unwrap().status,
                    phi_semistable(&c, &sheaf, &phi).unwrap().status
                );
            }
        }
    }
}

#[test]
fn chamber_box_contains_every_semistable_multidegree() {
    let mut r = rng(11);
    for _ in 0..30 {
        let c = random_curve(&mut r, 3, 3, 1);
        let l = random_polarization(&mut r, &c, 4);
        let phi = slope_to_phi(&c, &l, None, 0).unwrap();
        let ch = count_stable_line_multidegrees(&c, &phi).unwrap();
        let n = c.num_components();
        let mut stable = 0;
        let mut semi = 0;
        let width = 6i64;
        let mut degs = vec![-width; n];
        loop {
            if degs.iter().sum::<i64>() == 0 {
                let s = SheafDatum::line_bundle(&c, &degs);
                match phi_semistable(&c, &s, &phi).unwrap().status {
                    StabilityStatus::Stable => stable += 1,
                    StabilityStatus::StrictlySemistable => semi += 1,
                    StabilityStatus::Unstable => {}
                }
            }
            let mut k = 0;
            while k < n && degs[k] == width {
                degs[k] = -width;
                k += 1;
            }
            if k == n {
                break;
            }
            degs[k] += 1;
        }
        assert_eq!((ch.stable.len(), ch.strictly_semistable.len()), (stable, semi));
    }
}

#[test]
fn subcurve_complements() {
    let c = CurveGraph::rational(MultiGraph::cycle(4)).unwrap();
    for y in c.subcurves() {
        let z = y.complement(&c);
        assert_eq!(y.vertices().union(z.vertices()), VertexSet::full(4));
        assert_eq!(c.cut_edges(&y), c.cut_edges(&z));
    }
    assert!(Subcurve::new(&c, VertexSet::full(4)).is_err());
}
