use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jacloc_bench::{all_nonfree, balanced, complete, graphs, toric_graphs};
use jacloc_core::graph::{oriented_circuits, totally_cyclic_orientations};
use jacloc_core::local::local_report;
use jacloc_core::stability::{count_stable_line_multidegrees, phi_polystable};
use jacloc_core::toric::{invariant_monomials_upto, multiplicity};
use jacloc_core::{Mode, Moduli};

fn orientations(c: &mut Criterion) {
    let mut group = c.benchmark_group("orientations");
    for (name, g) in graphs() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| {
            b.iter(|| totally_cyclic_orientations(black_box(g)).len())
        });
    }
    group.finish();
}

fn circuits(c: &mut Criterion) {
    let mut group = c.benchmark_group("circuits");
    for (name, g) in graphs() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| {
            b.iter(|| oriented_circuits(black_box(g)).len())
        });
    }
    group.finish();
}

fn toric(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiplicity");
    for (name, g) in toric_graphs() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &g, |b, g| {
            b.iter(|| multiplicity(black_box(g)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("invariant_monomials_upto");
    let k4 = complete(4);
    for bound in [2u32, 4, 6] {
        group.bench_with_input(BenchmarkId::new("k4", bound), &bound, |b, &bound| {
            b.iter(|| invariant_monomials_upto(black_box(&k4), bound, Mode::A).unwrap().len())
        });
    }
    group.finish();
}

fn stability(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi_polystable");
    for (name, g) in graphs() {
        let (curve, sheaf, phi) = balanced(g);
        group.bench_function(name, |b| {
            b.iter(|| phi_polystable(&curve, black_box(&sheaf), &phi).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("chambers");
    for (name, g) in graphs() {
        let (curve, _, phi) = balanced(g);
        group.bench_function(name, |b| {
            b.iter(|| count_stable_line_multidegrees(&curve, black_box(&phi)).unwrap())
        });
    }
    group.finish();
}

fn report(c: &mut Criterion) {
    let mut group = c.benchmark_group("local_report");
    for (name, g) in toric_graphs() {
        let (curve, sheaf) = all_nonfree(g);
        group.bench_function(name, |b| {
            b.iter(|| local_report(&curve, black_box(&sheaf), Moduli::Jacobian).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, orientations, circuits, toric, stability, report);
criterion_main!(benches);
