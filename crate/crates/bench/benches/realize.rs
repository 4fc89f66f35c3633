use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use randreal::separability::LpMode;
use randreal::{
    lp_realizability, realize_graph, realize_tree, required_dimension_tree, uniform_spanning_tree,
    verify_realization, CensusParams, FamilySpec, Graph,
};
use randreal_bench::{graph_instance, tree_instance};
use std::hint::black_box;

fn census(c: &mut Criterion) {
    let d = required_dimension_tree(20).unwrap() as usize;
    let (t, f) = tree_instance(20, d, 1);
    let params = CensusParams::default();
    c.bench_function("census n=20 d=51767", |b| b.iter(|| realize_tree(black_box(&t), &f, &params).unwrap()));
    let (w, _) = realize_tree(&t, &f, &params).unwrap();
    c.bench_function("verify n=20 d=51767", |b| b.iter(|| verify_realization(t.graph(), black_box(&f), &w).unwrap()));
}

fn graph_census(c: &mut Criterion) {
    let g = Graph::cycle(10).unwrap();
    let (_, f) = graph_instance(10, 0.0, 79_578, 2);
    let params = CensusParams::default();
    c.bench_function("forest census C10 d=79578", |b| {
        b.iter(|| realize_graph(&g, black_box(&f), &FamilySpec::ForestPartition, &params, 3).unwrap())
    });
}

fn exact_lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("lp");
    for d in [4usize, 16, 64] {
        let (g, f) = graph_instance(8, 0.5, d, 4);
        for mode in [LpMode::Nonnegative, LpMode::Free] {
            group.bench_with_input(BenchmarkId::new(mode.name(), d), &d, |b, _| {
                b.iter(|| lp_realizability(&g, black_box(&f), mode).unwrap())
            });
        }
    }
    group.finish();
}

fn wilson(c: &mut Criterion) {
    let g = Graph::grid(10, 10);
    let mut seed = 0u64;
    c.bench_function("wilson grid 10x10", |b| {
        b.iter(|| {
            seed += 1;
            uniform_spanning_tree(&g, seed).unwrap()
        })
    });
}

criterion_group!(benches, census, graph_census, exact_lp, wilson);
criterion_main!(benches);
