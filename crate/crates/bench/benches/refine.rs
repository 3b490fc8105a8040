use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use eigenwl::distances::{distance, DistanceKind};
use eigenwl::refinement::{stable_coloring, AlgorithmSpec};
use eigenwl::spectral::{decompose_graph, Precision};
use eigenwl::MatrixKind;
use eigenwl_bench::{exhaustive, random};

fn decompose(c: &mut Criterion) {
    let corpus = random(50, 16);
    let prec = Precision::default();
    let mut group = c.benchmark_group("decompose");
    for kind in MatrixKind::MAIN {
        group.bench_with_input(BenchmarkId::from_parameter(kind), &kind, |b, &kind| {
            b.iter(|| corpus.iter().map(|g| decompose_graph(g, kind, &prec).unwrap().len()).sum::<usize>())
        });
    }
    group.finish();
}

fn refine(c: &mut Criterion) {
    let corpus = exhaustive(6);
    let mut group = c.benchmark_group("stable_coloring_n6");
    group.sample_size(10);
    for spec in [AlgorithmSpec::Wl1, AlgorithmSpec::Epwl(MatrixKind::Adjacency), AlgorithmSpec::Pswl, AlgorithmSpec::Fwl2] {
        group.bench_function(spec.to_string(), |b| b.iter(|| stable_coloring(&spec, &corpus).unwrap().len()));
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let corpus = random(50, 12);
    let mut group = c.benchmark_group("distances");
    for kind in DistanceKind::all_default() {
        let name = kind.to_string();
        let label = name.split(':').next().unwrap().to_string();
        group.bench_function(label, |b| b.iter(|| corpus.iter().map(|g| distance(g, &kind).unwrap().n()).sum::<usize>()));
    }
    group.finish();
}

criterion_group!(benches, decompose, refine, distances);
criterion_main!(benches);
