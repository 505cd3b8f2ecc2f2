use cayley_core::classify::triple_report;
use cayley_core::oracle::{verify_spec, DEFAULT_BOUND};
use cayley_core::search::{enumerate_specs, SearchConfig};
use cayley_core::Execution;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn oracle_sweep(c: &mut Criterion) {
    let specs = enumerate_specs(&SearchConfig::new(60)).unwrap();
    let mut g = c.benchmark_group("oracle-verify-60");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.try_map(&specs, |s| verify_spec(s, DEFAULT_BOUND)).unwrap())
        });
    }
    g.finish();
}

fn classification_sweep(c: &mut Criterion) {
    let specs = enumerate_specs(&SearchConfig::new(2000)).unwrap();
    let mut g = c.benchmark_group("triple-reports-2000");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.try_map(&specs, triple_report).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, oracle_sweep, classification_sweep);
criterion_main!(benches);
