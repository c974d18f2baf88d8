use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;
use ualg::congruence::{all_congruences, reflexive_implies_equivalence_report};
use ualg::lemmas::{run_harness, LemmaKind};
use ualg::witness::{generate_clone, has_maltsev_term_operation};
use ualg::Registry;

// The single-thread pool stands in for the sequential path; build with
// `--no-default-features` to measure the code without rayon at all.
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("parallel", ThreadPoolBuilder::new().build().unwrap()),
        ("one-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
    ]
}

fn exhaustive(c: &mut Criterion) {
    let reg = Registry::builtin().unwrap();
    let pool = reg.group_pool().unwrap();
    let d4 = reg.algebra("D4").unwrap().clone();
    let l5sq = reg.algebra("L5xL5").unwrap().clone();

    let mut group = c.benchmark_group("exhaustive");
    group.sample_size(10);
    for (label, threads) in pools() {
        group.bench_with_input(BenchmarkId::new("clone-D4-arity3", label), &d4, |b, alg| {
            b.iter(|| threads.install(|| generate_clone(alg, 3).unwrap().len()))
        });
        group.bench_with_input(BenchmarkId::new("maltsev-D4", label), &d4, |b, alg| {
            b.iter(|| threads.install(|| has_maltsev_term_operation(alg).unwrap().found()))
        });
        group.bench_with_input(BenchmarkId::new("congruences-L5xL5", label), &l5sq, |b, alg| {
            b.iter(|| threads.install(|| all_congruences(alg).unwrap().len()))
        });
        group.bench_with_input(BenchmarkId::new("reflexive-D4", label), &d4, |b, alg| {
            b.iter(|| threads.install(|| reflexive_implies_equivalence_report(alg, 8).unwrap().holds))
        });
        group.bench_function(BenchmarkId::new("harness-five-100", label), |b| {
            b.iter(|| threads.install(|| run_harness(&pool, LemmaKind::Five, 0, 100).unwrap().holds()))
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive);
criterion_main!(benches);
