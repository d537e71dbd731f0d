//! Each workload runs twice: on the global rayon pool and inside a
//! one-thread pool. Build with `--no-default-features` to time the plain
//! sequential fallback instead.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mckay_core::cli::corpus;
use mckay_core::group::{conjugacy_classes, enumerate, FiniteGroup, DEFAULT_CAP};
use mckay_core::invariants::{reynolds, InvariantRing};
use mckay_core::polyval::parse_poly;
use mckay_core::strata::build_strata;

fn group(name: &str) -> FiniteGroup {
    enumerate(&corpus::lookup(name).unwrap().spec, DEFAULT_CAP).unwrap()
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    vec![("parallel", all), ("sequential", one)]
}

fn bench_enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    for name in ["symmetric_pairs(4)", "cyclic_wreath(2,3)"] {
        let spec = corpus::lookup(name).unwrap().spec;
        for (label, pool) in pools() {
            g.bench_with_input(BenchmarkId::new(label, name), &spec, |b, spec| {
                b.iter(|| pool.install(|| enumerate(spec, DEFAULT_CAP).unwrap()))
            });
        }
    }
    g.finish();
}

fn bench_classes_and_strata(c: &mut Criterion) {
    let mut g = c.benchmark_group("classes_strata");
    g.sample_size(10);
    let s4 = group("symmetric_pairs(4)");
    for (label, pool) in pools() {
        g.bench_function(BenchmarkId::new(label, "conjugacy_classes"), |b| {
            b.iter(|| pool.install(|| conjugacy_classes(&s4).unwrap()))
        });
        let classes = conjugacy_classes(&s4).unwrap();
        g.bench_function(BenchmarkId::new(label, "strata"), |b| {
            b.iter(|| pool.install(|| build_strata(&s4, &classes).unwrap()))
        });
    }
    g.finish();
}

fn bench_invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariants");
    g.sample_size(10);
    let s4 = group("symmetric_pairs(4)");
    let f = parse_poly("x1^3 * x3 * x6 + 2 * x2^2 * x8^2 + x4 * x5 * x7", s4.dim(), s4.cyclotomic_order()).unwrap();
    let bd = group("binary_dihedral(4)");
    for (label, pool) in pools() {
        g.bench_function(BenchmarkId::new(label, "reynolds_s4"), |b| {
            b.iter(|| pool.install(|| reynolds(&s4, &f).unwrap()))
        });
        g.bench_function(BenchmarkId::new(label, "basis_bd4_deg16"), |b| {
            // fresh ring each time so the degree cache does not hide the work
            b.iter(|| pool.install(|| InvariantRing::new(&bd).basis(16).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_enumeration, bench_classes_and_strata, bench_invariants);
criterion_main!(benches);
