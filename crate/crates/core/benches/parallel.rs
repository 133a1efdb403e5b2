use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcldpc::bounds::exhaustive_search;
use qcldpc::construct::construct_d1;
use qcldpc::girth::{compare_checkers_many, girth_lifted_with};
use qcldpc::lifting::lift;
use qcldpc::sim::{random_lifting, simulate, SimConfig};
use qcldpc::Workers;

const MODES: [(&str, Workers); 2] = [("sequential", Workers::Sequential), ("auto", Workers::Auto)];

fn girth(c: &mut Criterion) {
    let mut g = c.benchmark_group("girth_lifted");
    for l in [8usize, 16] {
        let h = lift(&construct_d1(l).unwrap().e_min);
        for (name, w) in MODES {
            g.bench_with_input(BenchmarkId::new(name, l), &h, |b, h| {
                b.iter(|| girth_lifted_with(black_box(h), w).unwrap())
            });
        }
    }
    g.finish();
}

fn checkers(c: &mut Criterion) {
    let matrices: Vec<_> = (0..200)
        .map(|s| random_lifting(3, 6, 37, s).unwrap())
        .collect();
    let mut g = c.benchmark_group("compare_checkers_many");
    for (name, w) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| compare_checkers_many(black_box(&matrices), w).unwrap())
        });
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("exhaustive_search");
    g.sample_size(10);
    for (name, w) in MODES {
        g.bench_function(BenchmarkId::new(name, "L5_p16"), |b| {
            b.iter(|| exhaustive_search(5, 16, w).unwrap())
        });
    }
    g.finish();
}

fn sim(c: &mut Criterion) {
    let h = lift(&construct_d1(5).unwrap().e_min);
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    for (name, w) in MODES {
        let cfg = SimConfig {
            snr_db: vec![2.0],
            max_frames: 2048,
            max_frame_errors: u64::MAX,
            workers: w,
            ..SimConfig::default()
        };
        g.bench_function(name, |b| b.iter(|| simulate(black_box(&h), &cfg).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, girth, checkers, search, sim);
criterion_main!(benches);
