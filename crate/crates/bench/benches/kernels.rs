use std::hint::black_box;

use centralab::centralizers::kp_bicentralizer;
use centralab::matcore::schmidt;
use centralab::metrology::estimate_constant;
use centralab::{Centralizer, CentralizerSpec, EstimateKind, LipschitzFn, PIndex, Sampler, SamplerTag};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_schmidt(c: &mut Criterion) {
    let mut group = c.benchmark_group("schmidt");
    for n in [8, 32, 128] {
        let f = Sampler::new(1, n, PIndex::ONE, SamplerTag::Ginibre).sample(0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| schmidt(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn bench_kp(c: &mut Criterion) {
    let mut group = c.benchmark_group("kp_bicentralizer");
    for n in [8, 32, 128] {
        let f = Sampler::new(2, n, PIndex::ONE, SamplerTag::HaarSpectral).sample(0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| kp_bicentralizer(black_box(f), &LipschitzFn::S, PIndex::ONE).unwrap())
        });
    }
    group.finish();
}

fn bench_estimate(c: &mut Criterion) {
    let map = Centralizer::new(CentralizerSpec::kalton_peck(PIndex::ONE));
    let mut group = c.benchmark_group("estimate_constant");
    group.sample_size(10);
    for n in [8, 32] {
        let sampler = Sampler::new(3, n, PIndex::ONE, SamplerTag::HaarSpectral);
        group.bench_with_input(BenchmarkId::new("Q_200", n), &sampler, |b, s| {
            b.iter(|| estimate_constant(&map, EstimateKind::Q, s, 200, PIndex::ONE).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_schmidt, bench_kp, bench_estimate);
criterion_main!(benches);
