//! Rayon's default pool versus a one-thread pool on the data-parallel paths:
//! row-parallel elimination, per-block decoding and audit trials.
//! Building with `--no-default-features` removes rayon entirely.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gabkron::audit::verify_structure_lemmas;
use gabkron::gabkron::{decrypt, encrypt, keygen, setup_named};
use gabkron::gf2m::FieldCtx;
use gabkron::ranklinalg::{RankMatrix, RankVector};
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;
use rayon::{ThreadPool, ThreadPoolBuilder};

fn pools() -> Vec<(&'static str, ThreadPool)> {
    vec![
        ("parallel", ThreadPoolBuilder::new().build().unwrap()),
        ("single-thread", ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
    ]
}

fn bench_invert(c: &mut Criterion) {
    let ctx = Arc::new(FieldCtx::standard(90).unwrap());
    let mut rng = SplitMix64::seed_from_u64(1);
    let m = RankMatrix::random(ctx, 180, 180, &mut rng);
    let mut g = c.benchmark_group("invert_180x180_gf2^90");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| black_box(m.invert().unwrap())))
        });
    }
    g.finish();
}

fn bench_decrypt(c: &mut Criterion) {
    let p = setup_named("new-gabkron-128").unwrap();
    let mut rng = SplitMix64::seed_from_u64(2);
    let kp = keygen(&p, &mut rng).unwrap();
    let m = RankVector::random(kp.pk.g_pub.ctx().clone(), p.k, &mut rng);
    let ct = encrypt(&kp.pk, &m, &mut rng).unwrap();
    let mut g = c.benchmark_group("decrypt_new-gabkron-128");
    g.sample_size(20);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| black_box(decrypt(&kp.sk, &ct).unwrap())))
        });
    }
    g.finish();
}

fn bench_keygen(c: &mut Criterion) {
    let p = setup_named("new-gabkron-128").unwrap();
    let mut g = c.benchmark_group("keygen_new-gabkron-128");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| black_box(keygen(&p, &mut SplitMix64::seed_from_u64(3)).unwrap())))
        });
    }
    g.finish();
}

fn bench_lemmas(c: &mut Criterion) {
    let mut g = c.benchmark_group("structure_lemmas_50_trials");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pool.install(|| black_box(verify_structure_lemmas(4, 50))))
        });
    }
    g.finish();
}

criterion_group!(benches, bench_invert, bench_decrypt, bench_keygen, bench_lemmas);
criterion_main!(benches);
