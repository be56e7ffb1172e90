use std::hint::black_box;

use catalyst_core::catalysis::{
    transpile_t_to_cs, verify_adder_catalysis, verify_synth_small_phase,
};
use catalyst_core::circuit::random::{random_clifford_t, random_element};
use catalyst_core::circuit::{simulate, Observable};
use catalyst_core::estimator::{build_ensemble, exact_value, qp_estimate, Allocation};
use catalyst_core::zh::random::{random_diagram, RandomSpec};
use catalyst_core::zh::{eval_tensor, extract_catalyst};
use catalyst_core::Tower;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ring(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in [3, 5] {
        let t = Tower::cyclotomic(k).unwrap();
        let a = random_element(&mut rng, &t, 8);
        let b = random_element(&mut rng, &t, 8);
        c.bench_with_input(BenchmarkId::new("ring_mul", k), &(a, b), |bch, (a, b)| {
            bch.iter(|| black_box(a) * black_box(b))
        });
    }
}

fn circuits(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = Tower::clifford_t();
    let mut g = c.benchmark_group("circuit");
    for width in [4, 8] {
        let circ = random_clifford_t(&mut rng, width, 40, 6);
        g.bench_with_input(BenchmarkId::new("simulate", width), &circ, |b, circ| {
            b.iter(|| simulate(circ, &t).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("t_to_cs", width), &circ, |b, circ| {
            b.iter(|| transpile_t_to_cs(circ).unwrap())
        });
    }
    g.finish();
}

fn gadgets(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("adder_4", |b| b.iter(|| verify_adder_catalysis(4).unwrap()));
    g.bench_function("synth_4_11", |b| {
        b.iter(|| verify_synth_small_phase(4, 11).unwrap())
    });
    g.finish();
}

fn estimator(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let circ = random_clifford_t(&mut rng, 4, 20, 4);
    let obs = Observable::new(vec![catalyst_core::circuit::Pauli::Z; 4]);
    let e = build_ensemble(&circ, &obs).unwrap();
    let mut g = c.benchmark_group("estimator");
    g.sample_size(20);
    g.bench_function("exact_value", |b| b.iter(|| exact_value(&e).unwrap()));
    g.bench_function("qp_estimate_1e4", |b| {
        b.iter(|| qp_estimate(&e, 10_000, 7, Allocation::Sampled).unwrap())
    });
    g.finish();
}

fn zh(c: &mut Criterion) {
    let t = Tower::clifford_t();
    let w = t.generator(1);
    let mut spec = RandomSpec::with_catalyst(&t, &w);
    spec.max_nodes = 10;
    spec.max_a_boxes = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ds: Vec<_> = (0..16).map(|_| random_diagram(&mut rng, &spec)).collect();
    let mut g = c.benchmark_group("zh");
    g.bench_function("eval_16", |b| {
        b.iter(|| {
            ds.iter()
                .map(|d| eval_tensor(d, &t).unwrap())
                .collect::<Vec<_>>()
        })
    });
    g.bench_function("extract_16", |b| {
        b.iter(|| {
            ds.iter()
                .map(|d| extract_catalyst(d, &w).unwrap())
                .collect::<Vec<_>>()
        })
    });
    g.finish();
}

criterion_group!(benches, ring, circuits, gadgets, estimator, zh);
criterion_main!(benches);
