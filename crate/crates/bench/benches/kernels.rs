use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zpgrowth::difflie::{homology, DifferentialSpec};
use zpgrowth::freelie::{basic_products, witt};
use zpgrowth::moore::{growth_certificate, GrowthParams};
use zpgrowth::zpmod::{smith_normal_form_matrix, Matrix, RingSpec};
use zpgrowth::Limits;

fn snf(c: &mut Criterion) {
    let ring = RingSpec::new(3, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("snf_z27");
    for n in [6usize, 24, 64] {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..27)).collect())
            .collect();
        let a = Matrix::from_rows(&ring, &rows);
        group.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| {
            b.iter(|| smith_normal_form_matrix(&ring, black_box(a)))
        });
    }
    group.finish();
}

fn witt_numbers(c: &mut Criterion) {
    c.bench_function("witt_2_64", |b| b.iter(|| witt(2, black_box(64)).unwrap()));
}

fn hall(c: &mut Criterion) {
    let mut group = c.benchmark_group("basic_products");
    for (n, k) in [(2usize, 12usize), (3, 8)] {
        group.bench_function(format!("n{n}_k{k}"), |b| b.iter(|| basic_products(n, black_box(k)).unwrap()));
    }
    group.finish();
}

fn lie_homology(c: &mut Criterion) {
    let spec = DifferentialSpec::acyclic_pair(RingSpec::new(3, 1).unwrap(), 2).unwrap();
    let limits = Limits::default();
    let mut group = c.benchmark_group("homology_f3");
    group.sample_size(10);
    for w in [6usize, 9, 12] {
        group.bench_with_input(BenchmarkId::from_parameter(w), &w, |b, &w| {
            b.iter(|| homology(&spec, w, 1, &limits).unwrap())
        });
    }
    group.finish();
}

fn certificate(c: &mut Criterion) {
    let params = GrowthParams {
        n: 2,
        m: 2,
        p: 5,
        r: 2,
        s: 2,
        j: 7,
        max_k: 14,
    };
    c.bench_function("growth_certificate_k14", |b| b.iter(|| growth_certificate(black_box(&params)).unwrap()));
}

criterion_group!(benches, snf, witt_numbers, hall, lie_homology, certificate);
criterion_main!(benches);
