use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mbergman::operators::{berezin, toeplitz_matrix, BerezinSource, SymbolFunction};
use mbergman::{Complex64, DiskRule, SpaceParams};

fn toeplitz(c: &mut Criterion) {
    let p = SpaceParams::new(0.5, 1.5).unwrap();
    let rule = DiskRule::build(&p, 200, 256).unwrap();
    let phi = SymbolFunction::new("z + conj(z)^2", |z: Complex64| z + z.conj() * z.conj());
    let mut g = c.benchmark_group("toeplitz");
    g.sample_size(10);
    g.bench_function("N=32", |b| b.iter(|| toeplitz_matrix(&phi, black_box(&p), 32, &rule)));
    let t = toeplitz_matrix(&phi, &p, 32, &rule).unwrap();
    g.bench_function("singular values N=32", |b| b.iter(|| t.singular_values()));
    g.finish();
}

fn berezin_scan(c: &mut Criterion) {
    let p = SpaceParams::new(0.0, 0.0).unwrap();
    let phi = SymbolFunction::one_minus_r2();
    c.bench_function("berezin at 0.99", |b| {
        b.iter(|| berezin(BerezinSource::Symbol(&phi), &p, black_box(Complex64::new(0.99, 0.0)), 32))
    });
}

criterion_group!(benches, toeplitz, berezin_scan);
criterion_main!(benches);
