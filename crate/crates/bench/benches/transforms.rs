use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use waveatom::wave_atom::{adjoint1d_extended, forward1d, forward1d_extended, forward2d, Tiling};
use waveatom_bench::signal;

fn transforms_1d(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward1d");
    for n in [1024, 4096, 16384] {
        let t = Tiling::new(n).unwrap();
        let f = signal(n);
        group.bench_with_input(BenchmarkId::new("admissible", n), &f, |b, f| {
            b.iter(|| forward1d(&t, black_box(f)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("extended_round_trip", n), &f, |b, f| {
            b.iter(|| adjoint1d_extended(&t, &forward1d_extended(&t, black_box(f)).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn transforms_2d(c: &mut Criterion) {
    let mut group = c.benchmark_group("forward2d");
    group.sample_size(10);
    for n in [256, 512, 1024] {
        let t = Tiling::new(n).unwrap();
        let f = signal(n * n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| forward2d(&t, black_box(f)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, transforms_1d, transforms_2d);
criterion_main!(benches);
