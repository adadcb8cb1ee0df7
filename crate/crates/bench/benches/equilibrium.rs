use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use netform::equilibrium::{enumerate_equilibria, is_dfpn, EnumerateOptions};
use netform::harness::{run_sweep, Figure, SweepOverrides, SweepSpec};
use netform_bench::{small_instance, symmetric};

fn check(c: &mut Criterion) {
    let mut group = c.benchmark_group("is_dfpn");
    for n in [8, 16, 32] {
        let eq = symmetric(n);
        group.bench_with_input(BenchmarkId::from_parameter(2 * n), &eq, |b, eq| {
            b.iter(|| is_dfpn(&eq.instance, black_box(&eq.network)).unwrap())
        });
    }
    group.finish();
}

fn enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for (ng, nb) in [(2, 2), (3, 3), (4, 4)] {
        let inst = small_instance(ng, nb).instance().unwrap();
        let opts = EnumerateOptions::default();
        group.bench_with_input(BenchmarkId::from_parameter(ng + nb), &inst, |b, inst| {
            b.iter(|| enumerate_equilibria(inst, &opts).unwrap())
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for figure in Figure::ALL {
        let spec = SweepSpec::with_overrides(figure, &SweepOverrides::default()).unwrap();
        group.bench_function(figure.to_string(), |b| b.iter(|| run_sweep(black_box(&spec))));
    }
    group.finish();
}

criterion_group!(benches, check, enumerate, sweep);
criterion_main!(benches);
