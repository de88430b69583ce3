use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use invhankel::caratheodory::SampleMode;
use invhankel::classes::FunctionClass;
use invhankel::exec::Exec;
use invhankel::objectives::Objective;
use invhankel::optimizer::{stationary_points, Region};
use invhankel::verification::{consistency_suite, sample_class};

fn modes() -> Vec<(&'static str, Exec)> {
    vec![
        ("sequential", Exec::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Exec::Parallel),
    ]
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sampling_100k");
    group.sample_size(10);
    for (name, exec) in modes() {
        for class in [FunctionClass::R, FunctionClass::R1] {
            group.bench_with_input(BenchmarkId::new(name, class.label()), &class, |b, &class| {
                b.iter(|| sample_class(class, black_box(100_000), 42, SampleMode::BoundaryBiased, 1e-10, exec))
            });
        }
    }
    group.finish();
}

fn critical_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("newton_lattice_128");
    group.sample_size(10);
    for (name, exec) in modes() {
        for obj in [Objective::G, Objective::H1] {
            group.bench_with_input(BenchmarkId::new(name, obj.name()), &obj, |b, &obj| {
                b.iter(|| stationary_points(obj.poly(), Region::UNIT, black_box(128), 1e-10, exec))
            });
        }
    }
    group.finish();
}

fn consistency(c: &mut Criterion) {
    let mut group = c.benchmark_group("consistency_10k");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(name, |b| b.iter(|| consistency_suite(FunctionClass::R1, black_box(10_000), 42, exec)));
    }
    group.finish();
}

criterion_group!(benches, sampling, critical_search, consistency);
criterion_main!(benches);
