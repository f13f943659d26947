use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qehrhart_core::par::Exec;
use qehrhart_core::qehrhart::series_e_with;
use qehrhart_core::suites::closure_suite;
use qehrhart_core::LatticePolytope;
use std::hint::black_box;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn series(c: &mut Criterion) {
    let tri = LatticePolytope::new(vec![vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap();
    let cube = LatticePolytope::cube(3);
    let mut g = c.benchmark_group("series_e");
    g.sample_size(10);
    for (name, p, t) in [("triangle T=10", &tri, 10), ("cube3 T=5", &cube, 5)] {
        for (label, exec) in STRATEGIES {
            g.bench_with_input(BenchmarkId::new(label, name), &(p, t), |b, &(p, t)| {
                b.iter(|| series_e_with(black_box(p), t, exec))
            });
        }
    }
    g.finish();
}

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure_suite");
    g.sample_size(10);
    for (label, exec) in STRATEGIES {
        g.bench_function(BenchmarkId::new(label, "40 trials"), |b| b.iter(|| closure_suite(40, black_box(0), exec)));
    }
    g.finish();
}

criterion_group!(benches, series, closure);
criterion_main!(benches);
