//! Branch-and-bound throughput by worker count.
//!
//! With the default `parallel` feature each worker count gets its own rayon
//! pool. Build with `--no-default-features` to time the sequential fallback,
//! where the worker count is ignored.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion, criterion_group, criterion_main};

use wright_sops::Interval;
use wright_sops::oracle::solve;
use wright_sops::prune::prune;
use wright_sops::search::{SearchParams, branch_and_bound};
use wright_sops::sequence::{Cube, CubeCollection};

/// Three neighbouring cubes along `a_1` around the branch at `alpha`; only the
/// middle one holds solutions.
fn cover(alpha: Interval) -> CubeCollection {
    let center = solve(alpha.mid(), 10).unwrap();
    let r = 3e-3;
    let cubes = [-2.0, 0.0, 2.0]
        .iter()
        .map(|shift| {
            let mut x = center.to_cube(alpha, 3.0).unwrap();
            let mut v = x.vector();
            for (i, c) in v.iter_mut().enumerate() {
                let offset = if i == 1 { shift * r + 0.3 * r } else { 0.2 * r };
                *c = Interval::centered(c.mid() + offset, r);
            }
            x.set_vector(&v);
            x.tail_c0 = 0.5;
            x
        })
        .collect::<Vec<Cube>>();
    CubeCollection::from_cubes(cubes).unwrap()
}

fn search(c: &mut Criterion) {
    let cubes = cover(Interval::new(1.787, 1.792).unwrap());
    let mut group = c.benchmark_group("branch_and_bound");
    group.sample_size(10);
    for workers in [1, 2, 4] {
        let p = SearchParams { epsilon: 1e-3, worker_count: workers, ..SearchParams::default() };
        group.bench_with_input(BenchmarkId::from_parameter(workers), &p, |b, p| {
            b.iter(|| branch_and_bound(black_box(&cubes), p).unwrap())
        });
    }
    group.finish();
}

fn single_prune(c: &mut Criterion) {
    let cubes = cover(Interval::new(1.899, 1.90).unwrap());
    let x = cubes.cubes()[1].clone();
    c.bench_function("prune", |b| b.iter(|| prune(black_box(&x)).unwrap()));
}

criterion_group!(benches, search, single_prune);
criterion_main!(benches);
