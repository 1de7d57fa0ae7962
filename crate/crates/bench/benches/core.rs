use cdk_core::admissible::{self, RootedTree};
use cdk_core::kernel::HPoint;
use cdk_core::{centered, cyclic, voronoi, Tolerances};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sites(n: usize, seed: u64) -> Vec<HPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let r: f64 = rng.gen_range(0.0..4.0);
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rho = (r / 2.0).tanh();
            HPoint::disk(rho * t.cos(), rho * t.sin()).unwrap()
        })
        .collect()
}

fn cyclic_functions(c: &mut Criterion) {
    let d = [1.0, 1.3, 0.7, 1.9, 1.1];
    c.bench_function("circumradius/5", |b| b.iter(|| cyclic::circumradius(black_box(&d))));
    c.bench_function("area_gradient/5", |b| b.iter(|| cyclic::area_gradient(black_box(&d))));
    c.bench_function("b0/4", |b| b.iter(|| cyclic::b0(black_box(&d[1..]))));
}

fn tessellation(c: &mut Criterion) {
    let mut g = c.benchmark_group("voronoi");
    for n in [100, 1000, 10_000] {
        let s = sites(n, n as u64);
        g.bench_with_input(BenchmarkId::new("build", n), &s, |b, s| b.iter(|| voronoi::build(s).unwrap()));
        let d = voronoi::build(&s).unwrap();
        g.bench_with_input(BenchmarkId::new("centered_dual", n), &d, |b, d| {
            b.iter(|| {
                let f = centered::non_centered_forest(d).unwrap();
                centered::build_cells(d, &f)
            })
        });
    }
    g.finish();
}

fn minimizer(c: &mut Criterion) {
    let tol = Tolerances::DEFAULT;
    let tree = RootedTree::one_edge(4, 4).unwrap();
    let frontier = [1.0, 1.2, 0.9, 1.1, 1.0, 1.3];
    c.bench_function("minimize/one_edge", |b| b.iter(|| admissible::minimize(&tree, &frontier, &tol).unwrap()));
}

criterion_group!(benches, cyclic_functions, tessellation, minimizer);
criterion_main!(benches);
