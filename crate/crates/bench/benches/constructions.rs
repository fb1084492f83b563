use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use symdyn::aperiodic::{build_2coloring_instance, build_t_sets};
use symdyn::density::{fill_density, CoveringForest, Slope};
use symdyn::lll::resample;
use symdyn::GroupModel;

fn balls(c: &mut Criterion) {
    let groups = [
        ("z^2", GroupModel::lattice(2).unwrap(), 60),
        ("free:2", GroupModel::free(2).unwrap(), 8),
        ("z2*z3", GroupModel::z2_z3(), 16),
        ("heisenberg", GroupModel::heisenberg(), 10),
    ];
    let mut g = c.benchmark_group("ball");
    for (name, group, r) in groups {
        g.bench_function(format!("{name} r={r}"), |b| {
            b.iter(|| group.identity_ball(black_box(r)).unwrap())
        });
    }
    g.finish();
}

fn resampling(c: &mut Criterion) {
    let z2 = GroupModel::lattice(2).unwrap();
    let tsets = build_t_sets(&z2, 17, 1).unwrap();
    let inst = build_2coloring_instance(&z2, 20, &tsets, 1).unwrap();
    c.bench_function("resample z^2 r=20 level 1", |b| {
        let mut seed = 0;
        b.iter(|| {
            seed += 1;
            resample(&inst.instance, seed, 1_000_000).unwrap()
        })
    });
}

fn forests(c: &mut Criterion) {
    let z2 = GroupModel::lattice(2).unwrap();
    let alpha = Slope::new(377, 610).unwrap();
    c.bench_function("forest z^2 r=30 levels=2", |b| {
        b.iter(|| CoveringForest::build(&z2, black_box(30), 2).unwrap())
    });
    let f = CoveringForest::build(&z2, 30, 2).unwrap();
    c.bench_function("fill z^2 r=30 alpha=377/610", |b| {
        b.iter(|| fill_density(&f, &alpha).unwrap())
    });
}

criterion_group!(benches, balls, resampling, forests);
criterion_main!(benches);
