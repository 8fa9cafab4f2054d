use std::hint::black_box;
use std::sync::Arc;

use cocyclelab::cocycles::{affine_jacobi_defect, mf_cocycle_identity_defect};
use cocyclelab::extension::{h3_bar_resolution, instance_q8, obstruction_class, FiniteGroup};
use cocyclelab::field::{random_field, Domain, RandomFieldSpec};
use cocyclelab::fock::{bogoliubov_implementer, random_unitary, CarGenerators, PolarizedSpace};
use cocyclelab::lie::{su2, un};
use cocyclelab::loopgroup::{pentagon_defect, random_chart_element, wzw_ball, degree_map};
use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exact_cocycles(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let alg = Arc::new(su2());
    let f: Vec<_> = (0..3)
        .map(|_| random_field(Domain::T1, 0, alg.clone(), RandomFieldSpec::default(), &mut rng))
        .collect();
    c.bench_function("affine jacobi su2", |b| {
        b.iter(|| affine_jacobi_defect(black_box(&f[0]), &f[1], &f[2]).unwrap())
    });

    let u2 = Arc::new(un(2).unwrap());
    let spec = RandomFieldSpec { terms: 3, max_k: 1, max_poly: 0, real_form: true };
    let a = random_field(Domain::T3, 1, u2.clone(), spec, &mut rng);
    let g: Vec<_> = (0..3).map(|_| random_field(Domain::T3, 0, u2.clone(), spec, &mut rng)).collect();
    let mut group = c.benchmark_group("slow");
    group.sample_size(10);
    group.bench_function("mf identity u2", |b| {
        b.iter(|| mf_cocycle_identity_defect(black_box(&a), &g[0], &g[1], &g[2]).unwrap())
    });
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature");
    group.sample_size(10);
    let map = degree_map(1);
    group.bench_function("wzw ball 16", |b| b.iter(|| wzw_ball(black_box(&map), 16).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let q: Vec<_> = (0..4).map(|_| random_chart_element(&mut rng, 0.12)).collect();
    group.bench_function("pentagon 16", |b| {
        b.iter(|| pentagon_defect([&q[0], &q[1], &q[2], &q[3]], 16).unwrap())
    });
    group.finish();
}

fn fock(c: &mut Criterion) {
    let space = PolarizedSpace::with_dim(6).unwrap();
    let gens = CarGenerators::new(&space).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = random_unitary(6, 0.3, &mut rng);
    c.bench_function("implementer d=6", |b| b.iter(|| bogoliubov_implementer(&gens, black_box(&g)).unwrap()));
}

fn finite_groups(c: &mut Criterion) {
    let inst = instance_q8();
    let lift = inst.default_lift(&inst.sigma().unwrap());
    c.bench_function("obstruction q8", |b| b.iter(|| obstruction_class(black_box(&inst), &lift).unwrap()));
    let g = FiniteGroup::cyclic(4);
    c.bench_function("h3 Z4 Z2", |b| b.iter(|| h3_bar_resolution(black_box(&g), &[2]).unwrap()));
}

criterion_group!(benches, exact_cocycles, quadrature, fock, finite_groups);
criterion_main!(benches);
