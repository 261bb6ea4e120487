use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use momap_bench::{galilean, unitary, virasoro};
use momap_core::action::momentum_defect;
use momap_core::examples::virasoro::{bott_thurston_identity_defect, gelfand_fuchs, CircleDiffeo};
use momap_core::normsq::{hessian_matrix, ComplexOrbitHessian};
use momap_core::{build_operators, descend, eigendecompose_stabilizer, Derivative, DecompositionMode, DescentOptions, HamiltonianAction, Tolerances};

fn operators(c: &mut Criterion) {
    let mut g = c.benchmark_group("build_operators");
    let (spec, m) = galilean();
    g.bench_function("galilean", |b| b.iter(|| build_operators(&spec, black_box(&m)).unwrap()));
    for n in [2, 4, 8] {
        let (spec, m) = unitary(n);
        g.bench_with_input(BenchmarkId::new("unitary", n), &m, |b, m| b.iter(|| build_operators(&spec, m).unwrap()));
    }
    let (model, m) = virasoro(6);
    assert_eq!(model.spec.point_dim(), m.len());
    g.bench_function("virasoro", |b| b.iter(|| build_operators(&model.spec, black_box(&m)).unwrap()));
    g.finish();
}

fn momentum(c: &mut Criterion) {
    let (spec, _) = galilean();
    c.bench_function("momentum_defect/galilean_20x20", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        b.iter(|| {
            for _ in 0..20 {
                let m = spec.sample_point(&mut rng);
                black_box(momentum_defect(&spec, &m, 20, Derivative::FiniteDifference(1e-5), &mut rng).unwrap());
            }
        })
    });
}

fn stabilizer(c: &mut Criterion) {
    let (spec, m) = galilean();
    let mu = spec.momentum(&m);
    c.bench_function("eigendecompose_stabilizer/galilean", |b| {
        b.iter(|| eigendecompose_stabilizer(&spec, &m, &mu, DecompositionMode::Hermitian, &Tolerances::default()).unwrap())
    });
    let (spec, m) = unitary(4);
    c.bench_function("hessian_matrix/unitary_4", |b| b.iter(|| hessian_matrix(&spec, black_box(&m)).unwrap()));
    let ops = build_operators(&spec, &m).unwrap();
    c.bench_function("complex_orbit_hessian/unitary_4", |b| b.iter(|| ComplexOrbitHessian::new(&spec, &ops, &Tolerances::default()).unwrap()));
}

fn flow(c: &mut Criterion) {
    let (spec, m) = galilean();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = spec.retract(&m, &(spec.sample_tangent(&m, &mut rng) * 0.05));
    c.bench_function("descend/galilean_first_family", |b| b.iter(|| descend(&spec, black_box(&start), &DescentOptions::default()).unwrap()));
}

fn cocycles(c: &mut Criterion) {
    let (model, _) = virasoro(12);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (x, y) = (model.sample_field(&mut rng, 3), model.sample_field(&mut rng, 3));
    c.bench_function("gelfand_fuchs/grid_128", |b| b.iter(|| gelfand_fuchs(black_box(&x), black_box(&y), 128)));
    let g: Vec<CircleDiffeo> = (0..3).map(|_| CircleDiffeo::random_small(&mut rng, 2048, 3, 0.4).unwrap()).collect();
    c.bench_function("bott_thurston_identity/grid_2048", |b| b.iter(|| bott_thurston_identity_defect(&g[0], &g[1], &g[2]).unwrap()));
}

criterion_group!(benches, operators, momentum, stabilizer, flow, cocycles);
criterion_main!(benches);
