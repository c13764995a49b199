//! Benchmarks for the hot kernels: blade products, representation
//! construction, connection and curvature assembly, full fixture
//! verification in both scalar modes, and integrator steps.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use spincyl::clifford::{geometric_product, Blade, Multivector, Signature};
use spincyl::flow::{integrate, CylinderState, FlowConfig};
use spincyl::harmful::verify_system;
use spincyl::lie::{curvature, levi_civita};
use spincyl::matrix::Matrix;
use spincyl::model::ModelFile;
use spincyl::rep::CliffordRep;
use spincyl::scalar::{Cf64, Exact, Scalar};

fn example_model() -> ModelFile {
    let path = format!(
        "{}/../../fixtures/example_31.model",
        env!("CARGO_MANIFEST_DIR")
    );
    ModelFile::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn bench_clifford(c: &mut Criterion) {
    let sig = Signature::new(4, 2);
    let metric = sig.frame_metric();
    let a = Multivector::<Exact>::basis_blade(Blade::from_indices(&[1, 3, 5]).unwrap());
    let b = Multivector::<Exact>::basis_blade(Blade::from_indices(&[2, 3, 6]).unwrap());
    c.bench_function("geometric_product_exact_dim6", |bench| {
        bench.iter(|| geometric_product(black_box(&a), black_box(&b), &metric).unwrap())
    });
    c.bench_function("build_rep_dim6", |bench| {
        bench.iter(|| CliffordRep::<Exact>::build(black_box(&metric)))
    });
}

fn bench_lie(c: &mut Criterion) {
    let model = example_model();
    let fx = model.to_fixture::<Exact>().unwrap();
    c.bench_function("levi_civita_example", |bench| {
        bench.iter(|| levi_civita(black_box(&fx.geometry.alg), &fx.geometry.metric))
    });
    let conn = levi_civita(&fx.geometry.alg, &fx.geometry.metric);
    c.bench_function("curvature_example", |bench| {
        bench.iter(|| curvature(black_box(&conn), &fx.geometry.alg, &fx.geometry.metric))
    });
}

fn bench_verify(c: &mut Criterion) {
    let model = example_model();
    let exact = model.to_fixture::<Exact>().unwrap();
    c.bench_function("verify_system_exact", |bench| {
        bench.iter(|| verify_system(black_box(&exact.structure), &exact.geometry).unwrap())
    });
    let float = model.to_fixture::<Cf64>().unwrap();
    c.bench_function("verify_system_float", |bench| {
        bench.iter(|| verify_system(black_box(&float.structure), &float.geometry).unwrap())
    });
}

fn bench_flow(c: &mut Criterion) {
    let model = example_model();
    let fx = model.to_fixture::<Cf64>().unwrap();
    let n = fx.geometry.dim();
    let gram = Matrix::<Cf64>::from_fn(n, n, |i, j| {
        if i == j {
            Cf64::from_int(fx.geometry.metric.eps(i + 1) as i64)
        } else {
            Cf64::from_int(0)
        }
    });
    let state0 = CylinderState {
        t: 0.0,
        g: gram,
        a: fx.structure.a.clone(),
    };
    let cfg = FlowConfig {
        k_constant: -4.0,
        step: 1e-3,
        t_end: 0.05,
        output_stride: usize::MAX,
        ..Default::default()
    };
    c.bench_function("rk4_50_steps_example", |bench| {
        bench.iter(|| integrate(black_box(&state0), &cfg, &fx.geometry.alg).unwrap())
    });
}

criterion_group!(benches, bench_clifford, bench_lie, bench_verify, bench_flow);
criterion_main!(benches);
