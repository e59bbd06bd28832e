//! Compares data-parallel and sequential execution of the two hot paths that
//! funnel through the runtime toggle: the truncated series product inside the
//! algebra, and a batch of independent checks.
//!
//! Both variants run in the same binary; the toggle flips at runtime.  Every
//! measured iteration starts from a freshly built algebra so the per-class
//! caches are cold and the comparison reflects real work, not cache hits.

use std::time::Duration;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use hall_forge::checks;
use hall_forge::hallcore::{Cat, HallAlgebra};
use hall_forge::par;
use hall_forge::repfield::fixtures;
use hall_forge::scalar::QMode;
use hall_forge::scenario::RunConfig;

fn fresh_algebra(name: &str, trunc: &[usize]) -> HallAlgebra {
    let scn = fixtures::by_name(name, 2).expect("known fixture");
    HallAlgebra::new(Cat::Quiver(scn), trunc.to_vec(), QMode::at_int(2))
        .expect("algebra builds")
}

fn bench_series_product(c: &mut Criterion) {
    let mut group = c.benchmark_group("series_product_a2_trunc44");
    group.sample_size(20);
    group.warm_up_time(Duration::from_millis(800));
    group.measurement_time(Duration::from_secs(4));
    for (label, parallel) in [("sequential", false), ("parallel", true)] {
        group.bench_function(label, |b| {
            par::set_parallel(parallel);
            b.iter_batched(
                || {
                    let alg = fresh_algebra("a2", &[4, 4]);
                    let x = alg.exp_full();
                    (alg, x)
                },
                |(alg, x)| alg.product(&x, &x).expect("product within truncation"),
                BatchSize::SmallInput,
            );
        });
    }
    group.finish();
    par::set_parallel(true);
}

const BATCH_CONFIG: &str = r#"{
    "scenario": {"kind": "quiver", "name": "a2", "p": 2},
    "truncation": [4, 4],
    "checks": [
        {"name": "reineke_inverse"},
        {"name": "pentagon_two_simples"},
        {"name": "source_order_factorization"},
        {"name": "normal_order_factorization"},
        {"name": "express_in_simples"},
        {"name": "coproduct_grouplike"}
    ]
}"#;

fn bench_check_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_batch_a2_trunc44");
    group.sample_size(10);
    group.warm_up_time(Duration::from_millis(800));
    group.measurement_time(Duration::from_secs(4));
    for (label, parallel) in [("sequential", false), ("parallel", true)] {
        group.bench_function(label, |b| {
            par::set_parallel(parallel);
            b.iter(|| {
                let config = RunConfig::from_str_validated(BATCH_CONFIG, "bench")
                    .expect("bench config is valid");
                checks::run_config(config, "bench", false).expect("batch runs")
            });
        });
    }
    group.finish();
    par::set_parallel(true);
}

criterion_group!(benches, bench_series_product, bench_check_batch);
criterion_main!(benches);
