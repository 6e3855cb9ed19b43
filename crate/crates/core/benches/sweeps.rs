use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zigzag_core::assembly::{assemble, verify_shadow_compat, NodeDatum};
use zigzag_core::exec::Execution;
use zigzag_core::extension::{class_grid, classify_selfdual_rank_one};
use zigzag_core::linalg::Rational;
use zigzag_core::tables::OPEN_LABEL;
use zigzag_core::zigzag::random::random_valid;
use zigzag_core::zigzag::{dualize, is_isomorphic};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn classification(c: &mut Criterion) {
    let grid = class_grid();
    let mut group = c.benchmark_group("classify");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| classify_selfdual_rank_one(OPEN_LABEL, (1, 1), &grid, exec).unwrap())
        });
    }
    group.finish();
}

fn shadow_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("shadow");
    for r in [3usize, 6] {
        let nodes = (0..r)
            .map(|k| NodeDatum::odp(format!("p{k}"), OPEN_LABEL, Rational::from_integer((k % 2) as i64)))
            .collect();
        let s = assemble("bulk", OPEN_LABEL, nodes).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, r), &s, |b, s| b.iter(|| verify_shadow_compat(s, exec)));
        }
    }
    group.finish();
}

fn random_duals(c: &mut Criterion) {
    let mut group = c.benchmark_group("double_dual");
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                exec.map_range(64, |k| {
                    let z = random_valid(&mut ChaCha8Rng::seed_from_u64(k as u64), 4);
                    is_isomorphic(&dualize(&dualize(&z)), &z).unwrap().isomorphic
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, classification, shadow_sweep, random_duals);
criterion_main!(benches);
