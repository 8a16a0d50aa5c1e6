use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use shift_core::parallel::Execution;
use shift_core::run::{parse_values, scan_inputs, Inputs, RunConfig};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn scan(c: &mut Criterion) {
    let mut cfg = RunConfig::new(
        fixture("two_mode_surface_g003.json"),
        fixture("rb_27s_26s.json"),
        "27S1/2",
        "26S1/2",
    );
    cfg.z_values = parse_values("1e-7:1e-5:32log").unwrap();
    cfg.t_values = parse_values("350:600:8").unwrap();
    let inputs = Inputs::load(&cfg).unwrap();

    let mut group = c.benchmark_group("scan_256_points");
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan_inputs(&inputs, &cfg, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, scan);
criterion_main!(benches);
