//! Criterion benchmarks for `wrl-core`; run with `cargo bench -p wrl-bench`.
