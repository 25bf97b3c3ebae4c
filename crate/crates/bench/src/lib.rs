//! Criterion benchmarks for `spheregrid`; see `benches/pipeline.rs`.
