//! Criterion benchmarks for `elasticbit`; see `benches/pipeline.rs`.
