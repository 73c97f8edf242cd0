//! Criterion benchmarks for `skp-core`; see `benches/`.
