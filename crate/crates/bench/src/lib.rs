//! Criterion benchmarks for `gkf-core`; see `benches/`.
