//! Criterion benchmarks for the centralab kernels; see `benches/`.
