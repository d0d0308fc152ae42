//! Criterion benchmarks for kepler-core live in `benches/`.
