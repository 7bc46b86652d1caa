//! Criterion benchmarks for the entanglement pipeline live in `benches/`.
