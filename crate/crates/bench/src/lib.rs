//! Criterion benchmarks for the superswitch engine live under `benches/`.
