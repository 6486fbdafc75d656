//! Criterion benchmarks for the witness pipeline live under `benches/`.
