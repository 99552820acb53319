//! Criterion benchmarks for the ranking backends live in `benches/`.
