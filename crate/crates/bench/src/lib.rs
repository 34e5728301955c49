//! Criterion benchmarks for kronreg; see `benches/`.
