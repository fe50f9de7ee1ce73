//! Criterion benchmarks for the mbergman crates; see `benches/`.
