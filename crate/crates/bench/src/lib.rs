//! Criterion benchmarks for `graphsw-core`; see `benches/`.
