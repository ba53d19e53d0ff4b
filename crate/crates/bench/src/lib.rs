//! Benchmarks for semcas-core; see `benches/`.
