//! Benchmarks for `cbrn-core`; see `benches/`.
