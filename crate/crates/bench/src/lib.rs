//! Benchmarks for spectra-core live in `benches/`.
