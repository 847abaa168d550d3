//! Benchmark-only crate; see `benches/bounds.rs` and the workspace README.
