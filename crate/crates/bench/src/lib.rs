//! Criterion benchmarks for the fermisim pipeline; run with `cargo bench -p fermisim-bench`.
