//! Benchmark fixtures shared by the criterion targets.

use cftp_coloring::{generators, Graph};

/// A random graph of maximum degree `delta` on `n` vertices, fixed per `(n, delta)`.
pub fn fixture(n: usize, delta: u32) -> Graph {
    generators::random_bounded_degree(n, delta, (n as u64) << 8 | u64::from(delta))
}

/// `(label, k)` for the two color budgets benchmarked at each Δ.
pub fn color_budgets(delta: u32) -> [(&'static str, u32); 2] {
    [("3Δ+1", 3 * delta + 1), ("4Δ", 4 * delta)]
}
