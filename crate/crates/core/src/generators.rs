//! Small graph families for tests, benchmarks and the verification harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

pub fn path(n: usize) -> Graph {
    Graph::from_normalized(n, (1..n).map(|v| ((v - 1) as u32, v as u32)).collect())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let mut edges: Vec<_> = (1..n).map(|v| ((v - 1) as u32, v as u32)).collect();
    edges.push((0, (n - 1) as u32));
    Graph::from_normalized(n, edges)
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n as u32)
        .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
        .collect();
    Graph::from_normalized(n, edges)
}

/// K₁,ₗ with the center as vertex 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_normalized(leaves + 1, (1..=leaves as u32).map(|w| (0, w)).collect())
}

/// A random graph with maximum degree at most `delta`, close to
/// `delta`-regular: random pairs are joined while both endpoints have spare
/// degree.
pub fn random_bounded_degree(n: usize, delta: u32, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0u32; n];
    let mut edges = std::collections::BTreeSet::new();
    if n >= 2 {
        let attempts = 8 * n * delta as usize;
        for _ in 0..attempts {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u == v || degree[u] >= delta || degree[v] >= delta {
                continue;
            }
            let e = (u.min(v) as u32, u.max(v) as u32);
            if edges.insert(e) {
                degree[u] += 1;
                degree[v] += 1;
            }
        }
    }
    Graph::from_normalized(n, edges.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_shapes() {
        assert_eq!(path(4).num_edges(), 3);
        assert_eq!(cycle(5).max_degree(), 2);
        assert_eq!(complete(4).num_edges(), 6);
        assert_eq!(star(5).max_degree(), 5);
        assert_eq!(path(1).num_edges(), 0);
    }

    #[test]
    fn random_graphs_respect_the_degree_cap() {
        for seed in 0..20 {
            let g = random_bounded_degree(100, 5, seed);
            assert!(g.max_degree() <= 5);
            // Nearly regular: most degree slots get used.
            assert!(g.num_edges() >= 200, "{}", g.num_edges());
        }
        assert_eq!(random_bounded_degree(50, 5, 7), random_bounded_degree(50, 5, 7));
    }
}
