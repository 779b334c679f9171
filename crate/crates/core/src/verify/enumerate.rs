//! Ground truth by exhaustive backtracking.

use crate::error::{Error, Result};
use crate::graph::{Color, Coloring, Graph};

/// Largest `k^n` the enumerators will attempt.
pub const ENUMERATION_LIMIT: u64 = 100_000_000;

fn check_guard(g: &Graph, k: u32) -> Result<()> {
    let mut product: u64 = 1;
    for _ in 0..g.n() {
        product = product.saturating_mul(u64::from(k));
        if product > ENUMERATION_LIMIT {
            return Err(Error::GuardExceeded {
                k,
                n: g.n(),
                limit: ENUMERATION_LIMIT,
            });
        }
    }
    Ok(())
}

/// Visits every proper k-coloring in lexicographic order.
pub fn for_each_coloring<F: FnMut(&[Color])>(g: &Graph, k: u32, mut visit: F) -> Result<()> {
    check_guard(g, k)?;
    let n = g.n();
    if n == 0 {
        visit(&[]);
        return Ok(());
    }
    let mut colors: Vec<Color> = vec![0; n];
    let mut v = 0usize;
    loop {
        // Advance vertex v to its next color that avoids earlier neighbors.
        let mut next = colors[v] + 1;
        while next <= k && g.earlier_neighbors(v).iter().any(|&w| colors[w as usize] == next) {
            next += 1;
        }
        if next > k {
            colors[v] = 0;
            if v == 0 {
                return Ok(());
            }
            v -= 1;
            continue;
        }
        colors[v] = next;
        if v + 1 == n {
            visit(&colors);
        } else {
            v += 1;
        }
    }
}

pub fn enumerate_colorings(g: &Graph, k: u32) -> Result<Vec<Coloring>> {
    let mut out = Vec::new();
    for_each_coloring(g, k, |c| out.push(Coloring::new(c.to_vec())))?;
    Ok(out)
}

pub fn count_colorings(g: &Graph, k: u32) -> Result<u64> {
    let mut count = 0u64;
    for_each_coloring(g, k, |_| count += 1)?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::is_proper;

    #[test]
    fn known_counts() {
        assert_eq!(count_colorings(&generators::complete(2), 4).unwrap(), 12);
        assert_eq!(count_colorings(&generators::complete(3), 7).unwrap(), 210);
        assert_eq!(count_colorings(&Graph::edgeless(3), 2).unwrap(), 8);
        assert_eq!(count_colorings(&Graph::edgeless(0), 2).unwrap(), 1);
    }

    #[test]
    fn cycle_count_matches_chromatic_polynomial() {
        // P(C_n, k) = (k−1)^n + (−1)^n (k−1)
        for n in 3..=7usize {
            for k in 2..=6u64 {
                let expected = (k - 1).pow(n as u32) as i64 + if n % 2 == 0 { 1 } else { -1 } * (k as i64 - 1);
                assert_eq!(
                    count_colorings(&generators::cycle(n), k as u32).unwrap() as i64,
                    expected,
                    "C{n}, k={k}"
                );
            }
        }
        assert_eq!(count_colorings(&generators::cycle(5), 7).unwrap(), 7770);
    }

    #[test]
    fn path_and_tree_counts() {
        // Any tree on n vertices: k (k−1)^(n−1).
        assert_eq!(count_colorings(&generators::path(5), 4).unwrap(), 4 * 81);
        assert_eq!(count_colorings(&generators::star(4), 3).unwrap(), 3 * 16);
    }

    #[test]
    fn everything_enumerated_is_proper_and_distinct() {
        let g = generators::cycle(5);
        let all = enumerate_colorings(&g, 4).unwrap();
        assert!(all.iter().all(|c| is_proper(&g, c)));
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn guard_trips() {
        assert!(matches!(
            count_colorings(&Graph::edgeless(30), 7),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
