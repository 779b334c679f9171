//! The bounding chain must sandwich the true chain: started from any proper
//! coloring, the coloring after each update lies in the lists after that update.

use cftp_coloring::phase::generate_block_observed;
use cftp_coloring::verify::enumerate_colorings;
use cftp_coloring::{generators, BoundingState, Graph, MasterSeed, StepRecord, UpdateTuple};
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..=5)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, mask)| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| e).collect();
            Graph::from_edges(n, edges).unwrap()
        })
}

fn trace(g: &Graph, k: u32, seed: u64) -> (Vec<UpdateTuple>, Vec<BoundingState>) {
    let mut tuples = Vec::new();
    let mut states = Vec::new();
    let mut record = |r: &StepRecord<'_>| {
        tuples.push(r.tuple.clone());
        states.push(r.state.clone());
    };
    generate_block_observed(g, k, MasterSeed(seed), 0, &mut record).unwrap();
    (tuples, states)
}

fn sandwich_violations(g: &Graph, k: u32, seed: u64) -> usize {
    let (tuples, states) = trace(g, k, seed);
    let mut violations = 0;
    for start in enumerate_colorings(g, k).unwrap() {
        let mut chi = start;
        for (t, s) in tuples.iter().zip(&states) {
            t.apply(g, k, &mut chi).unwrap();
            if !s.is_compatible(&chi) {
                violations += 1;
                break;
            }
        }
    }
    violations
}

#[test]
fn sandwich_on_named_graphs() {
    for seed in 0..6 {
        assert_eq!(sandwich_violations(&generators::complete(3), 7, seed), 0);
        assert_eq!(sandwich_violations(&generators::star(2), 7, seed), 0);
        assert_eq!(sandwich_violations(&generators::cycle(4), 7, seed), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sandwich_on_random_small_graphs(g in small_graph(), seed in any::<u64>()) {
        let k = 3 * g.max_degree() + 1;
        prop_assert_eq!(sandwich_violations(&g, k, seed), 0);
    }

    #[test]
    fn phi_blocks_are_constant_functions(g in small_graph(), seed in any::<u64>()) {
        let k = 3 * g.max_degree() + 2;
        let block = cftp_coloring::generate_block(&g, k, MasterSeed(seed), 0).unwrap();
        if let Some(target) = &block.unique_coloring {
            for chi in enumerate_colorings(&g, k).unwrap() {
                prop_assert_eq!(&cftp_coloring::apply_block(&block, &chi, &g).unwrap(), target);
            }
        }
    }
}
