//! Randomised properties over small connected graphs.

use proptest::prelude::*;

use hyperopic::game::{hidden_region, referee, CopConfig, Outcome, RandomRobber, Visibility};
use hyperopic::graph::{emit, join, parse, Format, Graph, VertexSet};
use hyperopic::scn::{upsilon, upsilon_oracle};
use hyperopic::solver::{extract_policy_check, min_cops, SolverOptions};
use hyperopic::strategies::PolicyStrategy;

fn connected(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_filter_map("connected", |(n, bits)| {
            let pairs = (0..n).flat_map(|v| (0..v).map(move |u| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            let g = Graph::from_edges(n, edges).ok()?;
            g.is_connected().then_some(g)
        })
}

fn opts() -> SolverOptions {
    SolverOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn upsilon_agrees_with_brute_force(g in connected(10)) {
        prop_assert_eq!(upsilon(&g), upsilon_oracle(&g).unwrap());
    }

    #[test]
    fn witness_is_a_small_common_neighbourhood(g in connected(10)) {
        let r = upsilon(&g);
        let common = g.common_neighbourhood(r.witness).unwrap();
        prop_assert_eq!(common, r.common);
        prop_assert!(common.len() <= r.witness.len());
        prop_assert_eq!(r.witness.len(), r.upsilon);
    }

    #[test]
    fn hyperopic_between_classic_and_classic_plus_upsilon(g in connected(6)) {
        let c = min_cops(&g, Visibility::Perfect, 1, &opts()).unwrap().k;
        let h = min_cops(&g, Visibility::Hyperopic, 1, &opts()).unwrap();
        prop_assert!(c <= h.k && h.k <= c + upsilon(&g).upsilon);
        prop_assert!(extract_policy_check(&g, &h));
    }

    #[test]
    fn policy_captures_random_robbers_in_time(g in connected(6), seed in any::<u64>()) {
        let r = min_cops(&g, Visibility::Hyperopic, 1, &opts()).unwrap();
        let s = PolicyStrategy::new(r.policy.clone().unwrap());
        let t = referee(&g, &s, &mut RandomRobber::new(seed), 100, Visibility::Hyperopic).unwrap();
        match t.outcome {
            Outcome::Captured { round } => prop_assert!(round <= r.value.unwrap(), "{} > {:?}", round, r.value),
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn hidden_region_is_the_common_neighbourhood_off_the_cops(g in connected(8), a in 0usize..8, b in 0usize..8) {
        let cops = CopConfig::new(vec![a % g.n(), b % g.n()]);
        let want: VertexSet = (0..g.n())
            .filter(|&r| !cops.positions().contains(&r) && cops.positions().iter().all(|&c| g.adjacent(c, r)))
            .collect();
        prop_assert_eq!(hidden_region(&g, &cops), want);
    }

    #[test]
    fn text_formats_round_trip(g in connected(12)) {
        for f in [Format::Graph6, Format::EdgeList] {
            prop_assert_eq!(parse(&emit(&g, f), f).unwrap(), g.clone());
        }
    }

    #[test]
    fn join_vertices_see_the_whole_other_side(g in connected(5), j in connected(5)) {
        let h = join(&g, &j).unwrap();
        for u in 0..g.n() {
            for v in 0..j.n() {
                prop_assert!(h.adjacent(u, g.n() + v));
            }
        }
        prop_assert_eq!(h.edge_count(), g.edge_count() + j.edge_count() + g.n() * j.n());
    }
}
