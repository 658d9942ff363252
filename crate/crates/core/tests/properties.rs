mod common;

use mlstable::blocking::{stable_in_layer, strong_char_check, weak_char_check, StabilityBase};
use mlstable::graphalg::{maximal_matching, maximum_matching, saturating_matching, SimpleGraph};
use mlstable::io::{default_names, from_json, to_json, InstanceDocument};
use mlstable::oracle::{oracle_solve, OracleBudget};
use mlstable::reductions::gen_random;
use mlstable::solvers::solve_weak_lowalpha;
use mlstable::suites::random_matching;
use mlstable::verify::{check, is_stable, witness_rechecks, Aggregation};
use mlstable::{Matching, MultilayerInstance, StabilityQuery};
use proptest::prelude::*;

fn instance(max_n: usize, max_ell: usize) -> impl Strategy<Value = MultilayerInstance> {
    (
        1..=max_n,
        1..=max_ell,
        0.1f64..0.7,
        any::<bool>(),
        any::<bool>(),
        any::<u64>(),
    )
        .prop_map(|(n, ell, p, symmetric, bipartite, seed)| {
            gen_random(n, ell, p, symmetric, symmetric && bipartite, seed).unwrap()
        })
}

fn symmetric_instance(max_n: usize, max_ell: usize) -> impl Strategy<Value = MultilayerInstance> {
    (1..=max_n, 1..=max_ell, 0.1f64..0.7, any::<u64>())
        .prop_map(|(n, ell, p, seed)| gen_random(n, ell, p, true, false, seed).unwrap())
}

fn with_matching(
    s: impl Strategy<Value = MultilayerInstance>,
) -> impl Strategy<Value = (MultilayerInstance, Matching)> {
    (s, any::<u64>()).prop_map(|(inst, seed)| {
        let m = random_matching(inst.n(), &mut common::rng(seed));
        (inst, m)
    })
}

fn graph() -> impl Strategy<Value = SimpleGraph> {
    (0usize..=10, 0.05f64..0.8, any::<u64>())
        .prop_map(|(n, p, seed)| common::random_graph(n, p, &mut common::rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairing_two_singles_never_breaks_stability((inst, m) in with_matching(instance(7, 3))) {
        let singles: Vec<usize> = (0..inst.n()).filter(|&a| !m.is_matched(a)).collect();
        prop_assume!(singles.len() >= 2);
        let mut bigger = m.clone();
        bigger.add_pair(singles[0], singles[1]).unwrap();
        for q in StabilityQuery::all_valid(inst.ell()) {
            prop_assert!(!is_stable(&inst, &m, &q) || is_stable(&inst, &bigger, &q), "{q}");
        }
    }

    #[test]
    fn characterizations_match_blocking_pairs((inst, m) in with_matching(symmetric_instance(7, 3))) {
        for i in 0..inst.ell() {
            prop_assert_eq!(weak_char_check(&inst, &m, i).unwrap(), stable_in_layer(&inst, &m, i, StabilityBase::Weak));
            prop_assert_eq!(strong_char_check(&inst, &m, i).unwrap(), stable_in_layer(&inst, &m, i, StabilityBase::Strong));
        }
    }

    #[test]
    fn same_type_agents_are_interchangeable((inst, m) in with_matching(instance(7, 3))) {
        let types = inst.agent_types();
        for block in types.blocks.iter().filter(|b| b.len() >= 2) {
            let (a, b) = (block[0], block[1]);
            let swap = |x: usize| if x == a { b } else if x == b { a } else { x };
            let pairs: Vec<_> = m.pairs().into_iter().map(|(x, y)| (swap(x), swap(y))).collect();
            let swapped = Matching::from_pairs(inst.n(), &pairs).unwrap();
            for q in StabilityQuery::all_valid(inst.ell()) {
                prop_assert_eq!(is_stable(&inst, &m, &q), is_stable(&inst, &swapped, &q), "{}", q);
            }
        }
    }

    #[test]
    fn verdict_witnesses_recheck((inst, m) in with_matching(instance(7, 4))) {
        for q in StabilityQuery::all_valid(inst.ell()) {
            let v = check(&inst, &m, &q).unwrap();
            prop_assert_eq!(v.stable, is_stable(&inst, &m, &q));
            prop_assert!(witness_rechecks(&inst, &m, &q, &v), "{}", q);
        }
    }

    #[test]
    fn low_alpha_weak_always_stable(inst in instance(8, 5)) {
        let ell = inst.ell();
        for alpha in 1..=ell.div_ceil(2) {
            let m = solve_weak_lowalpha(&inst, alpha).unwrap();
            prop_assert!(is_stable(&inst, &m, &StabilityQuery::new(StabilityBase::Weak, Aggregation::Individual(alpha))));
            prop_assert!(is_stable(&inst, &m, &StabilityQuery::new(StabilityBase::Weak, Aggregation::Pair(alpha))));
        }
    }

    #[test]
    fn maximum_matching_is_maximum(g in graph()) {
        let m = maximum_matching(&g);
        prop_assert!(m.pairs().iter().all(|&(u, v)| g.has_edge(u, v)));
        prop_assert_eq!(m.len(), common::brute_force_max_matching(&g));
        let greedy = maximal_matching(&g);
        prop_assert!(g.edges().iter().all(|&(u, v)| greedy.is_matched(u) || greedy.is_matched(v)));
        prop_assert!(2 * greedy.len() >= m.len());
    }

    #[test]
    fn saturating_matching_covers_exactly_when_possible(g in graph(), mask in any::<u16>()) {
        let h: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        match saturating_matching(&g, &h) {
            Some(m) => {
                prop_assert!(h.iter().all(|&v| m.is_matched(v)));
                prop_assert!(m.pairs().iter().all(|&(u, v)| g.has_edge(u, v)));
            }
            None => {
                // Only edges touching H matter for covering it.
                let edges: Vec<_> = g.edges().into_iter().filter(|&(u, v)| h.contains(&u) || h.contains(&v)).collect();
                let covers = |chosen: &[(usize, usize)]| h.iter().all(|v| chosen.iter().any(|&(x, y)| x == *v || y == *v));
                let mut ok = false;
                let k = edges.len();
                prop_assume!(k <= 16);
                for sub in 0u32..1 << k {
                    let chosen: Vec<_> = (0..k).filter(|&i| sub >> i & 1 == 1).map(|i| edges[i]).collect();
                    let mut seen = vec![false; g.n()];
                    let disjoint = chosen.iter().all(|&(u, v)| !std::mem::replace(&mut seen[u], true) & !std::mem::replace(&mut seen[v], true));
                    if disjoint && covers(&chosen) {
                        ok = true;
                        break;
                    }
                }
                prop_assert!(!ok);
            }
        }
    }

    #[test]
    fn instance_documents_round_trip(inst in instance(9, 4)) {
        let doc = InstanceDocument::from_instance(&inst, &default_names(inst.n()));
        let back: InstanceDocument = from_json(&to_json(&doc)).unwrap();
        prop_assert_eq!(back.to_instance().unwrap(), inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_search_agrees_with_oracle(inst in instance(7, 3)) {
        let budget = OracleBudget::default();
        for q in StabilityQuery::all_valid(inst.ell()) {
            let truth = oracle_solve(&inst, &q, &budget).unwrap();
            let found = common::exact_search(&inst, &q);
            prop_assert_eq!(found.is_some(), truth.is_some(), "{}", q);
            if let Some(m) = found {
                prop_assert!(is_stable(&inst, &m, &q));
            }
        }
    }

    #[test]
    fn weak_branching_agrees_with_oracle(inst in symmetric_instance(8, 3)) {
        let q = StabilityQuery::new(StabilityBase::Weak, Aggregation::AllLayers);
        let truth = oracle_solve(&inst, &q, &OracleBudget::default()).unwrap();
        let found = common::weak_all_layers_search(&inst);
        prop_assert_eq!(found.is_some(), truth.is_some());
        if let Some(m) = found {
            prop_assert!(is_stable(&inst, &m, &q));
        }
    }
}
