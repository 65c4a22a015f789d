//! Engines against the brute-force oracle and against each other.

use pnanalyze_core::bdd::{BddStore, VarOrder};
use pnanalyze_core::generate::{random_net, random_safe_net, RandomNetParams};
use pnanalyze_core::oracle::{check_refines, definite_cells, oracle_analyze};
use pnanalyze_core::symbolic::{query_r, symbolic_reach};
use pnanalyze_core::{analyze, explore, is_quasi_live, Budget, EngineChoice, PetriNet, TriState};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const STATE_CAP: usize = 10_000;

fn bounded_random_net(seed: u64) -> Option<PetriNet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net = random_net(&mut rng, &RandomNetParams::default());
    let probe = explore(&net, &Budget::unlimited().with_max_states(STATE_CAP));
    probe.complete.then_some(net)
}

fn safe_net(seed: u64) -> PetriNet {
    random_safe_net(&mut ChaCha8Rng::seed_from_u64(seed), 8, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn explicit_matches_oracle(seed in any::<u64>()) {
        let Some(net) = bounded_random_net(seed) else { return Ok(()) };
        let oracle = oracle_analyze(&net, STATE_CAP).unwrap();
        let report = analyze(&net, EngineChoice::Explicit, &Budget::unlimited()).unwrap();
        prop_assert!(report.complete);
        prop_assert_eq!(report.states_visited, oracle.markings.len() as u128);
        prop_assert_eq!(oracle.check_report(&report), Ok(()));
        prop_assert_eq!(report.check_invariants(), Ok(()));
        let all_live = oracle.dead_transitions.iter().all(|&d| !d);
        prop_assert_eq!(is_quasi_live(&report), TriState::from_bool(all_live));
    }

    #[test]
    fn bdd_matches_explicit_on_safe_nets(seed in any::<u64>(), reversed in any::<bool>()) {
        let net = safe_net(seed);
        let order = if reversed { VarOrder::Reversed } else { VarOrder::Declaration };
        let explicit = analyze(&net, EngineChoice::Explicit, &Budget::unlimited()).unwrap();
        let symbolic = pnanalyze_core::analyze_with_order(
            &net, EngineChoice::Bdd, &Budget::unlimited(), order,
        ).unwrap();
        prop_assert_eq!(&symbolic.dead_places, &explicit.dead_places);
        prop_assert_eq!(&symbolic.dead_transitions, &explicit.dead_transitions);
        prop_assert_eq!(&symbolic.concurrent, &explicit.concurrent);
        prop_assert_eq!(symbolic.states_visited, explicit.states_visited);
    }

    #[test]
    fn reachability_queries_match_explicit_observations(seed in any::<u64>()) {
        let net = safe_net(seed);
        let obs = explore(&net, &Budget::unlimited());
        let mut store = BddStore::new(net.place_count(), VarOrder::Declaration);
        let result = symbolic_reach(&mut store, &net, &Budget::unlimited()).unwrap();
        prop_assert!(result.complete);
        for p in 0..net.place_count() {
            prop_assert_eq!(query_r(&store, &result, &[p]) == TriState::Yes, obs.place_marked[p]);
            for q in 0..=p {
                prop_assert_eq!(query_r(&store, &result, &[p, q]) == TriState::Yes, *obs.pairs.get(p, q));
            }
        }
        for t in 0..net.transition_count() {
            prop_assert_eq!(query_r(&store, &result, &net.preset(t)) == TriState::Yes, obs.trans_enabled[t]);
        }
    }

    #[test]
    fn partial_explicit_runs_are_sound(seed in any::<u64>(), budget in 1usize..40) {
        let Some(net) = bounded_random_net(seed) else { return Ok(()) };
        let full = analyze(&net, EngineChoice::Explicit, &Budget::unlimited()).unwrap();
        let partial = analyze(&net, EngineChoice::Explicit, &Budget::unlimited().with_max_states(budget)).unwrap();
        prop_assert_eq!(partial.check_invariants(), Ok(()));
        prop_assert_eq!(check_refines(&partial, &full), Ok(()));
        let bigger = analyze(&net, EngineChoice::Explicit, &Budget::unlimited().with_max_states(budget * 2)).unwrap();
        prop_assert!(definite_cells(&bigger) >= definite_cells(&partial));
        prop_assert_eq!(check_refines(&partial, &bigger), Ok(()));
    }

    #[test]
    fn partial_symbolic_runs_are_sound(seed in any::<u64>(), nodes in 2usize..60, states in 1usize..20) {
        let net = safe_net(seed);
        let full = analyze(&net, EngineChoice::Explicit, &Budget::unlimited()).unwrap();
        for budget in [
            Budget::unlimited().with_max_bdd_nodes(nodes + net.place_count()),
            Budget::unlimited().with_max_states(states),
        ] {
            if let Ok(partial) = analyze(&net, EngineChoice::Bdd, &budget) {
                prop_assert_eq!(partial.check_invariants(), Ok(()));
                prop_assert_eq!(check_refines(&partial, &full), Ok(()));
            }
        }
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>(), budget in 1usize..20) {
        let Some(net) = bounded_random_net(seed) else { return Ok(()) };
        let b = Budget::unlimited().with_max_states(budget);
        prop_assert_eq!(explore(&net, &b), explore(&net, &b));
    }
}

#[test]
fn philosophers_agree_across_engines() {
    let net = pnanalyze_core::generate::philosophers(4);
    let explicit = analyze(&net, EngineChoice::Explicit, &Budget::unlimited()).unwrap();
    let symbolic = analyze(&net, EngineChoice::Bdd, &Budget::unlimited()).unwrap();
    assert_eq!(explicit.concurrent, symbolic.concurrent);
    assert_eq!(explicit.states_visited, symbolic.states_visited);
    let oracle = oracle_analyze(&net, STATE_CAP).unwrap();
    assert_eq!(oracle.check_report(&symbolic), Ok(()));
}
