//! Breadth-first explicit-state exploration.
//!
//! Every processed marking updates three observation families: places seen
//! marked, transitions seen enabled and place pairs seen marked together.
//! A set bit is a witness and stays valid whatever the budget; a clear bit
//! only means "not seen", which is conclusive when the run is complete.

use indexmap::IndexSet;

use crate::budget::Budget;
use crate::matrix::HalfMatrix;
use crate::net::{FireError, Marking, PetriNet};

/// Deadline checks happen once per this many processed markings.
const CLOCK_STRIDE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Observations {
    pub place_marked: Vec<bool>,
    pub trans_enabled: Vec<bool>,
    /// Cell `(i, j)` is set when some visited marking marks both places;
    /// the diagonal mirrors `place_marked`.
    pub pairs: HalfMatrix<bool>,
    /// The whole reachable set was processed, with no cutoff and no token
    /// cap overflow.
    pub complete: bool,
    pub states_visited: u128,
}

impl Observations {
    pub fn empty(net: &PetriNet) -> Self {
        Observations {
            place_marked: vec![false; net.place_count()],
            trans_enabled: vec![false; net.transition_count()],
            pairs: HalfMatrix::new(net.place_count(), false),
            complete: false,
            states_visited: 0,
        }
    }

    pub fn visited_count(&self) -> u128 {
        self.states_visited
    }

    fn mark_all_pairs(&mut self, m: &Marking) {
        let marked: Vec<usize> = m.marked_places().collect();
        for (k, &p) in marked.iter().enumerate() {
            self.place_marked[p] = true;
            for &q in &marked[..=k] {
                self.pairs.set(p, q, true);
            }
        }
    }
}

const NO_PARENT: u32 = u32::MAX;

/// Explores the reachable markings of `net` from its initial marking.
///
/// Markings are processed in FIFO order and transitions tried in index
/// order, so equal budgets give identical observations.
pub fn explore(net: &PetriNet, budget: &Budget) -> Observations {
    let deadline = budget.deadline();
    let mut obs = Observations::empty(net);
    let mut states: IndexSet<Marking> = IndexSet::new();
    // (parent index, fired transition) per discovered marking.
    let mut origin: Vec<(u32, u32)> = Vec::new();
    states.insert(net.initial().clone());
    origin.push((NO_PARENT, 0));

    let mut overflow = false;
    let mut cut = false;
    let mut cursor = 0;
    let mut successors = Vec::new();
    while cursor < states.len() {
        if budget.max_states.is_some_and(|n| cursor >= n)
            || (cursor % CLOCK_STRIDE == 0 && cursor > 0 && deadline.passed())
        {
            cut = true;
            break;
        }
        let m = &states[cursor];
        record(net, &mut obs, &states, m, origin[cursor]);

        successors.clear();
        for t in 0..net.transition_count() {
            if !net.enabled(m, t) {
                continue;
            }
            obs.trans_enabled[t] = true;
            match net.fire(m, t) {
                Ok(next) => successors.push((next, t)),
                Err(FireError::CapExceeded { .. }) => overflow = true,
                Err(FireError::NotEnabled(_)) => unreachable!("checked above"),
            }
        }
        for (next, t) in successors.drain(..) {
            if states.insert(next) {
                origin.push((cursor as u32, t as u32));
            }
        }
        cursor += 1;
    }

    obs.states_visited = cursor as u128;
    obs.complete = !cut && !overflow;
    obs
}

/// Updates observations for marking `m`. Pairs already marked in the parent
/// were recorded when the parent was processed, so only pairs involving a
/// place that went from empty to marked need setting.
fn record(
    net: &PetriNet,
    obs: &mut Observations,
    states: &IndexSet<Marking>,
    m: &Marking,
    (parent, t): (u32, u32),
) {
    if parent == NO_PARENT {
        obs.mark_all_pairs(m);
        return;
    }
    let before = &states[parent as usize];
    for a in net.post(t as usize) {
        let p = a.place;
        if before.is_marked(p) || !m.is_marked(p) {
            continue;
        }
        obs.place_marked[p] = true;
        for q in m.marked_places() {
            obs.pairs.set(p, q, true);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::NetBuilder;

    fn chain() -> PetriNet {
        PetriNet::build([("p1", 1), ("p2", 0)], ["t1"], [("p1", "t1", 1), ("t1", "p2", 1)])
            .unwrap()
    }

    fn fork() -> PetriNet {
        PetriNet::build(
            [("p0", 1), ("p1", 0), ("p2", 0)],
            ["t"],
            [("p0", "t", 1), ("t", "p1", 1), ("t", "p2", 1)],
        )
        .unwrap()
    }

    #[test]
    fn chain_full_run() {
        let obs = explore(&chain(), &Budget::unlimited());
        assert_eq!(obs.place_marked, [true, true]);
        assert_eq!(obs.trans_enabled, [true]);
        assert!(*obs.pairs.get(0, 0));
        assert!(!*obs.pairs.get(1, 0));
        assert!(*obs.pairs.get(1, 1));
        assert!(obs.complete);
        assert_eq!(obs.visited_count(), 2);
    }

    #[test]
    fn fork_pairs() {
        let obs = explore(&fork(), &Budget::unlimited());
        assert!(*obs.pairs.get(2, 1));
        assert!(!*obs.pairs.get(1, 0));
        assert!(!*obs.pairs.get(2, 0));
        assert!(obs.complete);
    }

    #[test]
    fn chain_single_state_budget() {
        let obs = explore(&chain(), &Budget::unlimited().with_max_states(1));
        assert_eq!(obs.place_marked, [true, false]);
        assert_eq!(obs.trans_enabled, [true]);
        assert!(!obs.complete);
        assert_eq!(obs.visited_count(), 1);
    }

    #[test]
    fn budget_equal_to_state_count_is_complete() {
        let obs = explore(&chain(), &Budget::unlimited().with_max_states(2));
        assert!(obs.complete);
    }

    #[test]
    fn no_enabled_transition() {
        let net = PetriNet::build([("p", 0)], ["t"], [("p", "t", 1)]).unwrap();
        let obs = explore(&net, &Budget::unlimited());
        assert_eq!(obs.visited_count(), 1);
        assert_eq!(obs.trans_enabled, [false]);
        assert!(obs.complete);
    }

    #[test]
    fn pairs_across_independent_cycles() {
        // Two 2-place cycles; every cross pair is co-marked at some point,
        // including pairs formed when a place is refilled.
        let net = PetriNet::build(
            [("p1", 1), ("p2", 0), ("q1", 1), ("q2", 0)],
            ["a", "b", "c", "d"],
            [
                ("p1", "a", 1),
                ("a", "p2", 1),
                ("p2", "b", 1),
                ("b", "p1", 1),
                ("q1", "c", 1),
                ("c", "q2", 1),
                ("q2", "d", 1),
                ("d", "q1", 1),
            ],
        )
        .unwrap();
        let obs = explore(&net, &Budget::unlimited());
        assert!(obs.complete);
        assert_eq!(obs.visited_count(), 4);
        for (p, q) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert!(*obs.pairs.get(p, q), "({p},{q})");
        }
        assert!(!*obs.pairs.get(0, 1));
        assert!(!*obs.pairs.get(2, 3));
    }

    #[test]
    fn unbounded_net_hits_token_cap() {
        let mut b = NetBuilder::new();
        b.token_cap(5);
        b.add_place("p", 1).unwrap();
        b.add_transition("t").unwrap();
        b.add_arc("t", "p", 1);
        let obs = explore(&b.build().unwrap(), &Budget::unlimited());
        assert!(!obs.complete);
        assert_eq!(obs.visited_count(), 5);
        assert_eq!(obs.trans_enabled, [true]);
    }

    #[test]
    fn runs_are_deterministic() {
        let net = fork();
        let budget = Budget::unlimited().with_max_states(1);
        assert_eq!(explore(&net, &budget), explore(&net, &budget));
    }
}
