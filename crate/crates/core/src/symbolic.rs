//! Symbolic reachability for ordinary 1-safe nets.
//!
//! A marking is a valuation of one boolean variable per place. The reached
//! set is grown breadth-first, `S(k+1) = S(k) ∪ ⋃ img_t(S(k))`, where each
//! per-transition image conjoins the preset, quantifies the touched places
//! away, and conjoins their post-firing values. Only the frontier is fed to
//! the images, which yields the same iterates.

use thiserror::Error;

use crate::analysis::TriState;
use crate::bdd::{Bdd, BddError, BddStore};
use crate::budget::Budget;
use crate::explicit::Observations;
use crate::matrix::HalfMatrix;
use crate::net::PetriNet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error("net is not ordinary: transition `{transition}` has an arc of weight {weight}")]
    NonOrdinary { transition: String, weight: u32 },
    #[error("net is not 1-safe: place `{place}` starts with {tokens} tokens")]
    InitialNotSafe { place: String, tokens: u32 },
    #[error("net is not 1-safe: firing `{transition}` can put a second token in `{place}`")]
    NotSafe { transition: String, place: String },
    #[error("store has {store} variables, net has {places} places")]
    VariableCount { store: usize, places: usize },
    #[error(transparent)]
    Bdd(#[from] BddError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolicResult {
    /// Reached markings; all of them are reachable, and they are all the
    /// reachable ones when `complete` holds.
    pub reach: Bdd,
    pub complete: bool,
    pub iterations: usize,
}

/// Per-transition constants of the image computation.
struct Image {
    enable: Bdd,
    /// Places in `t• \ •t`; marked ones would receive a second token.
    fresh: Vec<usize>,
    touched: Vec<usize>,
    effect: Bdd,
}

/// Rejects nets the symbolic engine cannot represent.
pub fn check_supported(net: &PetriNet) -> Result<(), SymbolicError> {
    for t in 0..net.transition_count() {
        if let Some(a) = net.pre(t).iter().chain(net.post(t)).find(|a| a.weight != 1) {
            return Err(SymbolicError::NonOrdinary {
                transition: net.transitions()[t].id.clone(),
                weight: a.weight,
            });
        }
    }
    if let Some(p) = net.places().iter().find(|p| p.initial > 1) {
        return Err(SymbolicError::InitialNotSafe {
            place: p.id.clone(),
            tokens: p.initial,
        });
    }
    Ok(())
}

/// Computes the reachable set of `net` in `store`.
///
/// Budget exhaustion (node limit, wall clock, `max_states`) ends the run
/// with `complete == false` and the last fully computed iterate.
pub fn symbolic_reach(
    store: &mut BddStore,
    net: &PetriNet,
    budget: &Budget,
) -> Result<SymbolicResult, SymbolicError> {
    check_supported(net)?;
    if store.num_vars() != net.place_count() {
        return Err(SymbolicError::VariableCount {
            store: store.num_vars(),
            places: net.place_count(),
        });
    }
    let deadline = budget.deadline();

    let initial: Vec<(usize, bool)> = (0..net.place_count())
        .map(|p| (p, net.initial().is_marked(p)))
        .collect();
    let init = store.cube(&initial)?;
    let mut result = SymbolicResult {
        reach: init,
        complete: false,
        iterations: 0,
    };

    let images = match prepare(store, net) {
        Ok(images) => images,
        Err(BddError::NodeLimit(_)) => return Ok(result),
    };

    let mut frontier = init;
    loop {
        if deadline.passed() {
            return Ok(result);
        }
        let new = match step(store, net, &images, frontier, result.reach)? {
            Some(new) => new,
            None => return Ok(result),
        };
        if new.is_false() {
            result.complete = true;
            return Ok(result);
        }
        let size_cut = budget
            .max_states
            .is_some_and(|n| store.sat_count(result.reach) >= n as u128);
        if size_cut || deadline.passed() {
            return Ok(result);
        }
        let reach = match store.or(result.reach, new) {
            Ok(r) => r,
            Err(_) => return Ok(result),
        };
        result.reach = reach;
        result.iterations += 1;
        frontier = new;
    }
}

fn prepare(store: &mut BddStore, net: &PetriNet) -> Result<Vec<Image>, BddError> {
    let mut images = Vec::with_capacity(net.transition_count());
    for t in 0..net.transition_count() {
        let pre = net.preset(t);
        let post = net.postset(t);
        let enable_lits: Vec<_> = pre.iter().map(|&p| (p, true)).collect();
        let mut effect_lits: Vec<_> = pre
            .iter()
            .filter(|p| !post.contains(p))
            .map(|&p| (p, false))
            .collect();
        effect_lits.extend(post.iter().map(|&p| (p, true)));
        let mut touched = pre.clone();
        touched.extend(post.iter().filter(|p| !pre.contains(p)));
        images.push(Image {
            enable: store.cube(&enable_lits)?,
            fresh: post.iter().copied().filter(|p| !pre.contains(p)).collect(),
            touched,
            effect: store.cube(&effect_lits)?,
        });
    }
    Ok(images)
}

/// New markings one step from `frontier`, or `None` if the node limit was
/// hit.
fn step(
    store: &mut BddStore,
    net: &PetriNet,
    images: &[Image],
    frontier: Bdd,
    reach: Bdd,
) -> Result<Option<Bdd>, SymbolicError> {
    match image(store, net, images, frontier, reach) {
        Ok(new) => Ok(Some(new)),
        Err(SymbolicError::Bdd(BddError::NodeLimit(_))) => Ok(None),
        Err(e) => Err(e),
    }
}

fn image(
    store: &mut BddStore,
    net: &PetriNet,
    images: &[Image],
    frontier: Bdd,
    reach: Bdd,
) -> Result<Bdd, SymbolicError> {
    let mut acc = Bdd::FALSE;
    for (t, img) in images.iter().enumerate() {
        let enabled = store.and(frontier, img.enable)?;
        if enabled.is_false() {
            continue;
        }
        if let Some(&q) = img.fresh.iter().find(|&&q| store.satisfiable_with(enabled, &[q])) {
            return Err(SymbolicError::NotSafe {
                transition: net.transitions()[t].id.clone(),
                place: net.places()[q].id.clone(),
            });
        }
        let mut succ = enabled;
        for &p in &img.touched {
            succ = store.exists(succ, p)?;
        }
        succ = store.and(succ, img.effect)?;
        acc = store.or(acc, succ)?;
    }
    Ok(store.diff(acc, reach)?)
}

/// Answers "some reached marking marks every place in `places`".
pub fn query_r(store: &BddStore, result: &SymbolicResult, places: &[usize]) -> TriState {
    if store.satisfiable_with(result.reach, places) {
        TriState::Yes
    } else if result.complete {
        TriState::No
    } else {
        TriState::Unknown
    }
}

/// Reads the three observation families off a reached set.
pub fn observe(store: &BddStore, net: &PetriNet, result: &SymbolicResult) -> Observations {
    let n = net.place_count();
    let place_marked = store.possibly_true(result.reach, None);
    let mut pairs = HalfMatrix::new(n, false);
    for (p, _) in place_marked.iter().enumerate().filter(|(_, &m)| m) {
        let with_p = store.possibly_true(result.reach, Some(p));
        for (q, &b) in with_p.iter().enumerate().take(p + 1) {
            pairs.set(p, q, b);
        }
    }
    let trans_enabled = (0..net.transition_count())
        .map(|t| store.satisfiable_with(result.reach, &net.preset(t)))
        .collect();
    Observations {
        place_marked,
        trans_enabled,
        pairs,
        complete: result.complete,
        states_visited: store.sat_count(result.reach),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bdd::VarOrder;

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

    fn valuations(store: &BddStore, f: Bdd, n: usize) -> Vec<String> {
        (0..1u32 << n)
            .map(|bits| (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect::<Vec<_>>())
            .filter(|a| store.eval(f, a))
            .map(|a| a.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }

    #[test]
    fn chain_reach() {
        let net = chain();
        let mut store = BddStore::new(2, VarOrder::Declaration);
        let r = symbolic_reach(&mut store, &net, &Budget::unlimited()).unwrap();
        assert!(r.complete);
        assert_eq!(valuations(&store, r.reach, 2), ["01", "10"]);
        assert_eq!(query_r(&store, &r, &[0]), TriState::Yes);
        assert_eq!(query_r(&store, &r, &[0, 1]), TriState::No);
    }

    #[test]
    fn fork_reach() {
        let net = fork();
        let mut store = BddStore::new(3, VarOrder::Reversed);
        let r = symbolic_reach(&mut store, &net, &Budget::unlimited()).unwrap();
        assert!(r.complete);
        assert_eq!(valuations(&store, r.reach, 3), ["011", "100"]);
        assert_eq!(store.sat_count(r.reach), 2);
    }

    #[test]
    fn cut_after_initial_set() {
        let net = chain();
        let mut store = BddStore::new(2, VarOrder::Declaration);
        let budget = Budget::unlimited().with_max_states(1);
        let r = symbolic_reach(&mut store, &net, &budget).unwrap();
        assert!(!r.complete);
        assert_eq!(r.iterations, 0);
        assert_eq!(query_r(&store, &r, &[1]), TriState::Unknown);
        assert_eq!(query_r(&store, &r, &[0]), TriState::Yes);
    }

    #[test]
    fn node_limit_gives_partial_result() {
        let net = fork();
        let mut store = BddStore::new(3, VarOrder::Declaration).with_node_limit(6);
        let r = symbolic_reach(&mut store, &net, &Budget::unlimited()).unwrap();
        assert!(!r.complete);
        assert!(store.satisfiable_with(r.reach, &[0]));
    }

    #[test]
    fn rejections() {
        let weighted = PetriNet::build([("p", 2)], ["t"], [("p", "t", 2)]).unwrap();
        let mut store = BddStore::new(1, VarOrder::Declaration);
        assert!(matches!(
            symbolic_reach(&mut store, &weighted, &Budget::unlimited()),
            Err(SymbolicError::NonOrdinary { weight: 2, .. })
        ));

        let two = PetriNet::build([("p", 2)], Vec::<&str>::new(), []).unwrap();
        assert!(matches!(
            symbolic_reach(&mut store, &two, &Budget::unlimited()),
            Err(SymbolicError::InitialNotSafe { .. })
        ));

        // t keeps p marked and adds a token to q, which is already marked.
        let unsafe_net = PetriNet::build(
            [("p", 1), ("q", 1)],
            ["t"],
            [("p", "t", 1), ("t", "p", 1), ("t", "q", 1)],
        )
        .unwrap();
        let mut store = BddStore::new(2, VarOrder::Declaration);
        assert!(matches!(
            symbolic_reach(&mut store, &unsafe_net, &Budget::unlimited()),
            Err(SymbolicError::NotSafe { .. })
        ));
    }

    #[test]
    fn observations_match_queries() {
        let net = fork();
        let mut store = BddStore::new(3, VarOrder::Declaration);
        let r = symbolic_reach(&mut store, &net, &Budget::unlimited()).unwrap();
        let obs = observe(&store, &net, &r);
        for p in 0..3 {
            for q in 0..=p {
                let expected = query_r(&store, &r, &[p, q]) == TriState::Yes;
                assert_eq!(*obs.pairs.get(p, q), expected, "({p},{q})");
            }
        }
        assert_eq!(obs.trans_enabled, [true]);
        assert_eq!(obs.states_visited, 2);
    }
}
