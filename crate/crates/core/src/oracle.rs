//! Brute-force reference answers for small nets.
//!
//! Used by the test suites to check the engines. It shares nothing with
//! them beyond the net's arc lists: its own firing rule over a dense weight
//! table, a depth-first enumeration into an ordered set, and a second pass
//! over the stored markings that evaluates the definitions literally.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::analysis::{AnalysisReport, TriState};
use crate::matrix::HalfMatrix;
use crate::net::PetriNet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("more than {0} reachable markings")]
    CapExceeded(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    /// Every reachable marking, once.
    pub markings: Vec<Vec<u64>>,
    pub dead_places: Vec<bool>,
    pub dead_transitions: Vec<bool>,
    pub concurrent: HalfMatrix<bool>,
}

pub fn oracle_analyze(net: &PetriNet, hard_cap: usize) -> Result<OracleAnswer, OracleError> {
    let np = net.place_count();
    let nt = net.transition_count();
    let mut consume = vec![vec![0u64; np]; nt];
    let mut produce = vec![vec![0u64; np]; nt];
    for t in 0..nt {
        for a in net.pre(t) {
            consume[t][a.place] += u64::from(a.weight);
        }
        for a in net.post(t) {
            produce[t][a.place] += u64::from(a.weight);
        }
    }
    let can_fire = |m: &[u64], t: usize| (0..np).all(|p| m[p] >= consume[t][p]);

    let start: Vec<u64> = net.initial().as_slice().iter().map(|&n| u64::from(n)).collect();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(m) = stack.pop() {
        if seen.contains(&m) {
            continue;
        }
        for t in (0..nt).rev() {
            if can_fire(&m, t) {
                let next: Vec<u64> = (0..np)
                    .map(|p| m[p] - consume[t][p] + produce[t][p])
                    .collect();
                if !seen.contains(&next) {
                    stack.push(next);
                }
            }
        }
        seen.insert(m);
        if seen.len() > hard_cap {
            return Err(OracleError::CapExceeded(hard_cap));
        }
    }
    let markings: Vec<Vec<u64>> = seen.into_iter().collect();

    let dead_places = (0..np)
        .map(|p| !markings.iter().any(|m| m[p] > 0))
        .collect();
    let dead_transitions = (0..nt)
        .map(|t| !markings.iter().any(|m| can_fire(m, t)))
        .collect();
    let mut concurrent = HalfMatrix::new(np, false);
    for i in 0..np {
        for j in 0..=i {
            let both = markings.iter().any(|m| m[i] > 0 && m[j] > 0);
            concurrent.set(i, j, both);
        }
    }
    Ok(OracleAnswer {
        markings,
        dead_places,
        dead_transitions,
        concurrent,
    })
}

impl OracleAnswer {
    /// Checks that `report` gives the same definite answer for every cell.
    pub fn check_report(&self, report: &AnalysisReport) -> Result<(), String> {
        check_cells("dead place", &report.dead_places, &self.dead_places)?;
        check_cells("dead transition", &report.dead_transitions, &self.dead_transitions)?;
        check_cells(
            "concurrent cell",
            report.concurrent.cells(),
            self.concurrent.cells(),
        )
    }
}

fn check_cells(what: &str, got: &[TriState], expected: &[bool]) -> Result<(), String> {
    if got.len() != expected.len() {
        return Err(format!("{what}: {} cells, expected {}", got.len(), expected.len()));
    }
    match (0..got.len()).find(|&k| got[k] != TriState::from_bool(expected[k])) {
        Some(k) => Err(format!(
            "{what} #{}: got {}, expected {}",
            k + 1,
            got[k],
            TriState::from_bool(expected[k])
        )),
        None => Ok(()),
    }
}

/// Checks that every definite cell of `partial` matches `full`, which must
/// have no unknown cells.
pub fn check_refines(partial: &AnalysisReport, full: &AnalysisReport) -> Result<(), String> {
    let pairs = [
        ("dead place", &partial.dead_places[..], &full.dead_places[..]),
        ("dead transition", &partial.dead_transitions[..], &full.dead_transitions[..]),
        ("concurrent cell", partial.concurrent.cells(), full.concurrent.cells()),
    ];
    for (what, p, f) in pairs {
        for (k, (&a, &b)) in p.iter().zip(f).enumerate() {
            if a.is_definite() && a != b {
                return Err(format!("{what} #{}: partial {a}, full {b}", k + 1));
            }
        }
    }
    Ok(())
}

/// Number of definite cells over all three results.
pub fn definite_cells(report: &AnalysisReport) -> usize {
    report
        .dead_places
        .iter()
        .chain(&report.dead_transitions)
        .chain(report.concurrent.cells())
        .filter(|c| c.is_definite())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain() {
        let net =
            PetriNet::build([("p1", 1), ("p2", 0)], ["t1"], [("p1", "t1", 1), ("t1", "p2", 1)])
                .unwrap();
        let a = oracle_analyze(&net, 100).unwrap();
        assert_eq!(a.markings.len(), 2);
        assert_eq!(a.dead_places, [false, false]);
        assert_eq!(a.dead_transitions, [false]);
        assert!(!*a.concurrent.get(1, 0));
    }

    #[test]
    fn fork() {
        let net = PetriNet::build(
            [("p0", 1), ("p1", 0), ("p2", 0)],
            ["t"],
            [("p0", "t", 1), ("t", "p1", 1), ("t", "p2", 1)],
        )
        .unwrap();
        let a = oracle_analyze(&net, 100).unwrap();
        assert_eq!(a.markings.len(), 2);
        assert!(*a.concurrent.get(1, 2));
    }

    #[test]
    fn isolated_place_is_dead() {
        let net = PetriNet::build([("p", 1), ("q", 0)], Vec::<&str>::new(), []).unwrap();
        let a = oracle_analyze(&net, 100).unwrap();
        assert_eq!(a.dead_places, [false, true]);
        for i in 0..2 {
            assert_eq!(*a.concurrent.get(i, i), !a.dead_places[i]);
        }
    }

    #[test]
    fn cap() {
        let net = PetriNet::build([("p", 0)], ["t"], [("t", "p", 1)]).unwrap();
        assert_eq!(oracle_analyze(&net, 50), Err(OracleError::CapExceeded(50)));
    }
}
