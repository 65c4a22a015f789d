//! Dead places, dead transitions and concurrent places from one exploration.
//!
//! Three sources feed a report: witnesses observed by the engine (a place
//! seen marked is not dead, a pair seen marked together is concurrent), the
//! engine's completeness (everything not witnessed is dead / not
//! concurrent), and structural facts that hold even for partial runs.

use std::fmt;

use thiserror::Error;

use crate::bdd::{BddStore, VarOrder};
use crate::budget::Budget;
use crate::explicit::{explore, Observations};
use crate::matrix::HalfMatrix;
use crate::net::PetriNet;
use crate::symbolic::{self, SymbolicError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn is_definite(self) -> bool {
        self != TriState::Unknown
    }

    /// Combines two answers for the same question. Definite answers win
    /// over unknown ones; contradictory definite answers are an error.
    pub fn merge(self, other: TriState) -> Option<TriState> {
        match (self, other) {
            (TriState::Unknown, x) | (x, TriState::Unknown) => Some(x),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }

    /// `'1'` for yes, `'0'` for no, `'.'` for unknown.
    pub fn as_char(self) -> char {
        match self {
            TriState::Yes => '1',
            TriState::No => '0',
            TriState::Unknown => '.',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '1' => Some(TriState::Yes),
            '0' => Some(TriState::No),
            '.' => Some(TriState::Unknown),
            _ => None,
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EngineChoice {
    Explicit,
    Bdd,
    /// BDD engine when the net is ordinary and 1-safe, explicit otherwise.
    #[default]
    Auto,
}

/// The engine that actually produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineKind {
    Explicit,
    Bdd,
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EngineKind::Explicit => "explicit",
            EngineKind::Bdd => "bdd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("internal soundness breach: {0}")]
    SoundnessBreach(String),
}

/// Items that cannot be dead-free in any run, derived from the net
/// structure alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralFacts {
    pub dead_places: Vec<bool>,
    pub dead_transitions: Vec<bool>,
}

/// Least fixpoint of two rules:
/// - a place is dead if it starts empty and all its producers are dead;
/// - a transition is dead if one of its input places is dead, or if an
///   input place starts with fewer tokens than the arc needs and all of the
///   place's producers are dead (its count can then only decrease).
pub fn structural_dead(net: &PetriNet) -> StructuralFacts {
    let np = net.place_count();
    let nt = net.transition_count();
    let mut producers: Vec<Vec<usize>> = vec![Vec::new(); np];
    for t in 0..nt {
        for a in net.post(t) {
            producers[a.place].push(t);
        }
    }
    let m0 = net.initial();
    let mut dead_p = vec![false; np];
    let mut dead_t = vec![false; nt];
    let mut changed = true;
    while changed {
        changed = false;
        for t in 0..nt {
            if dead_t[t] {
                continue;
            }
            let starved = net.pre(t).iter().any(|a| {
                dead_p[a.place]
                    || (m0.tokens(a.place) < a.weight
                        && producers[a.place].iter().all(|&u| dead_t[u]))
            });
            if starved {
                dead_t[t] = true;
                changed = true;
            }
        }
        for p in 0..np {
            if !dead_p[p] && m0.tokens(p) == 0 && producers[p].iter().all(|&u| dead_t[u]) {
                dead_p[p] = true;
                changed = true;
            }
        }
    }
    StructuralFacts {
        dead_places: dead_p,
        dead_transitions: dead_t,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    /// Yes means dead.
    pub dead_places: Vec<TriState>,
    /// Yes means dead.
    pub dead_transitions: Vec<TriState>,
    /// Yes means concurrent.
    pub concurrent: HalfMatrix<TriState>,
    /// No cell is unknown.
    pub complete: bool,
    pub engine: EngineKind,
    /// Markings explored (explicit) or reached (symbolic, saturating).
    pub states_visited: u128,
}

impl AnalysisReport {
    /// Verifies the laws linking the three results.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.dead_places.len();
        if self.concurrent.dim() != n {
            return Err(format!(
                "matrix dimension {} for {n} places",
                self.concurrent.dim()
            ));
        }
        for i in 0..n {
            let dead = self.dead_places[i];
            let diag = *self.concurrent.get(i, i);
            let expected = match dead {
                TriState::Yes => TriState::No,
                TriState::No => TriState::Yes,
                TriState::Unknown => TriState::Unknown,
            };
            if diag != expected {
                return Err(format!("place {}: dead={dead} but self-concurrent={diag}", i + 1));
            }
            for j in 0..=i {
                let c = *self.concurrent.get(i, j);
                if c == TriState::Yes
                    && (dead != TriState::No || self.dead_places[j] != TriState::No)
                {
                    return Err(format!("places {} and {} concurrent but not both alive", i + 1, j + 1));
                }
                if (dead == TriState::Yes || self.dead_places[j] == TriState::Yes)
                    && c != TriState::No
                {
                    return Err(format!("dead place in pair ({}, {}) with cell {c}", i + 1, j + 1));
                }
            }
        }
        let all_definite = self.dead_places.iter().all(|c| c.is_definite())
            && self.dead_transitions.iter().all(|c| c.is_definite())
            && self.concurrent.cells().iter().all(|c| c.is_definite());
        if self.complete && !all_definite {
            return Err("complete report with unknown cells".into());
        }
        Ok(())
    }
}

/// Quasi-live means no transition is dead.
pub fn is_quasi_live(report: &AnalysisReport) -> TriState {
    let cells = &report.dead_transitions;
    if cells.contains(&TriState::Yes) {
        TriState::No
    } else if cells.iter().all(|&c| c == TriState::No) {
        TriState::Yes
    } else {
        TriState::Unknown
    }
}

pub fn analyze(
    net: &PetriNet,
    engine: EngineChoice,
    budget: &Budget,
) -> Result<AnalysisReport, AnalysisError> {
    analyze_with_order(net, engine, budget, VarOrder::Declaration)
}

/// [`analyze`] with an explicit BDD variable order.
pub fn analyze_with_order(
    net: &PetriNet,
    engine: EngineChoice,
    budget: &Budget,
    order: VarOrder,
) -> Result<AnalysisReport, AnalysisError> {
    let facts = structural_dead(net);
    let (obs, kind) = match engine {
        EngineChoice::Explicit => (explore(net, budget), EngineKind::Explicit),
        EngineChoice::Bdd => (run_symbolic(net, budget, order)?, EngineKind::Bdd),
        EngineChoice::Auto => match run_symbolic(net, budget, order) {
            Ok(obs) => (obs, EngineKind::Bdd),
            Err(_) => (explore(net, budget), EngineKind::Explicit),
        },
    };
    let report = merge(net, &facts, &obs, kind)?;
    report
        .check_invariants()
        .map_err(AnalysisError::SoundnessBreach)?;
    Ok(report)
}

fn run_symbolic(
    net: &PetriNet,
    budget: &Budget,
    order: VarOrder,
) -> Result<Observations, SymbolicError> {
    symbolic::check_supported(net)?;
    let mut store = BddStore::new(net.place_count(), order);
    if let Some(limit) = budget.max_bdd_nodes {
        store = store.with_node_limit(limit);
    }
    let result = symbolic::symbolic_reach(&mut store, net, budget)?;
    Ok(symbolic::observe(&store, net, &result))
}

/// Combines engine observations with structural facts.
pub fn merge(
    net: &PetriNet,
    facts: &StructuralFacts,
    obs: &Observations,
    engine: EngineKind,
) -> Result<AnalysisReport, AnalysisError> {
    let dead = |seen: bool, structurally_dead: bool, what: &str| {
        match (seen, structurally_dead) {
            (true, true) => Err(AnalysisError::SoundnessBreach(format!(
                "{what} is structurally dead but was observed live"
            ))),
            (true, false) => Ok(TriState::No),
            (false, true) => Ok(TriState::Yes),
            (false, false) if obs.complete => Ok(TriState::Yes),
            (false, false) => Ok(TriState::Unknown),
        }
    };
    let dead_places = (0..net.place_count())
        .map(|p| {
            let what = format!("place {}", p + 1);
            dead(obs.place_marked[p], facts.dead_places[p], &what)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dead_transitions = (0..net.transition_count())
        .map(|t| {
            let what = format!("transition {}", t + 1);
            dead(obs.trans_enabled[t], facts.dead_transitions[t], &what)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let concurrent = obs.pairs.map(|i, j, &seen| {
        if seen {
            TriState::Yes
        } else if obs.complete || facts.dead_places[i] || facts.dead_places[j] {
            TriState::No
        } else {
            TriState::Unknown
        }
    });
    let complete = obs.complete
        || (dead_places.iter().all(|c| c.is_definite())
            && dead_transitions.iter().all(|c| c.is_definite())
            && concurrent.cells().iter().all(|c| c.is_definite()));
    Ok(AnalysisReport {
        dead_places,
        dead_transitions,
        concurrent,
        complete,
        engine,
        states_visited: obs.states_visited,
    })
}
