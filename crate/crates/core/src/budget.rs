//! Resource limits shared by both engines.

use std::time::{Duration, Instant};

/// Limits for one exploration. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    /// Markings the explicit engine may process. The symbolic engine stops
    /// at the first iteration boundary where its reached set is this large.
    pub max_states: Option<usize>,
    pub wall_clock: Option<Duration>,
    /// Node table size of the BDD store.
    pub max_bdd_nodes: Option<usize>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_max_states(mut self, n: usize) -> Self {
        self.max_states = Some(n);
        self
    }

    pub fn with_wall_clock(mut self, d: Duration) -> Self {
        self.wall_clock = Some(d);
        self
    }

    pub fn with_max_bdd_nodes(mut self, n: usize) -> Self {
        self.max_bdd_nodes = Some(n);
        self
    }

    pub(crate) fn deadline(&self) -> Deadline {
        Deadline(self.wall_clock.and_then(|d| Instant::now().checked_add(d)))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Deadline(Option<Instant>);

impl Deadline {
    pub(crate) fn passed(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }
}
