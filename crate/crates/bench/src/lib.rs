//! Shared inputs for the criterion benches.

use pnanalyze_core::generate;
use pnanalyze_core::PetriNet;

/// Dining-philosopher nets of increasing size.
pub fn philosopher_nets() -> Vec<(usize, PetriNet)> {
    [4, 6, 8].into_iter().map(|n| (n, generate::philosophers(n))).collect()
}

/// A result line with long runs and a few isolated flips, `len` cells.
pub fn near_uniform_line(len: usize) -> String {
    (0..len)
        .map(|i| if i % 97 == 3 { '0' } else if i % 1013 == 7 { '.' } else { '1' })
        .collect()
}
