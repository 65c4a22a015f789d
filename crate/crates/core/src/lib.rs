//! Global analyses of place/transition nets: dead places, dead transitions
//! and the concurrent-places relation.
//!
//! A net is parsed once ([`io`]), explored once by one of two engines
//! ([`explicit`] or the BDD-based [`symbolic`]), and the observations are
//! merged with structural facts into a tri-state [`AnalysisReport`]. Reports
//! are rendered in a compact run-length-encoded text format ([`codec`]).

pub mod analysis;
pub mod bdd;
pub mod budget;
pub mod codec;
pub mod explicit;
pub mod generate;
pub mod io;
pub mod matrix;
pub mod net;
pub mod oracle;
pub mod symbolic;

pub use analysis::{
    analyze, analyze_with_order, is_quasi_live, structural_dead, AnalysisError, AnalysisReport,
    EngineChoice, EngineKind, StructuralFacts, TriState,
};
pub use bdd::VarOrder;
pub use budget::Budget;
pub use codec::CodecError;
pub use explicit::{explore, Observations};
pub use io::{parse_net, parse_pnml, parse_text, NetFormat, ParseError};
pub use matrix::HalfMatrix;
pub use net::{Arc, Marking, NetError, PetriNet, DEFAULT_TOKEN_CAP};
