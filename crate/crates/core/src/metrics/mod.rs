//! Isomorphism, interleavings, and bracketed distances.

mod distance;
mod interleave;
mod iso;

pub use distance::{
    equivalence_chain, estimate_distance, lower_bounds, transfer_interleaving, Certificate, DistanceBracket, DistanceError, EquivalenceHop, LowerBound,
    TransferError,
};
pub use interleave::{
    monotone_paths, points_at, search_interleaving, verify_interleaving, Diagram, InterleavingFailure,
    InterleavingWitness, SearchOutcome, Side, DEFAULT_SEARCH_BUDGET,
};
pub use iso::{are_isomorphic, find_isomorphism, IsoOutcome, IsoWitness, DEFAULT_ISO_BUDGET};
