//! Micromagnon structures and the product approximation of ground states.
//!
//! A configuration in the Néel sector is cut into Néel sea and structures
//! using its cumulative magnetization deviation. Amplitudes of isolated
//! structures and pair corrections, read off an exact reference ring, form
//! a [`StructureDictionary`]; products of dictionary entries then estimate
//! relative amplitudes on longer chains.

mod dictionary;
mod estimate;
mod split;
mod structure;

pub use dictionary::{
    DictionaryOptions, DictionaryProvenance, StructureDictionary, DICTIONARY_FORMAT, DICTIONARY_VERSION, SANITY_BOUND,
};
pub use estimate::{
    approximate_ground_state, approximate_relative_amplitude, estimate_parsed, generate_candidates, ApproxGroundState,
    CandidateRules,
};
pub use split::{
    measured_split_amplitude, neighbouring_sum_ratio, pair_ratio, place_mumagnons, split_magnon_fit,
    split_magnon_placements, SplitPlacement, SPLIT_FIT_MAX_GAP,
};
pub use structure::{
    count_changed_large_spins, count_mumagnons, parse_structures, ParsedConfiguration, Piece, Signature, Structure,
};
