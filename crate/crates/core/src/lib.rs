//! Two-level fingerprinting codes.
//!
//! A fingerprinting code assigns each user a distinct codeword; a coalition
//! can forge any *descendant* of its members' words. This crate provides
//!
//! * exhaustive deciders for the frameproof (FP), secure-frameproof (SFP),
//!   identifiable-parent (IPP) and traceability (TA) properties, both for
//!   plain codes and for codes split into equal-size groups ([`verify`]);
//! * the splitting / amalgamating / replacing construction that turns any
//!   code into a grouped code of at least half its size whose groups use
//!   disjoint first symbols ([`construction`]);
//! * generators for polynomial-evaluation FP codes over prime fields and
//!   seeded random codes ([`generators`]).

pub mod code;
pub mod construction;
pub mod descendant;
pub mod error;
pub mod generators;
mod subsets;
pub mod verdict;
pub mod verify;

pub use code::{hamming_distance, min_distance_to_code, Alphabet, Code, Codeword, Symbol, TwoLevelCode};
pub use construction::{
    check_lemma_containment, construct_two_level, Construction, ConstructionReport, GuidedPicks, PickMode, SymbolRemap,
};
pub use descendant::{
    desc_t_candidates, enumerate_descendants, is_descendant, profiles_intersect, SymbolProfile,
    DEFAULT_DESCENDANT_CEILING,
};
pub use error::{Error, Result};
pub use generators::{gen_polynomial_fp_code, gen_random_code, partition_by_first_coordinate, PrimeField};
pub use verdict::{Clause, Verdict, Witness};
pub use verify::{
    is_t_fp, is_t_ipp, is_t_sfp, is_t_ta, is_two_level_fp, is_two_level_ipp, is_two_level_sfp, is_two_level_ta, Limits,
    Property, Verifier,
};
