//! Matchings in Abelian groups and linear matchings of subspaces in field
//! extensions: exact constructions, brute-force oracles, and re-checkable
//! witness certificates.
//!
//! A matching is a bijection f: A → B between finite subsets of an Abelian
//! group with a + f(a) ∉ A for every a. The crate builds explicit witnesses
//! that certain groups and field extensions admit distinct matchings with
//! equal multiplicity profiles, validates each construction against
//! independent enumeration oracles, and serializes the results as JSON
//! certificates that any conforming checker can re-derive.

pub mod cert;
pub mod constructions;
pub mod group;
pub mod linear;
pub mod matching;
pub mod report;
pub mod search;

pub use group::{legendre, CarrierKind, ElementOrder, GroupCarrier, GroupElement, GroupError};
pub use matching::{
    FailureWitness, Matching, MatchingError, MultiplicityProfile, MatchingViolation,
};
pub use search::{Bounded, Budget, ENUMERATION_BOUND};
