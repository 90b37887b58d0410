//! Linear matching theory over field towers: finite extensions
//! GF(p) ⊆ GF(p^n) and the purely transcendental model Q ⊆ Q(t), with
//! subspace algebra, the strong-matching criterion, matched bases, and the
//! scalar-equivalence witnesses.

pub mod fp;
pub mod gf;
pub mod qpoly;
pub mod strong;
pub mod subspace;
pub mod witness;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinearError {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("polynomial degree exceeds the configured cap {0}")]
    DegreeCapExceeded(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub use gf::{GfElem, GfTower};
pub use qpoly::{QPoly, RatFunc};
pub use strong::{
    is_linear_acyclic, is_matched_basis, is_matched_subspace, is_strong_matching,
    pointwise_quad_equal, quad_map_equal, strong_matching_exists, KMatrix, KScalar, LinearMap,
    MatchMode, MatchedOutcome,
};
pub use subspace::{
    enumerate_gl, enumerate_subspaces, ordered_bases, unordered_bases, FieldElem, FieldTower,
    RatFunTower, Subspace,
};
pub use witness::{
    intermediate_fields, linear_witness, lmp_counterexample_search, subfield_subspace,
    transcendental_witness, LinearWitness, LinearWitnessClaims, LmpCounterexample,
};
