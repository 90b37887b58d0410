//! Matchings between finite subsets of a group carrier, and their
//! multiplicity profiles.
//!
//! A matching is a bijection f: A → B with a + f(a) ∉ A for every a ∈ A.
//! The multiplicity profile records, for each sum value x, the fiber
//! {a ∈ A : a + f(a) = x}; two matchings are profile-equal when the fiber
//! *counts* agree as functions of x.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::group::{GroupCarrier, GroupElement, GroupError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed map: {0}")]
    MalformedMap(String),
    #[error("matching condition violated at {a}: {a} + {fa} = {sum} lies in the domain")]
    ConditionViolated { a: String, fa: String, sum: String },
    #[error("map is not a bijection onto the codomain: {0}")]
    NotBijection(String),
    #[error("matching is not invertible in place: domain and codomain differ")]
    NotInvertibleInPlace,
    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("enumeration bound exceeded: {0}")]
    BudgetExceeded(String),
}

/// First reason a candidate map fails to be a matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    NotBijection { detail: String },
    SumInDomain { a: GroupElement, fa: GroupElement, sum: GroupElement },
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::NotBijection { detail } => write!(f, "not a bijection: {detail}"),
            MatchingViolation::SumInDomain { a, fa, sum } => {
                write!(f, "sum {a} + {fa} = {sum} lies in the domain")
            }
        }
    }
}

/// A validated matching. Pairs are kept sorted by domain element, so equal
/// matchings have identical representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    carrier: GroupCarrier,
    pairs: Vec<(GroupElement, GroupElement)>,
}

/// Fiber decomposition of the sums x ↦ {a ∈ A : a + f(a) = x}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityProfile {
    fibers: BTreeMap<GroupElement, BTreeSet<GroupElement>>,
}

/// Two distinct matchings on the same pair with equal profiles; the order of
/// the failure is the common set size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureWitness {
    pub f: Matching,
    pub g: Matching,
}

impl FailureWitness {
    pub fn order(&self) -> usize {
        self.f.len()
    }
}

/// Checks the matching conditions for a candidate map, reporting the first
/// violation. `Err` is reserved for malformed input (map not a function on A,
/// elements outside the carrier); condition failures come back as `Ok(Some(_))`.
pub fn check_matching(
    carrier: &GroupCarrier,
    domain: &[GroupElement],
    codomain: &[GroupElement],
    map: &[(GroupElement, GroupElement)],
) -> Result<Option<MatchingViolation>, MatchingError> {
    if domain.is_empty() || codomain.is_empty() {
        return Err(MatchingError::MalformedMap("empty domain or codomain".into()));
    }
    for x in domain.iter().chain(codomain) {
        if !carrier.contains(x) {
            return Err(GroupError::CarrierMismatch.into());
        }
    }
    let a_set: BTreeSet<&GroupElement> = domain.iter().collect();
    let b_set: BTreeSet<&GroupElement> = codomain.iter().collect();
    if a_set.len() != domain.len() || b_set.len() != codomain.len() {
        return Err(MatchingError::MalformedMap("duplicate set elements".into()));
    }

    let mut seen_dom: BTreeSet<&GroupElement> = BTreeSet::new();
    for (a, _) in map {
        if !a_set.contains(a) {
            return Err(MatchingError::MalformedMap(format!(
                "map key {a} is outside the domain"
            )));
        }
        if !seen_dom.insert(a) {
            return Err(MatchingError::MalformedMap(format!(
                "map assigns {a} more than once"
            )));
        }
    }
    if seen_dom.len() != domain.len() {
        return Err(MatchingError::MalformedMap(
            "map does not cover the domain".into(),
        ));
    }

    if domain.len() != codomain.len() {
        return Ok(Some(MatchingViolation::NotBijection {
            detail: format!("|A| = {} but |B| = {}", domain.len(), codomain.len()),
        }));
    }
    let mut seen_img: BTreeSet<&GroupElement> = BTreeSet::new();
    for (a, fa) in map {
        if !b_set.contains(fa) {
            return Ok(Some(MatchingViolation::NotBijection {
                detail: format!("image {fa} of {a} is outside the codomain"),
            }));
        }
        if !seen_img.insert(fa) {
            return Ok(Some(MatchingViolation::NotBijection {
                detail: format!("image {fa} is hit twice"),
            }));
        }
    }

    for (a, fa) in map {
        let sum = carrier.add(a, fa)?;
        if a_set.contains(&sum) {
            return Ok(Some(MatchingViolation::SumInDomain {
                a: a.clone(),
                fa: fa.clone(),
                sum,
            }));
        }
    }
    Ok(None)
}

impl Matching {
    /// Validates and builds a matching from explicit sets and a pair list.
    pub fn new(
        carrier: &GroupCarrier,
        domain: &[GroupElement],
        codomain: &[GroupElement],
        map: Vec<(GroupElement, GroupElement)>,
    ) -> Result<Self, MatchingError> {
        match check_matching(carrier, domain, codomain, &map)? {
            None => {
                let mut pairs = map;
                pairs.sort_by(|x, y| x.0.cmp(&y.0));
                Ok(Self {
                    carrier: carrier.clone(),
                    pairs,
                })
            }
            Some(MatchingViolation::SumInDomain { a, fa, sum }) => {
                Err(MatchingError::ConditionViolated {
                    a: a.to_string(),
                    fa: fa.to_string(),
                    sum: sum.to_string(),
                })
            }
            Some(MatchingViolation::NotBijection { detail }) => {
                Err(MatchingError::NotBijection(detail))
            }
        }
    }

    /// Builds from the pair list alone; the codomain is taken to be the image.
    pub fn from_pairs(
        carrier: &GroupCarrier,
        map: Vec<(GroupElement, GroupElement)>,
    ) -> Result<Self, MatchingError> {
        let domain: Vec<GroupElement> = map.iter().map(|(a, _)| a.clone()).collect();
        let codomain: Vec<GroupElement> = map.iter().map(|(_, b)| b.clone()).collect();
        let codomain: BTreeSet<GroupElement> = codomain.into_iter().collect();
        let codomain: Vec<GroupElement> = codomain.into_iter().collect();
        Self::new(carrier, &domain, &codomain, map)
    }

    pub fn carrier(&self) -> &GroupCarrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs sorted by domain element.
    pub fn pairs(&self) -> &[(GroupElement, GroupElement)] {
        &self.pairs
    }

    pub fn domain(&self) -> Vec<GroupElement> {
        self.pairs.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn domain_set(&self) -> BTreeSet<GroupElement> {
        self.pairs.iter().map(|(a, _)| a.clone()).collect()
    }

    pub fn codomain_set(&self) -> BTreeSet<GroupElement> {
        self.pairs.iter().map(|(_, b)| b.clone()).collect()
    }

    pub fn apply(&self, a: &GroupElement) -> Option<&GroupElement> {
        self.pairs
            .binary_search_by(|(x, _)| x.cmp(a))
            .ok()
            .map(|i| &self.pairs[i].1)
    }

    pub fn profile(&self) -> MultiplicityProfile {
        let mut fibers: BTreeMap<GroupElement, BTreeSet<GroupElement>> = BTreeMap::new();
        for (a, fa) in &self.pairs {
            let sum = self.carrier.add(a, fa).expect("validated matching");
            fibers.entry(sum).or_default().insert(a.clone());
        }
        MultiplicityProfile { fibers }
    }

    /// The inverse bijection, for matchings with A = B. The sums form the
    /// same multiset, so the inverse is again a matching with equal profile.
    pub fn invert(&self) -> Result<Matching, MatchingError> {
        if self.domain_set() != self.codomain_set() {
            return Err(MatchingError::NotInvertibleInPlace);
        }
        let inv: Vec<(GroupElement, GroupElement)> = self
            .pairs
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let domain = self.domain();
        Matching::new(&self.carrier, &domain, &domain, inv)
    }

    /// Cycle decomposition of a matching with A = B, smallest element first
    /// in each cycle, cycles ordered by their smallest element.
    pub fn orbits(&self) -> Result<Vec<Vec<GroupElement>>, MatchingError> {
        if self.domain_set() != self.codomain_set() {
            return Err(MatchingError::NotInvertibleInPlace);
        }
        let mut remaining = self.domain_set();
        let mut cycles = Vec::new();
        while let Some(start) = remaining.iter().next().cloned() {
            let mut cycle = vec![start.clone()];
            remaining.remove(&start);
            let mut cur = self.apply(&start).unwrap().clone();
            while cur != start {
                remaining.remove(&cur);
                cycle.push(cur.clone());
                cur = self.apply(&cur).unwrap().clone();
            }
            cycles.push(cycle);
        }
        Ok(cycles)
    }

    /// Length of the f-cycle through a, i.e. the least n ≥ 1 with fⁿ(a) = a.
    pub fn ord_of(&self, a: &GroupElement) -> Result<Option<usize>, MatchingError> {
        let orbits = self.orbits()?;
        Ok(orbits.into_iter().find(|c| c.contains(a)).map(|c| c.len()))
    }

    /// Restriction of an A → A matching to A ∖ S, where S is a proper union
    /// of f-cycles. Sums are unchanged, so the restriction is a matching.
    pub fn restrict(&self, dropped: &BTreeSet<GroupElement>) -> Result<Matching, MatchingError> {
        if self.domain_set() != self.codomain_set() {
            return Err(MatchingError::NotInvertibleInPlace);
        }
        let domain = self.domain_set();
        if !dropped.is_subset(&domain) {
            return Err(MatchingError::InvalidRestriction(
                "dropped set is not contained in the domain".into(),
            ));
        }
        if dropped.len() == domain.len() {
            return Err(MatchingError::InvalidRestriction(
                "cannot drop the whole domain".into(),
            ));
        }
        for a in dropped {
            let image = self.apply(a).unwrap();
            if !dropped.contains(image) {
                return Err(MatchingError::InvalidRestriction(format!(
                    "set is not closed under the map: {a} maps outside"
                )));
            }
        }
        let pairs: Vec<(GroupElement, GroupElement)> = self
            .pairs
            .iter()
            .filter(|(a, _)| !dropped.contains(a))
            .cloned()
            .collect();
        let rest: Vec<GroupElement> = pairs.iter().map(|(a, _)| a.clone()).collect();
        Matching::new(&self.carrier, &rest, &rest, pairs)
    }
}

impl MultiplicityProfile {
    pub fn fibers(&self) -> &BTreeMap<GroupElement, BTreeSet<GroupElement>> {
        &self.fibers
    }

    /// Fiber sizes per sum value; sums not listed have count zero.
    pub fn counts(&self) -> BTreeMap<GroupElement, usize> {
        self.fibers
            .iter()
            .map(|(x, fiber)| (x.clone(), fiber.len()))
            .collect()
    }

    pub fn total(&self) -> usize {
        self.fibers.values().map(|f| f.len()).sum()
    }

    /// Profile equality compares the count functions, not the fiber sets.
    pub fn counts_equal(&self, other: &MultiplicityProfile) -> bool {
        self.counts() == other.counts()
    }
}
