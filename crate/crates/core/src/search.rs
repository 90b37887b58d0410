//! Matching existence, enumeration, acyclicity, and the order-m failure
//! search.
//!
//! Existence is decided by augmenting paths on the bipartite graph with an
//! edge (a, b) whenever a + b avoids the domain. Enumeration is ordered
//! backtracking over the same graph with forward checking on remaining
//! degrees. All searches are deterministic under the canonical element
//! order and return the lexicographically first witness.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use itertools::Itertools;

use crate::group::{GroupCarrier, GroupElement};
use crate::matching::{FailureWitness, Matching, MatchingError};

/// Hard cap on enumeration width; bitmask-based backtracking needs it, and
/// everything at desk scale sits far below.
pub const ENUMERATION_BOUND: usize = 32;

/// Node-count limit for backtracking searches. Exhausting a budget yields
/// `OutOfBudget`, never a wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const UNLIMITED: Budget = Budget(u64::MAX);
}

/// Result of a budgeted computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bounded<T> {
    Done(T),
    OutOfBudget,
}

impl<T> Bounded<T> {
    pub fn into_option(self) -> Option<T> {
        match self {
            Bounded::Done(t) => Some(t),
            Bounded::OutOfBudget => None,
        }
    }

    pub fn expect_done(self, msg: &str) -> T {
        match self {
            Bounded::Done(t) => t,
            Bounded::OutOfBudget => panic!("{msg}: budget exhausted"),
        }
    }
}

/// Mutable node counter backing a [`Budget`].
pub struct Tracker {
    remaining: u64,
}

impl Tracker {
    pub fn new(budget: Budget) -> Self {
        Self { remaining: budget.0 }
    }

    /// Returns false once the budget is gone.
    pub fn spend(&mut self) -> bool {
        if self.remaining == 0 {
            false
        } else {
            self.remaining -= 1;
            true
        }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }
}

// ---------------------------------------------------------------------------
// index-level bipartite engine
// ---------------------------------------------------------------------------

/// Maximum bipartite matching by augmenting paths (Kuhn). `adjacency[i]`
/// lists the right-vertices available to left-vertex i, in ascending order.
/// Returns the assignment when a perfect matching exists.
pub fn perfect_matching(adjacency: &[Vec<usize>], right_size: usize) -> Option<Vec<usize>> {
    let n = adjacency.len();
    let mut match_right: Vec<Option<usize>> = vec![None; right_size];
    let mut matched = 0usize;

    fn try_augment(
        v: usize,
        adjacency: &[Vec<usize>],
        visited: &mut [bool],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for &to in &adjacency[v] {
            if visited[to] {
                continue;
            }
            visited[to] = true;
            if match_right[to].is_none()
                || try_augment(match_right[to].unwrap(), adjacency, visited, match_right)
            {
                match_right[to] = Some(v);
                return true;
            }
        }
        false
    }

    for v in 0..n {
        let mut visited = vec![false; right_size];
        if try_augment(v, adjacency, &mut visited, &mut match_right) {
            matched += 1;
        }
    }
    if matched < n {
        return None;
    }
    let mut match_left = vec![usize::MAX; n];
    for (b, owner) in match_right.iter().enumerate() {
        if let Some(a) = owner {
            match_left[*a] = b;
        }
    }
    Some(match_left)
}

/// Outcome of an enumeration pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumOutcome {
    Exhausted,
    Stopped,
    OutOfBudget,
}

/// Enumerates every perfect matching of the mask graph in lexicographic
/// order of the assignment vector. `allowed[i]` has bit j set when edge
/// (i, j) is permitted; requires `m ≤ 64` bits.
pub fn enumerate_perfect(
    allowed: &[u64],
    tracker: &mut Tracker,
    visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> EnumOutcome {
    let m = allowed.len();
    debug_assert!(m <= 64);
    // suffix_or[i] = union of the masks from row i on; used to detect a
    // right-vertex no remaining row can cover
    let mut suffix_or = vec![0u64; m + 1];
    for i in (0..m).rev() {
        suffix_or[i] = suffix_or[i + 1] | allowed[i];
    }
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut assignment = vec![0usize; m];

    fn rec(
        depth: usize,
        avail: u64,
        allowed: &[u64],
        suffix_or: &[u64],
        assignment: &mut [usize],
        tracker: &mut Tracker,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Option<EnumOutcome> {
        if !tracker.spend() {
            return Some(EnumOutcome::OutOfBudget);
        }
        let m = allowed.len();
        if depth == m {
            return match visit(assignment) {
                ControlFlow::Continue(()) => None,
                ControlFlow::Break(()) => Some(EnumOutcome::Stopped),
            };
        }
        // forward check: every unused right-vertex must stay reachable
        if avail & !suffix_or[depth] != 0 {
            return None;
        }
        let mut options = allowed[depth] & avail;
        while options != 0 {
            let j = options.trailing_zeros() as usize;
            options &= options - 1;
            assignment[depth] = j;
            if let Some(stop) = rec(
                depth + 1,
                avail & !(1u64 << j),
                allowed,
                suffix_or,
                assignment,
                tracker,
                visit,
            ) {
                return Some(stop);
            }
        }
        None
    }

    match rec(0, full, allowed, &suffix_or, &mut assignment, tracker, visit) {
        Some(outcome) => outcome,
        None => EnumOutcome::Exhausted,
    }
}

// ---------------------------------------------------------------------------
// element-level context
// ---------------------------------------------------------------------------

struct PairContext {
    carrier: GroupCarrier,
    a: Vec<GroupElement>,
    b: Vec<GroupElement>,
    /// adjacency lists (ascending) and the equivalent bitmasks
    adjacency: Vec<Vec<usize>>,
    masks: Vec<u64>,
}

impl PairContext {
    fn build(
        carrier: &GroupCarrier,
        a: &[GroupElement],
        b: &[GroupElement],
    ) -> Result<Self, MatchingError> {
        if a.is_empty() || a.len() != b.len() {
            return Err(MatchingError::InvalidPair(format!(
                "need nonempty equal-size sets, got |A| = {}, |B| = {}",
                a.len(),
                b.len()
            )));
        }
        for x in a.iter().chain(b) {
            if !carrier.contains(x) {
                return Err(MatchingError::InvalidPair(
                    "element outside the carrier".into(),
                ));
            }
        }
        let mut a: Vec<GroupElement> = a.to_vec();
        let mut b: Vec<GroupElement> = b.to_vec();
        a.sort();
        a.dedup();
        b.sort();
        b.dedup();
        if a.len() != b.len() {
            return Err(MatchingError::InvalidPair("duplicate elements".into()));
        }
        let a_set: std::collections::BTreeSet<&GroupElement> = a.iter().collect();
        let mut adjacency = Vec::with_capacity(a.len());
        let mut masks = Vec::with_capacity(a.len());
        for x in &a {
            let mut row = Vec::new();
            let mut mask = 0u64;
            for (j, y) in b.iter().enumerate() {
                let sum = carrier.add(x, y)?;
                if !a_set.contains(&sum) {
                    row.push(j);
                    if j < 64 {
                        mask |= 1u64 << j;
                    }
                }
            }
            adjacency.push(row);
            masks.push(mask);
        }
        Ok(Self {
            carrier: carrier.clone(),
            a,
            b,
            adjacency,
            masks,
        })
    }

    fn matching_from(&self, assignment: &[usize]) -> Matching {
        let pairs: Vec<(GroupElement, GroupElement)> = assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.a[i].clone(), self.b[j].clone()))
            .collect();
        Matching::new(&self.carrier, &self.a, &self.b, pairs)
            .expect("assignments from the allowed graph are matchings")
    }
}

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Finds one matching from A to B, or reports that none exists.
pub fn find_matching(
    carrier: &GroupCarrier,
    a: &[GroupElement],
    b: &[GroupElement],
) -> Result<Option<Matching>, MatchingError> {
    let ctx = PairContext::build(carrier, a, b)?;
    Ok(perfect_matching(&ctx.adjacency, ctx.b.len()).map(|asg| ctx.matching_from(&asg)))
}

/// Visits every matching from A to B in lexicographic order of the map.
pub fn for_each_matching(
    carrier: &GroupCarrier,
    a: &[GroupElement],
    b: &[GroupElement],
    budget: Budget,
    visit: &mut dyn FnMut(Matching) -> ControlFlow<()>,
) -> Result<EnumOutcome, MatchingError> {
    let ctx = PairContext::build(carrier, a, b)?;
    if ctx.a.len() > ENUMERATION_BOUND {
        return Err(MatchingError::BudgetExceeded(format!(
            "set size {} exceeds the enumeration bound {ENUMERATION_BOUND}",
            ctx.a.len()
        )));
    }
    let mut tracker = Tracker::new(budget);
    Ok(enumerate_perfect(&ctx.masks, &mut tracker, &mut |asg| {
        visit(ctx.matching_from(asg))
    }))
}

/// Collects every matching from A to B.
pub fn enumerate_matchings(
    carrier: &GroupCarrier,
    a: &[GroupElement],
    b: &[GroupElement],
    budget: Budget,
) -> Result<Bounded<Vec<Matching>>, MatchingError> {
    let mut out = Vec::new();
    let outcome = for_each_matching(carrier, a, b, budget, &mut |m| {
        out.push(m);
        ControlFlow::Continue(())
    })?;
    Ok(match outcome {
        EnumOutcome::Exhausted | EnumOutcome::Stopped => Bounded::Done(out),
        EnumOutcome::OutOfBudget => Bounded::OutOfBudget,
    })
}

/// Decides whether f is acyclic: no other matching on the same pair has an
/// equal multiplicity profile.
pub fn is_acyclic(f: &Matching, budget: Budget) -> Result<Bounded<bool>, MatchingError> {
    let a = f.domain();
    let b: Vec<GroupElement> = f.codomain_set().into_iter().collect();
    let target = f.profile().counts();
    let mut tied = false;
    let outcome = for_each_matching(f.carrier(), &a, &b, budget, &mut |g| {
        if g != *f && g.profile().counts() == target {
            tied = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match outcome {
        EnumOutcome::Stopped => Bounded::Done(false),
        EnumOutcome::Exhausted => Bounded::Done(!tied),
        EnumOutcome::OutOfBudget => Bounded::OutOfBudget,
    })
}

/// Searches for two distinct profile-equal matchings on size-m subsets of
/// the given universe. Subset pairs and matchings are scanned in canonical
/// order, so the first witness is deterministic. Membership of 0 in B is
/// not constrained; the failure definition places no such condition.
pub fn fails_at_order(
    carrier: &GroupCarrier,
    universe: &[GroupElement],
    m: usize,
    budget: Budget,
) -> Result<Bounded<Option<FailureWitness>>, MatchingError> {
    if m == 0 {
        return Err(MatchingError::InvalidPair("order must be at least 1".into()));
    }
    if m > universe.len() {
        return Ok(Bounded::Done(None));
    }
    if m > ENUMERATION_BOUND {
        return Err(MatchingError::BudgetExceeded(format!(
            "order {m} exceeds the enumeration bound {ENUMERATION_BOUND}"
        )));
    }
    let mut tracker = Tracker::new(budget);
    for a in universe.iter().cloned().combinations(m) {
        for b in universe.iter().cloned().combinations(m) {
            if !tracker.spend() {
                return Ok(Bounded::OutOfBudget);
            }
            let ctx = PairContext::build(carrier, &a, &b)?;
            let mut witness: Option<FailureWitness> = None;
            let mut by_profile: BTreeMap<BTreeMap<GroupElement, usize>, Matching> =
                BTreeMap::new();
            let outcome = enumerate_perfect(&ctx.masks, &mut tracker, &mut |asg| {
                let g = ctx.matching_from(asg);
                let counts = g.profile().counts();
                if let Some(f) = by_profile.get(&counts) {
                    witness = Some(FailureWitness { f: f.clone(), g });
                    ControlFlow::Break(())
                } else {
                    by_profile.insert(counts, g);
                    ControlFlow::Continue(())
                }
            });
            match outcome {
                EnumOutcome::OutOfBudget => return Ok(Bounded::OutOfBudget),
                EnumOutcome::Stopped => return Ok(Bounded::Done(witness)),
                EnumOutcome::Exhausted => {}
            }
        }
    }
    Ok(Bounded::Done(None))
}

/// Checks the finite matching property for all pairs |A| = |B| ≤ k with
/// 0 ∉ B; returns the first pair admitting no matching, or None on a full
/// pass.
pub fn matching_property_upto(
    carrier: &GroupCarrier,
    k: usize,
) -> Result<Option<(Vec<GroupElement>, Vec<GroupElement>)>, MatchingError> {
    let universe = carrier.elements()?;
    let zero = carrier.zero();
    let nonzero: Vec<GroupElement> = universe
        .iter()
        .filter(|&x| *x != zero)
        .cloned()
        .collect();
    let max_m = k.min(nonzero.len());
    for m in 1..=max_m {
        for a in universe.iter().cloned().combinations(m) {
            for b in nonzero.iter().cloned().combinations(m) {
                if find_matching(carrier, &a, &b)?.is_none() {
                    return Ok(Some((a, b)));
                }
            }
        }
    }
    Ok(None)
}

/// Finds a matching from A to B whose profile class is a singleton, i.e. an
/// acyclic matching, by full enumeration and profile grouping.
pub fn find_acyclic_matching(
    carrier: &GroupCarrier,
    a: &[GroupElement],
    b: &[GroupElement],
    budget: Budget,
) -> Result<Bounded<Option<Matching>>, MatchingError> {
    let zero = carrier.zero();
    if b.contains(&zero) {
        return Err(MatchingError::InvalidPair("0 must not lie in B".into()));
    }
    let all = match enumerate_matchings(carrier, a, b, budget)? {
        Bounded::Done(all) => all,
        Bounded::OutOfBudget => return Ok(Bounded::OutOfBudget),
    };
    let mut class_sizes: BTreeMap<BTreeMap<GroupElement, usize>, usize> = BTreeMap::new();
    for g in &all {
        *class_sizes.entry(g.profile().counts()).or_insert(0) += 1;
    }
    for g in &all {
        if class_sizes[&g.profile().counts()] == 1 {
            return Ok(Bounded::Done(Some(g.clone())));
        }
    }
    Ok(Bounded::Done(None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupCarrier;

    fn z(n: u64) -> GroupCarrier {
        GroupCarrier::finite(vec![n]).unwrap()
    }

    fn elems(c: &GroupCarrier, vals: &[i64]) -> Vec<GroupElement> {
        vals.iter().map(|&v| c.element_from_i64(v).unwrap()).collect()
    }

    #[test]
    fn find_matching_z4_has_none() {
        let c = z(4);
        let a = elems(&c, &[0, 2]);
        let b = elems(&c, &[1, 2]);
        assert!(find_matching(&c, &a, &b).unwrap().is_none());
        let all = enumerate_matchings(&c, &a, &b, Budget::UNLIMITED)
            .unwrap()
            .into_option()
            .unwrap();
        assert!(all.is_empty());
    }

    #[test]
    fn find_matching_z5_swap() {
        let c = z(5);
        let a = elems(&c, &[1, 2]);
        let m = find_matching(&c, &a, &a).unwrap().unwrap();
        let expect: Vec<(GroupElement, GroupElement)> = vec![
            (c.element_from_i64(1).unwrap(), c.element_from_i64(2).unwrap()),
            (c.element_from_i64(2).unwrap(), c.element_from_i64(1).unwrap()),
        ];
        assert_eq!(m.pairs(), expect.as_slice());
    }

    #[test]
    fn find_matching_singleton() {
        let c = z(7);
        let m = find_matching(&c, &elems(&c, &[0]), &elems(&c, &[3]))
            .unwrap()
            .unwrap();
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn enumerate_unique_on_z5() {
        let c = z(5);
        let a = elems(&c, &[1, 2, 3]);
        let all = enumerate_matchings(&c, &a, &a, Budget::UNLIMITED)
            .unwrap()
            .into_option()
            .unwrap();
        assert_eq!(all.len(), 1);
        let expect: Vec<(GroupElement, GroupElement)> = vec![
            (c.element_from_i64(1).unwrap(), c.element_from_i64(3).unwrap()),
            (c.element_from_i64(2).unwrap(), c.element_from_i64(2).unwrap()),
            (c.element_from_i64(3).unwrap(), c.element_from_i64(1).unwrap()),
        ];
        assert_eq!(all[0].pairs(), expect.as_slice());
    }

    #[test]
    fn enumeration_is_lexicographic_and_duplicate_free() {
        let c = z(11);
        let a = elems(&c, &[1, 2, 3, 4]);
        let all = enumerate_matchings(&c, &a, &a, Budget::UNLIMITED)
            .unwrap()
            .into_option()
            .unwrap();
        let images: Vec<Vec<String>> = all
            .iter()
            .map(|m| m.pairs().iter().map(|(_, b)| b.to_string()).collect())
            .collect();
        let mut sorted = images.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(images.len(), sorted.len());
        assert_eq!(images, sorted);
    }

    #[test]
    fn acyclicity_of_negation_on_z5() {
        let c = z(5);
        let a = elems(&c, &[1, 2, 3, 4]);
        let pairs: Vec<(GroupElement, GroupElement)> = a
            .iter()
            .map(|x| (x.clone(), c.neg(x).unwrap()))
            .collect();
        let f = Matching::new(&c, &a, &a, pairs).unwrap();
        assert_eq!(
            is_acyclic(&f, Budget::UNLIMITED).unwrap(),
            Bounded::Done(true)
        );
    }

    #[test]
    fn three_cycle_on_z7_is_not_acyclic() {
        let c = z(7);
        let a = elems(&c, &[1, 2, 4]);
        let pairs: Vec<(GroupElement, GroupElement)> = vec![
            (c.element_from_i64(1).unwrap(), c.element_from_i64(2).unwrap()),
            (c.element_from_i64(2).unwrap(), c.element_from_i64(4).unwrap()),
            (c.element_from_i64(4).unwrap(), c.element_from_i64(1).unwrap()),
        ];
        let f = Matching::new(&c, &a, &a, pairs).unwrap();
        assert_eq!(
            is_acyclic(&f, Budget::UNLIMITED).unwrap(),
            Bounded::Done(false)
        );
    }

    #[test]
    fn singleton_is_acyclic() {
        let c = z(7);
        let f = Matching::new(
            &c,
            &elems(&c, &[0]),
            &elems(&c, &[3]),
            vec![(c.element_from_i64(0).unwrap(), c.element_from_i64(3).unwrap())],
        )
        .unwrap();
        assert_eq!(
            is_acyclic(&f, Budget::UNLIMITED).unwrap(),
            Bounded::Done(true)
        );
    }

    #[test]
    fn fails_at_order_z7() {
        let c = z(7);
        let universe = c.elements().unwrap();
        let witness = fails_at_order(&c, &universe, 3, Budget::UNLIMITED)
            .unwrap()
            .into_option()
            .unwrap()
            .expect("a witness exists at order 3");
        assert_eq!(witness.order(), 3);
        assert_ne!(witness.f, witness.g);
        assert!(witness.f.profile().counts_equal(&witness.g.profile()));
        assert_eq!(witness.f.domain_set(), witness.g.domain_set());
        assert_eq!(witness.f.codomain_set(), witness.g.codomain_set());
    }

    #[test]
    fn fails_at_order_z5_exhaustive_none() {
        let c = z(5);
        let universe = c.elements().unwrap();
        for m in 1..=5 {
            assert_eq!(
                fails_at_order(&c, &universe, m, Budget::UNLIMITED).unwrap(),
                Bounded::Done(None),
                "Z_5 must not fail at order {m}"
            );
        }
    }

    #[test]
    fn fails_at_order_budget_exhaustion() {
        let c = z(7);
        let universe = c.elements().unwrap();
        assert_eq!(
            fails_at_order(&c, &universe, 3, Budget(5)).unwrap(),
            Bounded::OutOfBudget
        );
    }

    #[test]
    fn order_one_never_fails() {
        for n in [4u64, 6, 7] {
            let c = z(n);
            let universe = c.elements().unwrap();
            assert_eq!(
                fails_at_order(&c, &universe, 1, Budget::UNLIMITED).unwrap(),
                Bounded::Done(None)
            );
        }
    }

    #[test]
    fn matching_property_counterexamples() {
        let c = z(4);
        let (a, b) = matching_property_upto(&c, 2).unwrap().expect("Z_4 fails");
        assert!(find_matching(&c, &a, &b).unwrap().is_none());
        assert!(a.len() <= 2);

        let klein = GroupCarrier::finite(vec![2, 2]).unwrap();
        let (a, b) = matching_property_upto(&klein, 2)
            .unwrap()
            .expect("Z_2 x Z_2 fails");
        assert!(find_matching(&klein, &a, &b).unwrap().is_none());
    }

    #[test]
    fn matching_property_passes_for_z5() {
        let c = z(5);
        assert_eq!(matching_property_upto(&c, 4).unwrap(), None);
    }

    #[test]
    fn acyclic_search_on_integers() {
        let c = GroupCarrier::integer();
        let a = elems(&c, &[1, 3]);
        let b = elems(&c, &[2, 5]);
        let m = find_acyclic_matching(&c, &a, &b, Budget::UNLIMITED)
            .unwrap()
            .into_option()
            .unwrap()
            .expect("acyclic matching exists");
        // 1 -> 2 is forbidden (sum 3 in A), so the only matching is 1 -> 5, 3 -> 2
        let expect: Vec<(GroupElement, GroupElement)> = vec![
            (c.element_from_i64(1).unwrap(), c.element_from_i64(5).unwrap()),
            (c.element_from_i64(3).unwrap(), c.element_from_i64(2).unwrap()),
        ];
        assert_eq!(m.pairs(), expect.as_slice());
    }

    #[test]
    fn acyclic_search_none_when_all_profiles_tie() {
        let c = z(7);
        let a = elems(&c, &[1, 2, 4]);
        assert_eq!(
            find_acyclic_matching(&c, &a, &a, Budget::UNLIMITED).unwrap(),
            Bounded::Done(None)
        );
    }

    #[test]
    fn acyclic_search_rejects_zero_in_b() {
        let c = z(7);
        let a = elems(&c, &[1]);
        let b = elems(&c, &[0]);
        assert!(matches!(
            find_acyclic_matching(&c, &a, &b, Budget::UNLIMITED),
            Err(MatchingError::InvalidPair(_))
        ));
    }
}
