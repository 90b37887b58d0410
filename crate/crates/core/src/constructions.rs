//! Deterministic generators for the explicit failure witnesses: the
//! quadratic-residue pair, the permutation-cycle families, the bounded
//! window constructions on torsion-free carriers, and the pairing bijection
//! connecting profile-equal matchings. Every generator validates its output
//! with the module oracles before returning.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::group::{is_prime, legendre, GroupCarrier, GroupElement, GroupError};
use crate::matching::{Matching, MatchingError};
use crate::search::{enumerate_matchings, fails_at_order, for_each_matching, Bounded, Budget};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("construction unavailable: {0}")]
    Unavailable(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

// ---------------------------------------------------------------------------
// quadratic-residue witness
// ---------------------------------------------------------------------------

/// Two distinct multiplication matchings on the nonzero squares mod p with
/// equal profiles: f(s) = a·s and g(s) = b·s where a, b are squares whose
/// successors are non-squares.
#[derive(Debug, Clone)]
pub struct QrWitness {
    pub p: u64,
    pub mult_f: u64,
    pub mult_g: u64,
    pub f: Matching,
    pub g: Matching,
}

pub fn qr_witness(p: u64) -> Result<QrWitness, ConstructionError> {
    if !is_prime(p) || p <= 5 {
        return Err(ConstructionError::InvalidArgument(format!(
            "p must be a prime greater than 5, got {p}"
        )));
    }
    let carrier = GroupCarrier::finite(vec![p])?;
    let squares: BTreeSet<u64> = (1..p).map(|n| (n as u128 * n as u128 % p as u128) as u64).collect();
    let domain: Vec<GroupElement> = squares
        .iter()
        .map(|&s| carrier.element_from_i64(s as i64))
        .collect::<Result<_, _>>()?;
    debug_assert_eq!(domain.len(), (p as usize - 1) / 2);

    let mut multipliers = (1..p)
        .filter(|&a| legendre(a as i64, p) == Ok(1) && legendre(a as i64 + 1, p) == Ok(-1));
    let (a, b) = match (multipliers.next(), multipliers.next()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(ConstructionError::Unavailable(format!(
                "no multiplier pair below {p}"
            )))
        }
    };

    let mult_map = |m: u64| -> Result<Matching, ConstructionError> {
        let pairs: Vec<(GroupElement, GroupElement)> = squares
            .iter()
            .map(|&s| {
                Ok((
                    carrier.element_from_i64(s as i64)?,
                    carrier.element_from_i64((s as u128 * m as u128 % p as u128) as i64)?,
                ))
            })
            .collect::<Result<_, GroupError>>()?;
        Ok(Matching::new(&carrier, &domain, &domain, pairs)?)
    };
    let f = mult_map(a)?;
    let g = mult_map(b)?;

    // each sum (1+a)s is a non-square, hence outside A, element by element
    for &s in &squares {
        for m in [a, b] {
            let sum = ((1 + m) as u128 * s as u128 % p as u128) as u64;
            debug_assert_eq!(legendre(sum as i64, p), Ok(-1));
            debug_assert!(!squares.contains(&sum));
        }
    }
    if f == g || !f.profile().counts_equal(&g.profile()) {
        return Err(ConstructionError::Unavailable(
            "multiplication maps failed validation".into(),
        ));
    }
    Ok(QrWitness {
        p,
        mult_f: a,
        mult_g: b,
        f,
        g,
    })
}

// ---------------------------------------------------------------------------
// permutation-cycle witness
// ---------------------------------------------------------------------------

/// The permutation witness at order k over Z_p, 2 < k < p−2, together with
/// its inverse. All sums land in a fixed excluded set disjoint from A.
#[derive(Debug, Clone)]
pub struct CycleWitness {
    pub p: u64,
    pub k: usize,
    pub f: Matching,
    pub g: Matching,
    pub excluded_sums: BTreeSet<GroupElement>,
}

fn permutation_pairs(cycles: &[Vec<u64>]) -> Vec<(u64, u64)> {
    let mut pairs = Vec::new();
    for cycle in cycles {
        for (i, &x) in cycle.iter().enumerate() {
            pairs.push((x, cycle[(i + 1) % cycle.len()]));
        }
    }
    pairs
}

pub fn cycle_witness(p: u64, k: usize) -> Result<CycleWitness, ConstructionError> {
    if !is_prime(p) || p <= 5 {
        return Err(ConstructionError::InvalidArgument(format!(
            "p must be a prime greater than 5, got {p}"
        )));
    }
    if !(2 < k && (k as u64) < p - 2) {
        return Err(ConstructionError::InvalidOrder(format!(
            "order {k} is outside 2 < k < {}",
            p - 2
        )));
    }
    let carrier = GroupCarrier::finite(vec![p])?;
    let elem = |v: u64| carrier.element_from_i64(v as i64).unwrap();

    let built = (|| -> Result<CycleWitness, ConstructionError> {
        let (full_order, cycles, excluded, first_transposition): (usize, Vec<Vec<u64>>, Vec<u64>, u64) =
            if k == 3 {
                (3, vec![vec![1, 2, 4]], vec![3, 5, 6], 0)
            } else if k.is_multiple_of(2) {
                let mut cycles: Vec<Vec<u64>> = ((4..=(p - 1) / 2).map(|j| vec![j, p - j])).collect();
                cycles.push(vec![3, p - 3, 2, p - 2]);
                ((p - 3) as usize, cycles, vec![0, 1, p - 1], 4)
            } else {
                let mut cycles: Vec<Vec<u64>> = ((5..=(p - 1) / 2).map(|j| vec![j, p - j])).collect();
                cycles.push(vec![3, p - 3, 2, p - 2, 1]);
                ((p - 4) as usize, cycles, vec![0, 4, p - 4, p - 1], 5)
            };
        if k > full_order {
            return Err(ConstructionError::InvalidOrder(format!(
                "order {k} is not reachable from the family of order {full_order}"
            )));
        }
        let support: Vec<u64> = cycles.iter().flatten().copied().collect();
        {
            let uniq: BTreeSet<u64> = support.iter().copied().collect();
            if uniq.len() != support.len() || uniq.iter().any(|s| excluded.contains(s)) {
                return Err(ConstructionError::Unavailable(
                    "cycle support collides".into(),
                ));
            }
        }
        let domain: Vec<GroupElement> = support.iter().map(|&v| elem(v)).collect();
        let pairs: Vec<(GroupElement, GroupElement)> = permutation_pairs(&cycles)
            .into_iter()
            .map(|(x, y)| (elem(x), elem(y)))
            .collect();
        let mut f = Matching::new(&carrier, &domain, &domain, pairs)?;

        // drop transpositions (j, p−j) in increasing j until the order is k
        let drops = (full_order - k) / 2;
        if drops > 0 {
            let dropped: BTreeSet<GroupElement> = (first_transposition
                ..first_transposition + drops as u64)
                .flat_map(|j| [elem(j), elem(p - j)])
                .collect();
            f = f.restrict(&dropped)?;
        }
        if f.len() != k {
            return Err(ConstructionError::Unavailable(format!(
                "restriction produced order {} instead of {k}",
                f.len()
            )));
        }

        let excluded_sums: BTreeSet<GroupElement> = excluded.iter().map(|&v| elem(v)).collect();
        for (a, fa) in f.pairs() {
            let sum = carrier.add(a, fa)?;
            if !excluded_sums.contains(&sum) {
                return Err(ConstructionError::Unavailable(format!(
                    "sum {sum} escapes the excluded set"
                )));
            }
        }
        let g = f.invert()?;
        let has_long_cycle = f.orbits()?.iter().any(|c| c.len() > 2);
        if !has_long_cycle || f == g || !f.profile().counts_equal(&g.profile()) {
            return Err(ConstructionError::Unavailable(
                "cycle family failed validation".into(),
            ));
        }
        Ok(CycleWitness {
            p,
            k,
            f,
            g,
            excluded_sums,
        })
    })();

    match built {
        Ok(w) => Ok(w),
        // closed form degenerated: fall back to the exhaustive order-k search
        Err(ConstructionError::Unavailable(_)) => {
            let universe = carrier.elements()?;
            match fails_at_order(&carrier, &universe, k, Budget(50_000_000))? {
                Bounded::Done(Some(w)) => {
                    let excluded_sums = w.f.profile().fibers().keys().cloned().collect();
                    Ok(CycleWitness {
                        p,
                        k,
                        f: w.f,
                        g: w.g,
                        excluded_sums,
                    })
                }
                _ => Err(ConstructionError::Unavailable(format!(
                    "no order-{k} witness found over Z_{p}"
                ))),
            }
        }
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// exhaustive per-order reports
// ---------------------------------------------------------------------------

/// Exhaustive check that every matching f: A → A with |A| = p−2 over
/// Z_p ∖ {0} squares to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvolutionReport {
    pub p: u64,
    pub sets_checked: u64,
    pub matchings_checked: u64,
    pub all_involutions: bool,
}

pub fn involution_check(p: u64, budget: Budget) -> Result<Bounded<InvolutionReport>, ConstructionError> {
    if !is_prime(p) || p < 5 {
        return Err(ConstructionError::InvalidArgument(format!(
            "p must be a prime at least 5, got {p}"
        )));
    }
    let carrier = GroupCarrier::finite(vec![p])?;
    let nonzero: Vec<GroupElement> = carrier
        .elements()?
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    let m = (p - 2) as usize;
    let mut report = InvolutionReport {
        p,
        sets_checked: 0,
        matchings_checked: 0,
        all_involutions: true,
    };
    use itertools::Itertools;
    for a in nonzero.iter().cloned().combinations(m) {
        report.sets_checked += 1;
        let mut counted = 0u64;
        let mut ok = true;
        let outcome = for_each_matching(&carrier, &a, &a, budget, &mut |f| {
            counted += 1;
            let involution = f
                .pairs()
                .iter()
                .all(|(x, fx)| f.apply(fx) == Some(x));
            if !involution {
                ok = false;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        report.matchings_checked += counted;
        match outcome {
            crate::search::EnumOutcome::OutOfBudget => return Ok(Bounded::OutOfBudget),
            _ => {
                if !ok {
                    report.all_involutions = false;
                    return Ok(Bounded::Done(report));
                }
            }
        }
    }
    Ok(Bounded::Done(report))
}

/// Exhaustive check that Z_p ∖ {0} admits exactly one matching to itself,
/// namely a ↦ −a.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueMatchingReport {
    pub p: u64,
    pub matching_count: u64,
    pub unique_negation: bool,
}

pub fn unique_matching_check(
    p: u64,
    budget: Budget,
) -> Result<Bounded<UniqueMatchingReport>, ConstructionError> {
    if !is_prime(p) || p < 3 {
        return Err(ConstructionError::InvalidArgument(format!(
            "p must be a prime at least 3, got {p}"
        )));
    }
    let carrier = GroupCarrier::finite(vec![p])?;
    let nonzero: Vec<GroupElement> = carrier
        .elements()?
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    let all = match enumerate_matchings(&carrier, &nonzero, &nonzero, budget)? {
        Bounded::Done(all) => all,
        Bounded::OutOfBudget => return Ok(Bounded::OutOfBudget),
    };
    let negation_pairs: Vec<(GroupElement, GroupElement)> = nonzero
        .iter()
        .map(|x| (x.clone(), carrier.neg(x).unwrap()))
        .collect();
    let unique_negation = all.len() == 1 && all[0].pairs() == negation_pairs.as_slice();
    Ok(Bounded::Done(UniqueMatchingReport {
        p,
        matching_count: all.len() as u64,
        unique_negation,
    }))
}

// ---------------------------------------------------------------------------
// window witnesses on torsion-free carriers
// ---------------------------------------------------------------------------

/// The three bounded-window models of the order-∞ failure constructions.
/// Each fixes a torsion-free carrier, closed-form maps f, g on a subgroup
/// coset, and the shift bijection φ that realigns their sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowFamily {
    /// Integers: f(a) = a+1, g(a) = a−3 on the even integers; φ(a) = a+2.
    Integer,
    /// Rationals restricted to the even integers: f(a) = a+1, g(a) = a+5;
    /// φ(a) = a−2.
    Rational,
    /// Dyadic rationals on 6·Z[1/2]: f(a) = a+1, g(a) = a+7; φ(a) = a−3.
    Dyadic,
}

impl WindowFamily {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "int" | "integer" => Some(Self::Integer),
            "rat" | "rational" => Some(Self::Rational),
            "dyadic" => Some(Self::Dyadic),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Integer => "integer",
            Self::Rational => "rational",
            Self::Dyadic => "dyadic",
        }
    }

    pub fn carrier(&self) -> GroupCarrier {
        match self {
            Self::Integer => GroupCarrier::integer(),
            Self::Rational => GroupCarrier::rational(),
            Self::Dyadic => GroupCarrier::dyadic(),
        }
    }

    fn offsets(&self) -> (i64, i64, i64) {
        // (f shift, g shift, φ shift)
        match self {
            Self::Integer => (1, -3, 2),
            Self::Rational => (1, 5, -2),
            Self::Dyadic => (1, 7, -3),
        }
    }
}

/// Windowed evidence for a failure at order ∞: the maps f, g on the domain
/// window and the pairing identity a + f(a) = φ(a) + g(φ(a)) at every
/// interior point.
#[derive(Debug, Clone)]
pub struct WindowWitness {
    pub family: WindowFamily,
    pub window: i64,
    pub carrier: GroupCarrier,
    pub domain: Vec<GroupElement>,
    pub codomain: Vec<GroupElement>,
    pub f: Vec<(GroupElement, GroupElement)>,
    pub g: Vec<(GroupElement, GroupElement)>,
    pub phi: Vec<(GroupElement, GroupElement)>,
}

/// Dyadic elements of the window are capped at this exponent of the
/// parameter t; the identity is checked pointwise so any cap is sound.
const DYADIC_WINDOW_EXP: u32 = 3;

pub fn window_witness(family: WindowFamily, window: i64) -> Result<WindowWitness, ConstructionError> {
    if window < 8 {
        return Err(ConstructionError::InvalidWindow(format!(
            "window {window} is too small to have a nonempty interior"
        )));
    }
    let carrier = family.carrier();
    let (df, dg, dphi) = family.offsets();

    let mut domain: BTreeSet<GroupElement> = BTreeSet::new();
    match family {
        WindowFamily::Integer | WindowFamily::Rational => {
            let mut a = -window;
            while a <= window {
                if a % 2 == 0 {
                    domain.insert(carrier.element_from_i64(a)?);
                }
                a += 1;
            }
        }
        WindowFamily::Dyadic => {
            // 6·Z[1/2] truncated: a = 6·(m / 2^e) with e ≤ cap and |a| ≤ window
            for e in 0..=DYADIC_WINDOW_EXP {
                let scale = 1i64 << e;
                let bound = window * scale / 6 + 1;
                for m in -bound..=bound {
                    if e > 0 && m % 2 == 0 {
                        continue;
                    }
                    let t = carrier.parse_element(&format!("{m}/2^{e}"))?;
                    let a = carrier.scalar_mul(6, &t)?;
                    let within = {
                        let hi = carrier.element_from_i64(window)?;
                        let lo = carrier.element_from_i64(-window)?;
                        a >= lo && a <= hi
                    };
                    if within {
                        domain.insert(a);
                    }
                }
            }
        }
    }
    let domain: Vec<GroupElement> = domain.into_iter().collect();
    if domain.is_empty() {
        return Err(ConstructionError::InvalidWindow("empty window".into()));
    }

    let shift = |x: &GroupElement, d: i64| -> Result<GroupElement, GroupError> {
        carrier.add(x, &carrier.element_from_i64(d)?)
    };
    let domain_set: BTreeSet<&GroupElement> = domain.iter().collect();
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut codomain: BTreeSet<GroupElement> = BTreeSet::new();
    for a in &domain {
        let fa = shift(a, df)?;
        let ga = shift(a, dg)?;
        // windowed matching condition: sums stay off the domain
        for (img, _) in [(&fa, df), (&ga, dg)] {
            let sum = carrier.add(a, img)?;
            if domain_set.contains(&sum) {
                return Err(ConstructionError::InvalidWindow(format!(
                    "sum {sum} fell inside the domain window"
                )));
            }
        }
        codomain.insert(fa.clone());
        codomain.insert(ga.clone());
        f.push((a.clone(), fa));
        g.push((a.clone(), ga));
    }

    // φ on the interior: points whose shift stays inside the window
    let g_of = |x: &GroupElement| -> Result<GroupElement, GroupError> { shift(x, dg) };
    let mut phi = Vec::new();
    for a in &domain {
        let pa = shift(a, dphi)?;
        if domain_set.contains(&pa) {
            let lhs = carrier.add(a, &shift(a, df)?)?;
            let rhs = carrier.add(&pa, &g_of(&pa)?)?;
            if lhs != rhs {
                return Err(ConstructionError::InvalidWindow(format!(
                    "pairing identity fails at {a}: {lhs} vs {rhs}"
                )));
            }
            phi.push((a.clone(), pa));
        }
    }
    if phi.is_empty() {
        return Err(ConstructionError::InvalidWindow(
            "window interior is empty".into(),
        ));
    }

    Ok(WindowWitness {
        family,
        window,
        carrier,
        domain,
        codomain: codomain.into_iter().collect(),
        f,
        g,
        phi,
    })
}

// ---------------------------------------------------------------------------
// pairing bijection (profile equality ⇔ sum-aligned bijection)
// ---------------------------------------------------------------------------

/// Builds the bijection φ: A → A with a + f(a) = φ(a) + g(φ(a)) by pairing
/// the fibers of f and g sum value by sum value, in canonical order. Returns
/// None when the profiles differ.
pub fn build_pairing(
    f: &Matching,
    g: &Matching,
) -> Result<Option<Vec<(GroupElement, GroupElement)>>, MatchingError> {
    if f.domain_set() != g.domain_set() || f.codomain_set() != g.codomain_set() {
        return Err(MatchingError::InvalidPair(
            "matchings do not share A and B".into(),
        ));
    }
    let pf = f.profile();
    let pg = g.profile();
    if !pf.counts_equal(&pg) {
        return Ok(None);
    }
    let mut phi = Vec::new();
    for (x, fiber_f) in pf.fibers() {
        let fiber_g = &pg.fibers()[x];
        for (a, b) in fiber_f.iter().zip(fiber_g) {
            phi.push((a.clone(), b.clone()));
        }
    }
    phi.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(Some(phi))
}

/// Checks that φ is a bijection on A satisfying a + f(a) = φ(a) + g(φ(a))
/// for every a. When the identity holds throughout, the profiles of f and g
/// necessarily agree, which is cross-checked.
pub fn verify_pairing(
    f: &Matching,
    g: &Matching,
    phi: &[(GroupElement, GroupElement)],
) -> Result<bool, MatchingError> {
    let domain = f.domain_set();
    if g.domain_set() != domain {
        return Err(MatchingError::InvalidPair(
            "matchings do not share the domain".into(),
        ));
    }
    let keys: BTreeSet<&GroupElement> = phi.iter().map(|(a, _)| a).collect();
    let images: BTreeSet<&GroupElement> = phi.iter().map(|(_, b)| b).collect();
    if keys.len() != phi.len()
        || images.len() != phi.len()
        || phi.len() != domain.len()
        || !keys.iter().all(|a| domain.contains(*a))
        || !images.iter().all(|b| domain.contains(*b))
    {
        return Ok(false);
    }
    let carrier = f.carrier();
    for (a, pa) in phi {
        let lhs = carrier.add(a, f.apply(a).expect("a in domain"))?;
        let rhs = carrier.add(pa, g.apply(pa).expect("phi image in domain"))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    debug_assert!(f.profile().counts_equal(&g.profile()));
    Ok(true)
}

// ---------------------------------------------------------------------------
// seeded profile-tied pairs
// ---------------------------------------------------------------------------

/// Samples a pair of profile-equal matchings over the carrier, together
/// with a fiber-respecting bijection φ distinct from the canonical one when
/// the fibers allow it. Used by the pairing round-trip checks and the
/// `pairing` certificate kind.
pub struct ProfileTiedPair {
    pub f: Matching,
    pub g: Matching,
    /// canonical fiber-by-fiber pairing
    pub phi: Vec<(GroupElement, GroupElement)>,
    /// a randomly shuffled fiber-respecting pairing, still verifying
    pub phi_shuffled: Vec<(GroupElement, GroupElement)>,
}

pub fn random_profile_tied_pair<R: Rng>(
    carrier: &GroupCarrier,
    rng: &mut R,
    max_size: usize,
) -> Result<ProfileTiedPair, ConstructionError> {
    let universe = carrier.elements()?;
    loop {
        let m = rng.random_range(2..=max_size.min(universe.len()));
        let mut shuffled = universe.clone();
        shuffled.shuffle(rng);
        let a: Vec<GroupElement> = {
            let mut v = shuffled[..m].to_vec();
            v.sort();
            v
        };
        shuffled.shuffle(rng);
        let b: Vec<GroupElement> = {
            let mut v = shuffled[..m].to_vec();
            v.sort();
            v
        };
        let all = match enumerate_matchings(carrier, &a, &b, Budget(1_000_000))? {
            Bounded::Done(all) if !all.is_empty() => all,
            _ => continue,
        };
        let f = all.choose(rng).unwrap().clone();
        let target = f.profile().counts();
        let class: Vec<&Matching> = all
            .iter()
            .filter(|g| g.profile().counts() == target)
            .collect();
        let g = (*class.choose(rng).unwrap()).clone();
        let phi = build_pairing(&f, &g)?.expect("profiles tie by construction");
        // shuffle within each fiber for a non-canonical verified pairing
        let pf = f.profile();
        let pg = g.profile();
        let mut phi_shuffled = Vec::new();
        for (x, fiber_f) in pf.fibers() {
            let mut gs: Vec<GroupElement> = pg.fibers()[x].iter().cloned().collect();
            gs.shuffle(rng);
            for (af, bg) in fiber_f.iter().zip(gs) {
                phi_shuffled.push((af.clone(), bg));
            }
        }
        phi_shuffled.sort_by(|x, y| x.0.cmp(&y.0));
        return Ok(ProfileTiedPair {
            f,
            g,
            phi,
            phi_shuffled,
        });
    }
}
