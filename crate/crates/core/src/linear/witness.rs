//! Witnesses for the linear theory: the odd-power subspaces A_m with
//! A_m ∩ A_m² = {0}, their scalar-equivalent strong-matching pairs, the
//! intermediate-field locator, and the matched-subspace counterexample
//! search over towers with an intermediate field.

use num::One;

use super::fp;
use super::gf::{GfElem, GfTower};
use super::qpoly::{format_q, q_from, QPoly, Q};
use super::strong::{
    is_matched_basis, is_matched_subspace_with, quad_map_equal, strong_matching_exists, KMatrix,
    LinearMap, MatchMode, MatchedOutcome,
};
use super::subspace::{enumerate_subspaces, ordered_bases, FieldTower, Subspace};
use super::LinearError;
use crate::search::{Bounded, Budget, Tracker};

/// Divisor degrees 1 < d < n of proper intermediate subfields.
pub fn intermediate_fields(tower: &GfTower) -> Vec<usize> {
    (2..tower.n).filter(|d| tower.n.is_multiple_of(*d)).collect()
}

/// The intermediate field GF(p^d) as a K-subspace of L: the kernel of
/// x ↦ x^(p^d) − x, which is d-dimensional.
pub fn subfield_subspace(tower: &GfTower, d: usize) -> Subspace {
    let field = tower.fp();
    let frob = tower.frobenius_matrix(d);
    let mut diff = frob;
    for (i, row) in diff.iter_mut().enumerate() {
        row[i] = field.sub(row[i], 1);
    }
    let kernel = fp::kernel_basis(&field, &diff, tower.n);
    Subspace::span_finite(tower, &kernel)
}

/// Validated claims carried by a linear witness; all must re-derive true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearWitnessClaims {
    pub strong_f: bool,
    pub strong_h: bool,
    pub equivalent: bool,
    pub distinct: bool,
    pub scalar_multiple: bool,
}

impl LinearWitnessClaims {
    pub fn all_hold(&self) -> bool {
        self.strong_f && self.strong_h && self.equivalent && self.distinct
    }
}

/// A pair of distinct equivalent strong matchings f, h on the odd-power
/// subspace A_m, with the equivalence realized by φ and a base-field scalar.
#[derive(Debug, Clone)]
pub struct LinearWitness {
    pub tower: FieldTower,
    pub m: usize,
    pub space: Subspace,
    pub f: LinearMap,
    pub h: LinearMap,
    pub phi: LinearMap,
    pub c: String,
    pub claims: LinearWitnessClaims,
}

/// Builds the witness over GF(p) ⊆ GF(p^n) for prime n: A_m spanned by the
/// odd powers a, a³, …, a^(2m−1) of the canonical generator, f the
/// coordinate identity, h = c⁻²·f⁻¹ and φ = c·f for the smallest c with
/// c² ∉ {0, 1}.
pub fn linear_witness(tower: &GfTower, m: usize) -> Result<LinearWitness, LinearError> {
    if tower.p < 5 {
        return Err(LinearError::UnsupportedField(format!(
            "base field must have at least 5 elements, got {}",
            tower.p
        )));
    }
    if !intermediate_fields(tower).is_empty() {
        return Err(LinearError::InvalidTower(format!(
            "GF({}^{}) has an intermediate subfield",
            tower.p, tower.n
        )));
    }
    if m < 1 || 4 * m > tower.n + 1 {
        return Err(LinearError::InvalidOrder(format!(
            "order {m} is outside 1 ≤ m ≤ ({} + 1)/4",
            tower.n
        )));
    }
    let alpha = tower.generator();
    let vectors: Vec<GfElem> = (1..=m)
        .map(|i| tower.pow(&alpha, (2 * i - 1) as u128))
        .collect();
    let space = Subspace::span_finite(tower, &vectors);
    if space.dim() != m {
        return Err(LinearError::InvalidBasis(
            "odd powers of the generator are dependent".into(),
        ));
    }
    let square = space.product(&space)?;
    if !square.intersect(&space)?.is_zero() {
        return Err(LinearError::InvalidArgument(
            "A_m meets its own product".into(),
        ));
    }

    let f = LinearMap::identity(&space);
    let ff = f.compose(&f)?;
    let (h, phi, c_string) = if ff != f {
        // f is not an involution: its inverse is an equivalent distinct
        // strong matching, paired through φ = f
        (f.invert()?, f.clone(), "1".into())
    } else {
        let field = tower.fp();
        let c = (0..tower.p)
            .find(|&c| {
                let c2 = field.mul(c, c);
                c2 != 0 && c2 != 1
            })
            .expect("a scalar with c² outside {0,1} exists for p ≥ 5");
        let c2_inv = field.inv(field.mul(c, c));
        let h = LinearMap::scalar_finite(&space, c2_inv).compose(&f.invert()?)?;
        let phi = LinearMap::scalar_finite(&space, c).compose(&f)?;
        (h, phi, c.to_string())
    };

    let claims = LinearWitnessClaims {
        strong_f: strong_matching_exists(&space, &space)? && f.is_invertible(),
        strong_h: strong_matching_exists(&space, &space)? && h.is_invertible(),
        equivalent: quad_map_equal(&f, &phi, &h)?,
        distinct: f != h,
        scalar_multiple: h.scalar_ratio(&f).is_some(),
    };
    if !claims.all_hold() {
        return Err(LinearError::InvalidArgument(
            "witness failed self-validation".into(),
        ));
    }
    Ok(LinearWitness {
        tower: FieldTower::Finite(tower.clone()),
        m,
        space,
        f,
        h,
        phi,
        c: c_string,
        claims,
    })
}

/// The purely transcendental analogue over Q ⊆ Q(t): A_m spanned by the odd
/// monomials t, t³, …, t^(2m−1); exact rational arithmetic throughout.
pub fn transcendental_witness(m: usize) -> Result<LinearWitness, LinearError> {
    if m < 1 {
        return Err(LinearError::InvalidOrder("order must be at least 1".into()));
    }
    let cap = super::subspace::DEFAULT_DEGREE_CAP;
    let monomials: Vec<QPoly> = (1..=m).map(|i| QPoly::monomial(2 * i - 1)).collect();
    let space = Subspace::span_polys(cap, &monomials)?;
    debug_assert_eq!(space.dim(), m);
    let square = space.product(&space)?;
    if !square.intersect(&space)?.is_zero() {
        return Err(LinearError::InvalidArgument(
            "A_m meets its own product".into(),
        ));
    }
    let f = LinearMap::identity(&space);
    let c = q_from(2);
    let c2_inv = Q::one() / (&c * &c);
    let h = LinearMap::scalar_rational(&space, &c2_inv);
    let phi = LinearMap::scalar_rational(&space, &c);
    // the product criterion, already verified above
    let disjoint_square = square.intersect(&space)?.is_zero();
    let claims = LinearWitnessClaims {
        strong_f: disjoint_square && f.is_invertible(),
        strong_h: disjoint_square && h.is_invertible(),
        equivalent: quad_map_equal(&f, &phi, &h)?,
        distinct: f != h,
        scalar_multiple: h.scalar_ratio(&f).is_some(),
    };
    if !claims.all_hold() {
        return Err(LinearError::InvalidArgument(
            "witness failed self-validation".into(),
        ));
    }
    Ok(LinearWitness {
        tower: FieldTower::rational_function(),
        m,
        space,
        f,
        h,
        phi,
        c: format_q(&c),
        claims,
    })
}

/// A matched-subspace counterexample: a pair (A, B) of equal dimension with
/// 1 ∉ B and a basis of A matched to no basis of B.
#[derive(Debug, Clone)]
pub struct LmpCounterexample {
    pub a: Subspace,
    pub b: Subspace,
    pub failing_basis: Vec<GfElem>,
}

impl LmpCounterexample {
    /// Re-derives the counterexample claims by exhausting the bases of B.
    pub fn revalidate(&self, tower: &GfTower) -> Result<bool, LinearError> {
        if self.b.contains_one() {
            return Ok(false);
        }
        let span = Subspace::span_finite(tower, &self.failing_basis);
        if span != self.a {
            return Ok(false);
        }
        for basis_b in ordered_bases(&self.b) {
            if is_matched_basis(tower, &self.failing_basis, &basis_b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Searches for a matched-subspace counterexample. Candidate A-spaces
/// contained in an intermediate subfield come first (their products stay
/// inside the subfield), then B-spaces meeting that subfield; the rest of
/// the pair stream follows in canonical order.
pub fn lmp_counterexample_search(
    tower: &GfTower,
    budget: Budget,
) -> Result<Bounded<Option<LmpCounterexample>>, LinearError> {
    let subfields: Vec<Subspace> = intermediate_fields(tower)
        .into_iter()
        .map(|d| subfield_subspace(tower, d))
        .collect();
    let inside_subfield = |s: &Subspace| {
        subfields.iter().any(|f| {
            s.finite_rows()
                .map(|rows| {
                    rows.iter()
                        .all(|r| f.contains(&super::subspace::FieldElem::Fin(r.clone())))
                })
                .unwrap_or(false)
        })
    };
    let meets_subfield = |s: &Subspace| {
        subfields
            .iter()
            .any(|f| !s.intersect(f).map(|i| i.is_zero()).unwrap_or(true))
    };

    let mut tracker = Tracker::new(budget);
    let max_dim = (tower.n - 1).min(3);
    for m in 2..=max_dim {
        let all = enumerate_subspaces(tower, m);
        let mut a_candidates: Vec<&Subspace> = all.iter().filter(|s| inside_subfield(s)).collect();
        a_candidates.extend(all.iter().filter(|s| !inside_subfield(s)));
        let without_one: Vec<&Subspace> = all.iter().filter(|s| !s.contains_one()).collect();
        let mut b_candidates: Vec<&Subspace> = without_one
            .iter()
            .copied()
            .filter(|s| meets_subfield(s))
            .collect();
        b_candidates.extend(without_one.iter().copied().filter(|s| !meets_subfield(s)));

        for a in &a_candidates {
            for b in &b_candidates {
                if !tracker.spend() {
                    return Ok(Bounded::OutOfBudget);
                }
                match is_matched_subspace_with(a, b, MatchMode::Exhaustive, &mut tracker)? {
                    Bounded::OutOfBudget => return Ok(Bounded::OutOfBudget),
                    Bounded::Done(MatchedOutcome {
                        matched: false,
                        failing_basis: Some(basis),
                    }) => {
                        return Ok(Bounded::Done(Some(LmpCounterexample {
                            a: (*a).clone(),
                            b: (*b).clone(),
                            failing_basis: basis,
                        })))
                    }
                    Bounded::Done(_) => {}
                }
            }
        }
    }
    Ok(Bounded::Done(None))
}

// certificate payload encodings

pub fn matrix_strings(matrix: &KMatrix) -> Vec<Vec<String>> {
    match matrix {
        KMatrix::Fin(m) => m
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect(),
        KMatrix::Rat(m) => m.iter().map(|row| row.iter().map(format_q).collect()).collect(),
    }
}

pub fn subspace_strings(space: &Subspace) -> Vec<Vec<String>> {
    match space {
        Subspace::Finite { rows, .. } => rows
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect(),
        Subspace::RatFun { polys, .. } => polys.iter().map(|p| p.coeff_strings()).collect(),
    }
}
