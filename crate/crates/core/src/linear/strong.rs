//! Strong matchings between subspaces: the product criterion, matched-basis
//! checks, functional equality of the quadratic maps a ↦ a·f(a), and the
//! linear acyclicity decision by full enumeration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fp::{self};
use super::gf::{GfElem, GfTower};
use super::qpoly::{self, QPoly, Q};
use super::subspace::{ordered_bases, random_invertible, unordered_bases, Subspace};
use super::LinearError;
use crate::search::{Bounded, Budget, Tracker};
use num::{One, Zero};

/// A K-linear map between subspaces, stored as its matrix in the canonical
/// domain/codomain bases (columns are images of domain basis vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    pub domain: Subspace,
    pub codomain: Subspace,
    pub matrix: KMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KMatrix {
    Fin(fp::Mat),
    Rat(qpoly::QMat),
}

impl KMatrix {
    pub fn dim(&self) -> usize {
        match self {
            KMatrix::Fin(m) => m.len(),
            KMatrix::Rat(m) => m.len(),
        }
    }
}

impl LinearMap {
    pub fn identity(space: &Subspace) -> Self {
        let m = space.dim();
        let matrix = match space {
            Subspace::Finite { .. } => KMatrix::Fin(fp::identity(m)),
            Subspace::RatFun { .. } => KMatrix::Rat(q_identity(m)),
        };
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            matrix,
        }
    }

    pub fn from_finite_matrix(
        domain: &Subspace,
        codomain: &Subspace,
        matrix: fp::Mat,
    ) -> Result<Self, LinearError> {
        let (Some(_), Some(_)) = (domain.finite_rows(), codomain.finite_rows()) else {
            return Err(LinearError::InvalidArgument(
                "finite matrix over a transcendental tower".into(),
            ));
        };
        if matrix.len() != codomain.dim()
            || matrix.iter().any(|row| row.len() != domain.dim())
        {
            return Err(LinearError::InvalidArgument(
                "matrix shape does not fit the spaces".into(),
            ));
        }
        Ok(Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: KMatrix::Fin(matrix),
        })
    }

    /// c·identity on a space, c in the base field.
    pub fn scalar_finite(space: &Subspace, c: u64) -> Self {
        let m = space.dim();
        let mut matrix = fp::identity(m);
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = c;
        }
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            matrix: KMatrix::Fin(matrix),
        }
    }

    pub fn scalar_rational(space: &Subspace, c: &Q) -> Self {
        let m = space.dim();
        let mut matrix = q_identity(m);
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = c.clone();
        }
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            matrix: KMatrix::Rat(matrix),
        }
    }

    pub fn is_invertible(&self) -> bool {
        match (&self.matrix, &self.domain) {
            (KMatrix::Fin(m), Subspace::Finite { tower, .. }) => {
                fp::is_invertible(&tower.fp(), m)
            }
            (KMatrix::Rat(m), _) => qpoly::is_invertible(m),
            _ => false,
        }
    }

    pub fn invert(&self) -> Result<Self, LinearError> {
        let matrix = match (&self.matrix, &self.domain) {
            (KMatrix::Fin(m), Subspace::Finite { tower, .. }) => KMatrix::Fin(
                fp::mat_inverse(&tower.fp(), m)
                    .ok_or_else(|| LinearError::InvalidArgument("singular map".into()))?,
            ),
            (KMatrix::Rat(m), _) => KMatrix::Rat(
                qpoly::mat_inverse(m)
                    .ok_or_else(|| LinearError::InvalidArgument("singular map".into()))?,
            ),
            _ => return Err(LinearError::InvalidArgument("matrix/tower mismatch".into())),
        };
        Ok(Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix,
        })
    }

    /// g ∘ self; requires self.codomain = g.domain.
    pub fn compose(&self, g: &LinearMap) -> Result<Self, LinearError> {
        if self.codomain != g.domain {
            return Err(LinearError::InvalidArgument(
                "composition domains do not line up".into(),
            ));
        }
        let matrix = match (&g.matrix, &self.matrix, &self.domain) {
            (KMatrix::Fin(gm), KMatrix::Fin(fm), Subspace::Finite { tower, .. }) => {
                KMatrix::Fin(fp::mat_mul(&tower.fp(), gm, fm))
            }
            (KMatrix::Rat(gm), KMatrix::Rat(fm), _) => KMatrix::Rat(qpoly::mat_mul(gm, fm)),
            _ => return Err(LinearError::InvalidArgument("matrix/tower mismatch".into())),
        };
        Ok(Self {
            domain: self.domain.clone(),
            codomain: g.codomain.clone(),
            matrix,
        })
    }

    /// The image of the j-th canonical domain basis element, as an element
    /// of the extension (finite towers).
    pub fn basis_image_finite(&self, j: usize) -> GfElem {
        let (KMatrix::Fin(m), Subspace::Finite { tower, rows }) = (&self.matrix, &self.codomain)
        else {
            panic!("basis_image_finite over a transcendental tower");
        };
        let mut out = tower.zero();
        for (r, row) in rows.iter().enumerate() {
            out = tower.add(&out, &tower.scale(m[r][j], row));
        }
        out
    }

    pub fn basis_image_poly(&self, j: usize) -> QPoly {
        let (KMatrix::Rat(m), Subspace::RatFun { polys, .. }) = (&self.matrix, &self.codomain)
        else {
            panic!("basis_image_poly over a finite tower");
        };
        let mut out = QPoly::zero();
        for (r, poly) in polys.iter().enumerate() {
            out = out.add(&poly.scale(&m[r][j]));
        }
        out
    }

    /// The scalar c ∈ K with self = c·other, when one exists.
    pub fn scalar_ratio(&self, other: &LinearMap) -> Option<KScalar> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return None;
        }
        match (&self.matrix, &other.matrix, &self.domain) {
            (KMatrix::Fin(a), KMatrix::Fin(b), Subspace::Finite { tower, .. }) => {
                let field = tower.fp();
                let mut ratio: Option<u64> = None;
                for (ra, rb) in a.iter().zip(b) {
                    for (&x, &y) in ra.iter().zip(rb) {
                        match (x, y) {
                            (0, 0) => continue,
                            (_, 0) | (0, _) => return None,
                            (x, y) => {
                                let c = field.mul(x, field.inv(y));
                                match ratio {
                                    None => ratio = Some(c),
                                    Some(r) if r == c => {}
                                    Some(_) => return None,
                                }
                            }
                        }
                    }
                }
                ratio.map(KScalar::Fin)
            }
            (KMatrix::Rat(a), KMatrix::Rat(b), _) => {
                let mut ratio: Option<Q> = None;
                for (ra, rb) in a.iter().zip(b) {
                    for (x, y) in ra.iter().zip(rb) {
                        match (x.is_zero(), y.is_zero()) {
                            (true, true) => continue,
                            (false, true) | (true, false) => return None,
                            (false, false) => {
                                let c = x / y;
                                match &ratio {
                                    None => ratio = Some(c),
                                    Some(r) if *r == c => {}
                                    Some(_) => return None,
                                }
                            }
                        }
                    }
                }
                ratio.map(KScalar::Rat)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KScalar {
    Fin(u64),
    Rat(Q),
}

fn q_identity(m: usize) -> qpoly::QMat {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// strong matchings
// ---------------------------------------------------------------------------

/// The product criterion: a strong matching from A to B exists exactly when
/// AB ∩ A = {0}.
pub fn strong_matching_exists(a: &Subspace, b: &Subspace) -> Result<bool, LinearError> {
    if a.dim() != b.dim() || a.dim() == 0 {
        return Err(LinearError::InvalidPair(format!(
            "need equal nonzero dimensions, got {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let product = a.product(b)?;
    Ok(product.intersect(a)?.is_zero())
}

/// Checks that the indexed basis 𝒜 is matched to ℬ: whenever a_i·b lands
/// in A = span(𝒜), b must avoid the i-th basis direction of B.
pub fn is_matched_basis(
    tower: &GfTower,
    basis_a: &[GfElem],
    basis_b: &[GfElem],
) -> Result<bool, LinearError> {
    let m = basis_a.len();
    if m == 0 || basis_b.len() != m {
        return Err(LinearError::InvalidBasis(
            "bases must be nonempty and of equal size".into(),
        ));
    }
    let field = tower.fp();
    if fp::rank(&field, &basis_a.to_vec()) != m || fp::rank(&field, &basis_b.to_vec()) != m {
        return Err(LinearError::InvalidBasis("vectors are dependent".into()));
    }
    let a_space = Subspace::span_finite(tower, basis_a);
    for i in 0..m {
        // kernel of y ↦ residue of Σ y_j (a_i·b_j) modulo A
        let columns: Vec<GfElem> = basis_b
            .iter()
            .map(|b| a_space.reduce_finite(&tower.mul(&basis_a[i], b)))
            .collect();
        let system: fp::Mat = (0..tower.n)
            .map(|r| columns.iter().map(|col| col[r]).collect())
            .collect();
        let kernel = fp::kernel_basis(&field, &system, m);
        // matched at i exactly when every solution has y_i = 0
        if kernel.iter().any(|y| y[i] != 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchedOutcome {
    pub matched: bool,
    /// a basis of A matched to no basis of B, when matched is false
    pub failing_basis: Option<Vec<GfElem>>,
}

fn bases_for_mode(space: &Subspace, mode: MatchMode) -> Vec<Vec<GfElem>> {
    match mode {
        MatchMode::Exhaustive => unordered_bases(space),
        MatchMode::Sampled { count, seed } => {
            let (tower, rows) = match space {
                Subspace::Finite { tower, rows } => (tower, rows),
                Subspace::RatFun { .. } => panic!("sampling needs the finite tower"),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let field = tower.fp();
            (0..count)
                .map(|_| {
                    let t = random_invertible(&mut rng, tower.p, rows.len());
                    fp::mat_mul(&field, &t, rows)
                })
                .collect()
        }
    }
}

/// Is A matched with B: every basis of A can be matched to some basis of B.
/// Exhaustive mode scans one representative per unordered basis of A
/// (permuting a matched pair in step keeps it matched) against all ordered
/// bases of B.
pub fn is_matched_subspace(
    a: &Subspace,
    b: &Subspace,
    mode: MatchMode,
    budget: Budget,
) -> Result<Bounded<MatchedOutcome>, LinearError> {
    let mut tracker = Tracker::new(budget);
    is_matched_subspace_with(a, b, mode, &mut tracker)
}

/// Same check sharing an external budget tracker.
pub fn is_matched_subspace_with(
    a: &Subspace,
    b: &Subspace,
    mode: MatchMode,
    tracker: &mut Tracker,
) -> Result<Bounded<MatchedOutcome>, LinearError> {
    let tower = match (a, b) {
        (Subspace::Finite { tower, .. }, Subspace::Finite { tower: t2, .. }) if tower == t2 => {
            tower.clone()
        }
        _ => return Err(LinearError::InvalidPair("need one finite tower".into())),
    };
    if a.dim() != b.dim() || a.dim() == 0 {
        return Err(LinearError::InvalidPair("dimension mismatch".into()));
    }
    let b_bases = ordered_bases(b);
    for basis_a in bases_for_mode(a, mode) {
        let mut matched = false;
        for basis_b in &b_bases {
            if !tracker.spend() {
                return Ok(Bounded::OutOfBudget);
            }
            if is_matched_basis(&tower, &basis_a, basis_b)? {
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(Bounded::Done(MatchedOutcome {
                matched: false,
                failing_basis: Some(basis_a),
            }));
        }
    }
    Ok(Bounded::Done(MatchedOutcome {
        matched: true,
        failing_basis: None,
    }))
}

/// Checks the strong-matching property of an isomorphism: every basis 𝒜 of
/// the domain is matched to its image φ(𝒜).
pub fn is_strong_matching(
    map: &LinearMap,
    mode: MatchMode,
    budget: Budget,
) -> Result<Bounded<bool>, LinearError> {
    let tower = match &map.domain {
        Subspace::Finite { tower, .. } => tower.clone(),
        Subspace::RatFun { .. } => {
            return Err(LinearError::InvalidPair("need the finite tower".into()))
        }
    };
    if !map.is_invertible() {
        return Err(LinearError::InvalidArgument("map is not invertible".into()));
    }
    let domain_rows = map.domain.finite_rows().unwrap().clone();
    let pivots = pivot_columns(&domain_rows);
    let mut tracker = Tracker::new(budget);
    for basis_a in bases_for_mode(&map.domain, mode) {
        if !tracker.spend() {
            return Ok(Bounded::OutOfBudget);
        }
        let basis_b: Vec<GfElem> = basis_a
            .iter()
            .map(|a| apply_finite(map, &tower, &pivots, a))
            .collect();
        if !is_matched_basis(&tower, &basis_a, &basis_b)? {
            return Ok(Bounded::Done(false));
        }
    }
    Ok(Bounded::Done(true))
}

fn pivot_columns(rows: &fp::Mat) -> Vec<usize> {
    rows.iter()
        .map(|row| row.iter().position(|&c| c != 0).expect("nonzero RREF row"))
        .collect()
}

/// Coordinates of a member vector with respect to the canonical RREF rows
/// are read off the pivot columns.
fn coords_of(pivots: &[usize], v: &GfElem) -> Vec<u64> {
    pivots.iter().map(|&p| v[p]).collect()
}

fn apply_finite(map: &LinearMap, tower: &GfTower, domain_pivots: &[usize], v: &GfElem) -> GfElem {
    let KMatrix::Fin(m) = &map.matrix else {
        panic!("apply_finite over a transcendental tower");
    };
    let field = tower.fp();
    let coords = coords_of(domain_pivots, v);
    let image_coords = fp::mat_vec(&field, m, &coords);
    let rows = map.codomain.finite_rows().unwrap();
    let mut out = tower.zero();
    for (r, row) in rows.iter().enumerate() {
        out = tower.add(&out, &tower.scale(image_coords[r], row));
    }
    out
}

// ---------------------------------------------------------------------------
// quadratic-map equality
// ---------------------------------------------------------------------------

/// Decides whether a ↦ a·f(a) and a ↦ φ(a)·h(φ(a)) agree as functions on
/// the domain, by comparing the symmetrized coefficients of both quadratic
/// forms. Valid as functional equality because the degree is 2 < |K|; the
/// base field must therefore have at least 5 elements or be infinite.
pub fn quad_map_equal(
    f: &LinearMap,
    phi: &LinearMap,
    h: &LinearMap,
) -> Result<bool, LinearError> {
    if f.domain != phi.domain || phi.codomain != f.domain || h.domain != f.domain {
        return Err(LinearError::InvalidPair(
            "maps must share the domain A, with φ: A → A".into(),
        ));
    }
    match &f.domain {
        Subspace::Finite { tower, rows } => {
            if tower.p < 5 {
                return Err(LinearError::UnsupportedField(format!(
                    "coefficient comparison needs |K| ≥ 5, got {}",
                    tower.p
                )));
            }
            let m = rows.len();
            let lhs_a: Vec<GfElem> = rows.clone();
            let lhs_fa: Vec<GfElem> = (0..m).map(|j| f.basis_image_finite(j)).collect();
            let pivots = pivot_columns(rows);
            let rhs_u: Vec<GfElem> = (0..m).map(|j| phi.basis_image_finite(j)).collect();
            let rhs_v: Vec<GfElem> = rhs_u
                .iter()
                .map(|u| apply_finite(h, tower, &pivots, u))
                .collect();
            for i in 0..m {
                for j in i..m {
                    let lhs = if i == j {
                        tower.mul(&lhs_a[i], &lhs_fa[i])
                    } else {
                        tower.add(
                            &tower.mul(&lhs_a[i], &lhs_fa[j]),
                            &tower.mul(&lhs_a[j], &lhs_fa[i]),
                        )
                    };
                    let rhs = if i == j {
                        tower.mul(&rhs_u[i], &rhs_v[i])
                    } else {
                        tower.add(
                            &tower.mul(&rhs_u[i], &rhs_v[j]),
                            &tower.mul(&rhs_u[j], &rhs_v[i]),
                        )
                    };
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        Subspace::RatFun { polys, .. } => {
            let m = polys.len();
            let lhs_a = polys.clone();
            let lhs_fa: Vec<QPoly> = (0..m).map(|j| f.basis_image_poly(j)).collect();
            let rhs_u: Vec<QPoly> = (0..m).map(|j| phi.basis_image_poly(j)).collect();
            // h applied to φ(a_j): matrix product over the coordinates
            let (KMatrix::Rat(hm), KMatrix::Rat(pm)) = (&h.matrix, &phi.matrix) else {
                return Err(LinearError::InvalidArgument("matrix/tower mismatch".into()));
            };
            let comp = qpoly::mat_mul(hm, pm);
            let h_rows = match &h.codomain {
                Subspace::RatFun { polys, .. } => polys,
                _ => return Err(LinearError::InvalidArgument("matrix/tower mismatch".into())),
            };
            let rhs_v: Vec<QPoly> = (0..m)
                .map(|j| {
                    let mut out = QPoly::zero();
                    for (r, poly) in h_rows.iter().enumerate() {
                        out = out.add(&poly.scale(&comp[r][j]));
                    }
                    out
                })
                .collect();
            for i in 0..m {
                for j in i..m {
                    let lhs = if i == j {
                        lhs_a[i].mul(&lhs_fa[i])
                    } else {
                        lhs_a[i].mul(&lhs_fa[j]).add(&lhs_a[j].mul(&lhs_fa[i]))
                    };
                    let rhs = if i == j {
                        rhs_u[i].mul(&rhs_v[i])
                    } else {
                        rhs_u[i].mul(&rhs_v[j]).add(&rhs_u[j].mul(&rhs_v[i]))
                    };
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Pointwise oracle for the same equality: evaluates both quadratic maps at
/// every point of the domain. Finite towers only; cost |K|^m.
pub fn pointwise_quad_equal(
    f: &LinearMap,
    phi: &LinearMap,
    h: &LinearMap,
) -> Result<bool, LinearError> {
    let (tower, rows) = match &f.domain {
        Subspace::Finite { tower, rows } => (tower.clone(), rows.clone()),
        Subspace::RatFun { .. } => {
            return Err(LinearError::UnsupportedField(
                "pointwise enumeration needs a finite tower".into(),
            ))
        }
    };
    let m = rows.len();
    let pivots = pivot_columns(&rows);
    let mut x = vec![0u64; m];
    loop {
        let mut a = tower.zero();
        for (i, row) in rows.iter().enumerate() {
            a = tower.add(&a, &tower.scale(x[i], row));
        }
        let fa = apply_finite(f, &tower, &pivots, &a);
        let pa = apply_finite(phi, &tower, &pivots, &a);
        let hpa = apply_finite(h, &tower, &pivots, &pa);
        if tower.mul(&a, &fa) != tower.mul(&pa, &hpa) {
            return Ok(false);
        }
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(true);
            }
            x[pos] += 1;
            if x[pos] < tower.p {
                break;
            }
            x[pos] = 0;
            pos += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// linear acyclicity
// ---------------------------------------------------------------------------

/// Decides linear acyclicity of a strong matching f: A → B by enumerating
/// every strong matching g (all isomorphisms, since AB ∩ A = {0}) and every
/// candidate equivalence φ. f is acyclic when each equivalent g is a
/// base-field multiple of f.
pub fn is_linear_acyclic(f: &LinearMap, budget: Budget) -> Result<Bounded<bool>, LinearError> {
    let tower = match &f.domain {
        Subspace::Finite { tower, .. } => tower.clone(),
        Subspace::RatFun { .. } => {
            return Err(LinearError::UnsupportedField(
                "acyclicity enumeration needs a finite tower".into(),
            ))
        }
    };
    if !strong_matching_exists(&f.domain, &f.codomain)? || !f.is_invertible() {
        return Err(LinearError::InvalidArgument(
            "f is not a strong matching".into(),
        ));
    }
    let m = f.domain.dim();
    let gl = super::subspace::enumerate_gl(tower.p, m);
    let mut tracker = Tracker::new(budget);
    for g_mat in &gl {
        if !tracker.spend() {
            return Ok(Bounded::OutOfBudget);
        }
        let g = LinearMap {
            domain: f.domain.clone(),
            codomain: f.codomain.clone(),
            matrix: KMatrix::Fin(g_mat.clone()),
        };
        if g.scalar_ratio(f).is_some() {
            continue;
        }
        for phi_mat in &gl {
            if !tracker.spend() {
                return Ok(Bounded::OutOfBudget);
            }
            let phi = LinearMap {
                domain: f.domain.clone(),
                codomain: f.domain.clone(),
                matrix: KMatrix::Fin(phi_mat.clone()),
            };
            if quad_map_equal(f, &phi, &g)? {
                // an equivalent matching outside K·f
                return Ok(Bounded::Done(false));
            }
        }
    }
    Ok(Bounded::Done(true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::qpoly::q_from;

    fn gf9() -> GfTower {
        GfTower::new(3, 2, Some(vec![1, 0, 1])).unwrap()
    }

    #[test]
    fn strong_matching_alpha_line() {
        let t = gf9();
        let alpha = Subspace::span_finite(&t, &[t.generator()]);
        assert!(strong_matching_exists(&alpha, &alpha).unwrap());
        let one_line = Subspace::span_finite(&t, &[t.one()]);
        assert!(!strong_matching_exists(&one_line, &one_line).unwrap());
    }

    #[test]
    fn matched_basis_examples() {
        let t = gf9();
        let alpha = vec![t.generator()];
        assert!(is_matched_basis(&t, &alpha, &alpha).unwrap());
        let one = vec![t.one()];
        assert!(!is_matched_basis(&t, &one, &one).unwrap());
    }

    #[test]
    fn matched_basis_rejects_dependent() {
        let t = gf9();
        let dep = vec![t.generator(), t.scale(2, &t.generator())];
        assert!(matches!(
            is_matched_basis(&t, &dep, &dep),
            Err(LinearError::InvalidBasis(_))
        ));
    }

    #[test]
    fn strong_map_on_alpha_line() {
        let t = gf9();
        let alpha = Subspace::span_finite(&t, &[t.generator()]);
        let id = LinearMap::identity(&alpha);
        assert_eq!(
            is_strong_matching(&id, MatchMode::Exhaustive, Budget::UNLIMITED).unwrap(),
            Bounded::Done(true)
        );
        let one_line = Subspace::span_finite(&t, &[t.one()]);
        let id_bad = LinearMap::identity(&one_line);
        assert_eq!(
            is_strong_matching(&id_bad, MatchMode::Exhaustive, Budget::UNLIMITED).unwrap(),
            Bounded::Done(false)
        );
    }

    #[test]
    fn scalar_map_is_strong_on_generator_line() {
        let t = GfTower::new(5, 3, None).unwrap();
        let a_line = Subspace::span_finite(&t, &[t.generator()]);
        let double = LinearMap::scalar_finite(&a_line, 2);
        assert_eq!(
            is_strong_matching(&double, MatchMode::Exhaustive, Budget::UNLIMITED).unwrap(),
            Bounded::Done(true)
        );
    }

    #[test]
    fn quad_equality_scalar_example() {
        // over GF(5^3): a·a = 2a·(4·2a) since 2·4·2 = 16 = 1 mod 5
        let t = GfTower::new(5, 3, None).unwrap();
        let a_line = Subspace::span_finite(&t, &[t.generator()]);
        let f = LinearMap::identity(&a_line);
        let phi = LinearMap::scalar_finite(&a_line, 2);
        let h = LinearMap::scalar_finite(&a_line, 4);
        assert!(quad_map_equal(&f, &phi, &h).unwrap());
        assert!(pointwise_quad_equal(&f, &phi, &h).unwrap());
        // but a² ≠ 4a² pointwise
        let id_phi = LinearMap::scalar_finite(&a_line, 2);
        let h_bad = LinearMap::identity(&a_line);
        assert!(!quad_map_equal(&f, &id_phi, &h_bad).unwrap());
        assert!(!pointwise_quad_equal(&f, &id_phi, &h_bad).unwrap());
    }

    #[test]
    fn quad_equality_trivial() {
        let t = GfTower::new(5, 3, None).unwrap();
        let a_line = Subspace::span_finite(&t, &[t.generator()]);
        let f = LinearMap::scalar_finite(&a_line, 3);
        let phi = LinearMap::identity(&a_line);
        assert!(quad_map_equal(&f, &phi, &f).unwrap());
    }

    #[test]
    fn quad_equality_rejects_small_base_field() {
        let t = GfTower::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let a_line = Subspace::span_finite(&t, &[t.generator()]);
        let f = LinearMap::identity(&a_line);
        assert!(matches!(
            quad_map_equal(&f, &f.clone(), &f.clone()),
            Err(LinearError::UnsupportedField(_))
        ));
    }

    #[test]
    fn quad_equality_transcendental() {
        let odd = Subspace::span_polys(64, &[QPoly::monomial(1)]).unwrap();
        let f = LinearMap::identity(&odd);
        let phi = LinearMap::scalar_rational(&odd, &q_from(2));
        let quarter = q_from(1) / q_from(4);
        let h = LinearMap::scalar_rational(&odd, &quarter);
        assert!(quad_map_equal(&f, &phi, &h).unwrap());
    }

    #[test]
    fn scalar_ratio_detection() {
        let t = GfTower::new(5, 3, None).unwrap();
        let a_line = Subspace::span_finite(&t, &[t.generator()]);
        let f = LinearMap::identity(&a_line);
        let g = LinearMap::scalar_finite(&a_line, 4);
        assert_eq!(g.scalar_ratio(&f), Some(KScalar::Fin(4)));
        assert_eq!(f.scalar_ratio(&g), Some(KScalar::Fin(4)));
    }

    #[test]
    fn matched_subspace_alpha_line() {
        let t = gf9();
        let alpha = Subspace::span_finite(&t, &[t.generator()]);
        let outcome = is_matched_subspace(&alpha, &alpha, MatchMode::Exhaustive, Budget::UNLIMITED)
            .unwrap()
            .expect_done("tiny search");
        assert!(outcome.matched);
        assert!(outcome.failing_basis.is_none());
        // sampled mode agrees
        let sampled = is_matched_subspace(
            &alpha,
            &alpha,
            MatchMode::Sampled { count: 5, seed: 3 },
            Budget::UNLIMITED,
        )
        .unwrap()
        .expect_done("sampled");
        assert!(sampled.matched);
    }

    #[test]
    fn matched_subspace_budget() {
        let t = gf9();
        let alpha = Subspace::span_finite(&t, &[t.generator()]);
        assert_eq!(
            is_matched_subspace(&alpha, &alpha, MatchMode::Exhaustive, Budget(0)).unwrap(),
            Bounded::OutOfBudget
        );
    }

    #[test]
    fn linear_acyclicity_of_scalar_maps_in_dim_one() {
        // every isomorphism of a 1-dim space is a base-field scalar, so the
        // identity is acyclic under the "up to K-multiples" reading
        let t = GfTower::new(5, 3, None).unwrap();
        let a_line = Subspace::span_finite(&t, &[t.generator()]);
        let f = LinearMap::identity(&a_line);
        assert_eq!(
            is_linear_acyclic(&f, Budget::UNLIMITED).unwrap(),
            Bounded::Done(true)
        );
        assert_eq!(
            is_linear_acyclic(&f, Budget(0)).unwrap(),
            Bounded::OutOfBudget
        );
        // a map that is not strong is rejected up front
        let one_line = Subspace::span_finite(&t, &[t.one()]);
        let bad = LinearMap::identity(&one_line);
        assert!(matches!(
            is_linear_acyclic(&bad, Budget::UNLIMITED),
            Err(LinearError::InvalidArgument(_))
        ));
    }
}
