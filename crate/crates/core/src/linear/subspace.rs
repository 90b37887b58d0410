//! Field towers and canonical subspaces.
//!
//! Subspaces over the finite tower are stored as RREF row matrices over
//! GF(p); subspaces of the rational-function tower as reduced echelon
//! polynomial lists. Both representations are canonical, so equal subspaces
//! compare equal structurally.

use itertools::Itertools;
use rand::Rng;

use super::fp::{self, Fp};
use super::gf::{GfElem, GfTower};
use super::qpoly::{self, QPoly, RatFunc, Q};
use super::LinearError;
use num::{One, Zero};

/// The purely transcendental model: rational functions over the exact
/// rationals, with a polynomial degree cap as a resource guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunTower {
    pub degree_cap: usize,
}

pub const DEFAULT_DEGREE_CAP: usize = 64;

impl Default for RatFunTower {
    fn default() -> Self {
        Self {
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

/// A base field inside an extension: GF(p) ⊆ GF(p^n), or Q inside Q(t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldTower {
    Finite(GfTower),
    RatFun(RatFunTower),
}

/// An element of the extension field of a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElem {
    Fin(GfElem),
    Rat(RatFunc),
}

impl FieldTower {
    pub fn finite(p: u64, n: usize, modulus: Option<Vec<u64>>) -> Result<Self, LinearError> {
        Ok(Self::Finite(GfTower::new(p, n, modulus)?))
    }

    pub fn rational_function() -> Self {
        Self::RatFun(RatFunTower::default())
    }

    /// Parses `gf:p^n`, `gf:p^n:c0,c1,...,cn` (ascending modulus
    /// coefficients) or `ratfun`.
    pub fn parse_spec(spec: &str) -> Result<Self, LinearError> {
        if spec == "ratfun" {
            return Ok(Self::rational_function());
        }
        let rest = spec
            .strip_prefix("gf:")
            .ok_or_else(|| LinearError::InvalidTower(format!("unrecognized tower spec {spec:?}")))?;
        let mut parts = rest.splitn(2, ':');
        let pn = parts.next().unwrap();
        let (p, n) = pn
            .split_once('^')
            .ok_or_else(|| LinearError::InvalidTower(format!("expected p^n in {spec:?}")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| LinearError::InvalidTower(format!("bad prime in {spec:?}")))?;
        let n: usize = n
            .parse()
            .map_err(|_| LinearError::InvalidTower(format!("bad degree in {spec:?}")))?;
        let modulus = match parts.next() {
            Some(coeffs) => Some(
                coeffs
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<u64>()
                            .map_err(|_| LinearError::InvalidModulus(format!("bad coefficient {c:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        Self::finite(p, n, modulus)
    }

    pub fn spec_string(&self) -> String {
        match self {
            Self::Finite(t) => t.spec_string(),
            Self::RatFun(_) => "ratfun".into(),
        }
    }

    pub fn as_finite(&self) -> Option<&GfTower> {
        match self {
            Self::Finite(t) => Some(t),
            Self::RatFun(_) => None,
        }
    }

    pub fn base_field_size(&self) -> Option<u64> {
        match self {
            Self::Finite(t) => Some(t.p),
            Self::RatFun(_) => None,
        }
    }

    pub fn one(&self) -> FieldElem {
        match self {
            Self::Finite(t) => FieldElem::Fin(t.one()),
            Self::RatFun(_) => FieldElem::Rat(RatFunc::from_poly(QPoly::constant(Q::one()))),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, LinearError> {
        match (self, a, b) {
            (Self::Finite(t), FieldElem::Fin(x), FieldElem::Fin(y)) => {
                Ok(FieldElem::Fin(t.add(x, y)))
            }
            (Self::RatFun(_), FieldElem::Rat(x), FieldElem::Rat(y)) => {
                Ok(FieldElem::Rat(x.add(y)))
            }
            _ => Err(LinearError::InvalidArgument("element outside tower".into())),
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, LinearError> {
        match (self, a, b) {
            (Self::Finite(t), FieldElem::Fin(x), FieldElem::Fin(y)) => {
                Ok(FieldElem::Fin(t.mul(x, y)))
            }
            (Self::RatFun(_), FieldElem::Rat(x), FieldElem::Rat(y)) => {
                Ok(FieldElem::Rat(x.mul(y)))
            }
            _ => Err(LinearError::InvalidArgument("element outside tower".into())),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, LinearError> {
        match (self, a) {
            (Self::Finite(t), FieldElem::Fin(x)) => Ok(FieldElem::Fin(t.inv(x)?)),
            (Self::RatFun(_), FieldElem::Rat(x)) => Ok(FieldElem::Rat(x.inv()?)),
            _ => Err(LinearError::InvalidArgument("element outside tower".into())),
        }
    }

    pub fn pow(&self, a: &FieldElem, e: u32) -> Result<FieldElem, LinearError> {
        match (self, a) {
            (Self::Finite(t), FieldElem::Fin(x)) => Ok(FieldElem::Fin(t.pow(x, e as u128))),
            (Self::RatFun(_), FieldElem::Rat(x)) => Ok(FieldElem::Rat(x.pow(e))),
            _ => Err(LinearError::InvalidArgument("element outside tower".into())),
        }
    }

    pub fn embed_base_str(&self, c: &str) -> Result<FieldElem, LinearError> {
        match self {
            Self::Finite(t) => {
                let v: i64 = c
                    .parse()
                    .map_err(|_| LinearError::InvalidArgument(format!("bad scalar {c:?}")))?;
                Ok(FieldElem::Fin(t.embed_base(v.rem_euclid(t.p as i64) as u64)))
            }
            Self::RatFun(_) => {
                let q = qpoly::parse_q(c)
                    .ok_or_else(|| LinearError::InvalidArgument(format!("bad scalar {c:?}")))?;
                Ok(FieldElem::Rat(RatFunc::from_poly(QPoly::constant(q))))
            }
        }
    }
}

/// A finite-dimensional K-subspace of the extension, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subspace {
    Finite { tower: GfTower, rows: fp::Mat },
    RatFun { cap: usize, polys: Vec<QPoly> },
}

impl Subspace {
    pub fn span_finite(tower: &GfTower, vectors: &[GfElem]) -> Subspace {
        let mut rows: fp::Mat = vectors.to_vec();
        fp::rref(&tower.fp(), &mut rows);
        Subspace::Finite {
            tower: tower.clone(),
            rows,
        }
    }

    pub fn span_polys(cap: usize, polys: &[QPoly]) -> Result<Subspace, LinearError> {
        for p in polys {
            if p.degree().unwrap_or(0) > cap {
                return Err(LinearError::DegreeCapExceeded(cap));
            }
        }
        let maxdeg = polys
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0);
        let mut mat: qpoly::QMat = polys
            .iter()
            .map(|p| (0..=maxdeg).map(|i| p.coeff(i)).collect())
            .collect();
        qpoly::rref(&mut mat);
        let polys = mat
            .into_iter()
            .map(QPoly::from_coeffs)
            .filter(|p| !p.is_zero())
            .collect();
        Ok(Subspace::RatFun { cap, polys })
    }

    pub fn dim(&self) -> usize {
        match self {
            Subspace::Finite { rows, .. } => rows.len(),
            Subspace::RatFun { polys, .. } => polys.len(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// The canonical basis rows, as extension-field elements.
    pub fn basis(&self) -> Vec<FieldElem> {
        match self {
            Subspace::Finite { rows, .. } => rows.iter().cloned().map(FieldElem::Fin).collect(),
            Subspace::RatFun { polys, .. } => polys
                .iter()
                .cloned()
                .map(|p| FieldElem::Rat(RatFunc::from_poly(p)))
                .collect(),
        }
    }

    pub fn finite_rows(&self) -> Option<&fp::Mat> {
        match self {
            Subspace::Finite { rows, .. } => Some(rows),
            Subspace::RatFun { .. } => None,
        }
    }

    pub fn ratfun_polys(&self) -> Option<&[QPoly]> {
        match self {
            Subspace::RatFun { polys, .. } => Some(polys),
            Subspace::Finite { .. } => None,
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinearError> {
        match (self, other) {
            (Subspace::Finite { tower, rows }, Subspace::Finite { tower: t2, rows: r2 })
                if tower == t2 =>
            {
                let mut all = rows.clone();
                all.extend(r2.iter().cloned());
                Ok(Subspace::span_finite(tower, &all))
            }
            (Subspace::RatFun { cap, polys }, Subspace::RatFun { polys: p2, .. }) => {
                let mut all = polys.clone();
                all.extend(p2.iter().cloned());
                Subspace::span_polys(*cap, &all)
            }
            _ => Err(LinearError::InvalidArgument("tower mismatch".into())),
        }
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinearError> {
        match (self, other) {
            (Subspace::Finite { tower, rows }, Subspace::Finite { tower: t2, rows: r2 })
                if tower == t2 =>
            {
                let field = tower.fp();
                let n = tower.n;
                let du = rows.len();
                let dv = r2.len();
                if du == 0 || dv == 0 {
                    return Ok(Subspace::span_finite(tower, &[]));
                }
                // solve Σ c_i u_i − Σ d_j v_j = 0
                let mut system: fp::Mat = vec![vec![0u64; du + dv]; n];
                for (i, u) in rows.iter().enumerate() {
                    for coord in 0..n {
                        system[coord][i] = u[coord];
                    }
                }
                for (j, v) in r2.iter().enumerate() {
                    for coord in 0..n {
                        system[coord][du + j] = field.neg(v[coord]);
                    }
                }
                let kernel = fp::kernel_basis(&field, &system, du + dv);
                let vectors: Vec<GfElem> = kernel
                    .iter()
                    .map(|sol| {
                        let mut v = tower.zero();
                        for (i, u) in rows.iter().enumerate() {
                            v = tower.add(&v, &tower.scale(sol[i], u));
                        }
                        v
                    })
                    .collect();
                Ok(Subspace::span_finite(tower, &vectors))
            }
            (Subspace::RatFun { cap, polys }, Subspace::RatFun { polys: p2, .. }) => {
                let du = polys.len();
                let dv = p2.len();
                if du == 0 || dv == 0 {
                    return Subspace::span_polys(*cap, &[]);
                }
                let maxdeg = polys
                    .iter()
                    .chain(p2.iter())
                    .filter_map(|p| p.degree())
                    .max()
                    .unwrap_or(0);
                let mut system: qpoly::QMat = vec![vec![Q::zero(); du + dv]; maxdeg + 1];
                for (i, u) in polys.iter().enumerate() {
                    for (coord, row) in system.iter_mut().enumerate() {
                        row[i] = u.coeff(coord);
                    }
                }
                for (j, v) in p2.iter().enumerate() {
                    for (coord, row) in system.iter_mut().enumerate() {
                        row[du + j] = -v.coeff(coord);
                    }
                }
                let kernel = qpoly::kernel_basis(&system, du + dv);
                let vectors: Vec<QPoly> = kernel
                    .iter()
                    .map(|sol| {
                        let mut acc = QPoly::zero();
                        for (i, u) in polys.iter().enumerate() {
                            acc = acc.add(&u.scale(&sol[i]));
                        }
                        acc
                    })
                    .collect();
                Subspace::span_polys(*cap, &vectors)
            }
            _ => Err(LinearError::InvalidArgument("tower mismatch".into())),
        }
    }

    /// Span of all pairwise products of basis elements.
    pub fn product(&self, other: &Subspace) -> Result<Subspace, LinearError> {
        match (self, other) {
            (Subspace::Finite { tower, rows }, Subspace::Finite { tower: t2, rows: r2 })
                if tower == t2 =>
            {
                let mut products = Vec::with_capacity(rows.len() * r2.len());
                for u in rows {
                    for v in r2 {
                        products.push(tower.mul(u, v));
                    }
                }
                Ok(Subspace::span_finite(tower, &products))
            }
            (Subspace::RatFun { cap, polys }, Subspace::RatFun { polys: p2, .. }) => {
                let mut products = Vec::with_capacity(polys.len() * p2.len());
                for u in polys {
                    for v in p2 {
                        products.push(u.mul(v));
                    }
                }
                Subspace::span_polys(*cap, &products)
            }
            _ => Err(LinearError::InvalidArgument("tower mismatch".into())),
        }
    }

    pub fn contains(&self, elem: &FieldElem) -> bool {
        match (self, elem) {
            (Subspace::Finite { tower, rows: _ }, FieldElem::Fin(v)) => {
                self.reduce_finite(v).iter().all(|&c| c == 0) && v.len() == tower.n
            }
            (Subspace::RatFun { polys, .. }, FieldElem::Rat(r)) => match r.as_poly() {
                Some(p) => reduce_poly(polys, p).is_zero(),
                None => false,
            },
            _ => false,
        }
    }

    /// Residual of v after eliminating the pivot coordinates against the
    /// RREF rows; zero exactly on members. The nonzero coordinates live in
    /// the canonical complement of the pivot columns.
    pub fn reduce_finite(&self, v: &GfElem) -> GfElem {
        match self {
            Subspace::Finite { tower, rows } => {
                let field = tower.fp();
                let mut res = v.clone();
                for row in rows {
                    let Some(pivot) = row.iter().position(|&c| c != 0) else {
                        continue;
                    };
                    let factor = res[pivot];
                    if factor != 0 {
                        for (r, &c) in res.iter_mut().zip(row.iter()) {
                            *r = field.sub(*r, field.mul(factor, c));
                        }
                    }
                }
                res
            }
            Subspace::RatFun { .. } => panic!("reduce_finite on a rational-function subspace"),
        }
    }

    pub fn contains_one(&self) -> bool {
        match self {
            Subspace::Finite { tower, .. } => self.contains(&FieldElem::Fin(tower.one())),
            Subspace::RatFun { .. } => {
                self.contains(&FieldElem::Rat(RatFunc::from_poly(QPoly::constant(Q::one()))))
            }
        }
    }
}

fn reduce_poly(rows: &[QPoly], v: &QPoly) -> QPoly {
    let mut res = v.clone();
    for row in rows {
        // pivot = first nonzero coefficient of the canonical row
        let pivot = row.0.iter().position(|c| !c.is_zero());
        if let Some(pivot) = pivot {
            let factor = res.coeff(pivot);
            if !factor.is_zero() {
                res = res.sub(&row.scale(&factor));
            }
        }
    }
    res
}

// ---------------------------------------------------------------------------
// enumeration over the finite tower
// ---------------------------------------------------------------------------

/// All m-dimensional subspaces of GF(p^n) over GF(p), enumerated through
/// their canonical RREF matrices (pivot columns ascending, free entries in
/// odometer order).
pub fn enumerate_subspaces(tower: &GfTower, m: usize) -> Vec<Subspace> {
    let n = tower.n;
    if m == 0 || m > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for pivots in (0..n).combinations(m) {
        // free positions: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<(usize, usize)> = (0..m)
            .flat_map(|r| {
                let pivots = pivots.clone();
                (0..n).filter_map(move |c| {
                    (c > pivots[r] && !pivots.contains(&c)).then_some((r, c))
                })
            })
            .collect();
        let mut assignment = vec![0u64; free.len()];
        loop {
            let mut rows = vec![vec![0u64; n]; m];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&assignment) {
                rows[r][c] = v;
            }
            out.push(Subspace::Finite {
                tower: tower.clone(),
                rows,
            });
            // odometer
            let mut pos = assignment.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                assignment[pos] += 1;
                if assignment[pos] < tower.p {
                    break;
                }
                assignment[pos] = 0;
            }
            if assignment.iter().all(|&v| v == 0) {
                break;
            }
        }
    }
    out
}

/// All invertible m×m matrices over GF(p), odometer order.
pub fn enumerate_gl(p: u64, m: usize) -> Vec<fp::Mat> {
    let field = Fp::new(p);
    let cells = m * m;
    let mut assignment = vec![0u64; cells];
    let mut out = Vec::new();
    loop {
        let mat: fp::Mat = (0..m)
            .map(|r| assignment[r * m..(r + 1) * m].to_vec())
            .collect();
        if fp::is_invertible(&field, &mat) {
            out.push(mat);
        }
        let mut pos = cells;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < p {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

pub fn random_invertible<R: Rng>(rng: &mut R, p: u64, m: usize) -> fp::Mat {
    let field = Fp::new(p);
    loop {
        let mat: fp::Mat = (0..m)
            .map(|_| (0..m).map(|_| rng.random_range(0..p)).collect())
            .collect();
        if fp::is_invertible(&field, &mat) {
            return mat;
        }
    }
}

/// Ordered bases of a subspace: every invertible coefficient matrix applied
/// to the canonical rows.
pub fn ordered_bases(space: &Subspace) -> Vec<Vec<GfElem>> {
    let (tower, rows) = match space {
        Subspace::Finite { tower, rows } => (tower, rows),
        Subspace::RatFun { .. } => panic!("basis enumeration needs the finite tower"),
    };
    let field = tower.fp();
    enumerate_gl(tower.p, rows.len())
        .into_iter()
        .map(|t| fp::mat_mul(&field, &t, rows))
        .collect()
}

/// One basis per unordered basis set, each in canonical (sorted) order.
pub fn unordered_bases(space: &Subspace) -> Vec<Vec<GfElem>> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for basis in ordered_bases(space) {
        let mut key = basis.clone();
        key.sort();
        if seen.insert(key.clone()) {
            out.push(key);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::qpoly::q_from;

    fn gf9() -> GfTower {
        GfTower::new(3, 2, Some(vec![1, 0, 1])).unwrap()
    }

    #[test]
    fn product_of_alpha_line_is_base_line() {
        let t = gf9();
        let alpha = Subspace::span_finite(&t, &[t.generator()]);
        let product = alpha.product(&alpha).unwrap();
        // α² = 2, so the product is the base-field line through 1
        assert_eq!(product, Subspace::span_finite(&t, &[t.one()]));
        assert!(alpha.intersect(&product).unwrap().is_zero());
        assert_eq!(alpha.intersect(&alpha).unwrap(), alpha);
    }

    #[test]
    fn span_is_order_independent() {
        let t = GfTower::new(5, 3, None).unwrap();
        let a = t.generator();
        let b = t.mul(&a, &a);
        let s1 = Subspace::span_finite(&t, &[a.clone(), b.clone()]);
        let s2 = Subspace::span_finite(&t, &[b.clone(), t.add(&a, &b)]);
        assert_eq!(s1, s2);
    }

    #[test]
    fn ratfun_odd_even_split() {
        let odd = Subspace::span_polys(64, &[QPoly::monomial(1), QPoly::monomial(3)]).unwrap();
        let product = odd.product(&odd).unwrap();
        assert_eq!(product.dim(), 3); // t², t⁴, t⁶
        assert!(odd.intersect(&product).unwrap().is_zero());
        let shifted = Subspace::span_polys(
            64,
            &[
                QPoly::monomial(1).scale(&q_from(3)),
                QPoly::monomial(3).add(&QPoly::monomial(1)),
            ],
        )
        .unwrap();
        assert_eq!(odd, shifted);
    }

    #[test]
    fn subspace_counts() {
        let t = GfTower::new(2, 3, None).unwrap();
        assert_eq!(enumerate_subspaces(&t, 1).len(), 7);
        assert_eq!(enumerate_subspaces(&t, 2).len(), 7);
        assert_eq!(enumerate_subspaces(&t, 3).len(), 1);
        let t34 = GfTower::new(3, 4, None).unwrap();
        assert_eq!(enumerate_subspaces(&t34, 2).len(), 130);
    }

    #[test]
    fn gl_counts() {
        assert_eq!(enumerate_gl(2, 2).len(), 6);
        assert_eq!(enumerate_gl(3, 2).len(), 48);
        assert_eq!(enumerate_gl(5, 1).len(), 4);
    }

    #[test]
    fn contains_and_reduce() {
        let t = gf9();
        let alpha_line = Subspace::span_finite(&t, &[t.generator()]);
        assert!(alpha_line.contains(&FieldElem::Fin(t.scale(2, &t.generator()))));
        assert!(!alpha_line.contains(&FieldElem::Fin(t.one())));
        assert!(!alpha_line.contains_one());
        let whole = Subspace::span_finite(&t, &[t.one(), t.generator()]);
        assert!(whole.contains_one());
    }

    #[test]
    fn tower_spec_round_trip() {
        let t = FieldTower::parse_spec("gf:3^2:1,0,1").unwrap();
        assert_eq!(t.spec_string(), "gf:3^2:1,0,1");
        let t = FieldTower::parse_spec("gf:5^3").unwrap();
        assert_eq!(t.spec_string(), "gf:5^3:1,0,1,1");
        assert!(FieldTower::parse_spec("gf:4^2").is_err());
        assert!(FieldTower::parse_spec("ratfun").is_ok());
    }
}
