//! Exact polynomial and rational-function arithmetic over the rationals,
//! used by the purely transcendental tower model.

use num::rational::BigRational;
use num::{One, Zero};

use super::LinearError;

pub type Q = BigRational;

pub fn q_from(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: num::BigInt = n.trim().parse().ok()?;
        let d: num::BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: num::BigInt = text.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Polynomial with ascending coefficients and no trailing zeros; the zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly(pub Vec<Q>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = QPoly(vec![c]);
        p.trim();
        p
    }

    pub fn monomial(deg: usize) -> Self {
        let mut coeffs = vec![Q::zero(); deg + 1];
        coeffs[deg] = Q::one();
        QPoly(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        let mut p = QPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.0.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<&Q> {
        self.0.last()
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let len = self.0.len().max(other.0.len());
        let coeffs = (0..len).map(|i| self.coeff(i) + other.coeff(i)).collect();
        QPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let len = self.0.len().max(other.0.len());
        let coeffs = (0..len).map(|i| self.coeff(i) - other.coeff(i)).collect();
        QPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> QPoly {
        QPoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &Q) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }

    /// Euclidean division self = q·div + r with deg r < deg div.
    pub fn divmod(&self, div: &QPoly) -> (QPoly, QPoly) {
        assert!(!div.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        let dd = div.degree().unwrap();
        let lead = div.leading().unwrap().clone();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let k = dr - dd;
            let factor = rem.leading().unwrap() / &lead;
            let term = QPoly::monomial(k).scale(&factor);
            quot = quot.add(&term);
            rem = rem.sub(&div.mul(&term));
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scaled to leading coefficient 1 (the zero polynomial is unchanged).
    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(lead) => self.scale(&(Q::one() / lead)),
        }
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.0.iter().map(format_q).collect()
    }

    pub fn parse_coeffs(coeffs: &[String]) -> Option<QPoly> {
        let parsed = coeffs
            .iter()
            .map(|s| parse_q(s))
            .collect::<Option<Vec<_>>>()?;
        Some(QPoly::from_coeffs(parsed))
    }
}

/// A reduced fraction of polynomials: denominator monic and coprime to the
/// numerator. The field elements of the rational-function tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunc {
    pub num: QPoly,
    pub den: QPoly,
}

impl RatFunc {
    pub fn from_poly(p: QPoly) -> Self {
        Self {
            num: p,
            den: QPoly::constant(Q::one()),
        }
    }

    pub fn new(num: QPoly, den: QPoly) -> Result<Self, LinearError> {
        if den.is_zero() {
            return Err(LinearError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: QPoly, den: QPoly) -> Self {
        if num.is_zero() {
            return Self::from_poly(QPoly::zero());
        }
        let g = num.gcd(&den);
        let (num, _) = num.divmod(&g);
        let (den, _) = den.divmod(&g);
        let lead = den.leading().unwrap().clone();
        Self {
            num: num.scale(&(Q::one() / &lead)),
            den: den.scale(&(Q::one() / &lead)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<&QPoly> {
        if self.den == QPoly::constant(Q::one()) {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        Self::canonical(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        Self::canonical(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<RatFunc, LinearError> {
        if self.is_zero() {
            return Err(LinearError::DivisionByZero);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        let mut out = RatFunc::from_poly(QPoly::constant(Q::one()));
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }
}

// dense linear algebra over Q

pub type QMat = Vec<Vec<Q>>;

/// Reduced row-echelon form in place; returns pivot columns, drops zero rows.
pub fn rref(mat: &mut QMat) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // largest entry first keeps things deterministic; any nonzero works
        let Some(pr) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, pr);
        let inv = Q::one() / &mat[r][c];
        for x in mat[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let factor = mat[i][c].clone();
                for j in 0..cols {
                    let sub = &factor * &mat[r][j];
                    mat[i][j] = &mat[i][j] - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    mat.truncate(r);
    pivots
}

pub fn kernel_basis(mat: &QMat, cols: usize) -> QMat {
    let mut m = mat.clone();
    let pivots = rref(&mut m);
    let mut pivot_of_col = vec![None; cols];
    for (row, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(row);
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut x = vec![Q::zero(); cols];
        x[free] = Q::one();
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[row][free].clone();
        }
        basis.push(x);
    }
    basis
}

pub fn mat_inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut aug: QMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn mat_mul(a: &QMat, b: &QMat) -> QMat {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                let add = &a[i][k] * &b[k][j];
                out[i][j] = &out[i][j] + &add;
            }
        }
    }
    out
}

pub fn is_invertible(a: &QMat) -> bool {
    !a.is_empty() && a.len() == a[0].len() && mat_inverse(a).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_mul_and_divmod() {
        // (t + 1)(t − 1) = t² − 1
        let a = QPoly::from_coeffs(vec![q_from(1), q_from(1)]);
        let b = QPoly::from_coeffs(vec![q_from(-1), q_from(1)]);
        let prod = a.mul(&b);
        assert_eq!(prod, QPoly::from_coeffs(vec![q_from(-1), q_from(0), q_from(1)]));
        let (q, r) = prod.divmod(&a);
        assert_eq!(q, b);
        assert!(r.is_zero());
    }

    #[test]
    fn ratfunc_reduces() {
        // (t² − 1)/(t − 1) = t + 1
        let num = QPoly::from_coeffs(vec![q_from(-1), q_from(0), q_from(1)]);
        let den = QPoly::from_coeffs(vec![q_from(-1), q_from(1)]);
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.as_poly().unwrap(), &QPoly::from_coeffs(vec![q_from(1), q_from(1)]));
        let inv = f.inv().unwrap();
        let one = f.mul(&inv);
        assert_eq!(one.as_poly().unwrap(), &QPoly::constant(Q::one()));
    }

    #[test]
    fn q_rref_kernel() {
        let m: QMat = vec![
            vec![q_from(1), q_from(2), q_from(3)],
            vec![q_from(2), q_from(4), q_from(6)],
        ];
        let kernel = kernel_basis(&m, 3);
        assert_eq!(kernel.len(), 2);
        for x in &kernel {
            let dot = |row: &Vec<Q>| -> Q {
                row.iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .fold(Q::zero(), |acc, v| acc + v)
            };
            assert!(m.iter().all(|row| dot(row).is_zero()));
        }
    }

    #[test]
    fn q_parse_format_round_trip() {
        let q = parse_q("-6/4").unwrap();
        assert_eq!(format_q(&q), "-3/2");
        assert_eq!(parse_q("7").unwrap(), q_from(7));
        assert!(parse_q("1/0").is_none());
    }
}
