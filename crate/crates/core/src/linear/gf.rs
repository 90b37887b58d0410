//! The finite tower GF(p) ⊆ GF(p^n): polynomial arithmetic modulo a
//! verified irreducible modulus, plus the Frobenius machinery used to
//! locate intermediate subfields.

use super::fp::{self, Fp};
use super::LinearError;
use crate::group::is_prime;

/// Elements are coefficient vectors of length n over GF(p), least degree
/// first, in the power basis of the residue class of x.
pub type GfElem = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfTower {
    pub p: u64,
    pub n: usize,
    /// monic irreducible of degree n, coefficients ascending, length n+1
    pub modulus: Vec<u64>,
}

// polynomial helpers over GF(p); coefficient vectors ascending, trimmed

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(fp: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp.add(out[i + j], fp.mul(x, y));
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(fp: &Fp, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp.inv(m[dm]);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let factor = fp.mul(*r.last().unwrap(), lead_inv);
        for (i, &mc) in m.iter().enumerate() {
            let sub = fp.mul(factor, mc);
            r[k + i] = fp.sub(r[k + i], sub);
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_gcd(fp: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(fp, &a, &b);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let inv = fp.inv(lead);
        for c in a.iter_mut() {
            *c = fp.mul(*c, inv);
        }
    }
    a
}

/// x^e mod m by square and multiply.
fn poly_x_pow(fp: &Fp, e: u128, m: &[u64]) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = poly_rem(fp, &[0, 1], m);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(fp, &poly_mul(fp, &result, &base), m);
        }
        base = poly_rem(fp, &poly_mul(fp, &base, &base), m);
        e >>= 1;
    }
    result
}

/// Irreducibility over GF(p): x^(p^n) ≡ x mod f, and gcd(x^(p^d) − x, f) = 1
/// for every proper divisor d of n.
pub fn is_irreducible(p: u64, poly: &[u64]) -> bool {
    let fp = Fp::new(p);
    let mut f = poly.to_vec();
    poly_trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let xpn = poly_x_pow(&fp, (p as u128).pow(n as u32), &f);
    let x = poly_rem(&fp, &[0, 1], &f);
    if xpn != x {
        return false;
    }
    for d in 1..n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let xpd = poly_x_pow(&fp, (p as u128).pow(d as u32), &f);
        // x^(p^d) − x
        let mut diff = xpd;
        diff.resize(diff.len().max(2), 0);
        diff[1] = fp.sub(diff[1], 1);
        poly_trim(&mut diff);
        let g = poly_gcd(&fp, &diff, &f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Deterministic search for the smallest monic irreducible of degree n,
/// ordered lexicographically on the ascending coefficient list.
pub fn find_irreducible(p: u64, n: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; n + 1];
    coeffs[n] = 1;
    loop {
        if is_irreducible(p, &coeffs) {
            return coeffs;
        }
        // odometer over the n low coefficients, least significant last
        let mut pos = n;
        loop {
            assert!(pos > 0, "no irreducible of degree {n} over GF({p})");
            pos -= 1;
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
        }
    }
}

impl GfTower {
    pub fn new(p: u64, n: usize, modulus: Option<Vec<u64>>) -> Result<Self, LinearError> {
        if !is_prime(p) {
            return Err(LinearError::InvalidTower(format!("{p} is not prime")));
        }
        if n < 2 {
            return Err(LinearError::InvalidTower(format!(
                "extension degree must be at least 2, got {n}"
            )));
        }
        let modulus = match modulus {
            Some(mut m) => {
                poly_trim(&mut m);
                if m.len() != n + 1 {
                    return Err(LinearError::InvalidModulus(format!(
                        "modulus degree {} does not match n = {n}",
                        m.len().saturating_sub(1)
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(LinearError::InvalidModulus(
                        "modulus coefficients must be reduced mod p".into(),
                    ));
                }
                if !is_irreducible(p, &m) {
                    return Err(LinearError::InvalidModulus(
                        "modulus is reducible".into(),
                    ));
                }
                m
            }
            None => find_irreducible(p, n),
        };
        Ok(Self { p, n, modulus })
    }

    pub fn fp(&self) -> Fp {
        Fp::new(self.p)
    }

    pub fn spec_string(&self) -> String {
        format!(
            "gf:{}^{}:{}",
            self.p,
            self.n,
            self.modulus
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }

    pub fn zero(&self) -> GfElem {
        vec![0; self.n]
    }

    pub fn one(&self) -> GfElem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    /// The residue class of x, the canonical generator outside GF(p).
    pub fn generator(&self) -> GfElem {
        let mut e = self.zero();
        e[1] = 1;
        e
    }

    pub fn embed_base(&self, c: u64) -> GfElem {
        let mut e = self.zero();
        e[0] = c % self.p;
        e
    }

    pub fn is_zero(&self, a: &GfElem) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let fp = self.fp();
        a.iter().zip(b).map(|(&x, &y)| fp.add(x, y)).collect()
    }

    pub fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let fp = self.fp();
        a.iter().zip(b).map(|(&x, &y)| fp.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &GfElem) -> GfElem {
        let fp = self.fp();
        a.iter().map(|&x| fp.neg(x)).collect()
    }

    pub fn scale(&self, c: u64, a: &GfElem) -> GfElem {
        let fp = self.fp();
        a.iter().map(|&x| fp.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let fp = self.fp();
        let mut r = poly_rem(&fp, &poly_mul(&fp, a, b), &self.modulus);
        r.resize(self.n, 0);
        r
    }

    pub fn inv(&self, a: &GfElem) -> Result<GfElem, LinearError> {
        if self.is_zero(a) {
            return Err(LinearError::DivisionByZero);
        }
        // extended Euclid in GF(p)[x]
        let fp = self.fp();
        let mut a_poly = a.clone();
        poly_trim(&mut a_poly);
        let (mut r0, mut r1) = (self.modulus.clone(), a_poly);
        let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            // division step: r0 = q·r1 + r
            let mut q = Vec::new();
            let mut rem = r0.clone();
            let d1 = r1.len() - 1;
            let lead_inv = fp.inv(r1[d1]);
            while rem.len() > d1 && !rem.is_empty() {
                let k = rem.len() - 1 - d1;
                let factor = fp.mul(*rem.last().unwrap(), lead_inv);
                if q.len() < k + 1 {
                    q.resize(k + 1, 0);
                }
                q[k] = fp.add(q[k], factor);
                for (i, &mc) in r1.iter().enumerate() {
                    let sub = fp.mul(factor, mc);
                    rem[k + i] = fp.sub(rem[k + i], sub);
                }
                poly_trim(&mut rem);
            }
            let t2 = {
                let qt1 = poly_mul(&fp, &q, &t1);
                let mut out = t0.clone();
                out.resize(out.len().max(qt1.len()), 0);
                for (i, &c) in qt1.iter().enumerate() {
                    out[i] = fp.sub(out[i], c);
                }
                poly_trim(&mut out);
                out
            };
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        // r0 is the gcd, a nonzero constant since the modulus is irreducible
        debug_assert_eq!(r0.len(), 1);
        let scale = fp.inv(r0[0]);
        let mut out: Vec<u64> = t0.iter().map(|&c| fp.mul(c, scale)).collect();
        out.resize(self.n, 0);
        Ok(out)
    }

    pub fn pow(&self, a: &GfElem, mut e: u128) -> GfElem {
        let mut result = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// Matrix of the K-linear map x ↦ x^(p^d) in the power basis; columns
    /// are the images of the basis elements.
    pub fn frobenius_matrix(&self, d: usize) -> fp::Mat {
        let e = (self.p as u128).pow(d as u32);
        let mut columns = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut basis = self.zero();
            basis[i] = 1;
            columns.push(self.pow(&basis, e));
        }
        (0..self.n)
            .map(|r| (0..self.n).map(|c| columns[c][r]).collect())
            .collect()
    }

    /// All p^n elements, odometer order. Desk-scale towers only.
    pub fn all_elements(&self) -> Vec<GfElem> {
        let total = (self.p as u128).pow(self.n as u32);
        assert!(total <= 1 << 20, "element enumeration out of range");
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = self.zero();
        loop {
            out.push(cur.clone());
            let mut pos = 0;
            loop {
                if pos == self.n {
                    return out;
                }
                cur[pos] += 1;
                if cur[pos] < self.p {
                    break;
                }
                cur[pos] = 0;
                pos += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_with_explicit_modulus() {
        // x² + 1 is irreducible over GF(3) since −1 is a non-residue
        let t = GfTower::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let alpha = t.generator();
        // α² = −1 = 2
        assert_eq!(t.mul(&alpha, &alpha), t.embed_base(2));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x² − 1 = (x−1)(x+1)
        assert!(matches!(
            GfTower::new(3, 2, Some(vec![2, 0, 1])),
            Err(LinearError::InvalidModulus(_))
        ));
    }

    #[test]
    fn smallest_cubic_over_gf5() {
        let t = GfTower::new(5, 3, None).unwrap();
        // ordering is lexicographic on the ascending coefficient list, so
        // x³ + x² + 1 comes before x³ + x + 1; it has no roots mod 5
        assert_eq!(t.modulus, vec![1, 0, 1, 1]);
        for r in 0..5u64 {
            let val = (r * r % 5 * r % 5 + r * r % 5 + 1) % 5;
            assert_ne!(val, 0, "root at {r}");
        }
        // everything lexicographically below it factors
        assert!(!is_irreducible(5, &[0, 0, 0, 1]));
        assert!(!is_irreducible(5, &[1, 0, 0, 1]));
    }

    #[test]
    fn multiplicative_group_order() {
        let t = GfTower::new(5, 3, None).unwrap();
        let a = t.generator();
        assert_eq!(t.pow(&a, 5u128.pow(3) - 1), t.one());
        let b = t.add(&t.generator(), &t.embed_base(3));
        assert_eq!(t.pow(&b, 5u128.pow(3) - 1), t.one());
    }

    #[test]
    fn inverse_round_trip() {
        let t = GfTower::new(3, 4, None).unwrap();
        for a in t.all_elements() {
            if t.is_zero(&a) {
                assert!(matches!(t.inv(&a), Err(LinearError::DivisionByZero)));
            } else {
                let inv = t.inv(&a).unwrap();
                assert_eq!(t.mul(&a, &inv), t.one());
            }
        }
    }

    #[test]
    fn frobenius_fixes_base_field() {
        let t = GfTower::new(3, 4, None).unwrap();
        let m = t.frobenius_matrix(1);
        let one_col: Vec<u64> = m.iter().map(|row| row[0]).collect();
        assert_eq!(one_col, t.one());
    }
}
