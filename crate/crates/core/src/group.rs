//! Exact arithmetic for the group carriers: finite Abelian groups given by
//! invariant factors, and the torsion-free integer / dyadic / rational lines.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),
    #[error("carrier mismatch: element does not belong to this carrier")]
    CarrierMismatch,
    #[error("carrier is not enumerable")]
    NotEnumerable,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse element {text:?} for this carrier")]
    ParseElement { text: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CarrierKind {
    Finite,
    Integer,
    Dyadic,
    Rational,
}

/// An ambient Abelian group. Finite carriers are direct products of cyclic
/// groups given by their factor list; the other kinds are torsion-free
/// subgroups of the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupCarrier {
    kind: CarrierKind,
    invariant_factors: Vec<u64>,
}

/// A group element in canonical form. Residue vectors are reduced into
/// `[0, factor)`, dyadics carry a minimal power-of-two exponent, and
/// rationals are kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Finite(Vec<u64>),
    Integer(BigInt),
    Dyadic { num: BigInt, exp: u32 },
    Rational(BigRational),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(u64),
    Infinite,
}

impl GroupCarrier {
    pub fn finite(invariant_factors: Vec<u64>) -> Result<Self, GroupError> {
        if invariant_factors.is_empty() {
            return Err(GroupError::InvalidCarrier(
                "finite carrier needs at least one factor".into(),
            ));
        }
        if let Some(f) = invariant_factors.iter().find(|&&f| f < 2) {
            return Err(GroupError::InvalidCarrier(format!(
                "invariant factor {f} is below 2"
            )));
        }
        Ok(Self {
            kind: CarrierKind::Finite,
            invariant_factors,
        })
    }

    pub fn integer() -> Self {
        Self {
            kind: CarrierKind::Integer,
            invariant_factors: Vec::new(),
        }
    }

    pub fn dyadic() -> Self {
        Self {
            kind: CarrierKind::Dyadic,
            invariant_factors: Vec::new(),
        }
    }

    pub fn rational() -> Self {
        Self {
            kind: CarrierKind::Rational,
            invariant_factors: Vec::new(),
        }
    }

    /// Parses the command-line grammar: `z:7`, `z:2x2`, `int`, `dyadic`, `rat`.
    pub fn parse_spec(spec: &str) -> Result<Self, GroupError> {
        match spec {
            "int" => Ok(Self::integer()),
            "dyadic" => Ok(Self::dyadic()),
            "rat" => Ok(Self::rational()),
            _ => {
                let rest = spec.strip_prefix("z:").ok_or_else(|| {
                    GroupError::InvalidCarrier(format!("unrecognized group spec {spec:?}"))
                })?;
                let factors = rest
                    .split('x')
                    .map(|part| {
                        part.parse::<u64>().map_err(|_| {
                            GroupError::InvalidCarrier(format!("bad factor {part:?} in {spec:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::finite(factors)
            }
        }
    }

    pub fn spec_string(&self) -> String {
        match self.kind {
            CarrierKind::Finite => format!(
                "z:{}",
                self.invariant_factors
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join("x")
            ),
            CarrierKind::Integer => "int".into(),
            CarrierKind::Dyadic => "dyadic".into(),
            CarrierKind::Rational => "rat".into(),
        }
    }

    pub fn kind(&self) -> CarrierKind {
        self.kind
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn is_finite(&self) -> bool {
        self.kind == CarrierKind::Finite
    }

    /// Group order for finite carriers.
    pub fn order(&self) -> Option<u64> {
        if self.is_finite() {
            Some(self.invariant_factors.iter().product())
        } else {
            None
        }
    }

    /// lcm of the invariant factors.
    pub fn exponent(&self) -> Option<u64> {
        if self.is_finite() {
            Some(self.invariant_factors.iter().fold(1, |acc, &f| acc.lcm(&f)))
        } else {
            None
        }
    }

    pub fn zero(&self) -> GroupElement {
        match self.kind {
            CarrierKind::Finite => GroupElement::Finite(vec![0; self.invariant_factors.len()]),
            CarrierKind::Integer => GroupElement::Integer(BigInt::zero()),
            CarrierKind::Dyadic => GroupElement::Dyadic {
                num: BigInt::zero(),
                exp: 0,
            },
            CarrierKind::Rational => GroupElement::Rational(BigRational::zero()),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self.kind, x) {
            (CarrierKind::Finite, GroupElement::Finite(res)) => {
                res.len() == self.invariant_factors.len()
                    && res
                        .iter()
                        .zip(&self.invariant_factors)
                        .all(|(&r, &f)| r < f)
            }
            (CarrierKind::Integer, GroupElement::Integer(_)) => true,
            (CarrierKind::Dyadic, GroupElement::Dyadic { num, exp }) => {
                *exp == 0 || (num.is_odd() && !num.is_zero())
            }
            (CarrierKind::Rational, GroupElement::Rational(_)) => true,
            _ => false,
        }
    }

    fn check_member(&self, x: &GroupElement) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::CarrierMismatch)
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(a)?;
        self.check_member(b)?;
        Ok(match (a, b) {
            (GroupElement::Finite(x), GroupElement::Finite(y)) => GroupElement::Finite(
                x.iter()
                    .zip(y)
                    .zip(&self.invariant_factors)
                    .map(|((&u, &v), &f)| (u + v) % f)
                    .collect(),
            ),
            (GroupElement::Integer(x), GroupElement::Integer(y)) => GroupElement::Integer(x + y),
            (
                GroupElement::Dyadic { num: n1, exp: e1 },
                GroupElement::Dyadic { num: n2, exp: e2 },
            ) => {
                let e = (*e1).max(*e2);
                let num = (n1 << (e - e1)) + (n2 << (e - e2));
                canonical_dyadic(num, e)
            }
            (GroupElement::Rational(x), GroupElement::Rational(y)) => GroupElement::Rational(x + y),
            _ => return Err(GroupError::CarrierMismatch),
        })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(a)?;
        Ok(match a {
            GroupElement::Finite(x) => GroupElement::Finite(
                x.iter()
                    .zip(&self.invariant_factors)
                    .map(|(&u, &f)| (f - u) % f)
                    .collect(),
            ),
            GroupElement::Integer(x) => GroupElement::Integer(-x),
            GroupElement::Dyadic { num, exp } => GroupElement::Dyadic {
                num: -num,
                exp: *exp,
            },
            GroupElement::Rational(x) => GroupElement::Rational(-x),
        })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// n·x for an integer n (repeated addition, done exactly in one step).
    pub fn scalar_mul(&self, n: i64, x: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_member(x)?;
        Ok(match x {
            GroupElement::Finite(res) => GroupElement::Finite(
                res.iter()
                    .zip(&self.invariant_factors)
                    .map(|(&r, &f)| {
                        let m = n.rem_euclid(f as i64) as u64;
                        (r as u128 * m as u128 % f as u128) as u64
                    })
                    .collect(),
            ),
            GroupElement::Integer(v) => GroupElement::Integer(v * n),
            GroupElement::Dyadic { num, exp } => canonical_dyadic(num * n, *exp),
            GroupElement::Rational(v) => GroupElement::Rational(v * BigRational::from_integer(n.into())),
        })
    }

    /// Least n ≥ 1 with n·x = 0, or `Infinite` on the torsion-free carriers.
    pub fn element_order(&self, x: &GroupElement) -> Result<ElementOrder, GroupError> {
        self.check_member(x)?;
        match x {
            GroupElement::Finite(res) => {
                let n = res
                    .iter()
                    .zip(&self.invariant_factors)
                    .map(|(&r, &f)| f / r.gcd(&f))
                    .fold(1u64, |acc, o| acc.lcm(&o));
                Ok(ElementOrder::Finite(n))
            }
            _ => {
                if *x == self.zero() {
                    Ok(ElementOrder::Finite(1))
                } else {
                    Ok(ElementOrder::Infinite)
                }
            }
        }
    }

    /// All elements of a finite carrier, ascending in the canonical order.
    pub fn elements(&self) -> Result<Vec<GroupElement>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::NotEnumerable);
        }
        let mut out = Vec::with_capacity(self.order().unwrap() as usize);
        let mut current = vec![0u64; self.invariant_factors.len()];
        loop {
            out.push(GroupElement::Finite(current.clone()));
            // odometer increment, most significant coordinate first
            let mut pos = current.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                current[pos] += 1;
                if current[pos] < self.invariant_factors[pos] {
                    break;
                }
                current[pos] = 0;
            }
        }
    }

    /// Builds the canonical element from per-factor integers, reducing into range.
    pub fn element_from_residues(&self, values: &[i64]) -> Result<GroupElement, GroupError> {
        if !self.is_finite() || values.len() != self.invariant_factors.len() {
            return Err(GroupError::CarrierMismatch);
        }
        Ok(GroupElement::Finite(
            values
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&v, &f)| v.rem_euclid(f as i64) as u64)
                .collect(),
        ))
    }

    pub fn element_from_i64(&self, v: i64) -> Result<GroupElement, GroupError> {
        match self.kind {
            CarrierKind::Finite => {
                if self.invariant_factors.len() == 1 {
                    self.element_from_residues(&[v])
                } else {
                    Err(GroupError::CarrierMismatch)
                }
            }
            CarrierKind::Integer => Ok(GroupElement::Integer(v.into())),
            CarrierKind::Dyadic => Ok(canonical_dyadic(v.into(), 0)),
            CarrierKind::Rational => Ok(GroupElement::Rational(BigRational::from_integer(v.into()))),
        }
    }

    /// Parses the text encoding used in certificates.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement, GroupError> {
        let text = text.trim();
        let fail = || GroupError::ParseElement { text: text.into() };
        match self.kind {
            CarrierKind::Finite => {
                let inner = if text.starts_with('(') && text.ends_with(')') {
                    &text[1..text.len() - 1]
                } else {
                    text
                };
                let values = inner
                    .split(',')
                    .map(|p| p.trim().parse::<i64>().map_err(|_| fail()))
                    .collect::<Result<Vec<_>, _>>()?;
                self.element_from_residues(&values)
            }
            CarrierKind::Integer => Ok(GroupElement::Integer(
                BigInt::from_str(text).map_err(|_| fail())?,
            )),
            CarrierKind::Dyadic => {
                if let Some((num, den)) = text.split_once('/') {
                    let num = BigInt::from_str(num.trim()).map_err(|_| fail())?;
                    let den = den.trim();
                    let exp = if let Some(e) = den.strip_prefix("2^") {
                        e.parse::<u32>().map_err(|_| fail())?
                    } else {
                        let d = BigInt::from_str(den).map_err(|_| fail())?;
                        power_of_two_exponent(&d).ok_or_else(fail)?
                    };
                    Ok(canonical_dyadic(num, exp))
                } else {
                    Ok(canonical_dyadic(
                        BigInt::from_str(text).map_err(|_| fail())?,
                        0,
                    ))
                }
            }
            CarrierKind::Rational => {
                if let Some((num, den)) = text.split_once('/') {
                    let num = BigInt::from_str(num.trim()).map_err(|_| fail())?;
                    let den = BigInt::from_str(den.trim()).map_err(|_| fail())?;
                    if den.is_zero() {
                        return Err(fail());
                    }
                    Ok(GroupElement::Rational(BigRational::new(num, den)))
                } else {
                    Ok(GroupElement::Rational(BigRational::from_integer(
                        BigInt::from_str(text).map_err(|_| fail())?,
                    )))
                }
            }
        }
    }
}

fn canonical_dyadic(mut num: BigInt, mut exp: u32) -> GroupElement {
    if num.is_zero() {
        return GroupElement::Dyadic {
            num,
            exp: 0,
        };
    }
    while exp > 0 && num.is_even() {
        num /= 2;
        exp -= 1;
    }
    GroupElement::Dyadic { num, exp }
}

fn power_of_two_exponent(d: &BigInt) -> Option<u32> {
    if d.is_positive() {
        let bits = d.bits();
        if d == &(BigInt::one() << (bits - 1)) {
            return Some((bits - 1) as u32);
        }
    }
    None
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        match self {
            GroupElement::Finite(res) => res.iter().all(|&r| r == 0),
            GroupElement::Integer(v) => v.is_zero(),
            GroupElement::Dyadic { num, .. } => num.is_zero(),
            GroupElement::Rational(v) => v.is_zero(),
        }
    }

    /// Single residue of a one-factor finite element.
    pub fn residue(&self) -> Option<u64> {
        match self {
            GroupElement::Finite(res) if res.len() == 1 => Some(res[0]),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            GroupElement::Finite(_) => 0,
            GroupElement::Integer(_) => 1,
            GroupElement::Dyadic { .. } => 2,
            GroupElement::Rational(_) => 3,
        }
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupElement::Finite(a), GroupElement::Finite(b)) => a.cmp(b),
            (GroupElement::Integer(a), GroupElement::Integer(b)) => a.cmp(b),
            (
                GroupElement::Dyadic { num: n1, exp: e1 },
                GroupElement::Dyadic { num: n2, exp: e2 },
            ) => {
                let e = (*e1).max(*e2);
                (n1 << (e - e1)).cmp(&(n2 << (e - e2)))
            }
            (GroupElement::Rational(a), GroupElement::Rational(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Finite(res) => {
                if res.len() == 1 {
                    write!(f, "{}", res[0])
                } else {
                    write!(
                        f,
                        "({})",
                        res.iter()
                            .map(|r| r.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                }
            }
            GroupElement::Integer(v) => write!(f, "{v}"),
            GroupElement::Dyadic { num, exp } => {
                if *exp == 0 {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/2^{exp}")
                }
            }
            GroupElement::Rational(v) => {
                if v.denom().is_one() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
        }
    }
}

/// Trial-division primality at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre symbol via Euler's criterion: a^((p−1)/2) mod p.
pub fn legendre(a: i64, p: u64) -> Result<i32, GroupError> {
    if p == 2 || !is_prime(p) {
        return Err(GroupError::InvalidArgument(format!(
            "{p} is not an odd prime"
        )));
    }
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return Ok(0);
    }
    let r = mod_pow(a, (p - 1) / 2, p);
    if r == 1 {
        Ok(1)
    } else if r == p - 1 {
        Ok(-1)
    } else {
        // impossible for prime p
        Err(GroupError::InvalidArgument(format!(
            "{p} is not an odd prime"
        )))
    }
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> GroupCarrier {
        GroupCarrier::finite(vec![n]).unwrap()
    }

    #[test]
    fn carrier_construction() {
        assert!(GroupCarrier::finite(vec![7]).is_ok());
        assert!(GroupCarrier::finite(vec![2, 2]).is_ok());
        assert!(matches!(
            GroupCarrier::finite(vec![1]),
            Err(GroupError::InvalidCarrier(_))
        ));
        assert!(GroupCarrier::finite(vec![]).is_err());
    }

    #[test]
    fn finite_arith() {
        let c = z(7);
        let a = c.element_from_i64(3).unwrap();
        let b = c.element_from_i64(5).unwrap();
        assert_eq!(c.add(&a, &b).unwrap(), c.element_from_i64(1).unwrap());
        let klein = GroupCarrier::finite(vec![2, 2]).unwrap();
        let x = klein.element_from_residues(&[1, 0]).unwrap();
        assert_eq!(klein.neg(&x).unwrap(), x);
    }

    #[test]
    fn dyadic_arith() {
        let c = GroupCarrier::dyadic();
        let half = c.parse_element("1/2^1").unwrap();
        let one = c.add(&half, &half).unwrap();
        assert_eq!(one, c.element_from_i64(1).unwrap());
        assert_eq!(one.to_string(), "1");
        assert_eq!(half.to_string(), "1/2^1");
        assert_eq!(c.parse_element("1/2").unwrap(), half);
        assert_eq!(c.parse_element("6/2^2").unwrap().to_string(), "3/2^1");
    }

    #[test]
    fn mixed_carrier_rejected() {
        let c = z(7);
        let a = c.element_from_i64(3).unwrap();
        let b = GroupElement::Integer(3.into());
        assert_eq!(c.add(&a, &b), Err(GroupError::CarrierMismatch));
    }

    #[test]
    fn orders() {
        let c = z(7);
        assert_eq!(
            c.element_order(&c.element_from_i64(3).unwrap()).unwrap(),
            ElementOrder::Finite(7)
        );
        assert_eq!(
            c.element_order(&c.zero()).unwrap(),
            ElementOrder::Finite(1)
        );
        let int = GroupCarrier::integer();
        assert_eq!(
            int.element_order(&int.element_from_i64(2).unwrap()).unwrap(),
            ElementOrder::Infinite
        );
        assert_eq!(
            int.element_order(&int.zero()).unwrap(),
            ElementOrder::Finite(1)
        );
    }

    #[test]
    fn order_divides_exponent() {
        for factors in [vec![4], vec![6], vec![2, 2], vec![2, 6], vec![12]] {
            let c = GroupCarrier::finite(factors).unwrap();
            let exponent = c.exponent().unwrap();
            for x in c.elements().unwrap() {
                match c.element_order(&x).unwrap() {
                    ElementOrder::Finite(n) => assert_eq!(exponent % n, 0),
                    ElementOrder::Infinite => panic!("finite carrier"),
                }
            }
        }
    }

    #[test]
    fn enumeration_order() {
        let c = GroupCarrier::finite(vec![4]).unwrap();
        let elems: Vec<_> = c.elements().unwrap().iter().map(|e| e.to_string()).collect();
        assert_eq!(elems, ["0", "1", "2", "3"]);
        let klein = GroupCarrier::finite(vec![2, 2]).unwrap();
        let elems: Vec<_> = klein
            .elements()
            .unwrap()
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert_eq!(elems, ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
        assert_eq!(
            GroupCarrier::integer().elements(),
            Err(GroupError::NotEnumerable)
        );
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        // squares mod 7 are {1,2,4}
        let squares: std::collections::BTreeSet<u64> = (1..7u64).map(|n| n * n % 7).collect();
        assert_eq!(squares, [1, 2, 4].into_iter().collect());
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        assert_eq!(legendre(0, 11).unwrap(), 0);
        assert!(legendre(3, 8).is_err());
        assert!(legendre(3, 2).is_err());
    }

    #[test]
    fn legendre_periodic_and_multiplicative() {
        for p in [7u64, 11, 13, 101] {
            for a in -30i64..30 {
                assert_eq!(
                    legendre(a, p).unwrap(),
                    legendre(a.rem_euclid(p as i64), p).unwrap()
                );
                for b in 1i64..20 {
                    if a.rem_euclid(p as i64) != 0 {
                        assert_eq!(
                            legendre(a * b, p).unwrap(),
                            legendre(a, p).unwrap() * legendre(b, p).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn element_text_round_trip() {
        let rat = GroupCarrier::rational();
        let x = rat.parse_element("-6/4").unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(rat.parse_element("-3/2").unwrap(), x);
        let int = GroupCarrier::integer();
        assert_eq!(int.parse_element("-17").unwrap().to_string(), "-17");
        let c = GroupCarrier::finite(vec![2, 3]).unwrap();
        assert_eq!(c.parse_element("(1,2)").unwrap().to_string(), "(1,2)");
        assert_eq!(c.parse_element("(1,-1)").unwrap().to_string(), "(1,2)");
    }
}
