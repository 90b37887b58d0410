//! Machine-checkable witness certificates.
//!
//! A certificate is a self-describing JSON record: carrier, the sets A and
//! B, the maps as explicit pair lists or matrices, a claims block, and the
//! generator parameters. Every claims flag is re-derivable from the payload
//! alone; `check_certificate` recomputes all of them and reports any
//! disagreement.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{
    verify_pairing, CycleWitness, QrWitness, WindowWitness,
};
use crate::group::{GroupCarrier, GroupElement};
use crate::linear::{
    is_matched_basis, ordered_bases, quad_map_equal, strong_matching_exists, FieldTower, KMatrix,
    LinearMap, LinearWitness, LmpCounterexample, QPoly, Subspace,
};
use crate::matching::{check_matching, FailureWitness, Matching};
use crate::search::{enumerate_matchings, find_matching, Bounded, Budget};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

/// Result of re-deriving the claims of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub kind: String,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Generator parameters, echoed into the certificate for reproducibility.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct GeneratorParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupClaims {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_matching_f: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_matching_g: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_ne_g: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profiles_equal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing_identity_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub no_matching: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupCertificate {
    pub schema_version: u32,
    pub kind: String,
    pub carrier: String,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<(String, String)>>,
    pub claims: GroupClaims,
    pub generator: GeneratorParams,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct LinearClaims {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_f: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strong_g: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distinct: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_multiple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_not_in_b: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_unmatched: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LinearCertificate {
    pub schema_version: u32,
    pub kind: String,
    pub carrier: String,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_a: Option<Vec<Vec<String>>>,
    pub claims: LinearClaims,
    pub generator: GeneratorParams,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Group(GroupCertificate),
    Linear(LinearCertificate),
}

const GROUP_KINDS: &[&str] = &["qr", "cycle", "window", "pairing", "failure", "unmatchable"];
const LINEAR_KINDS: &[&str] = &["linear", "transcendental", "lmp"];

impl Certificate {
    pub fn kind(&self) -> &str {
        match self {
            Certificate::Group(c) => &c.kind,
            Certificate::Linear(c) => &c.kind,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = match self {
            Certificate::Group(c) => serde_json::to_string_pretty(c).expect("serializable"),
            Certificate::Linear(c) => serde_json::to_string_pretty(c).expect("serializable"),
        };
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        #[derive(Deserialize)]
        struct Probe {
            schema_version: u32,
            kind: String,
        }
        let probe: Probe = serde_json::from_str(text)
            .map_err(|e| CertError::Malformed(format!("not a certificate: {e}")))?;
        if probe.schema_version != SCHEMA_VERSION {
            return Err(CertError::Malformed(format!(
                "unsupported schema version {}",
                probe.schema_version
            )));
        }
        if GROUP_KINDS.contains(&probe.kind.as_str()) {
            let cert: GroupCertificate = serde_json::from_str(text)
                .map_err(|e| CertError::Malformed(e.to_string()))?;
            Ok(Certificate::Group(cert))
        } else if LINEAR_KINDS.contains(&probe.kind.as_str()) {
            let cert: LinearCertificate = serde_json::from_str(text)
                .map_err(|e| CertError::Malformed(e.to_string()))?;
            Ok(Certificate::Linear(cert))
        } else {
            Err(CertError::Malformed(format!(
                "unknown certificate kind {:?}",
                probe.kind
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// builders
// ---------------------------------------------------------------------------

fn elem_strings(elems: &[GroupElement]) -> Vec<String> {
    elems.iter().map(|e| e.to_string()).collect()
}

fn pair_strings(pairs: &[(GroupElement, GroupElement)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn matching_pair_strings(m: &Matching) -> Vec<(String, String)> {
    pair_strings(m.pairs())
}

impl QrWitness {
    pub fn certificate(&self) -> Certificate {
        let a = elem_strings(&self.f.domain());
        Certificate::Group(GroupCertificate {
            schema_version: SCHEMA_VERSION,
            kind: "qr".into(),
            carrier: self.f.carrier().spec_string(),
            b: a.clone(),
            a,
            f: Some(matching_pair_strings(&self.f)),
            g: Some(matching_pair_strings(&self.g)),
            phi: None,
            claims: GroupClaims {
                is_matching_f: Some(true),
                is_matching_g: Some(true),
                f_ne_g: Some(true),
                profiles_equal: Some(true),
                ..Default::default()
            },
            generator: GeneratorParams {
                p: Some(self.p),
                ..Default::default()
            },
        })
    }
}

impl CycleWitness {
    pub fn certificate(&self) -> Certificate {
        let a = elem_strings(&self.f.domain());
        Certificate::Group(GroupCertificate {
            schema_version: SCHEMA_VERSION,
            kind: "cycle".into(),
            carrier: self.f.carrier().spec_string(),
            b: a.clone(),
            a,
            f: Some(matching_pair_strings(&self.f)),
            g: Some(matching_pair_strings(&self.g)),
            phi: None,
            claims: GroupClaims {
                is_matching_f: Some(true),
                is_matching_g: Some(true),
                f_ne_g: Some(true),
                profiles_equal: Some(true),
                ..Default::default()
            },
            generator: GeneratorParams {
                p: Some(self.p),
                k: Some(self.k),
                ..Default::default()
            },
        })
    }
}

impl WindowWitness {
    pub fn certificate(&self) -> Certificate {
        Certificate::Group(GroupCertificate {
            schema_version: SCHEMA_VERSION,
            kind: "window".into(),
            carrier: self.carrier.spec_string(),
            a: elem_strings(&self.domain),
            b: elem_strings(&self.codomain),
            f: Some(pair_strings(&self.f)),
            g: Some(pair_strings(&self.g)),
            phi: Some(pair_strings(&self.phi)),
            claims: GroupClaims {
                is_matching_f: Some(true),
                is_matching_g: Some(true),
                f_ne_g: Some(true),
                pairing_identity_holds: Some(true),
                ..Default::default()
            },
            generator: GeneratorParams {
                window: Some(self.window),
                family: Some(self.family.name().into()),
                ..Default::default()
            },
        })
    }
}

impl FailureWitness {
    pub fn certificate(&self, order: usize, budget: Option<u64>) -> Certificate {
        let a = elem_strings(&self.f.domain());
        let b: Vec<String> = self
            .f
            .codomain_set()
            .iter()
            .map(|e| e.to_string())
            .collect();
        Certificate::Group(GroupCertificate {
            schema_version: SCHEMA_VERSION,
            kind: "failure".into(),
            carrier: self.f.carrier().spec_string(),
            a,
            b,
            f: Some(matching_pair_strings(&self.f)),
            g: Some(matching_pair_strings(&self.g)),
            phi: None,
            claims: GroupClaims {
                is_matching_f: Some(true),
                is_matching_g: Some(true),
                f_ne_g: Some(true),
                profiles_equal: Some(true),
                ..Default::default()
            },
            generator: GeneratorParams {
                group: Some(self.f.carrier().spec_string()),
                order: Some(order),
                budget,
                ..Default::default()
            },
        })
    }
}

/// Certificate for a pairing bijection between two profile-equal matchings.
pub fn pairing_certificate(
    f: &Matching,
    g: &Matching,
    phi: &[(GroupElement, GroupElement)],
    seed: Option<u64>,
) -> Certificate {
    let a = elem_strings(&f.domain());
    let b: Vec<String> = f.codomain_set().iter().map(|e| e.to_string()).collect();
    Certificate::Group(GroupCertificate {
        schema_version: SCHEMA_VERSION,
        kind: "pairing".into(),
        carrier: f.carrier().spec_string(),
        a,
        b,
        f: Some(matching_pair_strings(f)),
        g: Some(matching_pair_strings(g)),
        phi: Some(pair_strings(phi)),
        claims: GroupClaims {
            is_matching_f: Some(true),
            is_matching_g: Some(true),
            f_ne_g: Some(f != g),
            profiles_equal: Some(true),
            pairing_identity_holds: Some(true),
            ..Default::default()
        },
        generator: GeneratorParams {
            p: f.carrier().invariant_factors().first().copied(),
            seed,
            ..Default::default()
        },
    })
}

/// Certificate that no matching exists from A to B (a matching-property
/// counterexample).
pub fn unmatchable_certificate(
    carrier: &GroupCarrier,
    a: &[GroupElement],
    b: &[GroupElement],
    order: usize,
) -> Certificate {
    Certificate::Group(GroupCertificate {
        schema_version: SCHEMA_VERSION,
        kind: "unmatchable".into(),
        carrier: carrier.spec_string(),
        a: elem_strings(a),
        b: elem_strings(b),
        f: None,
        g: None,
        phi: None,
        claims: GroupClaims {
            no_matching: Some(true),
            ..Default::default()
        },
        generator: GeneratorParams {
            group: Some(carrier.spec_string()),
            order: Some(order),
            ..Default::default()
        },
    })
}

impl LinearWitness {
    pub fn certificate(&self) -> Certificate {
        use crate::linear::witness::{matrix_strings, subspace_strings};
        let kind = match self.tower {
            FieldTower::Finite(_) => "linear",
            FieldTower::RatFun(_) => "transcendental",
        };
        let (p, n) = match &self.tower {
            FieldTower::Finite(t) => (Some(t.p), Some(t.n)),
            FieldTower::RatFun(_) => (None, None),
        };
        let rows = subspace_strings(&self.space);
        Certificate::Linear(LinearCertificate {
            schema_version: SCHEMA_VERSION,
            kind: kind.into(),
            carrier: self.tower.spec_string(),
            a: rows.clone(),
            b: rows,
            f: Some(matrix_strings(&self.f.matrix)),
            g: Some(matrix_strings(&self.h.matrix)),
            phi: Some(matrix_strings(&self.phi.matrix)),
            c: Some(self.c.clone()),
            basis_a: None,
            claims: LinearClaims {
                strong_f: Some(self.claims.strong_f),
                strong_g: Some(self.claims.strong_h),
                equivalent: Some(self.claims.equivalent),
                distinct: Some(self.claims.distinct),
                scalar_multiple: Some(self.claims.scalar_multiple),
                ..Default::default()
            },
            generator: GeneratorParams {
                p,
                n,
                m: Some(self.m),
                ..Default::default()
            },
        })
    }
}

impl LmpCounterexample {
    pub fn certificate(&self, tower: &FieldTower, budget: Option<u64>) -> Certificate {
        use crate::linear::witness::subspace_strings;
        Certificate::Linear(LinearCertificate {
            schema_version: SCHEMA_VERSION,
            kind: "lmp".into(),
            carrier: tower.spec_string(),
            a: subspace_strings(&self.a),
            b: subspace_strings(&self.b),
            f: None,
            g: None,
            phi: None,
            c: None,
            basis_a: Some(
                self.failing_basis
                    .iter()
                    .map(|row| row.iter().map(|c| c.to_string()).collect())
                    .collect(),
            ),
            claims: LinearClaims {
                one_not_in_b: Some(true),
                basis_unmatched: Some(true),
                ..Default::default()
            },
            generator: GeneratorParams {
                tower: Some(tower.spec_string()),
                budget,
                ..Default::default()
            },
        })
    }
}

// ---------------------------------------------------------------------------
// checking
// ---------------------------------------------------------------------------

/// Parses and re-validates a certificate: every claims flag is recomputed
/// from the payload and compared with the stored value.
pub fn check_certificate(text: &str) -> Result<CheckReport, CertError> {
    match Certificate::from_json(text)? {
        Certificate::Group(cert) => check_group_certificate(&cert),
        Certificate::Linear(cert) => check_linear_certificate(&cert),
    }
}

struct Flags {
    failures: Vec<String>,
}

impl Flags {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    /// Requires the stored flag to exist, match the recomputed value, and
    /// hold true.
    fn require(&mut self, name: &str, stored: Option<bool>, recomputed: bool) {
        self.must_match(name, stored, recomputed);
        if !recomputed {
            self.failures.push(format!("claim {name} does not hold"));
        }
    }

    /// Requires the stored flag to exist and match the recomputed value;
    /// false is acceptable when recorded as false.
    fn must_match(&mut self, name: &str, stored: Option<bool>, recomputed: bool) {
        match stored {
            None => self.failures.push(format!("claim {name} is missing")),
            Some(v) if v != recomputed => self.failures.push(format!(
                "claim {name} is recorded as {v} but re-derives as {recomputed}"
            )),
            Some(_) => {}
        }
    }
}

fn parse_elems(
    carrier: &GroupCarrier,
    texts: &[String],
) -> Result<Vec<GroupElement>, CertError> {
    texts
        .iter()
        .map(|t| {
            carrier
                .parse_element(t)
                .map_err(|e| CertError::Malformed(e.to_string()))
        })
        .collect()
}

fn parse_pairs(
    carrier: &GroupCarrier,
    pairs: &[(String, String)],
) -> Result<Vec<(GroupElement, GroupElement)>, CertError> {
    pairs
        .iter()
        .map(|(x, y)| {
            Ok((
                carrier
                    .parse_element(x)
                    .map_err(|e| CertError::Malformed(e.to_string()))?,
                carrier
                    .parse_element(y)
                    .map_err(|e| CertError::Malformed(e.to_string()))?,
            ))
        })
        .collect()
}

fn required_pairs<'a>(
    cert: &'a GroupCertificate,
    field: &str,
) -> Result<&'a Vec<(String, String)>, CertError> {
    let value = match field {
        "f" => &cert.f,
        "g" => &cert.g,
        "phi" => &cert.phi,
        _ => unreachable!(),
    };
    value
        .as_ref()
        .ok_or_else(|| CertError::Malformed(format!("kind {:?} needs field {field}", cert.kind)))
}

fn check_group_certificate(cert: &GroupCertificate) -> Result<CheckReport, CertError> {
    let carrier =
        GroupCarrier::parse_spec(&cert.carrier).map_err(|e| CertError::Malformed(e.to_string()))?;
    let a = parse_elems(&carrier, &cert.a)?;
    let b = parse_elems(&carrier, &cert.b)?;
    let mut flags = Flags::new();

    match cert.kind.as_str() {
        "qr" | "cycle" | "failure" | "pairing" => {
            let f_pairs = parse_pairs(&carrier, required_pairs(cert, "f")?)?;
            let g_pairs = parse_pairs(&carrier, required_pairs(cert, "g")?)?;
            let f_ok = matches!(check_matching(&carrier, &a, &b, &f_pairs), Ok(None));
            let g_ok = matches!(check_matching(&carrier, &a, &b, &g_pairs), Ok(None));
            flags.require("is_matching_f", cert.claims.is_matching_f, f_ok);
            flags.require("is_matching_g", cert.claims.is_matching_g, g_ok);
            let (f, g) = if f_ok && g_ok {
                (
                    Matching::new(&carrier, &a, &b, f_pairs).ok(),
                    Matching::new(&carrier, &a, &b, g_pairs).ok(),
                )
            } else {
                (None, None)
            };
            let distinct = match (&f, &g) {
                (Some(f), Some(g)) => f != g,
                _ => false,
            };
            let profiles_equal = match (&f, &g) {
                (Some(f), Some(g)) => f.profile().counts_equal(&g.profile()),
                _ => false,
            };
            if cert.kind == "pairing" {
                // equal maps are legitimate for pairings; the flag must
                // still match what the payload shows
                flags.must_match("f_ne_g", cert.claims.f_ne_g, distinct);
            } else {
                flags.require("f_ne_g", cert.claims.f_ne_g, distinct);
            }
            flags.require("profiles_equal", cert.claims.profiles_equal, profiles_equal);
            if cert.kind == "pairing" {
                let phi = parse_pairs(&carrier, required_pairs(cert, "phi")?)?;
                let identity = match (&f, &g) {
                    (Some(f), Some(g)) => verify_pairing(f, g, &phi).unwrap_or(false),
                    _ => false,
                };
                flags.require(
                    "pairing_identity_holds",
                    cert.claims.pairing_identity_holds,
                    identity,
                );
            }
        }
        "window" => {
            let f_pairs = parse_pairs(&carrier, required_pairs(cert, "f")?)?;
            let g_pairs = parse_pairs(&carrier, required_pairs(cert, "g")?)?;
            let phi_pairs = parse_pairs(&carrier, required_pairs(cert, "phi")?)?;
            let f_ok = window_matching_ok(&carrier, &a, &b, &f_pairs);
            let g_ok = window_matching_ok(&carrier, &a, &b, &g_pairs);
            flags.require("is_matching_f", cert.claims.is_matching_f, f_ok);
            flags.require("is_matching_g", cert.claims.is_matching_g, g_ok);
            flags.require("f_ne_g", cert.claims.f_ne_g, f_pairs != g_pairs);
            let identity = window_identity_ok(&carrier, &a, &f_pairs, &g_pairs, &phi_pairs);
            flags.require(
                "pairing_identity_holds",
                cert.claims.pairing_identity_holds,
                identity,
            );
        }
        "unmatchable" => {
            let none_found = matches!(find_matching(&carrier, &a, &b), Ok(None));
            let enumeration_empty = matches!(
                enumerate_matchings(&carrier, &a, &b, Budget(10_000_000)),
                Ok(Bounded::Done(v)) if v.is_empty()
            );
            flags.require(
                "no_matching",
                cert.claims.no_matching,
                none_found && enumeration_empty,
            );
        }
        other => {
            return Err(CertError::Malformed(format!(
                "unknown group certificate kind {other:?}"
            )))
        }
    }
    Ok(CheckReport {
        kind: cert.kind.clone(),
        failures: flags.failures,
    })
}

/// Windowed matching evidence: the pair list is a total injective map from
/// the listed A into the listed B whose sums avoid the listed A. The listed
/// window is a subset of the full domain, so this is the payload-checkable
/// part of the matching condition.
fn window_matching_ok(
    carrier: &GroupCarrier,
    a: &[GroupElement],
    b: &[GroupElement],
    pairs: &[(GroupElement, GroupElement)],
) -> bool {
    let a_set: BTreeSet<&GroupElement> = a.iter().collect();
    let b_set: BTreeSet<&GroupElement> = b.iter().collect();
    let keys: BTreeSet<&GroupElement> = pairs.iter().map(|(x, _)| x).collect();
    let images: BTreeSet<&GroupElement> = pairs.iter().map(|(_, y)| y).collect();
    keys.len() == pairs.len()
        && images.len() == pairs.len()
        && keys.len() == a.len()
        && keys.iter().all(|x| a_set.contains(*x))
        && images.iter().all(|y| b_set.contains(*y))
        && pairs.iter().all(|(x, y)| {
            carrier
                .add(x, y)
                .map(|sum| !a_set.contains(&sum))
                .unwrap_or(false)
        })
}

fn window_identity_ok(
    carrier: &GroupCarrier,
    a: &[GroupElement],
    f_pairs: &[(GroupElement, GroupElement)],
    g_pairs: &[(GroupElement, GroupElement)],
    phi_pairs: &[(GroupElement, GroupElement)],
) -> bool {
    if phi_pairs.is_empty() {
        return false;
    }
    let a_set: BTreeSet<&GroupElement> = a.iter().collect();
    let f_map: BTreeMap<&GroupElement, &GroupElement> =
        f_pairs.iter().map(|(x, y)| (x, y)).collect();
    let g_map: BTreeMap<&GroupElement, &GroupElement> =
        g_pairs.iter().map(|(x, y)| (x, y)).collect();
    let keys: BTreeSet<&GroupElement> = phi_pairs.iter().map(|(x, _)| x).collect();
    let images: BTreeSet<&GroupElement> = phi_pairs.iter().map(|(_, y)| y).collect();
    if keys.len() != phi_pairs.len() || images.len() != phi_pairs.len() {
        return false;
    }
    phi_pairs.iter().all(|(x, px)| {
        if !a_set.contains(x) || !a_set.contains(px) {
            return false;
        }
        let (Some(fx), Some(gpx)) = (f_map.get(x), g_map.get(px)) else {
            return false;
        };
        match (carrier.add(x, fx), carrier.add(px, gpx)) {
            (Ok(lhs), Ok(rhs)) => lhs == rhs,
            _ => false,
        }
    })
}

fn parse_finite_rows(rows: &[Vec<String>], p: u64, n: usize) -> Result<Vec<Vec<u64>>, CertError> {
    rows.iter()
        .map(|row| {
            if row.len() != n {
                return Err(CertError::Malformed(format!(
                    "row length {} does not match extension degree {n}",
                    row.len()
                )));
            }
            row.iter()
                .map(|c| {
                    let v: u64 = c
                        .parse()
                        .map_err(|_| CertError::Malformed(format!("bad coordinate {c:?}")))?;
                    if v >= p {
                        return Err(CertError::Malformed(format!(
                            "coordinate {v} out of range mod {p}"
                        )));
                    }
                    Ok(v)
                })
                .collect()
        })
        .collect()
}

fn parse_k_matrix(
    tower: &FieldTower,
    rows: &[Vec<String>],
    m: usize,
) -> Result<KMatrix, CertError> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(CertError::Malformed(format!(
            "matrix is not {m}×{m}"
        )));
    }
    match tower {
        FieldTower::Finite(t) => Ok(KMatrix::Fin(parse_finite_rows(rows, t.p, m).map_err(
            |_| CertError::Malformed("bad matrix entry".into()),
        )?)),
        FieldTower::RatFun(_) => {
            let parsed = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|c| {
                            crate::linear::qpoly::parse_q(c).ok_or_else(|| {
                                CertError::Malformed(format!("bad rational {c:?}"))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(KMatrix::Rat(parsed))
        }
    }
}

fn parse_subspace(tower: &FieldTower, rows: &[Vec<String>]) -> Result<Subspace, CertError> {
    match tower {
        FieldTower::Finite(t) => {
            let vectors = parse_finite_rows(rows, t.p, t.n)?;
            Ok(Subspace::span_finite(t, &vectors))
        }
        FieldTower::RatFun(_) => {
            let polys = rows
                .iter()
                .map(|row| {
                    QPoly::parse_coeffs(row)
                        .ok_or_else(|| CertError::Malformed("bad polynomial row".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Subspace::span_polys(crate::linear::subspace::DEFAULT_DEGREE_CAP, &polys)
                .map_err(|e| CertError::Malformed(e.to_string()))
        }
    }
}

fn check_linear_certificate(cert: &LinearCertificate) -> Result<CheckReport, CertError> {
    let tower =
        FieldTower::parse_spec(&cert.carrier).map_err(|e| CertError::Malformed(e.to_string()))?;
    let a_space = parse_subspace(&tower, &cert.a)?;
    let b_space = parse_subspace(&tower, &cert.b)?;
    let mut flags = Flags::new();

    match cert.kind.as_str() {
        "linear" | "transcendental" => {
            let m = a_space.dim();
            let f_mat = parse_k_matrix(
                &tower,
                cert.f
                    .as_ref()
                    .ok_or_else(|| CertError::Malformed("missing f".into()))?,
                m,
            )?;
            let g_mat = parse_k_matrix(
                &tower,
                cert.g
                    .as_ref()
                    .ok_or_else(|| CertError::Malformed("missing g".into()))?,
                m,
            )?;
            let phi_mat = parse_k_matrix(
                &tower,
                cert.phi
                    .as_ref()
                    .ok_or_else(|| CertError::Malformed("missing phi".into()))?,
                m,
            )?;
            let f = LinearMap {
                domain: a_space.clone(),
                codomain: b_space.clone(),
                matrix: f_mat,
            };
            let g = LinearMap {
                domain: a_space.clone(),
                codomain: b_space.clone(),
                matrix: g_mat,
            };
            let phi = LinearMap {
                domain: a_space.clone(),
                codomain: a_space.clone(),
                matrix: phi_mat,
            };
            let product_clear = strong_matching_exists(&a_space, &b_space).unwrap_or(false);
            flags.require(
                "strong_f",
                cert.claims.strong_f,
                product_clear && f.is_invertible(),
            );
            flags.require(
                "strong_g",
                cert.claims.strong_g,
                product_clear && g.is_invertible(),
            );
            let equivalent = phi.is_invertible() && quad_map_equal(&f, &phi, &g).unwrap_or(false);
            flags.require("equivalent", cert.claims.equivalent, equivalent);
            flags.require("distinct", cert.claims.distinct, f != g);
            flags.require(
                "scalar_multiple",
                cert.claims.scalar_multiple,
                g.scalar_ratio(&f).is_some(),
            );
        }
        "lmp" => {
            let FieldTower::Finite(gft) = &tower else {
                return Err(CertError::Malformed(
                    "matched-subspace counterexamples need a finite tower".into(),
                ));
            };
            let basis_rows = cert
                .basis_a
                .as_ref()
                .ok_or_else(|| CertError::Malformed("missing basis_a".into()))?;
            let basis = parse_finite_rows(basis_rows, gft.p, gft.n)?;
            flags.require(
                "one_not_in_b",
                cert.claims.one_not_in_b,
                !b_space.contains_one(),
            );
            let spans_a = Subspace::span_finite(gft, &basis) == a_space;
            let unmatched = spans_a
                && a_space.dim() == b_space.dim()
                && ordered_bases(&b_space).iter().all(|basis_b| {
                    !is_matched_basis(gft, &basis, basis_b).unwrap_or(true)
                });
            flags.require("basis_unmatched", cert.claims.basis_unmatched, unmatched);
        }
        other => {
            return Err(CertError::Malformed(format!(
                "unknown linear certificate kind {other:?}"
            )))
        }
    }
    Ok(CheckReport {
        kind: cert.kind.clone(),
        failures: flags.failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        build_pairing, cycle_witness, qr_witness, window_witness, WindowFamily,
    };
    use crate::linear::{linear_witness, transcendental_witness, GfTower};

    #[test]
    fn qr_round_trip() {
        let cert = qr_witness(7).unwrap().certificate();
        let json = cert.to_json();
        let report = check_certificate(&json).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
        assert_eq!(Certificate::from_json(&json).unwrap(), cert);
    }

    #[test]
    fn tampered_qr_fails() {
        let cert = qr_witness(7).unwrap().certificate();
        let Certificate::Group(mut raw) = cert else { unreachable!() };
        // swap one image: breaks the bijection or the condition
        let f = raw.f.as_mut().unwrap();
        f[0].1 = f[1].1.clone();
        let json = Certificate::Group(raw).to_json();
        let report = check_certificate(&json).unwrap();
        assert!(!report.ok());
    }

    #[test]
    fn truncated_json_is_malformed() {
        let cert = qr_witness(7).unwrap().certificate();
        let json = cert.to_json();
        let truncated = &json[..json.len() / 2];
        assert!(matches!(
            check_certificate(truncated),
            Err(CertError::Malformed(_))
        ));
    }

    #[test]
    fn cycle_and_window_round_trip() {
        for cert in [
            cycle_witness(11, 5).unwrap().certificate(),
            cycle_witness(13, 4).unwrap().certificate(),
            window_witness(WindowFamily::Integer, 40).unwrap().certificate(),
            window_witness(WindowFamily::Rational, 40).unwrap().certificate(),
            window_witness(WindowFamily::Dyadic, 48).unwrap().certificate(),
        ] {
            let report = check_certificate(&cert.to_json()).unwrap();
            assert!(report.ok(), "kind {}: {:?}", report.kind, report.failures);
        }
    }

    #[test]
    fn pairing_round_trip() {
        let w = qr_witness(11).unwrap();
        let phi = build_pairing(&w.f, &w.g).unwrap().unwrap();
        let cert = pairing_certificate(&w.f, &w.g, &phi, Some(1));
        let report = check_certificate(&cert.to_json()).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn window_tamper_detected() {
        let cert = window_witness(WindowFamily::Integer, 40).unwrap().certificate();
        let Certificate::Group(mut raw) = cert else { unreachable!() };
        let phi = raw.phi.as_mut().unwrap();
        // φ entries move by 2; retargeting one breaks the sum identity
        let moved = raw.a[0].clone();
        phi[2].1 = moved;
        let json = Certificate::Group(raw).to_json();
        let report = check_certificate(&json).unwrap();
        assert!(!report.ok());
    }

    #[test]
    fn linear_round_trip() {
        let t = GfTower::new(5, 3, None).unwrap();
        let cert = linear_witness(&t, 1).unwrap().certificate();
        let report = check_certificate(&cert.to_json()).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);

        let cert = transcendental_witness(2).unwrap().certificate();
        let report = check_certificate(&cert.to_json()).unwrap();
        assert!(report.ok(), "failures: {:?}", report.failures);
    }

    #[test]
    fn linear_tamper_detected() {
        let t = GfTower::new(5, 3, None).unwrap();
        let cert = linear_witness(&t, 1).unwrap().certificate();
        let Certificate::Linear(mut raw) = cert else { unreachable!() };
        raw.g = raw.f.clone(); // h := f makes "distinct" false
        let report = check_certificate(&Certificate::Linear(raw).to_json()).unwrap();
        assert!(!report.ok());
    }
}
