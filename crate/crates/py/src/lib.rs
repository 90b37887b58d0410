//! Python bindings for the matchings toolkit.
//!
//! Group elements cross the boundary in their canonical text encoding
//! (residues like `"3"` or `"(1,0)"`, integers, dyadics `"k/2^e"`, reduced
//! fractions `"p/q"`); carriers and towers as spec strings (`"z:7"`,
//! `"int"`, `"gf:5^3"`, `"ratfun"`). Witnesses and reports come back as
//! certificate JSON that `check_certificate` re-validates.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use matchings_core::cert::{self, pairing_certificate};
use matchings_core::constructions::{self, WindowFamily};
use matchings_core::group::{ElementOrder, GroupCarrier, GroupElement};
use matchings_core::linear::{self, FieldTower};
use matchings_core::matching::{check_matching, Matching};
use matchings_core::report::{run_suite, Suite, SuiteOptions};
use matchings_core::search::{self, Bounded, Budget};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_carrier(spec: &str) -> PyResult<GroupCarrier> {
    GroupCarrier::parse_spec(spec).map_err(value_err)
}

fn parse_elems(carrier: &GroupCarrier, texts: Vec<String>) -> PyResult<Vec<GroupElement>> {
    texts
        .iter()
        .map(|t| carrier.parse_element(t).map_err(value_err))
        .collect()
}

fn parse_pairs(
    carrier: &GroupCarrier,
    pairs: Vec<(String, String)>,
) -> PyResult<Vec<(GroupElement, GroupElement)>> {
    pairs
        .iter()
        .map(|(a, b)| {
            Ok((
                carrier.parse_element(a).map_err(value_err)?,
                carrier.parse_element(b).map_err(value_err)?,
            ))
        })
        .collect()
}

fn pairs_out(pairs: &[(GroupElement, GroupElement)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn matching_from(
    carrier: &GroupCarrier,
    pairs: Vec<(String, String)>,
) -> PyResult<Matching> {
    let pairs = parse_pairs(carrier, pairs)?;
    Matching::from_pairs(carrier, pairs).map_err(value_err)
}

/// An Abelian group carrier: `z:n` / `z:n1xn2` for finite groups, `int`,
/// `dyadic`, or `rat` for the torsion-free lines.
#[pyclass]
struct Carrier {
    inner: GroupCarrier,
}

#[pymethods]
impl Carrier {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_carrier(spec)?,
        })
    }

    fn spec(&self) -> String {
        self.inner.spec_string()
    }

    fn zero(&self) -> String {
        self.inner.zero().to_string()
    }

    fn add(&self, a: &str, b: &str) -> PyResult<String> {
        let x = self.inner.parse_element(a).map_err(value_err)?;
        let y = self.inner.parse_element(b).map_err(value_err)?;
        Ok(self.inner.add(&x, &y).map_err(value_err)?.to_string())
    }

    fn neg(&self, a: &str) -> PyResult<String> {
        let x = self.inner.parse_element(a).map_err(value_err)?;
        Ok(self.inner.neg(&x).map_err(value_err)?.to_string())
    }

    fn eq(&self, a: &str, b: &str) -> PyResult<bool> {
        let x = self.inner.parse_element(a).map_err(value_err)?;
        let y = self.inner.parse_element(b).map_err(value_err)?;
        Ok(x == y)
    }

    /// Order of the element; None encodes infinite order.
    fn element_order(&self, a: &str) -> PyResult<Option<u64>> {
        let x = self.inner.parse_element(a).map_err(value_err)?;
        match self.inner.element_order(&x).map_err(value_err)? {
            ElementOrder::Finite(n) => Ok(Some(n)),
            ElementOrder::Infinite => Ok(None),
        }
    }

    /// All elements of a finite carrier in canonical order.
    fn elements(&self) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .elements()
            .map_err(value_err)?
            .iter()
            .map(|e| e.to_string())
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("Carrier({:?})", self.inner.spec_string())
    }
}

/// Legendre symbol of a modulo an odd prime p, by Euler's criterion.
#[pyfunction]
fn legendre(a: i64, p: u64) -> PyResult<i32> {
    matchings_core::group::legendre(a, p).map_err(value_err)
}

/// Checks the matching conditions; returns (ok, first_violation).
#[pyfunction]
fn is_matching(
    carrier: &str,
    a: Vec<String>,
    b: Vec<String>,
    pairs: Vec<(String, String)>,
) -> PyResult<(bool, Option<String>)> {
    let c = parse_carrier(carrier)?;
    let a = parse_elems(&c, a)?;
    let b = parse_elems(&c, b)?;
    let pairs = parse_pairs(&c, pairs)?;
    match check_matching(&c, &a, &b, &pairs) {
        Ok(None) => Ok((true, None)),
        Ok(Some(violation)) => Ok((false, Some(violation.to_string()))),
        Err(e) => Err(value_err(e)),
    }
}

/// Multiplicity profile of a matching: sum value -> fiber elements.
#[pyfunction]
fn profile(
    carrier: &str,
    pairs: Vec<(String, String)>,
) -> PyResult<std::collections::BTreeMap<String, Vec<String>>> {
    let c = parse_carrier(carrier)?;
    let m = matching_from(&c, pairs)?;
    Ok(m.profile()
        .fibers()
        .iter()
        .map(|(x, fiber)| {
            (
                x.to_string(),
                fiber.iter().map(|a| a.to_string()).collect(),
            )
        })
        .collect())
}

/// Inverse of an A -> A matching.
#[pyfunction]
fn invert(carrier: &str, pairs: Vec<(String, String)>) -> PyResult<Vec<(String, String)>> {
    let c = parse_carrier(carrier)?;
    let m = matching_from(&c, pairs)?;
    Ok(pairs_out(m.invert().map_err(value_err)?.pairs()))
}

/// Cycle decomposition of an A -> A matching.
#[pyfunction]
fn orbits(carrier: &str, pairs: Vec<(String, String)>) -> PyResult<Vec<Vec<String>>> {
    let c = parse_carrier(carrier)?;
    let m = matching_from(&c, pairs)?;
    Ok(m.orbits()
        .map_err(value_err)?
        .iter()
        .map(|cycle| cycle.iter().map(|e| e.to_string()).collect())
        .collect())
}

/// One matching from A to B, or None.
#[pyfunction]
fn find_matching(
    carrier: &str,
    a: Vec<String>,
    b: Vec<String>,
) -> PyResult<Option<Vec<(String, String)>>> {
    let c = parse_carrier(carrier)?;
    let a = parse_elems(&c, a)?;
    let b = parse_elems(&c, b)?;
    Ok(search::find_matching(&c, &a, &b)
        .map_err(value_err)?
        .map(|m| pairs_out(m.pairs())))
}

/// Every matching from A to B in lexicographic order.
#[pyfunction]
#[pyo3(signature = (carrier, a, b, budget = 10_000_000))]
fn enumerate_matchings(
    carrier: &str,
    a: Vec<String>,
    b: Vec<String>,
    budget: u64,
) -> PyResult<Vec<Vec<(String, String)>>> {
    let c = parse_carrier(carrier)?;
    let a = parse_elems(&c, a)?;
    let b = parse_elems(&c, b)?;
    match search::enumerate_matchings(&c, &a, &b, Budget(budget)).map_err(value_err)? {
        Bounded::Done(all) => Ok(all.iter().map(|m| pairs_out(m.pairs())).collect()),
        Bounded::OutOfBudget => Err(PyRuntimeError::new_err("enumeration budget exhausted")),
    }
}

/// Whether the matching is acyclic; None when the budget runs out.
#[pyfunction]
#[pyo3(signature = (carrier, pairs, budget = 10_000_000))]
fn is_acyclic(
    carrier: &str,
    pairs: Vec<(String, String)>,
    budget: u64,
) -> PyResult<Option<bool>> {
    let c = parse_carrier(carrier)?;
    let m = matching_from(&c, pairs)?;
    Ok(search::is_acyclic(&m, Budget(budget))
        .map_err(value_err)?
        .into_option())
}

/// An acyclic matching from A to B, by full enumeration; None when no
/// profile class is a singleton.
#[pyfunction]
#[pyo3(signature = (carrier, a, b, budget = 10_000_000))]
fn find_acyclic_matching(
    carrier: &str,
    a: Vec<String>,
    b: Vec<String>,
    budget: u64,
) -> PyResult<Option<Vec<(String, String)>>> {
    let c = parse_carrier(carrier)?;
    let a = parse_elems(&c, a)?;
    let b = parse_elems(&c, b)?;
    match search::find_acyclic_matching(&c, &a, &b, Budget(budget)).map_err(value_err)? {
        Bounded::Done(found) => Ok(found.map(|m| pairs_out(m.pairs()))),
        Bounded::OutOfBudget => Err(PyRuntimeError::new_err("search budget exhausted")),
    }
}

/// Searches order m for two distinct profile-equal matchings. Returns
/// (status, certificate_json) with status in {"found", "none", "unknown"}.
#[pyfunction]
#[pyo3(signature = (carrier, order, budget = 50_000_000))]
fn fails_at_order(carrier: &str, order: usize, budget: u64) -> PyResult<(String, Option<String>)> {
    let c = parse_carrier(carrier)?;
    let universe = c.elements().map_err(value_err)?;
    match search::fails_at_order(&c, &universe, order, Budget(budget)).map_err(value_err)? {
        Bounded::Done(Some(w)) => Ok((
            "found".into(),
            Some(w.certificate(order, Some(budget)).to_json()),
        )),
        Bounded::Done(None) => Ok(("none".into(), None)),
        Bounded::OutOfBudget => Ok(("unknown".into(), None)),
    }
}

/// First pair |A| = |B| <= k with 0 not in B admitting no matching.
#[pyfunction]
fn matching_property_upto(
    carrier: &str,
    k: usize,
) -> PyResult<Option<(Vec<String>, Vec<String>)>> {
    let c = parse_carrier(carrier)?;
    Ok(search::matching_property_upto(&c, k)
        .map_err(value_err)?
        .map(|(a, b)| {
            (
                a.iter().map(|e| e.to_string()).collect(),
                b.iter().map(|e| e.to_string()).collect(),
            )
        }))
}

/// Fiber-by-fiber pairing bijection for two profile-equal matchings.
#[pyfunction]
fn build_pairing(
    carrier: &str,
    f: Vec<(String, String)>,
    g: Vec<(String, String)>,
) -> PyResult<Option<Vec<(String, String)>>> {
    let c = parse_carrier(carrier)?;
    let f = matching_from(&c, f)?;
    let g = matching_from(&c, g)?;
    Ok(constructions::build_pairing(&f, &g)
        .map_err(value_err)?
        .map(|phi| pairs_out(&phi)))
}

/// Checks a + f(a) = phi(a) + g(phi(a)) for a bijection phi on A.
#[pyfunction]
fn verify_pairing(
    carrier: &str,
    f: Vec<(String, String)>,
    g: Vec<(String, String)>,
    phi: Vec<(String, String)>,
) -> PyResult<bool> {
    let c = parse_carrier(carrier)?;
    let f = matching_from(&c, f)?;
    let g = matching_from(&c, g)?;
    let phi = parse_pairs(&c, phi)?;
    constructions::verify_pairing(&f, &g, &phi).map_err(value_err)
}

// witness generators, returning certificate JSON

#[pyfunction]
fn qr_witness(p: u64) -> PyResult<String> {
    Ok(constructions::qr_witness(p)
        .map_err(value_err)?
        .certificate()
        .to_json())
}

#[pyfunction]
fn cycle_witness(p: u64, k: usize) -> PyResult<String> {
    Ok(constructions::cycle_witness(p, k)
        .map_err(value_err)?
        .certificate()
        .to_json())
}

/// Window witness on a torsion-free carrier: group is int, rat, or dyadic.
#[pyfunction]
#[pyo3(signature = (group, window = 200))]
fn window_witness(group: &str, window: i64) -> PyResult<String> {
    let family = WindowFamily::parse(group)
        .ok_or_else(|| PyValueError::new_err("window witnesses exist for int, rat, dyadic"))?;
    Ok(constructions::window_witness(family, window)
        .map_err(value_err)?
        .certificate()
        .to_json())
}

/// Pairing certificate for a seeded profile-tied pair over Z_p.
#[pyfunction]
#[pyo3(signature = (p, seed = 0))]
fn pairing_witness(p: u64, seed: u64) -> PyResult<String> {
    if !matchings_core::group::is_prime(p) {
        return Err(PyValueError::new_err("p must be prime"));
    }
    let carrier = GroupCarrier::finite(vec![p]).map_err(value_err)?;
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
    let pair =
        constructions::random_profile_tied_pair(&carrier, &mut rng, 5).map_err(value_err)?;
    let phi = constructions::build_pairing(&pair.f, &pair.g)
        .map_err(value_err)?
        .ok_or_else(|| PyRuntimeError::new_err("pairing construction failed"))?;
    Ok(pairing_certificate(&pair.f, &pair.g, &phi, Some(seed)).to_json())
}

#[pyfunction]
#[pyo3(signature = (tower, m = 1))]
fn linear_witness(tower: &str, m: usize) -> PyResult<String> {
    match FieldTower::parse_spec(tower).map_err(value_err)? {
        FieldTower::Finite(t) => Ok(linear::linear_witness(&t, m)
            .map_err(value_err)?
            .certificate()
            .to_json()),
        FieldTower::RatFun(_) => Err(PyValueError::new_err(
            "use transcendental_witness for the ratfun tower",
        )),
    }
}

#[pyfunction]
#[pyo3(signature = (m = 1))]
fn transcendental_witness(m: usize) -> PyResult<String> {
    Ok(linear::transcendental_witness(m)
        .map_err(value_err)?
        .certificate()
        .to_json())
}

/// Searches a finite tower for a matched-subspace counterexample. Returns
/// (status, certificate_json).
#[pyfunction]
#[pyo3(signature = (tower, budget = 50_000_000))]
fn lmp_counterexample(tower: &str, budget: u64) -> PyResult<(String, Option<String>)> {
    let gf = match FieldTower::parse_spec(tower).map_err(value_err)? {
        FieldTower::Finite(t) => t,
        FieldTower::RatFun(_) => {
            return Err(PyValueError::new_err("the search needs a finite tower"))
        }
    };
    match linear::lmp_counterexample_search(&gf, Budget(budget)).map_err(value_err)? {
        Bounded::Done(Some(cx)) => {
            let cert = cx.certificate(&FieldTower::Finite(gf), Some(budget));
            Ok(("found".into(), Some(cert.to_json())))
        }
        Bounded::Done(None) => Ok(("none".into(), None)),
        Bounded::OutOfBudget => Ok(("unknown".into(), None)),
    }
}

/// Proper intermediate subfield degrees of a finite tower.
#[pyfunction]
fn intermediate_fields(tower: &str) -> PyResult<Vec<usize>> {
    match FieldTower::parse_spec(tower).map_err(value_err)? {
        FieldTower::Finite(t) => Ok(linear::intermediate_fields(&t)),
        FieldTower::RatFun(_) => Ok(Vec::new()),
    }
}

/// The strong-matching criterion AB ∩ A = {0} for subspaces given by basis
/// rows (coordinate vectors over the base field).
#[pyfunction]
fn strong_matching_exists(
    tower: &str,
    a_rows: Vec<Vec<u64>>,
    b_rows: Vec<Vec<u64>>,
) -> PyResult<bool> {
    let gf = match FieldTower::parse_spec(tower).map_err(value_err)? {
        FieldTower::Finite(t) => t,
        FieldTower::RatFun(_) => {
            return Err(PyValueError::new_err(
                "pass polynomial subspaces through certificates instead",
            ))
        }
    };
    let a = linear::Subspace::span_finite(&gf, &a_rows);
    let b = linear::Subspace::span_finite(&gf, &b_rows);
    linear::strong_matching_exists(&a, &b).map_err(value_err)
}

/// Re-validates a certificate; returns (ok, failures). Raises ValueError on
/// files that do not parse as certificates.
#[pyfunction]
fn check_certificate(text: &str) -> PyResult<(bool, Vec<String>)> {
    match cert::check_certificate(text) {
        Ok(report) => Ok((report.ok(), report.failures)),
        Err(e) => Err(value_err(e)),
    }
}

/// Runs a verification suite ("group", "linear", or "all") and returns the
/// deterministic JSON report.
#[pyfunction]
#[pyo3(signature = (suite = "all", max_p = 101, seed = 0))]
fn verify_suite(suite: &str, max_p: u64, seed: u64) -> PyResult<String> {
    let suite = Suite::parse(suite)
        .ok_or_else(|| PyValueError::new_err("suite must be group, linear, or all"))?;
    Ok(run_suite(&SuiteOptions { suite, max_p, seed }).to_json())
}

#[pymodule]
fn matchings_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Carrier>()?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add_function(wrap_pyfunction!(is_matching, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(invert, m)?)?;
    m.add_function(wrap_pyfunction!(orbits, m)?)?;
    m.add_function(wrap_pyfunction!(find_matching, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_matchings, m)?)?;
    m.add_function(wrap_pyfunction!(is_acyclic, m)?)?;
    m.add_function(wrap_pyfunction!(find_acyclic_matching, m)?)?;
    m.add_function(wrap_pyfunction!(fails_at_order, m)?)?;
    m.add_function(wrap_pyfunction!(matching_property_upto, m)?)?;
    m.add_function(wrap_pyfunction!(build_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(verify_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(qr_witness, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_witness, m)?)?;
    m.add_function(wrap_pyfunction!(window_witness, m)?)?;
    m.add_function(wrap_pyfunction!(pairing_witness, m)?)?;
    m.add_function(wrap_pyfunction!(linear_witness, m)?)?;
    m.add_function(wrap_pyfunction!(transcendental_witness, m)?)?;
    m.add_function(wrap_pyfunction!(lmp_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(intermediate_fields, m)?)?;
    m.add_function(wrap_pyfunction!(strong_matching_exists, m)?)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_suite, m)?)?;
    Ok(())
}
