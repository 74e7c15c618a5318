//! Python bindings: the exact series type plus the headline operations
//! (catalog series, ring arithmetic, character enumeration, decompositions,
//! and the quasi-replicability checks).
//!
//! Rational coefficients cross the boundary as `fractions.Fraction`,
//! multiplicities as Python ints.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use num::{BigInt, BigRational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use moonring::decomp::{
    d_series_4b, decompose_4a, feasibility_6a, multiplicities_6a, trace_check,
};
use moonring::greenring::{GreenRing, RingElement};
use moonring::homfinder::enumerate_characters;
use moonring::modfun::{self, ClassLabel, HauptmodulCatalog};
use moonring::quasirep::{
    check_quasirep, knz_check, recursion_probe_4b, standard_family, FamilyKind,
};
use moonring::series::LaurentSeries;
use moonring::verify::{run_all, Level};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn class(label: &str) -> PyResult<ClassLabel> {
    ClassLabel::from_str(label).map_err(err)
}

fn ring(name: &str) -> PyResult<Arc<GreenRing>> {
    GreenRing::builtin(name).map_err(err)
}

fn catalog() -> PyResult<HauptmodulCatalog> {
    HauptmodulCatalog::load().map_err(err)
}

fn element_dict(x: &RingElement) -> BTreeMap<String, BigInt> {
    x.ring()
        .labels()
        .iter()
        .zip(x.coeffs())
        .filter(|(_, c)| !num::Zero::is_zero(*c))
        .map(|(l, c)| (l.clone(), c.clone()))
        .collect()
}

fn phi_kind(name: &str) -> PyResult<FamilyKind> {
    match name {
        "rank" => Ok(FamilyKind::Rank),
        "trace-g" => Ok(FamilyKind::TraceOfPower(1)),
        "trace-g2" => Ok(FamilyKind::TraceOfPower(2)),
        "trace-g3" => Ok(FamilyKind::TraceOfPower(3)),
        "tate" => Ok(FamilyKind::Tate),
        other => Err(PyValueError::new_err(format!(
            "unknown phi `{other}` (rank, trace-g, trace-g2, trace-g3, tate)"
        ))),
    }
}

/// An exact Laurent series with explicit truncation.
#[pyclass(name = "Series", from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: LaurentSeries,
}

#[pymethods]
impl PySeries {
    /// Build from a list of (exponent, coefficient) pairs; exponents at or
    /// above `trunc` are unknown.
    #[new]
    fn new(terms: Vec<(i64, BigRational)>, trunc: i64) -> PyResult<Self> {
        let val = terms.iter().map(|(e, _)| *e).min().unwrap_or(0).min(trunc);
        let mut coeffs = vec![BigRational::from_integer(BigInt::from(0)); (trunc - val) as usize];
        for (e, c) in terms {
            if e >= trunc {
                return Err(PyValueError::new_err(format!(
                    "exponent {e} is at or above the truncation {trunc}"
                )));
            }
            coeffs[(e - val) as usize] = c;
        }
        Ok(PySeries { inner: LaurentSeries::new(val, coeffs) })
    }

    #[getter]
    fn valuation(&self) -> i64 {
        self.inner.valuation()
    }

    #[getter]
    fn trunc(&self) -> i64 {
        self.inner.trunc()
    }

    /// Coefficient of q^e as a Fraction; None when unknown.
    fn coeff(&self, e: i64) -> Option<BigRational> {
        self.inner.coeff(e)
    }

    /// All known (exponent, coefficient) pairs with nonzero coefficient.
    fn terms(&self) -> Vec<(i64, BigRational)> {
        (self.inner.valuation()..self.inner.trunc())
            .filter_map(|e| {
                let c = self.inner.coeff(e).unwrap();
                (!num::Zero::is_zero(&c)).then_some((e, c))
            })
            .collect()
    }

    fn __add__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: self.inner.add(&other.inner) }
    }

    fn __sub__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: self.inner.sub(&other.inner) }
    }

    fn __mul__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: self.inner.mul(&other.inner) }
    }

    fn __neg__(&self) -> PySeries {
        PySeries { inner: self.inner.neg() }
    }

    fn inverse(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.inverse().map_err(err)? })
    }

    fn exp(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.exp().map_err(err)? })
    }

    fn log(&self) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.log().map_err(err)? })
    }

    fn dilate(&self, k: i64) -> PyResult<PySeries> {
        Ok(PySeries { inner: self.inner.dilate(k).map_err(err)? })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_json()).expect("series serializes")
    }

    fn __richcmp__(&self, other: &PySeries, op: pyo3::basic::CompareOp) -> PyResult<bool> {
        match op {
            pyo3::basic::CompareOp::Eq => Ok(self.inner == other.inner),
            pyo3::basic::CompareOp::Ne => Ok(self.inner != other.inner),
            _ => Err(PyValueError::new_err("series are not ordered")),
        }
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.inner)
    }
}

/// The j-function q^-1 + 744 + 196884 q + ...
#[pyfunction]
fn j_series(upto: i64) -> PyResult<PySeries> {
    Ok(PySeries { inner: modfun::j_series(upto + 1).map_err(err)? })
}

/// Delta(q) = q prod (1 - q^n)^24.
#[pyfunction]
fn eta_pow24(upto: i64) -> PyResult<PySeries> {
    Ok(PySeries { inner: modfun::eta_pow24(upto + 1).map_err(err)? })
}

/// Catalog Hauptmodul with coefficients through q^upto.
#[pyfunction]
fn hauptmodul(label: &str, upto: i64) -> PyResult<PySeries> {
    let cat = catalog()?;
    Ok(PySeries { inner: cat.hauptmodul(class(label)?, upto + 1).map_err(err)? })
}

/// Classes of g^k for k = 1..order.
#[pyfunction]
fn power_map(group: &str) -> PyResult<Vec<String>> {
    let pm = modfun::power_map(class(group)?);
    Ok((1..=pm.order()).map(|k| pm.at(k).to_string()).collect())
}

/// Basis labels of a built-in ring.
#[pyfunction]
fn ring_labels(name: &str) -> PyResult<Vec<String>> {
    Ok(ring(name)?.labels().to_vec())
}

/// Ranks of the basis elements.
#[pyfunction]
fn ring_ranks(name: &str) -> PyResult<Vec<i64>> {
    Ok(ring(name)?.ranks().to_vec())
}

/// All integer-valued characters as (values, tag) pairs.
#[pyfunction]
fn ring_homs(name: &str) -> PyResult<Vec<(Vec<i64>, String)>> {
    let r = ring(name)?;
    Ok(enumerate_characters(&r)
        .iter()
        .map(|c| (c.values().to_vec(), c.tag().name()))
        .collect())
}

/// Tensor product of two element expressions, as {label: coefficient}.
#[pyfunction]
fn tensor(name: &str, x: &str, y: &str) -> PyResult<BTreeMap<String, BigInt>> {
    let r = ring(name)?;
    let a = r.parse_element(x).map_err(err)?;
    let b = r.parse_element(y).map_err(err)?;
    Ok(element_dict(&a.tensor(&b).map_err(err)?))
}

/// Adams operation psi^k of an element expression.
#[pyfunction]
fn adams(name: &str, x: &str, k: u64) -> PyResult<BTreeMap<String, BigInt>> {
    let r = ring(name)?;
    let a = r.parse_element(x).map_err(err)?;
    Ok(element_dict(&a.adams(k).map_err(err)?))
}

/// Exterior power Lambda^k of an element expression.
#[pyfunction]
fn exterior_power(name: &str, x: &str, k: u32) -> PyResult<BTreeMap<String, BigInt>> {
    let r = ring(name)?;
    let a = r.parse_element(x).map_err(err)?;
    Ok(element_dict(&a.exterior_power(k).map_err(err)?))
}

/// Restriction of an element to a smaller built-in ring.
#[pyfunction]
fn restrict(name: &str, x: &str, target: &str) -> PyResult<BTreeMap<String, BigInt>> {
    let r = ring(name)?;
    let t = ring(target)?;
    let a = r.parse_element(x).map_err(err)?;
    Ok(element_dict(&a.restrict(&t).map_err(err)?))
}

/// Rank of an element expression.
#[pyfunction]
fn rank_of(name: &str, x: &str) -> PyResult<BigInt> {
    let r = ring(name)?;
    Ok(r.parse_element(x).map_err(err)?.rank())
}

/// 4A decomposition: one {label: multiplicity} dict per grade 0..=upto.
/// Every reconstructed trace series is re-checked before returning.
#[pyfunction]
fn decompose_4a_grades(upto: i64) -> PyResult<Vec<BTreeMap<String, BigInt>>> {
    let cat = catalog()?;
    let dec = decompose_4a(&cat, upto).map_err(err)?;
    let ring = dec.ring().clone();
    let chars = enumerate_characters(&ring);
    let rank = chars
        .iter()
        .find(|c| c.values() == ring.ranks())
        .expect("rank character exists");
    if !trace_check(&cat, &dec, rank, ClassLabel::C1A).map_err(err)? {
        return Err(PyValueError::new_err("rank trace check failed"));
    }
    Ok((0..=upto).map(|n| element_dict(dec.grade(n))).collect())
}

/// The 4B group-ring multiplicity series (T_1A - T_2A)/4.
#[pyfunction]
fn d_series_4b_series(upto: i64) -> PyResult<PySeries> {
    let cat = catalog()?;
    Ok(PySeries { inner: d_series_4b(&cat, upto + 1).map_err(err)? })
}

/// Feasible X values at grade n: (lower, upper, stride).
#[pyfunction]
fn feasibility_6a_interval(n: i64) -> PyResult<(BigInt, BigInt, BigInt)> {
    let cat = catalog()?;
    let iv = feasibility_6a(&cat, n).map_err(err)?;
    Ok((iv.lower, iv.upper, iv.stride))
}

/// Multiplicities (m1, m12, m13, m123, mD) at grade n for a given X.
#[pyfunction]
fn feasibility_6a_multiplicities(n: i64, x: BigInt) -> PyResult<Vec<BigInt>> {
    let cat = catalog()?;
    Ok(multiplicities_6a(&cat, n, &x).map_err(err)?.to_vec())
}

/// Quasi-replicability scan; returns (passed, violations) where each
/// violation is (a, b, coefficient-string).
#[pyfunction]
#[pyo3(signature = (group, phi, pmax = 6, qmax = 12, exponent = None))]
fn quasirep(
    group: &str,
    phi: &str,
    pmax: usize,
    qmax: i64,
    exponent: Option<u64>,
) -> PyResult<(bool, Vec<(usize, i64, String)>)> {
    let cat = catalog()?;
    let group = class(group)?;
    let kind = phi_kind(phi)?;
    let exponent = exponent.unwrap_or_else(|| group.order());
    let family_trunc = (qmax + pmax as i64) * pmax as i64;
    let fam = standard_family(&cat, group, kind, family_trunc).map_err(err)?;
    let report = check_quasirep(&fam, exponent, pmax, qmax).map_err(err)?;
    let violations =
        report.violations.iter().map(|v| (v.a, v.b, v.coefficient.clone())).collect();
    Ok((report.passed, violations))
}

/// The two-variable denominator identity for the J family.
#[pyfunction]
#[pyo3(signature = (pmax = 6, qmax = 8))]
fn knz(pmax: usize, qmax: i64) -> PyResult<bool> {
    let cat = catalog()?;
    knz_check(&cat, pmax, qmax).map_err(err)
}

/// Residuals of the 4B multiplicity recursion for a catalog series.
#[pyfunction]
fn probe_4b(label: &str, kmax: u64) -> PyResult<Vec<(u64, BigRational)>> {
    let cat = catalog()?;
    let x = cat.hauptmodul(class(label)?, 4 * kmax as i64 + 3).map_err(err)?;
    recursion_probe_4b(&x, kmax).map_err(err)
}

/// Run the reproduction suite; returns (name, passed, detail) triples.
#[pyfunction]
#[pyo3(signature = (level = "desk"))]
fn verify_all(level: &str) -> PyResult<Vec<(String, bool, String)>> {
    let level = match level {
        "desk" => Level::Desk,
        "deep" => Level::Deep,
        other => return Err(PyValueError::new_err(format!("unknown level `{other}`"))),
    };
    let (results, _) = run_all(level);
    Ok(results
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed, r.detail))
        .collect())
}

#[pymodule]
fn moonring_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(j_series, m)?)?;
    m.add_function(wrap_pyfunction!(eta_pow24, m)?)?;
    m.add_function(wrap_pyfunction!(hauptmodul, m)?)?;
    m.add_function(wrap_pyfunction!(power_map, m)?)?;
    m.add_function(wrap_pyfunction!(ring_labels, m)?)?;
    m.add_function(wrap_pyfunction!(ring_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(ring_homs, m)?)?;
    m.add_function(wrap_pyfunction!(tensor, m)?)?;
    m.add_function(wrap_pyfunction!(adams, m)?)?;
    m.add_function(wrap_pyfunction!(exterior_power, m)?)?;
    m.add_function(wrap_pyfunction!(restrict, m)?)?;
    m.add_function(wrap_pyfunction!(rank_of, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_4a_grades, m)?)?;
    m.add_function(wrap_pyfunction!(d_series_4b_series, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility_6a_interval, m)?)?;
    m.add_function(wrap_pyfunction!(feasibility_6a_multiplicities, m)?)?;
    m.add_function(wrap_pyfunction!(quasirep, m)?)?;
    m.add_function(wrap_pyfunction!(knz, m)?)?;
    m.add_function(wrap_pyfunction!(probe_4b, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
