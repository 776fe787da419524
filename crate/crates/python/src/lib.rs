//! Python bindings. Exact rationals cross the boundary as strings such as
//! `"-3/4"`; reports come back as plain dicts and lists.

// The pymethods expansion converts `PyErr` into itself.
#![allow(clippy::useless_conversion)]

use horolab::auxiliary::{construct_small_section, height_profile, GermSource, ProblemTemplate, TargetRule, VanishingProblem};
use horolab::connection::{DerivationField, SystemDocument};
use horolab::exact::rational::{format_rational, parse_rational};
use horolab::exact::{factorial_valuation as valuation, Rational, TruncatedSeries};
use horolab::expr::parse_expression as parse;
use horolab::independence::{integer_relation_search, RealValue, RelationQuery};
use horolab::isomono::{corrected_basis, corrected_family, displayed_basis, displayed_family, run_family, FamilyParameters};
use horolab::lg::certify_lg as certify;
use horolab::nevanlinna::{log_grid, nevanlinna_suite, AnalyticMap, ExhaustionFunction, LevelConvention};
use horolab::zero_lemma::{nonvanishing_wedge_indices, zero_lemma_check};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde::Serialize;
use serde_json::Value;

create_exception!(horolab, HorolabError, PyException);

fn err(e: horolab::Error) -> PyErr {
    HorolabError::new_err(e.to_string())
}

fn rat(text: &str) -> PyResult<Rational> {
    parse_rational(text).map_err(err)
}

fn rats(texts: &[String]) -> PyResult<Vec<Rational>> {
    texts.iter().map(|t| rat(t)).collect()
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<PyObject> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_py(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_py(py),
            None => n.as_f64().unwrap_or(f64::NAN).into_py(py),
        },
        Value::String(s) => s.into_py(py),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new_bound(py, items).into_py(py)
        }
        Value::Object(o) => {
            let d = PyDict::new_bound(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_py(py)
        }
    })
}

fn report<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<PyObject> {
    let value = serde_json::to_value(v).map_err(|e| HorolabError::new_err(e.to_string()))?;
    to_py(py, &value)
}

fn coefficients(s: &TruncatedSeries) -> Vec<String> {
    s.coeffs().iter().map(format_rational).collect()
}

/// A linear system `Y' = A(z) Y` with rational-function entries.
#[pyclass(name = "DifferentialSystem", module = "horolab")]
#[derive(Clone)]
struct PySystem {
    inner: horolab::connection::DifferentialSystem,
}

#[pymethods]
impl PySystem {
    /// Entries are expressions in `z`, e.g. `[["0", "1"], ["z", "0"]]`.
    #[new]
    fn new(matrix: Vec<Vec<String>>) -> PyResult<Self> {
        let doc = SystemDocument { rank: matrix.len(), matrix, poles: None };
        Ok(PySystem { inner: doc.build().map_err(err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PySystem { inner: horolab::connection::DifferentialSystem::from_json_str(text).map_err(err)? })
    }

    #[staticmethod]
    fn diagonal(entries: Vec<String>) -> PyResult<Self> {
        let inner = horolab::connection::DifferentialSystem::diagonal(&rats(&entries)?).map_err(err)?;
        Ok(PySystem { inner })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_document()).expect("documents serialize")
    }

    /// Coefficients of each component of the solution with `Y(base) = initial`.
    fn solve_series(&self, base: &str, initial: Vec<String>, order: usize) -> PyResult<Vec<Vec<String>>> {
        let sol = self.inner.solve_series(&rat(base)?, &rats(&initial)?, order).map_err(err)?;
        Ok(sol.iter().map(coefficients).collect())
    }

    fn __repr__(&self) -> String {
        format!("DifferentialSystem(rank={}, matrix={:?})", self.inner.rank(), self.inner.to_document().matrix)
    }
}

fn initial_or_ones(initial: Option<Vec<Vec<String>>>, points: usize, m: usize) -> PyResult<Vec<Vec<Rational>>> {
    match initial {
        Some(v) => v.iter().map(|r| rats(r)).collect(),
        None => Ok(vec![vec![Rational::from_integer(1.into()); m]; points]),
    }
}

/// Smallest integer section of degree `degree` whose pairing with the
/// solution germs vanishes to `order` at each point.
#[pyfunction]
#[pyo3(signature = (system, degree, points, order=None, initial=None))]
fn construct_section(
    py: Python<'_>,
    system: &PySystem,
    degree: usize,
    points: Vec<String>,
    order: Option<usize>,
    initial: Option<Vec<Vec<String>>>,
) -> PyResult<PyObject> {
    let pts = rats(&points)?;
    let sys = &system.inner;
    let init = initial_or_ones(initial, pts.len(), sys.rank())?;
    let nu = order.unwrap_or_else(|| TargetRule::Maximal.target(sys.rank(), degree, pts.len()));
    let germs = pts
        .iter()
        .zip(&init)
        .map(|(p, y)| sys.solve_series(p, y, nu + degree + 2))
        .collect::<horolab::Result<Vec<_>>>()
        .map_err(err)?;
    let prob = VanishingProblem { points: pts, germs, degree, target_orders: vec![nu; points.len()] };
    report(py, &construct_small_section(&prob).map_err(err)?)
}

/// Log-heights of constructed sections across degrees.
#[pyfunction]
#[pyo3(signature = (system, degrees, points, initial=None))]
fn section_heights(
    py: Python<'_>,
    system: &PySystem,
    degrees: Vec<usize>,
    points: Vec<String>,
    initial: Option<Vec<Vec<String>>>,
) -> PyResult<PyObject> {
    let pts = rats(&points)?;
    let initial = initial_or_ones(initial, pts.len(), system.inner.rank())?;
    let template = ProblemTemplate {
        points: pts,
        source: GermSource::System { system: system.inner.clone(), initial },
        rule: TargetRule::Maximal,
    };
    report(py, &height_profile(&template, &degrees).map_err(err)?)
}

/// Tower rank, vanishing order and measured constant of the section
/// constructed at `point`, plus a non-vanishing wedge at `wedge_at`.
#[pyfunction]
#[pyo3(signature = (system, degree, point="0", wedge_at="1", initial=None, bound=None))]
fn zero_lemma(
    py: Python<'_>,
    system: &PySystem,
    degree: usize,
    point: &str,
    wedge_at: &str,
    initial: Option<Vec<String>>,
    bound: Option<usize>,
) -> PyResult<PyObject> {
    let sys = &system.inner;
    let q = rat(point)?;
    let init = initial_or_ones(initial.map(|v| vec![v]), 1, sys.rank())?;
    let template = ProblemTemplate {
        points: vec![q.clone()],
        source: GermSource::System { system: sys.clone(), initial: init },
        rule: TargetRule::Maximal,
    };
    let prob = template.instantiate(degree).map_err(err)?;
    let c = construct_small_section(&prob).map_err(err)?;
    let der = DerivationField::for_system(sys);
    let rep = zero_lemma_check(&c.section, sys, &der, &q, &prob.germs[0], degree).map_err(err)?;
    let bound = bound.unwrap_or(sys.rank() + degree + 2);
    let wedge = nonvanishing_wedge_indices(&c.section, sys, &der, &rat(wedge_at)?, bound).map_err(err)?;
    let d = PyDict::new_bound(py);
    d.set_item("tower", report(py, &rep)?)?;
    d.set_item("wedge", report(py, &wedge)?)?;
    d.set_item("section", report(py, &c.section)?)?;
    Ok(d.into_py(py))
}

/// Per-prime slope certificate of type `alpha` for germs given by their
/// coefficient lists at 0.
#[pyfunction]
fn certify_lg(py: Python<'_>, germs: Vec<Vec<String>>, alpha: &str) -> PyResult<PyObject> {
    let zero = Rational::from_integer(0.into());
    let series = germs
        .iter()
        .map(|c| Ok(TruncatedSeries::new(zero.clone(), rats(c)?)))
        .collect::<PyResult<Vec<_>>>()?;
    report(py, &certify(&series, &rat(alpha)?).map_err(err)?)
}

/// `T`, `N`, `m` and the residual `N + m - T` of an entire map on log-spaced
/// radii, with the disc exhaustion centred at 0.
#[pyfunction]
#[pyo3(signature = (map, target=1.0, rmin=1.0, rmax=100.0, steps=25, samples=4096))]
fn nevanlinna(py: Python<'_>, map: &str, target: f64, rmin: f64, rmax: f64, steps: usize, samples: usize) -> PyResult<PyObject> {
    let f = AnalyticMap::parse(map).map_err(err)?;
    let exh = ExhaustionFunction::at_infinity(Complex64::new(0.0, 0.0));
    let grid = log_grid(rmin, rmax, steps);
    let rep = nevanlinna_suite(&f, Complex64::new(target, 0.0), &exh, &grid, samples, LevelConvention::Calibrated, None)
        .map_err(err)?;
    report(py, &rep)
}

/// Integer polynomial relations of total degree `<= degree` among the
/// values (`"e"`, `"pi"`, `"exp(2)"`, `"sqrt(2)"`, ...).
#[pyfunction]
#[pyo3(signature = (values, degree=2, height=100, precision=100))]
fn relation_search(py: Python<'_>, values: Vec<String>, degree: usize, height: u64, precision: usize) -> PyResult<PyObject> {
    let values = values.iter().map(|v| RealValue::parse(v)).collect::<horolab::Result<Vec<_>>>().map_err(err)?;
    let q = RelationQuery { values, degree, height_bound: height, precision };
    report(py, &integer_relation_search(&q).map_err(err)?)
}

/// Integrability, deformation basis and monodromy conjugacy for the
/// two-parameter family, as printed or corrected.
#[pyfunction]
#[pyo3(signature = (corrected=true, a="1/2", b="1/3", c="1", x0="1", x1="2", digits=30))]
#[allow(clippy::too_many_arguments)]
fn check_family(
    py: Python<'_>,
    corrected: bool,
    a: &str,
    b: &str,
    c: &str,
    x0: &str,
    x1: &str,
    digits: usize,
) -> PyResult<PyObject> {
    let (family, basis) = if corrected {
        (corrected_family(), corrected_basis())
    } else {
        (displayed_family(), displayed_basis())
    };
    let p = FamilyParameters { a: rat(a)?, b: rat(b)?, c: rat(c)? };
    let (x0, x1) = (rat(x0)?, rat(x1)?);
    let run = py.allow_threads(|| run_family(&family, &basis, &p, &x0, &x1, digits)).map_err(err)?;
    report(py, &run)
}

/// Parses an expression and returns its canonical text.
#[pyfunction]
#[pyo3(signature = (text, params=Vec::new()))]
fn parse_expression(text: &str, params: Vec<String>) -> PyResult<String> {
    let p: Vec<&str> = params.iter().map(String::as_str).collect();
    Ok(parse(text, &p).map_err(err)?.unparse())
}

/// `v_p(i!)`.
#[pyfunction]
fn factorial_valuation(i: u64, p: u64) -> PyResult<u64> {
    valuation(i, p).map_err(err)
}

#[pymodule]
#[pyo3(name = "horolab")]
fn horolab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HorolabError", m.py().get_type_bound::<HorolabError>())?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(construct_section, m)?)?;
    m.add_function(wrap_pyfunction!(section_heights, m)?)?;
    m.add_function(wrap_pyfunction!(zero_lemma, m)?)?;
    m.add_function(wrap_pyfunction!(certify_lg, m)?)?;
    m.add_function(wrap_pyfunction!(nevanlinna, m)?)?;
    m.add_function(wrap_pyfunction!(relation_search, m)?)?;
    m.add_function(wrap_pyfunction!(check_family, m)?)?;
    m.add_function(wrap_pyfunction!(parse_expression, m)?)?;
    m.add_function(wrap_pyfunction!(factorial_valuation, m)?)?;
    Ok(())
}
