//! Python bindings: ordinals, real-valued sequences with their means and
//! block division, the law suite, and capture verification.
//!
//! Rationals cross the boundary as `fractions.Fraction`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use transmean::capture;
use transmean::laws::{run_all, GenConfig, OracleCheck};
use transmean::seq::{parse_label_seq, parse_real_seq};
use transmean::{MeanPair, Rat};

create_exception!(transmean, DivisionError, PyException);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.to_string(),))
}

/// An ordinal below ε₀ in Cantor normal form.
#[pyclass(frozen, eq, ord, hash, module = "transmean")]
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Ordinal(transmean::Ordinal);

#[pymethods]
impl Ordinal {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        transmean::Ordinal::parse(text).map(Ordinal).map_err(value_error)
    }

    #[staticmethod]
    fn omega() -> Self {
        Ordinal(transmean::Ordinal::omega())
    }

    fn __add__(&self, other: &Ordinal) -> Self {
        Ordinal(self.0.add(&other.0))
    }

    fn __mul__(&self, other: &Ordinal) -> Self {
        Ordinal(self.0.mul(&other.0))
    }

    /// `other - self` for `self <= other`: the unique `d` with `self + d == other`.
    fn subtract_from(&self, other: &Ordinal) -> PyResult<Self> {
        transmean::Ordinal::left_subtract(&self.0, &other.0)
            .map(Ordinal)
            .map_err(value_error)
    }

    /// `(sigma, n, rho)` with `self == w^sigma * n + rho` and `rho < w^sigma`.
    fn decomp(&self) -> PyResult<(Ordinal, String, Ordinal)> {
        let (s, n, r) = self.0.standard_decomposition().map_err(value_error)?;
        Ok((Ordinal(s), n.to_string(), Ordinal(r)))
    }

    fn is_limit(&self) -> bool {
        self.0.is_limit()
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Ordinal('{}')", self.0)
    }
}

/// A real-valued symbolic sequence of ordinal length.
#[pyclass(frozen, module = "transmean")]
#[derive(Clone)]
struct Seq(transmean::RealSeq);

#[pymethods]
impl Seq {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_real_seq(text).map(Seq).map_err(value_error)
    }

    #[getter]
    fn length(&self) -> Ordinal {
        Ordinal(self.0.length())
    }

    fn upper_mean<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &transmean::upper_mean(&self.0))
    }

    fn lower_mean<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &transmean::lower_mean(&self.0))
    }

    /// The mean, or `None` when the upper and lower means differ.
    fn mean<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        MeanPair::of(&self.0)
            .mean()
            .map(|m| fraction(py, m))
            .transpose()
    }

    /// Blocks of length `by`, each replaced by its upper mean.
    fn divide(&self, by: &Ordinal) -> PyResult<Seq> {
        transmean::divide(&self.0, &by.0)
            .map(Seq)
            .map_err(|e| DivisionError::new_err(format!("{}: {e}", e.name())))
    }

    /// The first `n` values.
    fn prefix<'py>(&self, py: Python<'py>, n: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0
            .materialize_prefix(n)
            .iter()
            .map(|v| fraction(py, v))
            .collect()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Seq('{}')", self.0)
    }
}

/// Runs every law; returns `(name, passed, cases, failures)` per law.
#[pyfunction]
#[pyo3(signature = (seed=0, cases=100))]
fn run_laws(seed: u64, cases: usize) -> Vec<(String, bool, usize, usize)> {
    let cfg = GenConfig {
        seed,
        case_count: cases,
        ..GenConfig::default()
    };
    run_all(&cfg, &OracleCheck::default())
        .into_iter()
        .map(|r| (r.name.to_string(), r.passed(), r.cases, r.failures.len()))
        .collect()
}

/// The capturing sequence of length `w^depth` for a space given in the
/// text format (`outcome <label> <p/q>`, `event <name> <labels>`).
#[pyfunction]
#[pyo3(signature = (space, depth=1))]
fn build_capture(space: &str, depth: u32) -> PyResult<String> {
    let sp = capture::parse_space(space).map_err(value_error)?;
    capture::build_capture(&sp, depth)
        .map(|x| x.to_string())
        .map_err(value_error)
}

/// One `EVENT <name> m=<rat> M=<rat|none> PASS|FAIL` line per event.
#[pyfunction]
#[pyo3(signature = (space, seq, resolution))]
fn verify_capture(space: &str, seq: &str, resolution: &Ordinal) -> PyResult<(bool, Vec<String>)> {
    let sp = capture::parse_space(space).map_err(value_error)?;
    let x = parse_label_seq(seq).map_err(value_error)?;
    let report = capture::verify_capture(&sp, &x, &resolution.0).map_err(value_error)?;
    Ok((
        report.passed(),
        report.events.iter().map(|e| e.line()).collect(),
    ))
}

#[pymodule]
#[pyo3(name = "transmean")]
fn transmean_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ordinal>()?;
    m.add_class::<Seq>()?;
    m.add_function(wrap_pyfunction!(run_laws, m)?)?;
    m.add_function(wrap_pyfunction!(build_capture, m)?)?;
    m.add_function(wrap_pyfunction!(verify_capture, m)?)?;
    m.add("DivisionError", m.py().get_type::<DivisionError>())?;
    Ok(())
}
