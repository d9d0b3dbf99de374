//! Python bindings: models, words as `[(axis, freq), …]`, complex results as `complex`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use loopq_core::holonomy::{self, BasisCovector, LoopHolonomyModel};
use loopq_core::qside::{q_coefficient_fast, q_coefficient_oracle};
use loopq_core::simplex;
use loopq_core::topdegree::{self, ReferenceFrame, SkewMatrix, WedgeWord};
use loopq_core::verifier::{self, SweepConfig, VerificationCase};

fn py_err(e: loopq_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn make_word(word: Vec<(usize, i64)>, weight: Complex64) -> WedgeWord {
    WedgeWord::from_pairs(&word).with_weight(weight)
}

/// Loop-holonomy model: dimension `n` and rotation angles `alphas` in (0, 1).
#[pyclass(name = "Model", frozen)]
struct PyModel {
    inner: LoopHolonomyModel,
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (n, alphas = Vec::new()))]
    fn new(n: usize, alphas: Vec<f64>) -> PyResult<Self> {
        LoopHolonomyModel::new(n, alphas).map(|inner| Self { inner }).map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn alphas(&self) -> Vec<f64> {
        self.inner.alphas().to_vec()
    }

    fn sine_product(&self) -> f64 {
        self.inner.sine_product()
    }

    /// `method` is one of "closed", "special".
    #[pyo3(signature = (method = "closed"))]
    fn zeta_det(&self, method: &str) -> PyResult<f64> {
        match method {
            "closed" => Ok(holonomy::zeta_det_closed(&self.inner)),
            "special" => Ok(holonomy::zeta_det_special_values(&self.inner)),
            other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
        }
    }

    fn zeta(&self, s: f64) -> PyResult<f64> {
        holonomy::zeta_fn_numeric(&self.inner, s).map_err(py_err)
    }

    /// `[(frequency, multiplicity)]` for eigenvalues `2πi·frequency` with modulus below `radius`.
    fn spectrum(&self, radius: f64) -> Vec<(f64, usize)> {
        self.inner
            .spectrum(radius)
            .into_iter()
            .map(|e| (e.frequency, e.multiplicity))
            .collect()
    }

    fn green_inner(&self, a: (usize, i64), b: (usize, i64)) -> PyResult<Complex64> {
        holonomy::green_inner(&self.inner, &BasisCovector::from(a), &BasisCovector::from(b)).map_err(py_err)
    }

    #[pyo3(signature = (word, weight = Complex64::new(1.0, 0.0)))]
    fn top_degree(&self, word: Vec<(usize, i64)>, weight: Complex64) -> PyResult<Complex64> {
        topdegree::loop_top_degree(&ReferenceFrame::new(self.inner.clone()), &make_word(word, weight)).map_err(py_err)
    }

    #[pyo3(signature = (word, weight = Complex64::new(1.0, 0.0)))]
    fn q_fast(&self, word: Vec<(usize, i64)>, weight: Complex64) -> PyResult<Complex64> {
        q_coefficient_fast(&ReferenceFrame::new(self.inner.clone()), &make_word(word, weight)).map_err(py_err)
    }

    #[pyo3(signature = (word, weight = Complex64::new(1.0, 0.0)))]
    fn q_oracle(&self, word: Vec<(usize, i64)>, weight: Complex64) -> PyResult<Complex64> {
        q_coefficient_oracle(&ReferenceFrame::new(self.inner.clone()), &make_word(word, weight)).map_err(py_err)
    }

    /// Three-way comparison of a word; returns the report as a dict.
    fn verify<'py>(&self, py: Python<'py>, word: Vec<(usize, i64)>) -> PyResult<Bound<'py, PyDict>> {
        let case = VerificationCase {
            model: self.inner.clone(),
            word: WedgeWord::from_pairs(&word),
            seed: 0,
        };
        report_dict(py, &verifier::verify_case(&case))
    }

    fn __repr__(&self) -> String {
        format!("Model(n={}, alphas={:?})", self.inner.n(), self.inner.alphas())
    }
}

fn report_dict<'py>(py: Python<'py>, r: &verifier::CaseReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("alphas", r.alphas.clone())?;
    d.set_item("word", r.word.iter().map(|c| (c.axis, c.freq)).collect::<Vec<_>>())?;
    d.set_item("q_fast", r.q_fast)?;
    d.set_item("q_oracle", r.q_oracle)?;
    d.set_item("top", r.top)?;
    d.set_item("max_rel_diff", r.max_rel_diff())?;
    d.set_item("pass", r.pass)?;
    d.set_item("error", r.error.clone())?;
    Ok(d)
}

/// Exact simplex integral as a Laurent polynomial in `u = 1/(2πi)`, e.g. "2 * u^1".
#[pyfunction]
#[pyo3(signature = (k, oracle = false))]
fn jint(k: Vec<i64>, oracle: bool) -> PyResult<String> {
    let v = if oracle { simplex::j_oracle(&k).map_err(py_err)? } else { simplex::j_closed(&k) };
    Ok(v.to_string())
}

#[pyfunction]
fn jint_numeric(k: Vec<i64>) -> Complex64 {
    simplex::j_numeric(&k)
}

/// Pfaffian of a skew-symmetric matrix given as rows of complex numbers.
#[pyfunction]
fn pfaffian(rows: Vec<Vec<Complex64>>) -> PyResult<Complex64> {
    SkewMatrix::from_rows(rows).map(|a| a.pfaffian()).map_err(py_err)
}

/// Seeded sweep; returns `(reports, summary)` with reports as dicts.
#[pyfunction]
#[pyo3(signature = (seed = 0, count = 100, max_n = 8, max_word_len = 6, max_k = 3, include_corpus = true))]
fn sweep<'py>(
    py: Python<'py>,
    seed: u64,
    count: usize,
    max_n: usize,
    max_word_len: usize,
    max_k: i64,
    include_corpus: bool,
) -> PyResult<(Vec<Bound<'py, PyDict>>, Bound<'py, PyDict>)> {
    let config = SweepConfig {
        seed,
        count,
        max_n,
        max_m: SweepConfig::default().max_m.min(max_n / 2),
        max_word_len,
        max_k,
        jobs: None,
        include_corpus,
    };
    let (reports, summary) = py
        .detach(|| {
            let mut collected = Vec::new();
            verifier::sweep(&config, |r| collected.push(r.clone())).map(|s| (collected, s))
        })
        .map_err(py_err)?;
    let dicts = reports.iter().map(|r| report_dict(py, r)).collect::<PyResult<Vec<_>>>()?;
    let s = PyDict::new(py);
    s.set_item("total", summary.total)?;
    s.set_item("passed", summary.passed)?;
    s.set_item("max_rel_diff", summary.max_rel_diff)?;
    Ok((dicts, s))
}

#[pymodule]
fn loopq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(jint, m)?)?;
    m.add_function(wrap_pyfunction!(jint_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(pfaffian, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
