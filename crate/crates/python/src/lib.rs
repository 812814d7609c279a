use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use picodim::bundled;
use picodim::exponent::{pi_exponent, ExponentOptions, DEFAULT_STATE_CAP};
use picodim::growth::run_growth;
use picodim::multilin::{cocharacter_multiplicities, codimension, EvalOptions, Method};
use picodim::symcomb::{hook_dimension as hook_dim, Partition};
use picodim::Error;

create_exception!(picodim, PicodimError, PyException);
create_exception!(picodim, ResourceGuardError, PicodimError);
create_exception!(picodim, NonSplitError, PicodimError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::ResourceGuard { .. } => ResourceGuardError::new_err(e.to_string()),
        Error::NonSplitInput(_) | Error::Unsupported(_) => NonSplitError::new_err(e.to_string()),
        Error::Internal(_) => PicodimError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PicodimError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn eval_options(method: &str, primes: usize, seed: u64, force: bool) -> PyResult<EvalOptions> {
    Ok(EvalOptions {
        method: method.parse::<Method>().map_err(to_py)?,
        primes,
        seed,
        force,
        ..EvalOptions::default()
    })
}

/// A representation given by generating matrices with exact rational entries.
#[pyclass(frozen, module = "picodim")]
struct RepSpec {
    inner: picodim::RepSpec,
}

#[pymethods]
impl RepSpec {
    /// Parses TOML text; `path` only labels diagnostics.
    #[staticmethod]
    #[pyo3(signature = (text, path = "<string>"))]
    fn from_toml(text: &str, path: &str) -> PyResult<Self> {
        let inner = picodim::RepSpec::parse(text, path).map_err(to_py)?;
        Ok(RepSpec { inner })
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        let inner = picodim::RepSpec::from_file(&path).map_err(to_py)?;
        Ok(RepSpec { inner })
    }

    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        let inner = bundled::get(name).map_err(to_py)?;
        Ok(RepSpec { inner })
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn dim_v(&self) -> usize {
        self.inner.dim_v
    }

    /// Generators as nested lists of rational strings.
    #[getter]
    fn generators(&self) -> Vec<Vec<Vec<String>>> {
        self.inner
            .generators
            .iter()
            .map(|g| {
                (0..g.rows())
                    .map(|i| g.row(i).iter().map(|x| x.to_string()).collect())
                    .collect()
            })
            .collect()
    }

    /// Dimension of the Lie algebra spanned by the generators.
    fn dim_l(&self) -> PyResult<usize> {
        Ok(self.inner.rep().map_err(to_py)?.dim_l())
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml()
    }

    fn content_hash(&self) -> String {
        self.inner.content_hash()
    }

    /// Codimension `c_n`.
    #[pyo3(signature = (n, method = "auto", primes = 2, seed = 0, force = false))]
    fn codimension(
        &self,
        py: Python<'_>,
        n: usize,
        method: &str,
        primes: usize,
        seed: u64,
        force: bool,
    ) -> PyResult<usize> {
        let opts = eval_options(method, primes, seed, force)?;
        let rep = self.inner.rep().map_err(to_py)?;
        let c = py.detach(|| codimension(&rep, n, &opts)).map_err(to_py)?;
        Ok(c.c_n)
    }

    /// Cocharacter table of degree `n` as a dict.
    #[pyo3(signature = (n, method = "auto", primes = 2, seed = 0, all_shapes = false))]
    fn cocharacter<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        method: &str,
        primes: usize,
        seed: u64,
        all_shapes: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let opts = EvalOptions {
            all_shapes,
            ..eval_options(method, primes, seed, false)?
        };
        let rep = self.inner.rep().map_err(to_py)?;
        let table = py
            .detach(|| cocharacter_multiplicities(&rep, n, &opts))
            .map_err(to_py)?;
        to_dict(py, &table)
    }

    fn __repr__(&self) -> String {
        format!(
            "RepSpec(name={:?}, dim_v={}, generators={})",
            self.inner.name,
            self.inner.dim_v,
            self.inner.generators.len()
        )
    }
}

/// Envelope, radical, composition chain and Levi-type decomposition of a
/// representation.
#[pyclass(frozen, module = "picodim")]
struct Structure {
    name: String,
    inner: picodim::Structure,
}

#[pymethods]
impl Structure {
    #[new]
    #[pyo3(signature = (spec, seed = 0))]
    fn new(py: Python<'_>, spec: &RepSpec, seed: u64) -> PyResult<Self> {
        let rep = spec.inner.rep().map_err(to_py)?;
        let inner = py
            .detach(|| picodim::Structure::build(rep, seed))
            .map_err(to_py)?;
        Ok(Structure {
            name: spec.inner.name.clone(),
            inner,
        })
    }

    #[getter]
    fn dim_a(&self) -> usize {
        self.inner.env.dim_a()
    }

    #[getter]
    fn nilpotency_index(&self) -> usize {
        self.inner.env.nilpotency_index()
    }

    #[getter]
    fn factor_dims(&self) -> Vec<usize> {
        self.inner.env.factor_dims()
    }

    /// Structure summary as a dict.
    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = self.inner.report(&self.name).map_err(to_py)?;
        to_dict(py, &report)
    }

    /// Lemma checks as a dict with a `checks` list.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let report = self.inner.verify().map_err(to_py)?;
        to_dict(py, &report)
    }

    /// The PI-exponent search result as a dict.
    #[pyo3(signature = (state_cap = DEFAULT_STATE_CAP, seed = 0))]
    fn exponent<'py>(
        &self,
        py: Python<'py>,
        state_cap: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let s = &self.inner;
        let opts = ExponentOptions { state_cap, seed };
        let result = py
            .detach(|| pi_exponent(&s.rep, &s.env, &s.levi, &opts))
            .map_err(to_py)?;
        to_dict(py, &result)
    }

    /// Codimensions up to `max_n` compared with the growth law.
    #[pyo3(signature = (max_n, method = "auto", primes = 2, seed = 0, state_cap = DEFAULT_STATE_CAP))]
    fn growth<'py>(
        &self,
        py: Python<'py>,
        max_n: usize,
        method: &str,
        primes: usize,
        seed: u64,
        state_cap: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let eval = eval_options(method, primes, seed, false)?;
        let exp = ExponentOptions { state_cap, seed };
        let report = py
            .detach(|| run_growth(&self.name, &self.inner, max_n, &eval, &exp))
            .map_err(to_py)?;
        to_dict(py, &report)
    }
}

/// Names of the bundled example representations.
#[pyfunction]
fn bundled_names() -> Vec<&'static str> {
    bundled::names()
}

/// Dimension of the irreducible S_n-module for the partition `parts`.
#[pyfunction]
fn hook_dimension(parts: Vec<usize>) -> PyResult<u128> {
    let lambda = Partition::new(parts).map_err(to_py)?;
    hook_dim(&lambda)
        .try_into()
        .map_err(|_| PyValueError::new_err("dimension does not fit in 128 bits"))
}

#[pymodule]
fn picodim_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<RepSpec>()?;
    m.add_class::<Structure>()?;
    m.add_function(wrap_pyfunction!(bundled_names, m)?)?;
    m.add_function(wrap_pyfunction!(hook_dimension, m)?)?;
    m.add("PicodimError", m.py().get_type::<PicodimError>())?;
    m.add(
        "ResourceGuardError",
        m.py().get_type::<ResourceGuardError>(),
    )?;
    m.add("NonSplitError", m.py().get_type::<NonSplitError>())?;
    Ok(())
}
