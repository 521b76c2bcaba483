use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use garland_core::analysis::{self, default_level, Options};
use garland_core::cohomology::cohomology_report;
use garland_core::exactness;
use garland_core::experiment::{run_experiment, summarize, to_csv, ExperimentConfig};
use garland_core::generators::{self, Model, RandomModelParams, DEFAULT_REJECTION_CAP};
use garland_core::linalg::rational::prime_from_seed;
use garland_core::linalg::RankMode;
use garland_core::spectral::{self, Multigraph};
use garland_core::{
    build_garland, face_poset, parse_complex, CellComplex, ComplexKind, FacePoset, GarlandError,
    Stage,
};

create_exception!(garland, GarlandException, PyException);
create_exception!(garland, ParseError, GarlandException);
create_exception!(garland, ValidationError, GarlandException);
create_exception!(garland, StructureError, GarlandException);
create_exception!(garland, NumericError, GarlandException);

fn to_py(e: GarlandError) -> PyErr {
    let msg = e.to_string();
    match e.stage() {
        Stage::Parse => ParseError::new_err(msg),
        Stage::Validate => ValidationError::new_err(msg),
        Stage::Structure => StructureError::new_err(msg),
        Stage::Numeric => NumericError::new_err(msg),
        Stage::Usage => PyValueError::new_err(msg),
    }
}

/// Round-trips a serializable report through `json.loads`.
fn to_object<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn rank_mode(name: &str, seed: u64) -> PyResult<RankMode> {
    match name {
        "exact" => Ok(RankMode::Exact),
        "modular" => Ok(RankMode::Modular(prime_from_seed(seed))),
        _ => Err(PyValueError::new_err(format!("unknown rank mode '{name}'"))),
    }
}

/// A finite simplicial or cubical complex.
#[pyclass(module = "garland", name = "Complex", frozen)]
#[derive(Clone)]
pub struct PyComplex {
    inner: CellComplex,
}

impl PyComplex {
    fn poset(&self) -> PyResult<FacePoset> {
        face_poset(&self.inner).map_err(to_py)
    }

    fn level(&self, fp: &FacePoset, level: Option<usize>) -> usize {
        level.unwrap_or_else(|| default_level(fp))
    }
}

#[pymethods]
impl PyComplex {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyComplex {
            inner: parse_complex(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn kind(&self) -> String {
        self.inner.kind.to_string()
    }

    #[getter]
    fn dim(&self) -> Option<usize> {
        self.inner.dim()
    }

    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    fn __len__(&self) -> usize {
        self.inner.cells.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Complex(kind={}, f_vector={:?})",
            self.inner.kind,
            self.inner.f_vector()
        )
    }

    /// Validation report as a dict; never raises.
    fn validate(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_object(py, &garland_core::validate(&self.inner))
    }

    /// Garland poset summary: constants and link-graph components.
    #[pyo3(signature = (level=None))]
    fn garland(&self, py: Python<'_>, level: Option<usize>) -> PyResult<PyObject> {
        let fp = self.poset()?;
        let g = build_garland(&fp, self.level(&fp, level)).map_err(to_py)?;
        to_object(py, &g.summary(&fp))
    }

    #[pyo3(signature = (level=None, tol=spectral::DEFAULT_TOL, band=spectral::DEFAULT_BAND, full_spectra=false))]
    fn analyze(
        &self,
        py: Python<'_>,
        level: Option<usize>,
        tol: f64,
        band: f64,
        full_spectra: bool,
    ) -> PyResult<PyObject> {
        let fp = self.poset()?;
        let opts = Options {
            tol,
            band,
            ..Options::default()
        };
        let level = self.level(&fp, level);
        let (_, mut report) = py
            .allow_threads(|| analysis::analyze(&fp, level, &opts))
            .map_err(to_py)?;
        if !full_spectra {
            for c in &mut report.spectra.components {
                c.eigenvalues.clear();
            }
        }
        to_object(py, &report)
    }

    #[pyo3(signature = (level=None, rank_mode="exact", seed=0))]
    fn cohomology(
        &self,
        py: Python<'_>,
        level: Option<usize>,
        rank_mode: &str,
        seed: u64,
    ) -> PyResult<PyObject> {
        let fp = self.poset()?;
        let mode = self::rank_mode(rank_mode, seed)?;
        let g = build_garland(&fp, self.level(&fp, level)).map_err(to_py)?;
        let report = py
            .allow_threads(|| {
                let e = exactness::assemble(&g)?;
                cohomology_report(&g, &fp, exactness::h0_dim(&e, mode), mode)
            })
            .map_err(to_py)?;
        to_object(py, &report)
    }

    /// Identity suite, `alpha`, `beta` and `h0B` of the explicit structure.
    #[pyo3(signature = (level=None, rayleigh=100, seed=0))]
    fn verify(
        &self,
        py: Python<'_>,
        level: Option<usize>,
        rayleigh: usize,
        seed: u64,
    ) -> PyResult<PyObject> {
        let fp = self.poset()?;
        let g = build_garland(&fp, self.level(&fp, level)).map_err(to_py)?;
        let report = py
            .allow_threads(|| {
                let e = exactness::assemble(&g)?;
                exactness::analyze_structure(&e, RankMode::Exact, seed, rayleigh)
            })
            .map_err(to_py)?;
        to_object(py, &report)
    }

    /// Criterion, cohomology and explicit structure with their cross-checks.
    #[pyo3(signature = (level=None))]
    fn theorem_check(&self, py: Python<'_>, level: Option<usize>) -> PyResult<PyObject> {
        let fp = self.poset()?;
        let level = self.level(&fp, level);
        let report = py
            .allow_threads(|| analysis::theorem_check(&fp, level, &Options::default()))
            .map_err(to_py)?;
        to_object(py, &report)
    }

    fn moment_angle(&self) -> PyResult<PyComplex> {
        wrap(generators::moment_angle(&self.inner))
    }
}

fn wrap(c: garland_core::Result<CellComplex>) -> PyResult<PyComplex> {
    c.map(|inner| PyComplex { inner }).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (m=4, n=4))]
fn torus_cubical(m: usize, n: usize) -> PyResult<PyComplex> {
    wrap(generators::torus_cubical(m, n))
}

#[pyfunction]
#[pyo3(signature = (m=4, n=4))]
fn torus_simplicial(m: usize, n: usize) -> PyResult<PyComplex> {
    wrap(generators::torus_simplicial(m, n))
}

#[pyfunction]
fn library(name: &str, param: usize) -> PyResult<PyComplex> {
    wrap(generators::small_library(name, param))
}

#[pyfunction]
fn from_simplices(simplices: Vec<Vec<usize>>) -> PyComplex {
    PyComplex {
        inner: generators::from_simplices(&simplices),
    }
}

#[pyfunction]
#[pyo3(signature = (model, h, d, k, seed=0))]
fn random_complex(model: &str, h: usize, d: usize, k: usize, seed: u64) -> PyResult<PyComplex> {
    let params = RandomModelParams {
        model: model.parse().map_err(to_py)?,
        h,
        d,
        k,
        seed,
    };
    wrap(generators::random_complex(&params, DEFAULT_REJECTION_CAP).map(|s| s.complex))
}

/// Normalized Laplacian spectrum of a multigraph on `n` vertices.
#[pyfunction]
fn laplacian_spectrum(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Vec<f64>> {
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
        return Err(PyValueError::new_err(format!(
            "edge ({u}, {v}) out of range"
        )));
    }
    spectral::spectrum(&Multigraph::new(n, edges)).map_err(to_py)
}

/// Criterion threshold as `(numerator, denominator)`.
#[pyfunction]
fn threshold(k: usize, kind: &str) -> PyResult<(String, String)> {
    let kind = match kind {
        "simplicial" => ComplexKind::Simplicial,
        "cubical" => ComplexKind::Cubical,
        _ => return Err(PyValueError::new_err(format!("unknown kind '{kind}'"))),
    };
    let t = spectral::threshold(k, kind);
    Ok((t.numer().to_string(), t.denom().to_string()))
}

/// Runs seeded trials; returns the CSV text and the summary dict.
#[pyfunction]
#[pyo3(signature = (model, h, d, k, trials, seed=0, threads=None))]
#[allow(clippy::too_many_arguments)]
fn experiment(
    py: Python<'_>,
    model: &str,
    h: usize,
    d: usize,
    k: usize,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> PyResult<(String, PyObject)> {
    let model: Model = model.parse().map_err(to_py)?;
    let mut cfg = ExperimentConfig::new(model, h, d, k, trials, seed);
    cfg.threads = threads;
    let records = py.allow_threads(|| run_experiment(&cfg)).map_err(to_py)?;
    let summary = summarize(&cfg, &records);
    Ok((to_csv(&records), to_object(py, &summary)?))
}

#[pymodule]
fn garland(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyComplex>()?;
    m.add_function(wrap_pyfunction!(torus_cubical, m)?)?;
    m.add_function(wrap_pyfunction!(torus_simplicial, m)?)?;
    m.add_function(wrap_pyfunction!(library, m)?)?;
    m.add_function(wrap_pyfunction!(from_simplices, m)?)?;
    m.add_function(wrap_pyfunction!(random_complex, m)?)?;
    m.add_function(wrap_pyfunction!(laplacian_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(experiment, m)?)?;
    m.add("GarlandError", py.get_type::<GarlandException>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("StructureError", py.get_type::<StructureError>())?;
    m.add("NumericError", py.get_type::<NumericError>())?;
    Ok(())
}
