use std::path::PathBuf;
use std::sync::Arc;

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use horograph::connection::{self, Preset};
use horograph::pointset::{self, Point};
use horograph::{graphgen, io, spectral, stats, walks, Error};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NotConverged { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) | Error::Csv(_) | Error::Data { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Points on a `width × height` rectangle.
#[pyclass(name = "PointSet", frozen, module = "horograph_py")]
struct PyPointSet {
    inner: Arc<pointset::PointSet>,
}

#[pymethods]
impl PyPointSet {
    #[new]
    #[pyo3(signature = (coords, width, height))]
    fn new(coords: Vec<(f64, f64)>, width: f64, height: f64) -> PyResult<Self> {
        let pts = coords.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let inner = pointset::PointSet::new(pts, (width, height), "python").map_err(to_py)?;
        Ok(PyPointSet { inner: Arc::new(inner) })
    }

    #[staticmethod]
    #[pyo3(signature = (n, width = 8.0, height = 8.0, seed = 0))]
    fn uniform(n: usize, width: f64, height: f64, seed: u64) -> PyResult<Self> {
        let inner = pointset::sample_uniform(n, width, height, seed).map_err(to_py)?;
        Ok(PyPointSet { inner: Arc::new(inner) })
    }

    #[staticmethod]
    #[pyo3(signature = (nx, ny, width = 8.0, height = 8.0))]
    fn grid(nx: usize, ny: usize, width: f64, height: f64) -> PyResult<Self> {
        let inner = pointset::make_grid(nx, ny, width, height).map_err(to_py)?;
        Ok(PyPointSet { inner: Arc::new(inner) })
    }

    /// The France model; `cities` is a TOML city list, the built-in list when omitted.
    #[staticmethod]
    #[pyo3(signature = (seed = 0, cities = None, total_n = 6000, grid = 60))]
    fn france(seed: u64, cities: Option<PathBuf>, total_n: usize, grid: usize) -> PyResult<Self> {
        let list = match cities {
            Some(path) => pointset::load_cities(&path),
            None => pointset::parse_cities(horograph::runner::DEFAULT_CITIES_TOML),
        }
        .map_err(to_py)?;
        let params = pointset::FranceParams { grid_nx: grid, grid_ny: grid, total_n, bbox: (8.0, 8.0) };
        let inner = pointset::france_model(&list, &params, seed).map_err(to_py)?;
        Ok(PyPointSet { inner: Arc::new(inner) })
    }

    #[staticmethod]
    fn load_csv(path: PathBuf, width: f64, height: f64) -> PyResult<Self> {
        let inner = io::read_points(&path, (width, height), "file").map_err(to_py)?;
        Ok(PyPointSet { inner: Arc::new(inner) })
    }

    fn save_csv(&self, path: PathBuf) -> PyResult<()> {
        io::write_points(&path, &self.inner).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn coords(&self) -> Vec<(f64, f64)> {
        self.inner.points().iter().map(|p| (p.x, p.y)).collect()
    }

    fn distance(&self, i: usize, j: usize) -> PyResult<f64> {
        if i >= self.inner.len() || j >= self.inner.len() {
            return Err(PyValueError::new_err("point index out of range"));
        }
        Ok(self.inner.distance(i, j))
    }

    fn nearest(&self, x: f64, y: f64) -> Option<usize> {
        self.inner.nearest(Point::new(x, y))
    }

    fn __repr__(&self) -> String {
        let (w, h) = self.inner.bbox();
        format!("PointSet(n={}, box={w}x{h})", self.inner.len())
    }
}

/// Piecewise-constant distance → probability function.
#[pyclass(name = "ConnectionFunction", frozen, module = "horograph_py")]
struct PyConnectionFunction {
    inner: connection::ConnectionFunction,
}

#[pymethods]
impl PyConnectionFunction {
    /// `bands` is a list of `(outer_radius, probability)` pairs.
    #[new]
    fn new(bands: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(PyConnectionFunction { inner: connection::ConnectionFunction::from_bands(&bands).map_err(to_py)? })
    }

    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        Ok(PyConnectionFunction { inner: connection::ConnectionFunction::preset(name).map_err(to_py)? })
    }

    /// The five uniform-square functions, discretized into 100 bands.
    #[staticmethod]
    fn uniform_square() -> Vec<PyConnectionFunction> {
        connection::section51_functions().into_iter().map(|inner| PyConnectionFunction { inner }).collect()
    }

    fn __call__(&self, d: f64) -> PyResult<f64> {
        self.inner.eval(d).map_err(to_py)
    }

    fn bands(&self) -> Vec<(f64, f64)> {
        self.inner.radii().iter().copied().zip(self.inner.probs().iter().copied()).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.num_bands()
    }

    fn __repr__(&self) -> String {
        format!("ConnectionFunction(bands={:?})", self.bands())
    }
}

/// Simple undirected graph.
#[pyclass(name = "Graph", frozen, module = "horograph_py")]
struct PyGraph {
    inner: graphgen::Graph,
}

fn replication_dict<'py>(py: Python<'py>, rec: &walks::ReplicationRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    let events: Vec<(usize, usize, usize, usize)> =
        rec.spawn_events.iter().map(|e| (e.step, e.vertex, e.parent, e.child)).collect();
    d.set_item("start", rec.start)?;
    d.set_item("spawn_events", events)?;
    d.set_item("visited", rec.visited.clone())?;
    d.set_item("visited_counts", rec.visited_counts.clone())?;
    d.set_item("replicants", rec.replicants.len())?;
    d.set_item("walking_replicants", rec.walking_replicants())?;
    Ok(d)
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph { inner: graphgen::Graph::from_edges(n, edges).map_err(to_py)? })
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph { inner: graphgen::Graph::complete(n) }
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Ok(PyGraph { inner: graphgen::Graph::cycle(n).map_err(to_py)? })
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph { inner: graphgen::Graph::path(n) }
    }

    #[staticmethod]
    fn threshold(points: &PyPointSet, r: f64) -> PyResult<Self> {
        Ok(PyGraph { inner: graphgen::threshold_graph(&points.inner, r).map_err(to_py)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn degrees(&self) -> Vec<usize> {
        self.inner.degrees()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(v).map_err(to_py)?;
        Ok(self.inner.neighbors(v).iter().map(|&u| u as usize).collect())
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    /// Smallest non-zero eigenvalue of the normalized Laplacian.
    #[pyo3(signature = (tol = spectral::DEFAULT_TOL))]
    fn lambda1(&self, py: Python<'_>, tol: f64) -> PyResult<f64> {
        let g = &self.inner;
        py.detach(|| spectral::lambda1(g, tol)).map(|r| r.lambda1).map_err(to_py)
    }

    /// Full normalized-Laplacian spectrum, ascending (dense; small graphs only).
    fn spectrum(&self) -> PyResult<Vec<f64>> {
        spectral::dense_spectrum(&self.inner).map_err(to_py)
    }

    /// `(value, subset)` of the exact conductance.
    fn conductance(&self) -> PyResult<(f64, Vec<usize>)> {
        let w = spectral::conductance_bruteforce(&self.inner).map_err(to_py)?;
        Ok((w.conductance_value, w.subset))
    }

    fn expansion(&self) -> PyResult<f64> {
        Ok(spectral::expansion_constant_bruteforce(&self.inner).map_err(to_py)?.value)
    }

    fn cheeger<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = spectral::cheeger_check(&self.inner).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("lambda1", r.lambda1)?;
        d.set_item("phi", r.phi)?;
        d.set_item("lower_ok", r.lower_ok)?;
        d.set_item("upper_ok", r.upper_ok)?;
        Ok(d)
    }

    fn local_clustering(&self, v: usize) -> PyResult<f64> {
        stats::local_clustering(&self.inner, v).map_err(to_py)
    }

    fn average_clustering(&self) -> PyResult<f64> {
        stats::average_clustering(&self.inner).map_err(to_py)
    }

    fn sparsity(&self) -> PyResult<f64> {
        stats::sparsity(&self.inner).map_err(to_py)
    }

    #[pyo3(signature = (tol = spectral::DEFAULT_TOL))]
    fn summary<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let g = &self.inner;
        let s = py.detach(|| stats::summarize(g, tol)).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("n", s.n)?;
        d.set_item("edge_count", s.edge_count)?;
        d.set_item("lambda1", s.lambda1)?;
        d.set_item("sparsity", s.sparsity)?;
        d.set_item("max_valency", s.max_valency)?;
        d.set_item("avg_valency", s.avg_valency)?;
        d.set_item("avg_clustering", s.avg_clustering)?;
        Ok(d)
    }

    #[pyo3(signature = (start, steps, seed = 0))]
    fn simple_walk(&self, start: usize, steps: usize, seed: u64) -> PyResult<Vec<usize>> {
        Ok(walks::simple_walk(&self.inner, start, steps, seed).map_err(to_py)?.vertices)
    }

    #[pyo3(signature = (start, steps = 100, delay = 10, seed = 0))]
    fn replicating_walk<'py>(
        &self,
        py: Python<'py>,
        start: usize,
        steps: usize,
        delay: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let rec = walks::replicating_walk(&self.inner, start, steps, delay, seed).map_err(to_py)?;
        replication_dict(py, &rec)
    }

    #[pyo3(signature = (points, num_walks = 100, steps = 100, seed = 0))]
    fn walk_stats<'py>(
        &self,
        py: Python<'py>,
        points: &PyPointSet,
        num_walks: usize,
        steps: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let s = walks::batch_walk_stats(&self.inner, &points.inner, num_walks, steps, seed).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("mean_of_means", s.mean_of_means)?;
        d.set_item("sd_of_means", s.sd_of_means)?;
        d.set_item("mean_of_maxes", s.mean_of_maxes)?;
        d.set_item("sd_of_maxes", s.sd_of_maxes)?;
        Ok(d)
    }

    fn exact_distribution(&self, start: usize, n: usize) -> PyResult<Vec<f64>> {
        walks::exact_distribution(&self.inner, start, n).map_err(to_py)
    }

    fn stationary_distribution(&self) -> PyResult<Vec<f64>> {
        walks::stationary_distribution(&self.inner).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// Nested graph layers over a fixed point set.
#[pyclass(name = "LayeredGraph", frozen, module = "horograph_py")]
struct PyLayeredGraph {
    inner: graphgen::LayeredGraph,
}

#[pymethods]
impl PyLayeredGraph {
    #[getter]
    fn num_layers(&self) -> usize {
        self.inner.num_layers()
    }

    /// Layer `k` (1-based): all edges of bands `1..=k`.
    fn layer(&self, k: usize) -> PyResult<PyGraph> {
        Ok(PyGraph { inner: self.inner.layer(k).map_err(to_py)? })
    }

    fn graph(&self) -> PyGraph {
        PyGraph { inner: self.inner.graph() }
    }

    /// `(u, v, band)` triples, bands numbered from 1.
    fn edges(&self) -> Vec<(u32, u32, u16)> {
        self.inner.tagged_edges().iter().map(|e| (e.u, e.v, e.band + 1)).collect()
    }

    fn band_counts(&self) -> Vec<usize> {
        self.inner.band_counts().to_vec()
    }

    fn save_csv(&self, path: PathBuf) -> PyResult<()> {
        io::write_edges(&path, &self.inner).map_err(to_py)
    }
}

/// Samples the layered graph of `cf` on `points`.
#[pyfunction]
#[pyo3(signature = (points, cf, seed = 0))]
fn generate(py: Python<'_>, points: &PyPointSet, cf: &PyConnectionFunction, seed: u64) -> PyResult<PyLayeredGraph> {
    let pts = Arc::clone(&points.inner);
    let inner = py.detach(|| graphgen::generate(pts, &cf.inner, seed)).map_err(to_py)?;
    Ok(PyLayeredGraph { inner })
}

#[pyfunction]
fn presets() -> Vec<&'static str> {
    Preset::ALL.iter().map(|p| p.name()).collect()
}

#[pymodule]
fn horograph_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPointSet>()?;
    m.add_class::<PyConnectionFunction>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLayeredGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}
