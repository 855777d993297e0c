use pyo3::exceptions::{PyArithmeticError, PyIOError, PyValueError};
use pyo3::prelude::*;

use nodetopo::graph::{parse_edge_list, parse_off_mesh};
use nodetopo::pipeline::node_descriptor_from_field;
use nodetopo::vectorize::{self, ImageParams, VectorizeGrid};
use nodetopo::{
    brute_force_zero_persistence, lower_star, zero_persistence, DistanceMatrix, Encoder, Error, FinitizePolicy,
    PersistenceDiagram, ScalarField, WalkConfig, WeightedGraph,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ if e.is_numeric() => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for nodetopo::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "Graph", module = "nodetopo")]
struct PyGraph {
    inner: WeightedGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n_vertices, edges))]
    fn new(n_vertices: usize, edges: Vec<(usize, usize, f64)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: WeightedGraph::new(n_vertices, edges).py()?,
        })
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_edge_list(text).py()?,
        })
    }

    #[staticmethod]
    fn from_off(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_off_mesh(text).py()?,
        })
    }

    /// Edge list or `.off` mesh, chosen by extension.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: nodetopo::load_graph(path).py()?,
        })
    }

    #[getter]
    fn n_vertices(&self) -> usize {
        self.inner.n_vertices()
    }

    #[getter]
    fn n_edges(&self) -> usize {
        self.inner.n_edges()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize, f64)> {
        self.inner.edges().iter().map(|e| (e.u, e.v, e.weight)).collect()
    }

    #[getter]
    fn fingerprint(&self) -> u64 {
        self.inner.fingerprint()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.inner.check_vertex(v).py()?;
        Ok(self.inner.degree(v))
    }

    fn components(&self) -> Vec<Vec<usize>> {
        self.inner.connected_components()
    }

    /// `(subgraph, original ids)` of the `hops`-neighbourhood of `center`.
    fn ego_network(&self, center: usize, hops: usize) -> PyResult<(PyGraph, Vec<usize>)> {
        let (inner, remap) = self.inner.ego_network(center, hops).py()?;
        Ok((PyGraph { inner }, remap))
    }

    fn to_edge_list(&self) -> String {
        self.inner.to_edge_list_string()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n_vertices={}, n_edges={})", self.inner.n_vertices(), self.inner.n_edges())
    }
}

#[pyclass(name = "Diagram", module = "nodetopo")]
struct PyDiagram {
    inner: PersistenceDiagram,
}

#[pymethods]
impl PyDiagram {
    #[new]
    #[pyo3(signature = (finite, essential = Vec::new()))]
    fn new(finite: Vec<(f64, f64)>, essential: Vec<f64>) -> PyResult<Self> {
        let mut d = PersistenceDiagram::from_pairs(finite);
        d.f_max = essential.iter().copied().fold(d.f_max, f64::max);
        d.essential = essential;
        // round-trip through the validating reader
        let inner = PersistenceDiagram::from_json(&d.to_json()).py()?;
        Ok(PyDiagram { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyDiagram {
            inner: PersistenceDiagram::from_json(text).py()?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn finite(&self) -> Vec<(f64, f64)> {
        self.inner.finite.clone()
    }

    #[getter]
    fn essential(&self) -> Vec<f64> {
        self.inner.essential.clone()
    }

    #[getter]
    fn f_max(&self) -> f64 {
        self.inner.f_max
    }

    /// `"cap"` or `"drop"`.
    fn finitize(&self, policy: &str) -> PyResult<PyDiagram> {
        let p: FinitizePolicy = policy.parse().py()?;
        Ok(PyDiagram {
            inner: self.inner.finitize(p),
        })
    }

    fn same_multiset(&self, other: &PyDiagram) -> bool {
        self.inner.same_multiset(&other.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Diagram(finite={}, essential={})",
            self.inner.finite.len(),
            self.inner.essential.len()
        )
    }
}

fn field(g: &PyGraph, values: Vec<f64>) -> PyResult<ScalarField> {
    ScalarField::new(&g.inner, values).py()
}

#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (
    graph, encoder = "degree", seed = 0, walks_per_node = None, walk_length = None, window = None,
    negatives = None, epochs = None, learning_rate = None, p = None, q = None, diffusion_size = None
))]
fn embed(
    graph: &PyGraph,
    encoder: &str,
    seed: u64,
    walks_per_node: Option<usize>,
    walk_length: Option<usize>,
    window: Option<usize>,
    negatives: Option<usize>,
    epochs: Option<usize>,
    learning_rate: Option<f64>,
    p: Option<f64>,
    q: Option<f64>,
    diffusion_size: Option<usize>,
) -> PyResult<Vec<f64>> {
    let enc: Encoder = encoder.parse().py()?;
    let d = WalkConfig::default();
    let cfg = WalkConfig {
        walks_per_node: walks_per_node.unwrap_or(d.walks_per_node),
        walk_length: walk_length.unwrap_or(d.walk_length),
        window: window.unwrap_or(d.window),
        negatives: negatives.unwrap_or(d.negatives),
        epochs: epochs.unwrap_or(d.epochs),
        learning_rate: learning_rate.unwrap_or(d.learning_rate),
        seed,
        p: p.unwrap_or(d.p),
        q: q.unwrap_or(d.q),
        diffusion_size: diffusion_size.unwrap_or(d.diffusion_size),
    };
    Ok(enc.embed(&graph.inner, &cfg).py()?.values().to_vec())
}

/// Zero-dimensional persistence of the lower-star filtration of `values`.
#[pyfunction]
fn diagram(graph: &PyGraph, values: Vec<f64>) -> PyResult<PyDiagram> {
    let f = field(graph, values)?;
    Ok(PyDiagram {
        inner: zero_persistence(&lower_star(&graph.inner, &f).py()?),
    })
}

#[pyfunction]
fn brute_force_diagram(graph: &PyGraph, values: Vec<f64>) -> PyResult<PyDiagram> {
    let f = field(graph, values)?;
    Ok(PyDiagram {
        inner: brute_force_zero_persistence(&graph.inner, &f).py()?,
    })
}

#[pyfunction]
#[pyo3(signature = (graph, values, center, hops, finitize = None))]
fn node_diagram(
    graph: &PyGraph,
    values: Vec<f64>,
    center: usize,
    hops: usize,
    finitize: Option<&str>,
) -> PyResult<PyDiagram> {
    let f = field(graph, values)?;
    let policy = finitize.map(str::parse::<FinitizePolicy>).transpose().py()?;
    Ok(PyDiagram {
        inner: node_descriptor_from_field(&graph.inner, &f, center, hops, policy).py()?,
    })
}

#[pyfunction]
#[pyo3(signature = (x, y, q = 2.0))]
fn wasserstein(x: &PyDiagram, y: &PyDiagram, q: f64) -> PyResult<f64> {
    nodetopo::wasserstein(&x.inner, &y.inner, q).py()
}

#[pyfunction]
fn bottleneck(x: &PyDiagram, y: &PyDiagram) -> PyResult<f64> {
    nodetopo::bottleneck(&x.inner, &y.inner).py()
}

#[pyfunction]
#[pyo3(signature = (diagrams, q = 2.0))]
fn distance_matrix(diagrams: Vec<PyRef<'_, PyDiagram>>, q: f64) -> PyResult<Vec<Vec<f64>>> {
    let ds: Vec<PersistenceDiagram> = diagrams.iter().map(|d| d.inner.clone()).collect();
    let labels: Vec<String> = (0..ds.len()).map(|i| i.to_string()).collect();
    Ok(nodetopo::distance_matrix(&labels, &ds, q).py()?.values)
}

#[pyfunction]
fn betti_curve(d: &PyDiagram, t_min: f64, t_max: f64, resolution: usize) -> PyResult<Vec<f64>> {
    let grid = VectorizeGrid::new(t_min, t_max, resolution).py()?;
    Ok(vectorize::betti_curve(&d.inner, &grid).py()?.values)
}

/// Levels are concatenated: all samples of the first level, then the second.
#[pyfunction]
fn landscape(d: &PyDiagram, levels: usize, t_min: f64, t_max: f64, resolution: usize) -> PyResult<Vec<f64>> {
    let grid = VectorizeGrid::new(t_min, t_max, resolution).py()?;
    Ok(vectorize::landscape(&d.inner, levels, &grid).py()?.values)
}

#[allow(clippy::too_many_arguments)]
#[pyfunction]
#[pyo3(signature = (d, nx, ny, sigma, x_min, x_max, y_min, y_max, max_persistence = None))]
fn persistence_image(
    d: &PyDiagram,
    nx: usize,
    ny: usize,
    sigma: f64,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    max_persistence: Option<f64>,
) -> PyResult<Vec<f64>> {
    let params = ImageParams {
        nx,
        ny,
        sigma,
        x_min,
        x_max,
        y_min,
        y_max,
        max_persistence,
    };
    Ok(vectorize::persistence_image(&d.inner, &params).py()?.values)
}

/// Classical multidimensional scaling of a symmetric distance matrix.
#[pyfunction]
#[pyo3(signature = (matrix, dim = 2))]
fn mds(matrix: Vec<Vec<f64>>, dim: usize) -> PyResult<Vec<Vec<f64>>> {
    let m = DistanceMatrix {
        labels: (0..matrix.len()).map(|i| i.to_string()).collect(),
        values: matrix,
    };
    nodetopo::mds_project(&m, dim).py()
}

#[pymodule]
#[pyo3(name = "nodetopo")]
fn nodetopo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyDiagram>()?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(diagram, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(node_diagram, m)?)?;
    m.add_function(wrap_pyfunction!(wasserstein, m)?)?;
    m.add_function(wrap_pyfunction!(bottleneck, m)?)?;
    m.add_function(wrap_pyfunction!(distance_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(betti_curve, m)?)?;
    m.add_function(wrap_pyfunction!(landscape, m)?)?;
    m.add_function(wrap_pyfunction!(persistence_image, m)?)?;
    m.add_function(wrap_pyfunction!(mds, m)?)?;
    Ok(())
}
