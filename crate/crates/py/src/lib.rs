use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use obmf::bitmat::{self, BinaryMatrix};
use obmf::factorizer::{self, to_report};
use obmf::optset;
use obmf::render::{self, Layout, RenderSpec};
use obmf::synth;
use obmf::{Error, FactorizeOptions, IndexSet, SeedMode, Variant};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Incompatible => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "BinaryMatrix", module = "pyobmf", frozen, from_py_object)]
#[derive(Clone)]
struct PyMatrix(BinaryMatrix);

#[pymethods]
impl PyMatrix {
    /// Builds a matrix from nested lists of 0/1 (bools work too).
    #[new]
    fn new(rows: Vec<Vec<i64>>) -> PyResult<Self> {
        let rows = rows
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(PyValueError::new_err(format!("entries must be 0 or 1, got {v}"))),
                    })
                    .collect::<PyResult<Vec<bool>>>()
            })
            .collect::<PyResult<Vec<_>>>()?;
        BinaryMatrix::from_rows(&rows).map(PyMatrix).map_err(py_err)
    }

    #[staticmethod]
    fn from_cells(n_rows: usize, n_cols: usize, cells: Vec<(usize, usize)>) -> PyResult<Self> {
        BinaryMatrix::from_cells(n_rows, n_cols, cells).map(PyMatrix).map_err(py_err)
    }

    #[staticmethod]
    fn parse_dense(text: &str) -> PyResult<Self> {
        bitmat::load_dense(text).map(PyMatrix).map_err(py_err)
    }

    #[staticmethod]
    fn parse_sparse(text: &str) -> PyResult<Self> {
        bitmat::load_sparse(text).map(PyMatrix).map_err(py_err)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    #[getter]
    fn nnz(&self) -> usize {
        self.0.nnz()
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.0.get(i, j)
    }

    fn cells(&self) -> Vec<(usize, usize)> {
        self.0.cells().collect()
    }

    fn to_rows(&self) -> Vec<Vec<bool>> {
        self.0.to_rows()
    }

    fn to_dense(&self) -> String {
        bitmat::to_dense_string(&self.0)
    }

    fn to_sparse(&self) -> String {
        bitmat::to_sparse_string(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("BinaryMatrix({}x{}, nnz={})", self.0.n_rows(), self.0.n_cols(), self.0.nnz())
    }
}

fn index_set(universe: usize, items: Vec<usize>) -> PyResult<IndexSet> {
    IndexSet::new(universe, items).map_err(py_err)
}

#[pyclass(name = "PqTree", module = "pyobmf")]
struct PyTree(obmf::PqTree);

#[pymethods]
impl PyTree {
    /// Tree over `0..n` admitting every permutation.
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        obmf::PqTree::universal(n).map(PyTree).map_err(py_err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(PyTree).map_err(py_err)
    }

    #[getter]
    fn universe(&self) -> usize {
        self.0.universe()
    }

    /// Restricts to orders keeping `items` contiguous; raises RuntimeError if impossible.
    fn reduce(&mut self, items: Vec<usize>) -> PyResult<()> {
        let set = index_set(self.0.universe(), items)?;
        self.0.reduce(&set).map_err(py_err)
    }

    fn admits(&self, items: Vec<usize>) -> PyResult<bool> {
        let set = index_set(self.0.universe(), items)?;
        self.0.admits(&set).map_err(py_err)
    }

    fn frontier(&self) -> Vec<usize> {
        self.0.frontier()
    }

    fn orders(&self) -> PyResult<Vec<Vec<usize>>> {
        self.0.enumerate_orders().map(|o| o.into_iter().collect()).map_err(py_err)
    }

    /// Best-weight set contiguous in some admitted order, with its weight.
    #[pyo3(signature = (weights, cyclic = false))]
    fn best_set(&self, weights: Vec<i64>, cyclic: bool) -> PyResult<(Vec<usize>, i64)> {
        let w = optset::WeightVector(weights);
        let (set, gain) =
            if cyclic { optset::best_cyclic_set(&self.0, &w) } else { optset::best_compatible_set(&self.0, &w) }
                .map_err(py_err)?;
        Ok((set.as_slice().to_vec(), gain))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PqTree({})", self.0)
    }
}

#[pyclass(name = "Factorization", module = "pyobmf", frozen)]
struct PyFactorization(obmf::Factorization);

#[pymethods]
impl PyFactorization {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        factorizer::parse_report(text).map(PyFactorization).map_err(py_err)
    }

    #[getter]
    fn variant(&self) -> &'static str {
        self.0.variant.name()
    }

    #[getter]
    fn error(&self) -> u64 {
        self.0.error
    }

    #[getter]
    fn relative_error(&self) -> Option<f64> {
        self.0.relative_error
    }

    #[getter]
    fn rank_used(&self) -> usize {
        self.0.rank_used()
    }

    #[getter]
    fn row_order(&self) -> Vec<usize> {
        self.0.row_order.clone()
    }

    #[getter]
    fn col_order(&self) -> Vec<usize> {
        self.0.col_order.clone()
    }

    /// `(rows, cols)` per factor.
    #[getter]
    fn factors(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.0.factors.iter().map(|f| (f.rows.as_slice().to_vec(), f.cols.as_slice().to_vec())).collect()
    }

    fn reconstruct(&self) -> PyMatrix {
        PyMatrix(bitmat::reconstruct(&self.0))
    }

    fn is_valid(&self) -> PyResult<bool> {
        self.0.is_valid().map_err(py_err)
    }

    fn report(&self) -> String {
        to_report(&self.0)
    }

    /// SVG text; `layout` is circular, linear or heatmap (which needs `matrix`).
    #[pyo3(signature = (layout = "circular", matrix = None, labels = None))]
    fn render(&self, layout: &str, matrix: Option<PyMatrix>, labels: Option<Vec<String>>) -> PyResult<String> {
        let layout: Layout = layout.parse().map_err(py_err)?;
        let mut spec = RenderSpec::new(layout);
        spec.labels = labels;
        render::render(matrix.as_ref().map(|m| &m.0), &self.0, &spec).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Factorization({}, rank {}, error {})", self.0.variant, self.0.rank_used(), self.0.error)
    }
}

#[pyfunction]
#[pyo3(signature = (matrix, k, variant = "plain", seeds = "all", rng_seed = 0, threads = 1))]
fn factorize(
    py: Python<'_>,
    matrix: &PyMatrix,
    k: usize,
    variant: &str,
    seeds: &str,
    rng_seed: u64,
    threads: usize,
) -> PyResult<PyFactorization> {
    let variant: Variant = variant.parse().map_err(py_err)?;
    let seeds: SeedMode = seeds.parse().map_err(py_err)?;
    let mut opts = FactorizeOptions::new(k, variant);
    opts.seeds = seeds;
    opts.rng_seed = rng_seed;
    opts.threads = threads;
    let d = matrix.0.clone();
    py.detach(|| obmf::factorize(&d, &opts)).map(PyFactorization).map_err(py_err)
}

#[pyfunction]
fn gen_blocks(n_blocks: usize, block_size: usize, overlap: usize) -> PyResult<PyMatrix> {
    let spec = synth::BlockSpec::new(n_blocks, block_size, overlap).map_err(py_err)?;
    synth::gen_blocks(&spec).map(PyMatrix).map_err(py_err)
}

#[pyfunction]
fn flip_noise(matrix: &PyMatrix, rate: f64, rng_seed: u64) -> PyResult<PyMatrix> {
    synth::flip_noise(&matrix.0, rate, rng_seed).map(PyMatrix).map_err(py_err)
}

#[pyfunction]
fn gen_random(n: usize, density: f64, rng_seed: u64) -> PyResult<PyMatrix> {
    synth::gen_random(n, density, rng_seed).map(PyMatrix).map_err(py_err)
}

#[pyfunction]
fn hamming_error(a: &PyMatrix, b: &PyMatrix) -> PyResult<u64> {
    bitmat::hamming_error(&a.0, &b.0).map_err(py_err)
}

#[pymodule]
fn pyobmf(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyTree>()?;
    m.add_class::<PyFactorization>()?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(gen_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(flip_noise, m)?)?;
    m.add_function(wrap_pyfunction!(gen_random, m)?)?;
    m.add_function(wrap_pyfunction!(hamming_error, m)?)?;
    Ok(())
}
