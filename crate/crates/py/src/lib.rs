//! Python bindings: the tree model, the five counting methods, the identity
//! checks, the bijections, and the matrix/series verifiers, exposed as a
//! single `mdst` extension module.

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;

use mdst_core::counting::{self, Method};
use mdst_core::linalg;
use mdst_core::maps::{self, AlphaFunction, EndoFunction, MissingSet, ShiftedFunction};
use mdst_core::series::{self, GenIdentity};
use mdst_core::trees::{RootedLabeledTree, DEFAULT_ENUM_CAP};

fn to_py_err(e: mdst_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_method(name: &str) -> PyResult<Method> {
    name.parse().map_err(PyValueError::new_err)
}

/// A rooted labeled tree on `{0,..,n}` given as a parent list with `None`
/// at the root index.
#[pyclass(frozen)]
struct Tree {
    inner: RootedLabeledTree,
}

#[pymethods]
impl Tree {
    #[new]
    fn new(parent: Vec<Option<usize>>, root: usize) -> PyResult<Self> {
        Ok(Tree {
            inner: RootedLabeledTree::new(parent, root).map_err(to_py_err)?,
        })
    }

    /// Parse the JSON wire form `{"n":..,"root":..,"parent":[..]}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Tree {
            inner: serde_json::from_str(text)
                .map_err(|e| PyValueError::new_err(format!("bad tree JSON: {e}")))?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn root(&self) -> usize {
        self.inner.root()
    }

    #[getter]
    fn parent(&self) -> Vec<Option<usize>> {
        self.inner.parent_array().to_vec()
    }

    /// Sorted vertex set of the maximal decreasing subtree.
    fn md_vertices(&self) -> Vec<usize> {
        self.inner
            .maximal_decreasing_subtree()
            .vertices
            .into_iter()
            .collect()
    }

    /// The refinement statistic `|MD(T)| - 1`.
    fn md_k(&self) -> usize {
        self.inner.md_statistic()
    }

    fn is_local_minimum(&self) -> bool {
        self.inner.is_local_minimum()
    }

    /// The local-minimum pieces left by cutting the decreasing-subtree
    /// edges, as dicts with `root`, `labels` and `md_parent`, ordered by
    /// root label.
    fn decompose<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let mut items = Vec::new();
        for piece in self.inner.decompose() {
            let d = PyDict::new(py);
            d.set_item("root", piece.original_root())?;
            d.set_item("labels", piece.label_set())?;
            d.set_item("md_parent", piece.md_parent)?;
            items.push(d);
        }
        PyList::new(py, items)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("tree serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "Tree(n={}, root={}, k={})",
            self.inner.n(),
            self.inner.root(),
            self.inner.md_statistic()
        )
    }
}

/// One triangle row as a list of Python ints.
#[pyfunction]
#[pyo3(signature = (n, method = "stirling", enum_cap = DEFAULT_ENUM_CAP))]
fn triangle_row(n: usize, method: &str, enum_cap: usize) -> PyResult<Vec<BigInt>> {
    let row = counting::triangle_row(n, parse_method(method)?, enum_cap).map_err(to_py_err)?;
    Ok(row.values().to_vec())
}

/// A single triangle entry.
#[pyfunction]
#[pyo3(signature = (n, k, method = "stirling", enum_cap = DEFAULT_ENUM_CAP))]
fn tree_count(n: usize, k: usize, method: &str, enum_cap: usize) -> PyResult<BigInt> {
    if k > n {
        return Err(PyValueError::new_err(format!("k={k} exceeds n={n}")));
    }
    let row = counting::triangle_row(n, parse_method(method)?, enum_cap).map_err(to_py_err)?;
    Ok(row.values()[k].clone())
}

fn identity_to_dict<'py>(
    py: Python<'py>,
    check: counting::IdentityCheck,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("identity", check.identity)?;
    d.set_item("n", check.n)?;
    d.set_item("alpha", check.alpha)?;
    d.set_item("lhs", check.lhs)?;
    d.set_item("rhs", check.rhs)?;
    d.set_item("pass", check.pass)?;
    Ok(d)
}

/// `sum_k count = (n+1)^n`.
#[pyfunction]
fn check_row_sum(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyDict>> {
    identity_to_dict(py, counting::check_row_sum(n))
}

/// `sum_k (k+1) count = (n+2)^n`.
#[pyfunction]
fn check_weighted_sum(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyDict>> {
    identity_to_dict(py, counting::check_weighted_sum(n))
}

/// `sum_k C(k+alpha,alpha) count = (n+1+alpha)^n`.
#[pyfunction]
fn check_alpha_sum(py: Python<'_>, n: usize, alpha: usize) -> PyResult<Bound<'_, PyDict>> {
    identity_to_dict(py, counting::check_alpha_sum(n, alpha))
}

/// `sum_{k>=1} count/k = n^n` in exact rationals; requires n >= 1.
#[pyfunction]
fn check_harmonic_sum(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyDict>> {
    identity_to_dict(py, counting::check_harmonic_sum(n).map_err(to_py_err)?)
}

/// Shift values `<= k` down by one (bijection onto maps covering
/// `{0,..,k-1}` and missing `k`).
#[pyfunction]
fn shift_down(f: Vec<usize>, k: usize) -> PyResult<Vec<usize>> {
    let f = EndoFunction::new(f).map_err(to_py_err)?;
    Ok(maps::shift_down(&f, k).map_err(to_py_err)?.values().to_vec())
}

/// Inverse of `shift_down`.
#[pyfunction]
fn shift_up(g: Vec<usize>, k: usize) -> PyResult<Vec<usize>> {
    let g = ShiftedFunction::new(g).map_err(to_py_err)?;
    Ok(maps::shift_up(&g, k).map_err(to_py_err)?.values().to_vec())
}

/// The unique threshold class of a map `[n] -> {0,..,n}`.
#[pyfunction]
fn classify_shifted(g: Vec<usize>) -> PyResult<usize> {
    let g = ShiftedFunction::new(g).map_err(to_py_err)?;
    Ok(maps::classify_shifted(&g))
}

/// Compose the shifted form of `f` with the order embedding that skips
/// `missing`, landing in `{-alpha,..,n}`.
#[pyfunction]
fn encode_alpha(missing: Vec<i64>, f: Vec<usize>, k: usize, alpha: usize) -> PyResult<Vec<i64>> {
    let f = EndoFunction::new(f).map_err(to_py_err)?;
    let missing = MissingSet::new(missing, alpha, k).map_err(to_py_err)?;
    Ok(maps::encode_alpha(&missing, &f, k, alpha)
        .map_err(to_py_err)?
        .values()
        .to_vec())
}

/// Invert `encode_alpha`: returns `(k, missing, f)`.
#[pyfunction]
fn decode_alpha(h: Vec<i64>, alpha: usize) -> PyResult<(usize, Vec<i64>, Vec<usize>)> {
    let h = AlphaFunction::new(h, alpha).map_err(to_py_err)?;
    let (k, missing, f) = maps::decode_alpha(&h);
    Ok((k, missing.elements().to_vec(), f.values().to_vec()))
}

/// Full demo record for one bijection run, as a dict.
#[pyfunction]
#[pyo3(signature = (f, k, alpha = 0, missing = vec![]))]
fn bijection_record(
    py: Python<'_>,
    f: Vec<usize>,
    k: usize,
    alpha: usize,
    missing: Vec<i64>,
) -> PyResult<Py<PyAny>> {
    let f = EndoFunction::new(f).map_err(to_py_err)?;
    let missing = MissingSet::new(missing, alpha, k).map_err(to_py_err)?;
    let record = maps::bijection_record(&f, k, alpha, &missing).map_err(to_py_err)?;
    json_to_py(py, &record)
}

fn json_to_py(py: Python<'_>, value: &serde_json::Value) -> PyResult<Py<PyAny>> {
    use serde_json::Value;
    match value {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_py_any(py)
            } else {
                n.as_f64().expect("number fits f64").into_py_any(py)
            }
        }
        Value::String(s) => s.into_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_py_any(py)
        }
        Value::Object(entries) => {
            let dict = PyDict::new(py);
            for (key, item) in entries {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_py_any(py)
        }
    }
}

/// Exhaustive count of endofunctions whose image covers `{1,..,k}`.
#[pyfunction]
#[pyo3(signature = (n, k, cap = maps::DEFAULT_FUNCTION_ENUM_CAP))]
fn count_covering_functions(n: usize, k: usize, cap: usize) -> PyResult<u64> {
    maps::count_covering_functions(n, k, cap).map_err(to_py_err)
}

/// Exhaustive count of maps `[n] -> {-alpha,..,n}` in the class `k`.
#[pyfunction]
#[pyo3(signature = (n, k, alpha, limit = maps::DEFAULT_SPACE_LIMIT))]
fn count_alpha_functions(n: usize, k: usize, alpha: usize, limit: u64) -> PyResult<u64> {
    maps::count_alpha_functions(n, k, alpha, limit).map_err(to_py_err)
}

/// The symmetric Pascal matrix of size n+1, entry `(i,j) = C(i+j,i)`.
#[pyfunction]
fn pascal_matrix(n: usize) -> Vec<Vec<BigInt>> {
    matrix_rows(&linalg::pascal_matrix(n))
}

/// Its closed-form inverse.
#[pyfunction]
fn pascal_inverse_matrix(n: usize) -> Vec<Vec<BigInt>> {
    matrix_rows(&linalg::pascal_inverse_matrix(n))
}

fn matrix_rows(m: &linalg::ExactMatrix) -> Vec<Vec<BigInt>> {
    (0..m.size())
        .map(|i| (0..m.size()).map(|j| m.get(i, j).clone()).collect())
        .collect()
}

/// The power vector `((n+1)^n, .., (2n+1)^n)`.
#[pyfunction]
fn power_vector(n: usize) -> Vec<BigInt> {
    linalg::power_vector(n)
}

/// True iff the Pascal matrix and its closed-form inverse multiply to the
/// identity both ways.
#[pyfunction]
fn verify_inverse(n: usize) -> bool {
    linalg::verify_inverse(n)
}

/// The triangle row recovered as `inverse * power_vector`.
#[pyfunction]
fn triangle_via_matrix(n: usize) -> Vec<BigInt> {
    linalg::triangle_via_matrix(n)
}

/// Verify one of the generating identities (`"gen1"`, `"gen2"`, `"gen3"`)
/// through `x^order`.
#[pyfunction]
#[pyo3(signature = (which, order = 12))]
fn verify_generating_identity(which: &str, order: usize) -> PyResult<bool> {
    let which: GenIdentity = which.parse().map_err(PyValueError::new_err)?;
    Ok(series::verify_generating_identity(which, order).pass)
}

#[pymodule]
fn mdst(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("DEFAULT_ENUM_CAP", DEFAULT_ENUM_CAP)?;
    m.add_class::<Tree>()?;
    m.add_function(wrap_pyfunction!(triangle_row, m)?)?;
    m.add_function(wrap_pyfunction!(tree_count, m)?)?;
    m.add_function(wrap_pyfunction!(check_row_sum, m)?)?;
    m.add_function(wrap_pyfunction!(check_weighted_sum, m)?)?;
    m.add_function(wrap_pyfunction!(check_alpha_sum, m)?)?;
    m.add_function(wrap_pyfunction!(check_harmonic_sum, m)?)?;
    m.add_function(wrap_pyfunction!(shift_down, m)?)?;
    m.add_function(wrap_pyfunction!(shift_up, m)?)?;
    m.add_function(wrap_pyfunction!(classify_shifted, m)?)?;
    m.add_function(wrap_pyfunction!(encode_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(decode_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(bijection_record, m)?)?;
    m.add_function(wrap_pyfunction!(count_covering_functions, m)?)?;
    m.add_function(wrap_pyfunction!(count_alpha_functions, m)?)?;
    m.add_function(wrap_pyfunction!(pascal_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(pascal_inverse_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(power_vector, m)?)?;
    m.add_function(wrap_pyfunction!(verify_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(triangle_via_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(verify_generating_identity, m)?)?;
    Ok(())
}
