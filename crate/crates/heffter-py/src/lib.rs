//! Python bindings: the array model, ring parameters, builders, verifiers,
//! orderings, the decomposition pipeline and the backtracking search.

use std::collections::BTreeMap;
use std::str::FromStr;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use heffter::array::Position;
use heffter::construct::BuiltinName;
use heffter::decomp::{
    build_relative_dfs, check_orthogonality, develop, difference_list, verify_decomposition,
    verify_df,
};
use heffter::orderings::OrderingPlan;
use heffter::search::{
    backtrack_search, NonexistenceCase, SearchMode, SearchSpec, SearchStatus, SkeletonConstraint,
    DEFAULT_BUDGET,
};
use heffter::verify::{HeffterReport, NecessityVerdict};

fn err(e: heffter::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "PFArray", from_py_object)]
#[derive(Clone)]
struct PyPFArray {
    inner: heffter::PFArray,
}

#[pymethods]
impl PyPFArray {
    #[new]
    fn new(rows: usize, cols: usize) -> PyResult<Self> {
        Ok(PyPFArray {
            inner: heffter::PFArray::new(rows, cols).map_err(err)?,
        })
    }

    /// Builds an array from row lists; None marks an empty cell.
    #[staticmethod]
    fn from_rows(rows: Vec<Vec<Option<i64>>>) -> PyResult<Self> {
        Ok(PyPFArray {
            inner: heffter::PFArray::from_rows(&rows).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(PyPFArray {
            inner: heffter::io::decode_csv(text).map_err(err)?,
        })
    }

    /// Parses a JSON document; returns (array, t).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<(Self, usize)> {
        let (inner, t, _) = heffter::io::decode_json(text).map_err(err)?;
        Ok((PyPFArray { inner }, t))
    }

    #[getter]
    fn rows(&self) -> usize {
        self.inner.n_rows()
    }

    #[getter]
    fn cols(&self) -> usize {
        self.inner.n_cols()
    }

    #[getter]
    fn filled(&self) -> usize {
        self.inner.filled()
    }

    fn insert(&mut self, row: usize, col: usize, value: i64) -> PyResult<()> {
        self.inner
            .insert(Position::new(row, col), value)
            .map_err(err)
    }

    fn get(&self, row: usize, col: usize) -> Option<i64> {
        self.inner.get(Position::new(row, col))
    }

    fn support(&self) -> Vec<i64> {
        self.inner.support()
    }

    fn skeleton(&self) -> Vec<(usize, usize)> {
        self.inner
            .skeleton()
            .iter()
            .map(|p| (p.row, p.col))
            .collect()
    }

    fn row_entries(&self, row: usize) -> Vec<i64> {
        self.inner.row_entries(row)
    }

    fn col_entries(&self, col: usize) -> Vec<i64> {
        self.inner.col_entries(col)
    }

    fn row_sum(&self, row: usize) -> i64 {
        self.inner.row_sum(row)
    }

    fn col_sum(&self, col: usize) -> i64 {
        self.inner.col_sum(col)
    }

    fn union_disjoint(&self, other: &PyPFArray) -> PyResult<Self> {
        Ok(PyPFArray {
            inner: self.inner.union_disjoint(&other.inner).map_err(err)?,
        })
    }

    fn shift(&self, x: i64) -> PyResult<Self> {
        Ok(PyPFArray {
            inner: self.inner.shift(x).map_err(err)?,
        })
    }

    fn is_shiftable(&self) -> bool {
        self.inner.is_shiftable()
    }

    fn rotate_cols(&self, offset: usize) -> Self {
        PyPFArray {
            inner: self.inner.rotate_cols(offset),
        }
    }

    fn is_cyclically_k_diagonal(&self, k: usize) -> PyResult<bool> {
        self.inner.is_cyclically_k_diagonal(k).map_err(err)
    }

    fn is_cyclically_sk_diagonal(&self, s: usize, k: usize) -> PyResult<bool> {
        self.inner.is_cyclically_sk_diagonal(s, k).map_err(err)
    }

    fn sk_diagonal_rotation(&self, s: usize, k: usize) -> PyResult<Option<usize>> {
        self.inner.sk_diagonal_rotation(s, k).map_err(err)
    }

    fn to_csv(&self) -> String {
        heffter::io::encode_csv(&self.inner)
    }

    fn to_json(&self, t: usize) -> String {
        heffter::io::encode_json(&self.inner, t, None)
    }

    fn __eq__(&self, other: &PyPFArray) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "PFArray({}x{}, {} filled)",
            self.inner.n_rows(),
            self.inner.n_cols(),
            self.inner.filled()
        )
    }
}

#[pyclass(name = "RingParams", from_py_object)]
#[derive(Clone)]
struct PyRingParams {
    inner: heffter::RingParams,
}

#[pymethods]
impl PyRingParams {
    #[new]
    fn new(m: usize, n: usize, s: usize, k: usize, t: usize) -> PyResult<Self> {
        Ok(PyRingParams {
            inner: heffter::RingParams::new(m, n, s, k, t).map_err(err)?,
        })
    }

    #[staticmethod]
    fn square(n: usize, k: usize, t: usize) -> PyResult<Self> {
        Ok(PyRingParams {
            inner: heffter::RingParams::square(n, k, t).map_err(err)?,
        })
    }

    #[getter]
    fn v(&self) -> i64 {
        self.inner.v()
    }

    #[getter]
    fn j_gen(&self) -> i64 {
        self.inner.j_gen()
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    #[getter]
    fn t(&self) -> usize {
        self.inner.t
    }

    fn subgroup(&self) -> Vec<i64> {
        self.inner.subgroup()
    }

    fn expected_support(&self) -> Vec<i64> {
        self.inner.expected_support()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "RingParams(m={}, n={}, s={}, k={}, t={})",
            p.m, p.n, p.s, p.k, p.t
        )
    }
}

fn report_to_dict<'py>(py: Python<'py>, report: &HeffterReport) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("passes", report.passes)?;
    let failures = PyList::empty(py);
    for f in &report.failures {
        let item = PyDict::new(py);
        item.set_item("condition", f.condition.to_string())?;
        item.set_item("location", &f.location)?;
        item.set_item("detail", &f.detail)?;
        failures.append(item)?;
    }
    dict.set_item("failures", failures)?;
    Ok(dict)
}

#[pyfunction]
fn verify_relative_heffter<'py>(
    py: Python<'py>,
    a: &PyPFArray,
    params: &PyRingParams,
) -> PyResult<Bound<'py, PyDict>> {
    report_to_dict(
        py,
        &heffter::verify::verify_relative_heffter(&a.inner, &params.inner),
    )
}

#[pyfunction]
fn verify_integer<'py>(
    py: Python<'py>,
    a: &PyPFArray,
    params: &PyRingParams,
) -> PyResult<Bound<'py, PyDict>> {
    report_to_dict(
        py,
        &heffter::verify::verify_integer(&a.inner, &params.inner),
    )
}

#[pyfunction]
fn check_necessary(n: usize, k: usize, t: usize) -> PyResult<String> {
    match heffter::verify::check_necessary(n, k, t).map_err(err)? {
        NecessityVerdict::RequiredConditionsHold => Ok("required-conditions-hold".to_string()),
        NecessityVerdict::RuledOut { clause } => Ok(format!("ruled-out: {clause}")),
    }
}

macro_rules! builder {
    ($name:ident) => {
        #[pyfunction]
        fn $name(n: usize) -> PyResult<PyPFArray> {
            Ok(PyPFArray {
                inner: heffter::construct::$name(n).map_err(err)?,
            })
        }
    };
}

builder!(build_h3_odd);
builder!(build_h3_even);
builder!(build_h4);
builder!(build_b4_filler);
builder!(build_h4_blocks);
builder!(build_b6_filler);
builder!(build_h5);
builder!(build_h6);

#[pyfunction]
fn builtin_example(name: &str) -> PyResult<PyPFArray> {
    let name = BuiltinName::from_str(name).map_err(err)?;
    Ok(PyPFArray {
        inner: heffter::construct::builtin_example(name),
    })
}

#[pyfunction]
fn build_hk(n: usize, k: usize) -> PyResult<PyPFArray> {
    Ok(PyPFArray {
        inner: heffter::extend::build_hk(n, k).map_err(err)?,
    })
}

#[pyfunction]
fn partial_sums(seq: Vec<i64>, v: i64) -> Vec<i64> {
    heffter::orderings::partial_sums(&seq, v)
}

#[pyfunction]
fn is_simple(seq: Vec<i64>, v: i64) -> bool {
    heffter::orderings::is_simple(&seq, v)
}

#[pyfunction]
fn find_simple_ordering(entries: Vec<i64>, v: i64) -> Option<Vec<i64>> {
    heffter::orderings::find_simple_ordering(&entries, v)
}

#[pyfunction]
fn ordering_plan<'py>(
    py: Python<'py>,
    a: &PyPFArray,
    params: &PyRingParams,
) -> PyResult<Option<Bound<'py, PyDict>>> {
    let plan = heffter::orderings::ordering_plan(&a.inner, &params.inner).map_err(err)?;
    plan.map(|p| plan_to_dict(py, &p)).transpose()
}

fn plan_to_dict<'py>(py: Python<'py>, plan: &OrderingPlan) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("row_orderings", plan.row_orderings.clone())?;
    dict.set_item("col_orderings", plan.col_orderings.clone())?;
    dict.set_item("modulus", plan.modulus)?;
    Ok(dict)
}

/// Full pipeline: simple orderings, row and column difference families,
/// developed decompositions, verification and orthogonality.
#[pyfunction]
fn decompose<'py>(
    py: Python<'py>,
    a: &PyPFArray,
    params: &PyRingParams,
) -> PyResult<Bound<'py, PyDict>> {
    let plan = heffter::orderings::ordering_plan(&a.inner, &params.inner)
        .map_err(err)?
        .ok_or_else(|| PyValueError::new_err("no simple ordering plan exists"))?;
    let (row_df, col_df) = build_relative_dfs(&a.inner, &params.inner, &plan).map_err(err)?;
    let d_rows = develop(&row_df).map_err(err)?;
    let d_cols = develop(&col_df).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("v", params.inner.v())?;
    dict.set_item("parts", params.inner.q())?;
    dict.set_item("part_size", params.inner.r())?;
    let blocks_of = |family: &heffter::decomp::DiffFamily| -> Vec<Vec<i64>> {
        family
            .blocks
            .iter()
            .map(|b| b.vertices().to_vec())
            .collect()
    };
    dict.set_item("row_df", blocks_of(&row_df))?;
    dict.set_item("col_df", blocks_of(&col_df))?;
    dict.set_item("row_df_verified", verify_df(&row_df).passes)?;
    dict.set_item("col_df_verified", verify_df(&col_df).passes)?;
    dict.set_item("row_blocks", d_rows.blocks.len())?;
    dict.set_item("col_blocks", d_cols.blocks.len())?;
    dict.set_item(
        "row_decomposition_verified",
        verify_decomposition(&d_rows).passes,
    )?;
    dict.set_item(
        "col_decomposition_verified",
        verify_decomposition(&d_cols).passes,
    )?;
    dict.set_item("orthogonal", check_orthogonality(&d_rows, &d_cols))?;
    Ok(dict)
}

#[pyfunction]
fn cycle_difference_list(vertices: Vec<i64>, v: i64) -> PyResult<Vec<i64>> {
    let block = heffter::decomp::CycleBlock::new(vertices, v).map_err(err)?;
    Ok(difference_list(&block, v))
}

#[pyfunction]
#[pyo3(signature = (n, k, t, mode="first-solution", skeleton="free", budget=None, symmetry=true, parallel=false))]
#[allow(clippy::too_many_arguments)]
fn search<'py>(
    py: Python<'py>,
    n: usize,
    k: usize,
    t: usize,
    mode: &str,
    skeleton: &str,
    budget: Option<u64>,
    symmetry: bool,
    parallel: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mode = match mode {
        "first-solution" => SearchMode::FirstSolution,
        "count-all" => SearchMode::CountAll,
        "prove-empty" => SearchMode::ProveEmpty,
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let spec = SearchSpec {
        m: n,
        n,
        s: k,
        k,
        t,
        skeleton: match skeleton {
            "free" => SkeletonConstraint::Free,
            "k-diagonal" => SkeletonConstraint::CyclicallyKDiagonal,
            other => return Err(PyValueError::new_err(format!("unknown skeleton {other:?}"))),
        },
        mode,
        symmetry_reduction: symmetry,
        budget: budget.unwrap_or(DEFAULT_BUDGET),
        parallel,
    };
    let outcome = backtrack_search(&spec).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item(
        "status",
        match outcome.status {
            SearchStatus::Found => "found",
            SearchStatus::ExhaustedEmpty => "exhausted-empty",
            SearchStatus::BudgetExceeded => "budget-exceeded",
        },
    )?;
    dict.set_item("nodes", outcome.nodes)?;
    dict.set_item("solutions", outcome.solutions)?;
    dict.set_item(
        "witness",
        outcome
            .witnesses
            .into_iter()
            .next()
            .map(|inner| PyPFArray { inner }),
    )?;
    Ok(dict)
}

#[pyfunction]
fn certify_nonexistence(name: &str) -> PyResult<u64> {
    let case = NonexistenceCase::from_str(name).map_err(err)?;
    let outcome = heffter::search::certify_nonexistence(case).map_err(err)?;
    Ok(outcome.nodes)
}

#[pyfunction]
#[pyo3(signature = (a, t, metadata=None))]
fn encode_json(a: &PyPFArray, t: usize, metadata: Option<BTreeMap<String, String>>) -> String {
    heffter::io::encode_json(&a.inner, t, metadata)
}

#[pymodule]
fn heffter_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPFArray>()?;
    m.add_class::<PyRingParams>()?;
    m.add_function(wrap_pyfunction!(verify_relative_heffter, m)?)?;
    m.add_function(wrap_pyfunction!(verify_integer, m)?)?;
    m.add_function(wrap_pyfunction!(check_necessary, m)?)?;
    m.add_function(wrap_pyfunction!(build_h3_odd, m)?)?;
    m.add_function(wrap_pyfunction!(build_h3_even, m)?)?;
    m.add_function(wrap_pyfunction!(build_h4, m)?)?;
    m.add_function(wrap_pyfunction!(build_b4_filler, m)?)?;
    m.add_function(wrap_pyfunction!(build_h4_blocks, m)?)?;
    m.add_function(wrap_pyfunction!(build_b6_filler, m)?)?;
    m.add_function(wrap_pyfunction!(build_h5, m)?)?;
    m.add_function(wrap_pyfunction!(build_h6, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_example, m)?)?;
    m.add_function(wrap_pyfunction!(build_hk, m)?)?;
    m.add_function(wrap_pyfunction!(partial_sums, m)?)?;
    m.add_function(wrap_pyfunction!(is_simple, m)?)?;
    m.add_function(wrap_pyfunction!(find_simple_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(ordering_plan, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(cycle_difference_list, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(certify_nonexistence, m)?)?;
    m.add_function(wrap_pyfunction!(encode_json, m)?)?;
    Ok(())
}
