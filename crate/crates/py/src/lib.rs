//! Python bindings, importable as `apartlab`.
//!
//! Subsets and maps cross the boundary as lists of point indices, reports
//! as plain dicts.

use apartness_lab as core;
use apartness_lab::{Error, EvalOptions, Evaluator, Property, Subset, WssReading};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde::Serialize;

pyo3::create_exception!(apartlab, ApartnessError, PyValueError);
pyo3::create_exception!(apartlab, ParseError, ApartnessError);
pyo3::create_exception!(apartlab, InvariantError, ApartnessError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Parse(_) => ParseError::new_err(e.to_string()),
        Error::InvalidArgument(_) => ApartnessError::new_err(e.to_string()),
        _ => InvariantError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py_err)
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    match v {
        Value::Null => Ok(py.None().into_bound(py)),
        Value::Bool(b) => b.into_bound_py_any(py),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.into_bound_py_any(py),
            (None, Some(i)) => i.into_bound_py_any(py),
            _ => n.as_f64().unwrap_or(f64::NAN).into_bound_py_any(py),
        },
        Value::String(s) => s.into_bound_py_any(py),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            Ok(list.into_any())
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            Ok(dict.into_any())
        }
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| ApartnessError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn subset(n: usize, points: Vec<usize>) -> PyResult<Subset> {
    Subset::from_points(n, points).or_raise()
}

fn points(s: Subset) -> Vec<usize> {
    s.iter().collect()
}

/// A finite pre-apartness space given by its inequality and point
/// apartness matrices.
#[pyclass(module = "apartlab", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Space {
    inner: core::Space,
}

impl From<core::Space> for Space {
    fn from(inner: core::Space) -> Self {
        Space { inner }
    }
}

#[pymethods]
impl Space {
    #[new]
    fn new(neq: Vec<Vec<bool>>, p: Vec<Vec<bool>>) -> PyResult<Self> {
        core::Space::from_matrices(&neq, &p).or_raise().map(Into::into)
    }

    #[staticmethod]
    fn discrete(n: usize) -> PyResult<Self> {
        core::Space::discrete(n).or_raise().map(Into::into)
    }

    #[staticmethod]
    fn indiscrete(n: usize) -> PyResult<Self> {
        core::Space::indiscrete(n).or_raise().map(Into::into)
    }

    /// Parses a space document (abstract, metric, uniform or cantor).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::SpaceDocument::from_json(text)
            .and_then(|d| d.to_space())
            .or_raise()
            .map(Into::into)
    }

    /// Model number `code` among the `3^(n(n−1)/2)` candidates on `n` points.
    #[staticmethod]
    fn from_code(n: usize, code: u64) -> PyResult<Self> {
        core::search::model_from_code(n, code).or_raise().map(Into::into)
    }

    fn to_json(&self) -> String {
        core::SpaceDocument::from_space(&self.inner).to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn neq(&self, x: usize, y: usize) -> PyResult<bool> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.inner.neq(x, y))
    }

    fn p(&self, x: usize, y: usize) -> PyResult<bool> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(self.inner.p(x, y))
    }

    fn neq_matrix(&self) -> Vec<Vec<bool>> {
        self.inner.inequality().to_matrix()
    }

    fn p_matrix(&self) -> Vec<Vec<bool>> {
        self.inner.point_apartness().to_matrix()
    }

    fn apart(&self, a: Vec<usize>, b: Vec<usize>) -> PyResult<bool> {
        let n = self.inner.n();
        self.inner.subset_apart(subset(n, a)?, subset(n, b)?).or_raise()
    }

    /// The apartness complement `−A`.
    fn complement(&self, a: Vec<usize>) -> PyResult<Vec<usize>> {
        let n = self.inner.n();
        self.inner.complement_apart(subset(n, a)?).map(points).or_raise()
    }

    fn closure(&self, a: Vec<usize>) -> PyResult<Vec<usize>> {
        let nb = core::Neighborhoods::new(&self.inner);
        nb.closure(subset(self.inner.n(), a)?).map(points).or_raise()
    }

    fn interior(&self, a: Vec<usize>) -> PyResult<Vec<usize>> {
        let nb = core::Neighborhoods::new(&self.inner);
        nb.interior(subset(self.inner.n(), a)?).map(points).or_raise()
    }

    fn min_neighborhood(&self, x: usize) -> PyResult<Vec<usize>> {
        core::Neighborhoods::new(&self.inner).min_neighborhood(x).map(points).or_raise()
    }

    /// Report for B1–B5 and symmetry.
    #[pyo3(signature = (brute_force = false))]
    fn check_axioms<'py>(&self, py: Python<'py>, brute_force: bool) -> PyResult<Bound<'py, PyAny>> {
        let r = core::check_axioms_with(&self.inner, core::CheckOptions { brute_force }).or_raise()?;
        to_py(py, &r.entries())
    }

    /// Decides one property by name (B1–B5, SYM, TIGHT, EF, NN, WSS, D12).
    #[pyo3(signature = (prop, brute_force = false, wss_reading = "neighborhood"))]
    fn check<'py>(
        &self,
        py: Python<'py>,
        prop: &str,
        brute_force: bool,
        wss_reading: &str,
    ) -> PyResult<Bound<'py, PyAny>> {
        let prop: Property = prop.parse().or_raise()?;
        let wss_reading: WssReading = wss_reading.parse().or_raise()?;
        let mut ev = Evaluator::with_options(&self.inner, EvalOptions { brute_force, wss_reading });
        to_py(py, &ev.evaluate(prop).or_raise()?)
    }

    /// Verdict of every property, keyed by name.
    fn verdicts<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let all = Evaluator::new(&self.inner).evaluate_all().or_raise()?;
        let dict = PyDict::new(py);
        for (p, r) in all {
            dict.set_item(p.name(), r.holds)?;
        }
        Ok(dict.into_any())
    }

    /// `(n, code)` of the least relabelling.
    fn canonical_form(&self) -> PyResult<(usize, u64)> {
        core::canonical_form(&self.inner).map(|c| (c.n, c.code)).or_raise()
    }

    fn __repr__(&self) -> String {
        format!("Space(n={}, code={})", self.inner.n(), core::search::code_of(&self.inner))
    }
}

impl Space {
    fn check_point(&self, x: usize) -> PyResult<()> {
        if x >= self.inner.n() {
            return Err(to_py_err(Error::PointOutOfRange { point: x, n: self.inner.n() }));
        }
        Ok(())
    }
}

/// Space of a finite metric; distances are `"p/q"` strings or integers.
#[pyfunction]
fn from_metric(dist: Vec<Vec<String>>) -> PyResult<Space> {
    let text = serde_json::json!({ "version": 1, "kind": "metric", "dist": dist }).to_string();
    Space::from_json(&text)
}

/// Space induced by a base of entourages, each an `n × n` 0/1 matrix.
#[pyfunction]
#[pyo3(signature = (entourages, neq = None))]
fn from_uniform(entourages: Vec<Vec<Vec<bool>>>, neq: Option<Vec<Vec<bool>>>) -> PyResult<Space> {
    let u = core::UniformBase::from_matrices(&entourages).or_raise()?;
    let ineq = neq.map(|m| core::Inequality::from_matrix(&m)).transpose().or_raise()?;
    core::from_uniform(&u, ineq.as_ref()).or_raise().map(Into::into)
}

#[pyfunction]
fn cantor(depth: usize) -> PyResult<Space> {
    core::CantorSpec::new(depth)
        .and_then(core::cantor)
        .and_then(|m| core::from_metric(&m))
        .or_raise()
        .map(Into::into)
}

#[pyfunction]
fn disjoint_union(x: &Space, y: &Space) -> PyResult<Space> {
    core::disjoint_union(&x.inner, &y.inner).or_raise().map(Into::into)
}

/// Row-major: `(i, j)` is point `i * y.n + j`.
#[pyfunction]
fn product(x: &Space, y: &Space) -> PyResult<Space> {
    core::product(&x.inner, &y.inner).or_raise().map(Into::into)
}

#[pyfunction]
fn subspace(x: &Space, carrier: Vec<usize>) -> PyResult<Space> {
    core::subspace(&x.inner, subset(x.inner.n(), carrier)?).or_raise().map(Into::into)
}

/// Whether `image` (target index per source point) reflects apartness.
#[pyfunction]
#[pyo3(signature = (image, src, dst, brute_force = false))]
fn is_strongly_continuous<'py>(
    py: Python<'py>,
    image: Vec<usize>,
    src: &Space,
    dst: &Space,
    brute_force: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let f = core::PointMap::new(dst.inner.n(), image).or_raise()?;
    let r = if brute_force {
        core::morphisms::is_strongly_continuous_brute(&f, &src.inner, &dst.inner)
    } else {
        core::is_strongly_continuous(&f, &src.inner, &dst.inner)
    };
    to_py(py, &r.or_raise()?)
}

/// `(domain, image)` of the gluing map of two subsets of `e`.
#[pyfunction]
fn glue_map(x0: Vec<usize>, x1: Vec<usize>, e: &Space) -> PyResult<(Space, Vec<usize>)> {
    let n = e.inner.n();
    let g = core::glue_map(subset(n, x0)?, subset(n, x1)?, &e.inner).or_raise()?;
    Ok((g.domain.into(), g.map.image().to_vec()))
}

/// Whether the net over the preorder `preceq` with the given values
/// is totally Cauchy, and the points it converges to.
#[pyfunction]
#[pyo3(signature = (space, preceq, values, variant = "corrected"))]
fn net_report<'py>(
    py: Python<'py>,
    space: &Space,
    preceq: Vec<Vec<bool>>,
    values: Vec<usize>,
    variant: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let variant: core::TcVariant = variant.parse().or_raise()?;
    if let Some(&v) = values.iter().find(|&&v| v >= space.inner.n()) {
        return Err(to_py_err(Error::PointOutOfRange { point: v, n: space.inner.n() }));
    }
    let net = core::DirectedNet::new(&preceq, values).or_raise()?;
    let tc = core::totally_cauchy(&net, &space.inner, variant).or_raise()?;
    let mut limits = Vec::new();
    for x in 0..space.inner.n() {
        if core::net_converges(&net, &space.inner, x).or_raise()? {
            limits.push(x);
        }
    }
    to_py(py, &serde_json::json!({ "totally_cauchy": tc, "converges_to": limits }))
}

/// Models on `n` points satisfying every `require` and failing every
/// `forbid`, in candidate order.
#[pyfunction]
#[pyo3(signature = (n, require = Vec::new(), forbid = Vec::new(), limit = None, canonical = false))]
fn search<'py>(
    py: Python<'py>,
    n: usize,
    require: Vec<String>,
    forbid: Vec<String>,
    limit: Option<usize>,
    canonical: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let parse = |names: &[String]| names.iter().map(|s| s.parse::<Property>()).collect::<core::Result<Vec<_>>>();
    let mut q = core::ModelQuery::new(n)
        .require(&parse(&require).or_raise()?)
        .forbid(&parse(&forbid).or_raise()?)
        .canonicalize(canonical);
    q.limit = limit;
    let models: Vec<core::ModelReport> = py.detach(|| {
        let mut stream = core::enumerate_models(q)?;
        let found: Vec<_> = stream.by_ref().collect();
        match stream.error() {
            Some(e) => Err(e.clone()),
            None => Ok(found),
        }
    })
    .or_raise()?;
    to_py(py, &models)
}

/// The union diagram at Cantor depth `depth` with identity maps.
#[pyfunction]
fn union_harness<'py>(py: Python<'py>, depth: usize) -> PyResult<Bound<'py, PyAny>> {
    let report = core::HarnessInput::identity(depth)
        .and_then(|input| core::union_harness(&input))
        .or_raise()?;
    to_py(py, &report)
}

#[pyfunction]
fn catalog<'py>(py: Python<'py>, nmax: usize) -> PyResult<Bound<'py, PyAny>> {
    let cat = py.detach(|| core::catalog(nmax)).or_raise()?;
    to_py(py, &cat)
}

#[pymodule]
fn apartlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add("ApartnessError", m.py().get_type::<ApartnessError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("InvariantError", m.py().get_type::<InvariantError>())?;
    m.add_function(wrap_pyfunction!(from_metric, m)?)?;
    m.add_function(wrap_pyfunction!(from_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(cantor, m)?)?;
    m.add_function(wrap_pyfunction!(disjoint_union, m)?)?;
    m.add_function(wrap_pyfunction!(product, m)?)?;
    m.add_function(wrap_pyfunction!(subspace, m)?)?;
    m.add_function(wrap_pyfunction!(is_strongly_continuous, m)?)?;
    m.add_function(wrap_pyfunction!(glue_map, m)?)?;
    m.add_function(wrap_pyfunction!(net_report, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    m.add_function(wrap_pyfunction!(union_harness, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    Ok(())
}
