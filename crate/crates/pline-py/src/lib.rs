//! Python bindings: `import pline`.

use pline::budget::Budget;
use pline::chains::{
    chain_component_containment, enumerate_chains, subfield_check, verify_chain_axioms,
};
use pline::graph::{Distance, DistantGraph};
use pline::groups::{e2_point_orbit, is_ge2_ring};
use pline::projective::{unimodular_vs_admissible_report, EWord, ProjectiveLine as Line};
use pline::ring::{ring_create, AnyRing, Elem, FiniteRing, Poly, RingSpec, UniPolyRing};
use pline::standard_form::{
    certify_diameter, compose as sf_compose, decompose_traced, parse_matrix, xy_matrix_check,
    StandardForm,
};
use pline::verify::{run_suite, Check, SuiteConfig};
use pline::Error;
use pyo3::exceptions::{PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::{json, Value};

fn err(e: Error) -> PyErr {
    match e {
        Error::Capability(_) => PyTypeError::new_err(e.to_string()),
        Error::Internal(_) | Error::Budget { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for pline::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(err)
    }
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for x in items {
                list.append(to_py(py, x)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, x) in map {
                dict.set_item(k, to_py(py, x)?)?;
            }
            dict.into_any()
        }
    })
}

fn serialize<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(to_py(py, &v)?.unbind())
}

fn create(spec: &str) -> PyResult<AnyRing> {
    ring_create(&RingSpec::parse(spec).py()?).py()
}

fn finite(spec: &str) -> PyResult<FiniteRing> {
    Ok(create(spec)?.as_finite().py()?.clone())
}

fn unipoly(spec: &str) -> PyResult<UniPolyRing> {
    Ok(*create(spec)?.as_unipoly().py()?)
}

/// A ring given by JSON or shorthand, e.g. `Ring("Z/4")`, `Ring("F2[e]")`,
/// `Ring("M2(F2)")`, `Ring("F3[X]")`.
#[pyclass(frozen, name = "Ring", module = "pline")]
struct Ring {
    inner: AnyRing,
}

impl Ring {
    fn finite(&self) -> PyResult<&FiniteRing> {
        self.inner.as_finite().py()
    }
}

#[pymethods]
impl Ring {
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Ring {
            inner: create(spec)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name()
    }

    #[getter]
    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }

    /// Number of elements, or None for polynomial rings.
    #[getter]
    fn size(&self) -> Option<usize> {
        self.inner.as_finite().ok().map(|r| r.size())
    }

    #[getter]
    fn is_commutative(&self) -> bool {
        match &self.inner {
            AnyRing::Finite(r) => r.is_commutative(),
            _ => true,
        }
    }

    fn elements(&self) -> PyResult<Vec<String>> {
        let r = self.finite()?;
        Ok(r.elems().map(|a| r.fmt_elem(a)).collect())
    }

    fn units(&self) -> PyResult<Vec<String>> {
        let r = self.finite()?;
        Ok(r.units().into_iter().map(|a| r.fmt_elem(a)).collect())
    }

    fn is_unit(&self, x: &str) -> PyResult<bool> {
        match &self.inner {
            AnyRing::Finite(r) => Ok(r.is_unit(r.parse_elem(x).py()?)),
            AnyRing::UniPoly(r) => {
                let p = r.parse(x).py()?;
                Ok(p.is_constant() && !p.is_zero())
            }
            AnyRing::BiPoly(_) => Err(PyTypeError::new_err("no element syntax for this ring")),
        }
    }

    fn add(&self, x: &str, y: &str) -> PyResult<String> {
        self.binary(x, y, |r, a, b| r.add(a, b), |a, b| a.add(b))
    }

    fn mul(&self, x: &str, y: &str) -> PyResult<String> {
        self.binary(x, y, |r, a, b| r.mul(a, b), |a, b| a.mul(b))
    }

    fn __repr__(&self) -> String {
        format!("Ring('{}')", self.inner.name())
    }
}

impl Ring {
    fn binary(
        &self,
        x: &str,
        y: &str,
        fin: impl Fn(&FiniteRing, Elem, Elem) -> Elem,
        poly: impl Fn(&Poly, &Poly) -> Poly,
    ) -> PyResult<String> {
        match &self.inner {
            AnyRing::Finite(r) => {
                let c = fin(r, r.parse_elem(x).py()?, r.parse_elem(y).py()?);
                Ok(r.fmt_elem(c))
            }
            AnyRing::UniPoly(r) => Ok(poly(&r.parse(x).py()?, &r.parse(y).py()?).to_string()),
            AnyRing::BiPoly(_) => Err(PyTypeError::new_err("no element syntax for this ring")),
        }
    }
}

/// The projective line over a finite ring with its distant graph.
#[pyclass(frozen, name = "ProjectiveLine", module = "pline")]
struct ProjectiveLine {
    line: Line,
    graph: DistantGraph,
}

impl ProjectiveLine {
    fn index(&self, p: &str) -> PyResult<usize> {
        let point = self.line.parse_point(p).py()?;
        Ok(self
            .line
            .index_of(point)
            .expect("parsed points are on the line"))
    }

    fn names(&self, idx: impl IntoIterator<Item = usize>) -> Vec<String> {
        idx.into_iter()
            .map(|i| self.line.fmt_point(self.line.point(i)))
            .collect()
    }
}

#[pymethods]
impl ProjectiveLine {
    #[new]
    #[pyo3(signature = (ring, threads = 1))]
    fn new(ring: &str, threads: usize) -> PyResult<Self> {
        let line = Line::new(&finite(ring)?).py()?;
        let graph = DistantGraph::build_with_threads(&line, threads).py()?;
        Ok(ProjectiveLine { line, graph })
    }

    #[getter]
    fn ring(&self) -> String {
        self.line.ring().name().to_string()
    }

    fn __len__(&self) -> usize {
        self.line.len()
    }

    fn points(&self) -> Vec<String> {
        self.names(0..self.line.len())
    }

    fn distant(&self, p: &str, q: &str) -> PyResult<bool> {
        Ok(self.graph.adjacent(self.index(p)?, self.index(q)?))
    }

    /// Graph distance, or None between different components.
    fn distance(&self, p: &str, q: &str) -> PyResult<Option<u32>> {
        Ok(self.graph.dist(self.index(p)?, self.index(q)?).finite())
    }

    fn components(&self) -> Vec<Vec<String>> {
        self.graph
            .components()
            .iter()
            .map(|c| self.names(c.iter().copied()))
            .collect()
    }

    /// Diameter per component; None stands for infinity.
    fn diameters(&self) -> Vec<Option<u32>> {
        self.graph
            .diameters()
            .into_iter()
            .map(Distance::finite)
            .collect()
    }

    #[getter]
    fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    fn e2_orbit(&self) -> Vec<String> {
        e2_point_orbit(&self.line)
            .into_iter()
            .map(|p| self.line.fmt_point(p))
            .collect()
    }

    /// Trace `R(1,0), p1, ..., pn` of the word E(tn)...E(t1), t1 first.
    fn word_to_point(&self, params: Vec<String>) -> PyResult<Vec<String>> {
        let r = self.line.ring();
        let params = params
            .iter()
            .map(|s| r.parse_elem(s))
            .collect::<pline::Result<Vec<_>>>()
            .py()?;
        let trace = self.line.word_to_point(&EWord::new(params)).py()?;
        Ok(trace
            .trace
            .into_iter()
            .map(|p| self.line.fmt_point(p))
            .collect())
    }

    /// Word parameters, t1 first, for a chain of distant points from R(1,0).
    fn chain_to_word(&self, chain: Vec<String>) -> PyResult<Vec<String>> {
        let points = chain
            .iter()
            .map(|s| self.line.parse_point(s))
            .collect::<pline::Result<Vec<_>>>()
            .py()?;
        let word = self.line.chain_to_word(&points).py()?;
        let r = self.line.ring();
        Ok(word.params.into_iter().map(|t| r.fmt_elem(t)).collect())
    }

    /// Nodes, edges, components and diameters as a dict.
    fn export(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        serialize(py, &self.graph.export(&self.line))
    }

    fn to_dot(&self) -> String {
        self.graph.to_dot(&self.line)
    }

    /// K-chains for the subfield given by its elements, with the axiom report.
    #[pyo3(signature = (subfield, threads = 1))]
    fn chains(&self, py: Python<'_>, subfield: Vec<String>, threads: usize) -> PyResult<Py<PyAny>> {
        let r = self.line.ring();
        let els = subfield
            .iter()
            .map(|s| r.parse_elem(s))
            .collect::<pline::Result<Vec<_>>>()
            .py()?;
        let k = subfield_check(r, &els).py()?;
        let chains = enumerate_chains(&self.line, &k, &Budget::from_env().py()?, threads).py()?;
        let report = verify_chain_axioms(&self.line, &self.graph, &k, &chains);
        let contained = chain_component_containment(&self.graph, &chains).all_contained;
        let value = json!({
            "chains": chains.iter().map(|c| self.names(c.points.iter().copied())).collect::<Vec<_>>(),
            "axioms": report,
            "contained_in_components": contained,
        });
        Ok(to_py(py, &value)?.unbind())
    }

    fn __repr__(&self) -> String {
        format!(
            "ProjectiveLine('{}', points={})",
            self.line.ring().name(),
            self.line.len()
        )
    }
}

/// GE2 versus GL2 for a finite ring.
#[pyfunction]
fn ge2_report(py: Python<'_>, ring: &str) -> PyResult<Py<PyAny>> {
    let report = is_ge2_ring(&finite(ring)?, &Budget::from_env().py()?).py()?;
    serialize(py, &report)
}

#[pyfunction]
fn unimodular_report(py: Python<'_>, ring: &str) -> PyResult<Py<PyAny>> {
    let report = unimodular_vs_admissible_report(&finite(ring)?).py()?;
    let mut v =
        serde_json::to_value(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    v["equivalent"] = Value::Bool(report.equivalent());
    Ok(to_py(py, &v)?.unbind())
}

fn form_dict(py: Python<'_>, form: &StandardForm, extra: Value) -> PyResult<Py<PyAny>> {
    let mut v = json!({
        "u": form.u,
        "v": form.v,
        "params": form.params.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "form": form.display(),
    });
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    Ok(to_py(py, &v)?.unbind())
}

/// Standard form of [[a,b],[c,d]] over F_p[X]; params are listed t1 first.
#[pyfunction]
fn decompose(py: Python<'_>, ring: &str, entries: Vec<String>) -> PyResult<Py<PyAny>> {
    let r = unipoly(ring)?;
    let a = parse_matrix(&r, &entries).py()?;
    let traced = decompose_traced(&r, &a).py()?;
    let modified = traced.form.to_modified(&r);
    form_dict(
        py,
        &traced.form,
        json!({
            "modified": modified.display(),
            "working_degrees": traced.working_degrees,
        }),
    )
}

/// Entries of diag(u,v)·E(tn)⋯E(t1) in row order.
#[pyfunction]
fn compose(ring: &str, u: u32, v: u32, params: Vec<String>) -> PyResult<Vec<String>> {
    let r = unipoly(ring)?;
    let params = params
        .iter()
        .map(|s| r.parse(s))
        .collect::<pline::Result<Vec<_>>>()
        .py()?;
    let form = StandardForm::new(u, v, params);
    form.validate(&r).py()?;
    let m = sf_compose(&r, &form);
    Ok(m.entries().iter().map(|e| e.to_string()).collect())
}

#[pyfunction]
#[pyo3(signature = (ring, t = "X", max = 8))]
fn certify(py: Python<'_>, ring: &str, t: &str, max: u32) -> PyResult<Py<PyAny>> {
    let r = unipoly(ring)?;
    let report = certify_diameter(&r, &r.parse(t).py()?, max).py()?;
    serialize(py, &report)
}

#[pyfunction]
#[pyo3(signature = (ring, nmax = 10))]
fn xy_check(py: Python<'_>, ring: &str, nmax: u64) -> PyResult<Py<PyAny>> {
    let any = create(ring)?;
    serialize(py, &xy_matrix_check(any.as_bipoly().py()?, nmax))
}

/// Runs the theorem suite; returns one dict per check.
#[pyfunction]
#[pyo3(signature = (suite = "all", seed = 0, samples = 500, threads = 1))]
fn verify(
    py: Python<'_>,
    suite: &str,
    seed: u64,
    samples: usize,
    threads: usize,
) -> PyResult<Py<PyAny>> {
    let cfg = SuiteConfig {
        seed,
        threads,
        budget: Budget::from_env().py()?,
        samples,
    };
    let results = run_suite(&Check::parse_suite(suite).py()?, &cfg);
    serialize(py, &results)
}

#[pymodule]
#[pyo3(name = "pline")]
fn pline_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ring>()?;
    m.add_class::<ProjectiveLine>()?;
    m.add_function(wrap_pyfunction!(ge2_report, m)?)?;
    m.add_function(wrap_pyfunction!(unimodular_report, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(compose, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(xy_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
