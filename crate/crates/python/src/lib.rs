//! Python bindings: fields, polynomials, matrices, the exact and sampled
//! density reports, the closed-form bounds and the reducibility probe.
//!
//! Rationals cross the boundary as `fractions.Fraction`, big integers as
//! Python `int`.

use cyclic_density::census::{
    self, DensityReport, EnumStrategy, ExactOptions, McOptions, DEFAULT_BUDGET,
};
use cyclic_density::counting::{self, BoundsReport, Rational};
use cyclic_density::cyclictest::{self, GeneratedAlgebra, ProbeOptions};
use cyclic_density::{Error, FieldSpec, Mat, Mode, Poly, StabMat};
use num_bigint::BigInt;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

struct PyErrWrap(Error);

impl From<Error> for PyErrWrap {
    fn from(e: Error) -> Self {
        PyErrWrap(e)
    }
}

impl From<PyErrWrap> for PyErr {
    fn from(e: PyErrWrap) -> Self {
        match e.0 {
            Error::DivisionByZero => PyArithmeticError::new_err(e.0.to_string()),
            other => PyValueError::new_err(other.to_string()),
        }
    }
}

fn fraction<'py>(py: Python<'py>, x: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.numer().clone(), x.denom().clone()))
}

fn parse_mode(s: &str) -> PyResult<Mode> {
    match s {
        "algebra" => Ok(Mode::Algebra),
        "group" => Ok(Mode::Group),
        _ => Err(PyValueError::new_err(format!("mode must be 'algebra' or 'group', got '{s}'"))),
    }
}

fn parse_strategy(s: &str) -> PyResult<EnumStrategy> {
    match s {
        "reduced" => Ok(EnumStrategy::Reduced),
        "brute" => Ok(EnumStrategy::Brute),
        _ => Err(PyValueError::new_err(format!("strategy must be 'reduced' or 'brute', got '{s}'"))),
    }
}

/// A finite field `F_q`; `q` may be an int or a string such as `"3^2"`.
#[pyclass(name = "Field", frozen, eq, skip_from_py_object, module = "cyclic_density_py")]
#[derive(Clone, PartialEq)]
pub struct PyField {
    inner: FieldSpec,
}

fn order_arg(q: &Bound<'_, PyAny>) -> PyResult<u64> {
    if let Ok(n) = q.extract::<u64>() {
        return Ok(n);
    }
    let s: String = q.extract()?;
    Ok(cyclictest::parse_order(&s).map_err(PyErrWrap)?)
}

#[pymethods]
impl PyField {
    #[new]
    fn new(q: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyField { inner: FieldSpec::of_order(order_arg(q)?).map_err(PyErrWrap)? })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.inner.p()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    /// Element codes `0..q` in order.
    fn elements(&self) -> Vec<u32> {
        (0..self.inner.q()).collect()
    }

    fn add(&self, a: u32, b: u32) -> PyResult<u32> {
        self.check(&[a, b])?;
        Ok(self.inner.add(a, b))
    }

    fn mul(&self, a: u32, b: u32) -> PyResult<u32> {
        self.check(&[a, b])?;
        Ok(self.inner.mul(a, b))
    }

    fn inv(&self, a: u32) -> PyResult<u32> {
        self.check(&[a])?;
        self.inner.inv(a).ok_or_else(|| PyArithmeticError::new_err("zero has no inverse"))
    }

    fn format(&self, a: u32) -> PyResult<String> {
        self.check(&[a])?;
        Ok(self.inner.format_elem(a))
    }

    fn parse(&self, s: &str) -> PyResult<u32> {
        Ok(self.inner.parse_elem(s).map_err(PyErrWrap)?)
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.inner.describe())
    }
}

impl PyField {
    fn check(&self, xs: &[u32]) -> PyResult<()> {
        match xs.iter().find(|&&x| !self.inner.contains(x)) {
            Some(x) => Err(PyValueError::new_err(format!("{x} is not an element of F_{}", self.inner.q()))),
            None => Ok(()),
        }
    }
}

/// Polynomial over a field, coefficients lowest degree first.
#[pyclass(name = "Poly", frozen, eq, skip_from_py_object, module = "cyclic_density_py")]
#[derive(Clone, PartialEq)]
pub struct PyPoly {
    inner: Poly,
}

#[pymethods]
impl PyPoly {
    #[new]
    fn new(field: &PyField, coeffs: Vec<u32>) -> PyResult<Self> {
        Ok(PyPoly { inner: Poly::new(&field.inner, coeffs).map_err(PyErrWrap)? })
    }

    #[staticmethod]
    fn parse(field: &PyField, text: &str) -> PyResult<Self> {
        Ok(PyPoly { inner: Poly::parse(&field.inner, text).map_err(PyErrWrap)? })
    }

    #[getter]
    fn coeffs(&self) -> Vec<u32> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    fn gcd(&self, other: &PyPoly) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.gcd(&other.inner).map_err(PyErrWrap)? })
    }

    fn is_irreducible(&self) -> PyResult<bool> {
        Ok(self.inner.is_irreducible().map_err(PyErrWrap)?)
    }

    /// `[(factor, multiplicity), ...]` for a monic polynomial.
    fn factor(&self) -> PyResult<Vec<(PyPoly, usize)>> {
        let parts = cyclic_density::poly::factor(&self.inner).map_err(PyErrWrap)?;
        Ok(parts.into_iter().map(|(p, e)| (PyPoly { inner: p }, e)).collect())
    }

    fn companion(&self) -> PyResult<PyMatrix> {
        Ok(PyMatrix { inner: self.inner.companion().map_err(PyErrWrap)? })
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        same_field(self.inner.field(), other.inner.field())?;
        Ok(PyPoly { inner: self.inner.mul(&other.inner) })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({})", self.inner)
    }
}

fn same_field(a: &FieldSpec, b: &FieldSpec) -> PyResult<()> {
    if a == b { Ok(()) } else { Err(PyErrWrap(Error::FieldMismatch).into()) }
}

/// Monic irreducible polynomials of degree `d`.
#[pyfunction]
fn irreducibles(field: &PyField, d: usize) -> PyResult<Vec<PyPoly>> {
    let polys = cyclic_density::poly::irr_enumerate(d, &field.inner).map_err(PyErrWrap)?;
    Ok(polys.into_iter().map(|p| PyPoly { inner: p }).collect())
}

/// Dense matrix over a field.
#[pyclass(name = "Matrix", frozen, eq, from_py_object, module = "cyclic_density_py")]
#[derive(Clone, PartialEq)]
pub struct PyMatrix {
    inner: Mat,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(field: &PyField, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        Ok(PyMatrix { inner: Mat::from_rows(&field.inner, &rows).map_err(PyErrWrap)? })
    }

    /// Rows separated by `;`, entries by `,`.
    #[staticmethod]
    fn parse(field: &PyField, text: &str) -> PyResult<Self> {
        Ok(PyMatrix { inner: Mat::parse(&field.inner, text).map_err(PyErrWrap)? })
    }

    #[staticmethod]
    fn identity(field: &PyField, n: usize) -> Self {
        PyMatrix { inner: Mat::identity(&field.inner, n) }
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { inner: self.inner.field().clone() }
    }

    fn rows(&self) -> Vec<Vec<u32>> {
        self.inner.to_rows()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn det(&self) -> PyResult<u32> {
        Ok(self.inner.det().map_err(PyErrWrap)?)
    }

    fn char_poly(&self) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.char_poly().map_err(PyErrWrap)? })
    }

    fn min_poly(&self) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: self.inner.min_poly().map_err(PyErrWrap)? })
    }

    fn is_cyclic(&self) -> PyResult<bool> {
        Ok(self.inner.is_cyclic().map_err(PyErrWrap)?)
    }

    /// A vector `v` whose Krylov space under this matrix is everything, or `None`.
    fn cyclic_vector(&self) -> Option<Vec<u32>> {
        cyclictest::find_cyclic_vector(&self.inner)
    }

    fn krylov_dim(&self, v: Vec<u32>) -> PyResult<usize> {
        Ok(self.inner.krylov_span(&v).map_err(PyErrWrap)?.dim())
    }

    /// Case of `(A 0 / C B)` with `A` the leading `r x r` block: one of
    /// `cyclic`, `case_i`, `case_ii`, `case_iii`.
    fn classify(&self, r: usize) -> PyResult<String> {
        let s = StabMat::project(&self.inner, r).map_err(PyErrWrap)?;
        Ok(census::classify(&s).to_string())
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix { inner: self.inner.mul(&other.inner).map_err(PyErrWrap)? })
    }

    fn __add__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        Ok(PyMatrix { inner: self.inner.add(&other.inner).map_err(PyErrWrap)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Matrix(F_{}, \"{}\")", self.inner.field().q(), self.inner)
    }
}

/// Exact or sampled non-cyclic proportions at one `(n, r, q)`.
#[pyclass(name = "DensityReport", frozen, module = "cyclic_density_py")]
pub struct PyReport {
    inner: DensityReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }

    #[getter]
    fn mode(&self) -> String {
        self.inner.mode.to_string()
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method.to_string()
    }

    #[getter]
    fn total(&self) -> BigInt {
        self.inner.total.clone()
    }

    #[getter]
    fn noncyclic(&self) -> BigInt {
        self.inner.noncyclic.clone()
    }

    /// `(n1, n2, n3)`.
    #[getter]
    fn cases(&self) -> (BigInt, BigInt, BigInt) {
        (self.inner.n1.clone(), self.inner.n2.clone(), self.inner.n3.clone())
    }

    #[getter]
    fn pi<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.pi.value)
    }

    /// `(pi1, pi2, pi3)`.
    #[getter]
    fn parts<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        [&self.inner.pi1, &self.inner.pi2, &self.inner.pi3].iter().map(|e| fraction(py, &e.value)).collect()
    }

    /// Confidence interval for `pi`, `None` for exact reports.
    #[getter]
    fn ci<'py>(&self, py: Python<'py>) -> PyResult<Option<(Bound<'py, PyAny>, Bound<'py, PyAny>)>> {
        match &self.inner.pi.ci {
            Some((lo, hi)) => Ok(Some((fraction(py, lo)?, fraction(py, hi)?))),
            None => Ok(None),
        }
    }

    /// `{bound name: verdict}`.
    #[getter]
    fn verdicts<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for c in &self.inner.verdict {
            d.set_item(&c.name, serde_json::to_value(c.verdict).unwrap().as_str().unwrap_or_default())?;
        }
        Ok(d)
    }

    fn any_failure(&self) -> bool {
        self.inner.any_failure()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("report serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityReport(n={}, r={}, q={}, mode={}, method={}, pi={})",
            self.inner.n, self.inner.r, self.inner.q, self.inner.mode, self.inner.method, self.inner.pi.value
        )
    }
}

#[pyfunction]
#[pyo3(signature = (n, r, q, mode = "algebra", budget = DEFAULT_BUDGET, strategy = "reduced", workers = None))]
#[allow(clippy::too_many_arguments)]
fn enumerate_exact(
    py: Python<'_>,
    n: usize,
    r: usize,
    q: &Bound<'_, PyAny>,
    mode: &str,
    budget: u64,
    strategy: &str,
    workers: Option<usize>,
) -> PyResult<PyReport> {
    let field = FieldSpec::of_order(order_arg(q)?).map_err(PyErrWrap)?;
    let (mode, strategy) = (parse_mode(mode)?, parse_strategy(strategy)?);
    let opts = ExactOptions { budget, strategy, workers };
    let rep = py.detach(|| census::enumerate_exact_with(n, r, &field, mode, &opts)).map_err(PyErrWrap)?;
    Ok(PyReport { inner: rep })
}

#[pyfunction]
#[pyo3(signature = (n, r, q, trials = 100_000, seed = 0, ci_level = 0.99, mode = "algebra", workers = None))]
#[allow(clippy::too_many_arguments)]
fn monte_carlo(
    py: Python<'_>,
    n: usize,
    r: usize,
    q: &Bound<'_, PyAny>,
    trials: u64,
    seed: u64,
    ci_level: f64,
    mode: &str,
    workers: Option<usize>,
) -> PyResult<PyReport> {
    let field = FieldSpec::of_order(order_arg(q)?).map_err(PyErrWrap)?;
    let mode = parse_mode(mode)?;
    let opts = McOptions { trials, seed, ci_level, workers };
    let rep = py.detach(|| census::monte_carlo(n, r, &field, mode, &opts)).map_err(PyErrWrap)?;
    Ok(PyReport { inner: rep })
}

/// Every closed-form bound at `(n, r, q)` as a dict of `Fraction`s.
#[pyfunction]
fn bounds<'py>(py: Python<'py>, n: usize, r: usize, q: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyDict>> {
    let b = BoundsReport::new(n, r, order_arg(q)?).map_err(PyErrWrap)?;
    let d = PyDict::new(py);
    for (k, v) in [
        ("theorem_lower", &b.theorem_lower),
        ("theorem_upper", &b.theorem_upper),
        ("pi3_lower", &b.pi3_lower),
        ("pi3_lower_uniform", &b.pi3_lower_uniform),
        ("pi3_upper", &b.pi3_upper),
        ("pi3_upper_closed", &b.pi3_upper_closed),
        ("np_lower", &b.np_lower),
        ("np_upper", &b.np_upper),
    ] {
        d.set_item(k, fraction(py, v)?)?;
    }
    d.set_item("theorem_upper_vacuous", b.theorem_upper_vacuous)?;
    d.set_item("algebra_order", b.orders.algebra.clone())?;
    d.set_item("group_order", b.orders.group.clone())?;
    Ok(d)
}

/// Ordered pairs of coprime monic polynomials of degrees `r` and `s`.
#[pyfunction]
fn coprime_count(r: usize, s: usize, q: u64) -> BigInt {
    counting::coprime_count(r, s, q)
}

/// Limiting non-cyclic proportion from the series table, evaluated at `q`.
#[pyfunction]
#[pyo3(signature = (r, q, mode = "algebra"))]
fn table_limit<'py>(py: Python<'py>, r: usize, q: u64, mode: &str) -> PyResult<Bound<'py, PyAny>> {
    let x = counting::table_noncyclic_limit(r, parse_mode(mode)?, q).map_err(PyErrWrap)?;
    fraction(py, &x)
}

/// Searches the algebra generated by `generators` for a cyclic pair or a
/// proper invariant subspace. Returns a dict with `verdict` and, as found,
/// `witness` (basis rows), `vector` and `matrix`.
#[pyfunction]
#[pyo3(signature = (generators, max_tries = 50, seed = 0, walk_length = None))]
fn probe<'py>(
    py: Python<'py>,
    generators: Vec<PyMatrix>,
    max_tries: usize,
    seed: u64,
    walk_length: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let alg = GeneratedAlgebra::new(generators.into_iter().map(|g| g.inner).collect()).map_err(PyErrWrap)?;
    let rep = cyclictest::probe(&alg, &ProbeOptions { max_tries, seed, walk_length }).map_err(PyErrWrap)?;
    let text = rep.to_text(alg.field());
    let d = PyDict::new(py);
    d.set_item("verdict", serde_json::to_value(text.verdict).unwrap().as_str().unwrap_or_default())?;
    d.set_item("tries_used", rep.tries_used)?;
    d.set_item("seed", rep.seed)?;
    if let Some(w) = &rep.witness {
        d.set_item("witness", PyList::new(py, w.basis())?)?;
    }
    if let Some((v, x)) = rep.pair {
        d.set_item("vector", v)?;
        d.set_item("matrix", PyMatrix { inner: x })?;
    }
    Ok(d)
}

/// Generators of the full matrix algebra `M(n, q)`.
#[pyfunction]
fn full_algebra(n: usize, field: &PyField) -> PyResult<Vec<PyMatrix>> {
    let alg = GeneratedAlgebra::full(n, &field.inner).map_err(PyErrWrap)?;
    Ok(alg.generators().iter().cloned().map(|inner| PyMatrix { inner }).collect())
}

/// Generators of the algebra of matrices stabilizing `<e_1, .., e_r>`.
#[pyfunction]
fn stabilizer_algebra(n: usize, r: usize, field: &PyField) -> PyResult<Vec<PyMatrix>> {
    let alg = GeneratedAlgebra::stabilizer(n, r, &field.inner).map_err(PyErrWrap)?;
    Ok(alg.generators().iter().cloned().map(|inner| PyMatrix { inner }).collect())
}

#[pymodule]
pub fn cyclic_density_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(irreducibles, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_exact, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(coprime_count, m)?)?;
    m.add_function(wrap_pyfunction!(table_limit, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(full_algebra, m)?)?;
    m.add_function(wrap_pyfunction!(stabilizer_algebra, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
