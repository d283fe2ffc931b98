//! Python bindings for `padic-potts`, importable as `padic_potts`.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use serde::Serialize;

use padic_potts::cli::parse_point;
use padic_potts::dynamics::DynError;
use padic_potts::hensel::{self, HenselError};
use padic_potts::potts::MapError;
use padic_potts::{Itinerary, MapParams, Padic, PadicError, PottsSystem};

create_exception!(padic_potts, PrecisionError, PyArithmeticError, "The working precision cannot decide the result.");
create_exception!(padic_potts, PoleHitError, PyZeroDivisionError, "An iterate hit the pole of the map.");

fn padic_err(e: PadicError) -> PyErr {
    match e {
        PadicError::PrecisionExhausted { .. } | PadicError::InsufficientPrecision { .. } => {
            PrecisionError::new_err(e.to_string())
        }
        PadicError::DivisionByZero | PadicError::ZeroDenominator => PyZeroDivisionError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn map_err(e: MapError) -> PyErr {
    match e {
        MapError::PoleHit => PoleHitError::new_err(e.to_string()),
        MapError::Padic(p) => padic_err(p),
        MapError::Hensel(h) => hensel_err(*h),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn hensel_err(e: HenselError) -> PyErr {
    match e {
        HenselError::Padic(p) => padic_err(p),
        HenselError::Map(m) => map_err(*m),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn dyn_err(e: DynError) -> PyErr {
    match e {
        DynError::Map(m) => map_err(m),
        DynError::Padic(p) => padic_err(p),
        e if e.is_precision() => PrecisionError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn itinerary(symbols: Vec<usize>) -> Itinerary {
    Itinerary::new(symbols)
}

/// A p-adic number with capped relative precision.
#[pyclass(name = "Padic", module = "padic_potts", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyPadic {
    inner: Padic,
}

impl From<Padic> for PyPadic {
    fn from(inner: Padic) -> Self {
        PyPadic { inner }
    }
}

#[derive(FromPyObject)]
enum Operand {
    Padic(PyPadic),
    Int(BigInt),
}

impl PyPadic {
    fn operand(&self, other: Operand) -> Padic {
        match other {
            Operand::Padic(x) => x.inner,
            Operand::Int(n) => Padic::from_bigint(&n, self.inner.prime(), self.inner.rel_prec()),
        }
    }
}

#[pymethods]
impl PyPadic {
    /// Accepts integers, rationals `a/b`, shorthands such as `1+p^3`, and
    /// both text encodings.
    #[new]
    #[pyo3(signature = (value, p, precision = 64))]
    fn new(value: &str, p: u64, precision: u32) -> PyResult<Self> {
        parse_point(value, p, precision).map(Self::from).map_err(map_err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, p, precision = 64))]
    fn from_int(n: BigInt, p: u64, precision: u32) -> Self {
        Padic::from_bigint(&n, p, precision).into()
    }

    #[staticmethod]
    #[pyo3(signature = (num, den, p, precision = 64))]
    fn from_rational(num: BigInt, den: BigInt, p: u64, precision: u32) -> PyResult<Self> {
        Padic::from_rational(&num, &den, p, precision).map(Self::from).map_err(padic_err)
    }

    #[staticmethod]
    fn parse(s: &str, p: u64) -> PyResult<Self> {
        Padic::parse(s, p).map(Self::from).map_err(padic_err)
    }

    #[getter]
    fn prime(&self) -> u64 {
        self.inner.prime()
    }

    #[getter]
    fn precision(&self) -> u32 {
        self.inner.rel_prec()
    }

    #[getter]
    fn is_exact(&self) -> bool {
        self.inner.is_exact()
    }

    /// `None` for zero.
    #[getter]
    fn valuation(&self) -> Option<i64> {
        self.inner.valuation()
    }

    /// `−log_p |x|_p`, `None` for exact zero.
    #[getter]
    fn norm_exp(&self) -> Option<i64> {
        self.inner.norm_exp().finite()
    }

    fn digits(&self) -> Vec<u64> {
        self.inner.digits()
    }

    fn compact(&self) -> String {
        self.inner.to_compact()
    }

    /// `(numerator, denominator)` when the value is exactly rational.
    fn to_rational(&self) -> Option<(BigInt, BigInt)> {
        self.inner.to_rational().map(|r| (r.numer().clone(), r.denom().clone()))
    }

    fn with_prec(&self, precision: u32) -> Self {
        self.inner.with_prec(precision).into()
    }

    fn agrees_with(&self, other: Operand, digits: i64) -> PyResult<bool> {
        self.inner.agrees_with(&self.operand(other), digits).map_err(padic_err)
    }

    fn in_ep(&self) -> PyResult<bool> {
        self.inner.in_ep().map_err(padic_err)
    }

    fn __add__(&self, other: Operand) -> PyResult<Self> {
        self.inner.add(&self.operand(other)).map(Self::from).map_err(padic_err)
    }

    fn __radd__(&self, other: Operand) -> PyResult<Self> {
        self.__add__(other)
    }

    fn __sub__(&self, other: Operand) -> PyResult<Self> {
        self.inner.sub(&self.operand(other)).map(Self::from).map_err(padic_err)
    }

    fn __rsub__(&self, other: Operand) -> PyResult<Self> {
        self.operand(other).sub(&self.inner).map(Self::from).map_err(padic_err)
    }

    fn __mul__(&self, other: Operand) -> Self {
        self.inner.mul(&self.operand(other)).into()
    }

    fn __rmul__(&self, other: Operand) -> Self {
        self.__mul__(other)
    }

    fn __truediv__(&self, other: Operand) -> PyResult<Self> {
        self.inner.div(&self.operand(other)).map(Self::from).map_err(padic_err)
    }

    fn __rtruediv__(&self, other: Operand) -> PyResult<Self> {
        self.operand(other).div(&self.inner).map(Self::from).map_err(padic_err)
    }

    fn __neg__(&self) -> Self {
        self.inner.neg().into()
    }

    fn __pow__(&self, n: i64, modulo: Option<Bound<'_, PyAny>>) -> PyResult<Self> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular pow is not supported"));
        }
        self.inner.pow(n).map(Self::from).map_err(padic_err)
    }

    fn __eq__(&self, other: Operand) -> bool {
        self.inner == self.operand(other)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Padic('{}', {})", self.inner.to_compact(), self.inner.prime())
    }
}

/// Validated parameters `(p, k, q, θ)` of the map.
#[pyclass(name = "MapParams", module = "padic_potts", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyMapParams {
    inner: MapParams,
}

#[pymethods]
impl PyMapParams {
    #[new]
    #[pyo3(signature = (p, k, q, theta, precision = 64))]
    fn new(p: u64, k: u64, q: &Bound<'_, PyAny>, theta: &str, precision: u32) -> PyResult<Self> {
        let q = q.str()?.to_string();
        MapParams::parse(p, k, &q, theta, precision).map(|inner| PyMapParams { inner }).map_err(map_err)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k()
    }

    #[getter]
    fn q(&self) -> BigInt {
        self.inner.q().clone()
    }

    #[getter]
    fn theta(&self) -> PyPadic {
        self.inner.theta().clone().into()
    }

    #[getter]
    fn pole(&self) -> PyPadic {
        self.inner.pole().clone().into()
    }

    #[getter]
    fn kappa(&self) -> u64 {
        self.inner.kappa()
    }

    /// `(tag, kappa)`, tag one of `"A"`, `"B1"`, `"B2"`, `"Unclassified"`.
    fn regime(&self) -> PyResult<(String, u64)> {
        let r = self.inner.classify_regime().map_err(map_err)?;
        Ok((r.tag.to_string(), r.kappa))
    }

    fn point(&self, value: &str) -> PyResult<PyPadic> {
        parse_point(value, self.inner.p(), self.inner.precision()).map(PyPadic::from).map_err(map_err)
    }

    fn eval_f(&self, x: PyPadic) -> PyResult<PyPadic> {
        self.inner.eval_f(&x.inner).map(PyPadic::from).map_err(map_err)
    }

    fn eval_g(&self, x: PyPadic) -> PyResult<PyPadic> {
        self.inner.eval_g(&x.inner).map(PyPadic::from).map_err(map_err)
    }

    fn derivative(&self, x: PyPadic) -> PyResult<PyPadic> {
        self.inner.derivative(&x.inner).map(PyPadic::from).map_err(map_err)
    }

    fn multiplier(&self, x: PyPadic) -> PyResult<PyPadic> {
        self.inner.multiplier(&x.inner).map(PyPadic::from).map_err(map_err)
    }

    fn describe<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.describe())
    }

    fn __repr__(&self) -> String {
        let d = self.inner.describe();
        format!("MapParams(p={}, k={}, q={}, theta='{}')", d.p, d.k, d.q, d.theta)
    }
}

/// Parameters with their regime and, in regime B, the partition of `X`.
#[pyclass(name = "PottsSystem", module = "padic_potts", frozen)]
pub struct PyPottsSystem {
    inner: PottsSystem,
}

#[pymethods]
impl PyPottsSystem {
    #[new]
    fn new(params: PyMapParams) -> PyResult<Self> {
        PottsSystem::new(params.inner).map(|inner| PyPottsSystem { inner }).map_err(dyn_err)
    }

    #[getter]
    fn params(&self) -> PyMapParams {
        PyMapParams { inner: self.inner.params().clone() }
    }

    fn regime(&self) -> (String, u64) {
        let r = self.inner.regime();
        (r.tag.to_string(), r.kappa)
    }

    /// The partition as a dict, `None` outside regime B.
    fn partition<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner.partition().map(|part| to_py(py, &part.to_json(self.inner.params()))).transpose()
    }

    /// `(trajectory, status)` with `status` a one-key dict.
    #[pyo3(signature = (x0, max_iter = 200, tol = 20))]
    fn orbit<'py>(
        &self,
        py: Python<'py>,
        x0: PyPadic,
        max_iter: usize,
        tol: i64,
    ) -> PyResult<(Vec<PyPadic>, Bound<'py, PyAny>)> {
        let result = py.detach(|| self.inner.orbit(&x0.inner, max_iter, tol));
        let status = to_py(py, &result.status)?;
        Ok((result.trajectory.into_iter().map(PyPadic::from).collect(), status))
    }

    fn basin_classify<'py>(&self, py: Python<'py>, x0: PyPadic, depth: usize) -> PyResult<Bound<'py, PyAny>> {
        let c = py.detach(|| self.inner.basin_classify(&x0.inner, depth)).map_err(dyn_err)?;
        to_py(py, &c)
    }

    fn itinerary_of(&self, x0: PyPadic, n: usize) -> PyResult<Vec<usize>> {
        self.inner.itinerary_of(&x0.inner, n).map(|w| w.symbols().to_vec()).map_err(dyn_err)
    }

    /// `(point, radius_exp)` of the cylinder ball for `word`.
    fn cylinder_point(&self, word: Vec<usize>) -> PyResult<(PyPadic, i64)> {
        let (x, ball) = self.inner.cylinder_point(&itinerary(word)).map_err(dyn_err)?;
        Ok((x.into(), ball.radius_exp))
    }

    fn periodic_point(&self, word: Vec<usize>) -> PyResult<PyPadic> {
        self.inner.periodic_point(&itinerary(word)).map(PyPadic::from).map_err(dyn_err)
    }

    fn incidence_matrix(&self) -> PyResult<Vec<Vec<u32>>> {
        let a = self.inner.incidence_matrix().map_err(dyn_err)?;
        let n = a.size();
        Ok((1..=n).map(|i| (1..=n).map(|j| a.entry(i, j) as u32).collect()).collect())
    }

    fn df_exponent(&self, a: Vec<usize>, b: Vec<usize>) -> PyResult<i64> {
        self.inner.df_exponent(&itinerary(a), &itinerary(b)).map_err(dyn_err)
    }

    fn pole_preimage_tree(&self, py: Python<'_>, depth: usize) -> PyResult<Vec<Vec<PyPadic>>> {
        let levels = py.detach(|| self.inner.pole_preimage_tree(depth)).map_err(dyn_err)?;
        Ok(levels.into_iter().map(|l| l.into_iter().map(PyPadic::from).collect()).collect())
    }
}

/// The root of `a` congruent to 1, for `a ≡ 1` close enough to 1.
#[pyfunction]
fn principal_kth_root(a: PyPadic, k: u64) -> PyResult<PyPadic> {
    hensel::principal_kth_root(&a.inner, k).map(PyPadic::from).map_err(hensel_err)
}

#[pyfunction]
#[pyo3(signature = (k, p, precision = 64))]
fn roots_of_unity(k: u64, p: u64, precision: u32) -> Vec<PyPadic> {
    hensel::roots_of_unity(k, p, precision).into_iter().map(PyPadic::from).collect()
}

/// The fixed point `x_* ∈ X` of a B1 map.
#[pyfunction]
fn fixed_point_b1(params: PyMapParams) -> PyResult<PyPadic> {
    hensel::fixed_point_b1(&params.inner).map(PyPadic::from).map_err(hensel_err)
}

/// Registers the classes, functions and exceptions on `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", padic_potts::VERSION)?;
    m.add_class::<PyPadic>()?;
    m.add_class::<PyMapParams>()?;
    m.add_class::<PyPottsSystem>()?;
    m.add_function(wrap_pyfunction!(principal_kth_root, m)?)?;
    m.add_function(wrap_pyfunction!(roots_of_unity, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_point_b1, m)?)?;
    m.add("PrecisionError", py.get_type::<PrecisionError>())?;
    m.add("PoleHitError", py.get_type::<PoleHitError>())?;
    Ok(())
}

#[pymodule(name = "padic_potts")]
fn padic_potts_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
