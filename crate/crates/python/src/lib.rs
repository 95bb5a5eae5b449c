//! Python bindings: points on AdS, subalgebras acting on them, the slice
//! solver for N in SO(2,n), and the verification suites.

use std::f64::consts::FRAC_PI_3;

use nalgebra::DVector;
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ads_orbits::indefinite::{sample_ads_point, AdsPoint, Constraint, Model, RANK_TOL};
use ads_orbits::kaehler::{build_w_decomposition, constant_kaehler_angle};
use ads_orbits::lie::{AlgebraKind, Subalgebra};
use ads_orbits::orbit::{cohomogeneity, fiber_contained, orbit_dim};
use ads_orbits::report::{self, Suite, SuiteConfig};
use ads_orbits::roots::{iwasawa_parts, nilpotency_degree, root_decomposition};
use ads_orbits::so2n::{self, exp_n_closed, leaf_id, rh_line, solve_n_element_so, LeafGroup, LeafLabel, NExpKind};
use ads_orbits::su1n::{case_subalgebra, Case, CaseDescriptor};
use ads_orbits::Error;

create_exception!(ads_orbits_py, AdsOrbitsError, PyException);

fn err(e: Error) -> PyErr {
    match e {
        Error::Argument(_) | Error::Dimension { .. } => PyValueError::new_err(e.to_string()),
        other => AdsOrbitsError::new_err(other.to_string()),
    }
}

fn model(name: &str) -> PyResult<Model> {
    match name {
        "real" => Ok(Model::Real),
        "complex" => Ok(Model::Complex),
        _ => Err(PyValueError::new_err(format!("model must be 'real' or 'complex', got {name:?}"))),
    }
}

fn kind(name: &str) -> PyResult<AlgebraKind> {
    match name {
        "so2n" => Ok(AlgebraKind::So2n),
        "su1n" => Ok(AlgebraKind::Su1n),
        "u1n" => Ok(AlgebraKind::U1n),
        _ => Err(PyValueError::new_err(format!("kind must be 'so2n', 'su1n' or 'u1n', got {name:?}"))),
    }
}

fn leaf_group(name: &str) -> PyResult<LeafGroup> {
    LeafGroup::ALL
        .into_iter()
        .find(|g| g.to_string() == name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown group {name:?}; use N, A1N, AN, Q0, Q1 or Q2")))
}

/// A point of AdS^{n+1} in R^{2,n} (real model) or of AdS^{2n+1} in C^{1,n}.
#[pyclass(name = "Point", module = "ads_orbits_py", frozen)]
struct Point(AdsPoint);

#[pymethods]
impl Point {
    /// Coordinates `(x_0, ..., x_{n+1})` with `-x_0^2 - x_1^2 + sum x_i^2 = -1`.
    #[staticmethod]
    fn real(coords: Vec<f64>) -> PyResult<Self> {
        AdsPoint::real(&coords).map(Self).map_err(err)
    }

    /// Coordinates `(z_0, ..., z_n)` with `-|z_0|^2 + sum |z_i|^2 = -1`.
    #[staticmethod]
    fn complex(coords: Vec<Complex64>) -> PyResult<Self> {
        AdsPoint::complex(DVector::from_vec(coords)).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (n, model="real"))]
    fn base(n: usize, model: &str) -> PyResult<Self> {
        Ok(Self(AdsPoint::base_point(self::model(model)?, n)))
    }

    /// A random point, deterministic in `seed`. `on_locus` restricts real
    /// points to `x_1 = x_3`, where N has its lower dimensional orbits.
    #[staticmethod]
    #[pyo3(signature = (n, model="real", seed=0, on_locus=false))]
    fn sample(n: usize, model: &str, seed: u64, on_locus: bool) -> PyResult<Self> {
        let constraint = if on_locus { Constraint::p2_eq_p4() } else { Constraint::none() };
        sample_ads_point(n, self::model(model)?, seed, &constraint).map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn model(&self) -> &'static str {
        match self.0.model() {
            Model::Real => "real",
            Model::Complex => "complex",
        }
    }

    #[getter]
    fn coords(&self) -> Vec<Complex64> {
        self.0.coords().iter().copied().collect()
    }

    /// Real coordinates; complex entries are interleaved as (re, im).
    fn realified(&self) -> Vec<f64> {
        self.0.realified().iter().copied().collect()
    }

    fn quadric_residual(&self) -> f64 {
        self.0.quadric_residual()
    }

    fn __repr__(&self) -> String {
        match self.0.model() {
            Model::Real => format!("Point.real({:?})", self.realified()),
            Model::Complex => format!("Point.complex({:?})", self.coords()),
        }
    }
}

/// A subalgebra of so(2,n), su(1,n) or u(1,n) acting on the matching AdS.
#[pyclass(name = "Algebra", module = "ads_orbits_py", frozen)]
struct Algebra(Subalgebra);

#[pymethods]
impl Algebra {
    /// The nilradical n of the Iwasawa decomposition.
    #[staticmethod]
    #[pyo3(signature = (n, kind="so2n"))]
    fn nilradical(n: usize, kind: &str) -> PyResult<Self> {
        let dec = root_decomposition(self::kind(kind)?, n).map_err(err)?;
        let (_, _, nil) = iwasawa_parts(&dec).map_err(err)?;
        Ok(Self(nil))
    }

    /// One of N, A1N, AN, Q0, Q1, Q2 inside so(2,n).
    #[staticmethod]
    fn so_group(group: &str, n: usize) -> PyResult<Self> {
        leaf_group(group)?.algebra(n).map(Self).map_err(err)
    }

    /// R H_{a,b} + n inside so(2,n).
    #[staticmethod]
    fn so_line(a: f64, b: f64, n: usize) -> PyResult<Self> {
        rh_line(a, b, n).map(Self).map_err(err)
    }

    /// The acting algebra of one case of the classification on AdS^{2n+1}:
    /// `"1a"`, `"1b"`, `"1c"` (uses `c`), `"2"` (uses `k`), `"3"`, `"4"` (uses `r`)
    /// or `"5"` (uses `k`, `l`, `phi`).
    #[staticmethod]
    #[pyo3(signature = (case, n, *, c=1.0, k=0, r=1, l=1, phi=FRAC_PI_3))]
    fn su_case(case: &str, n: usize, c: f64, k: usize, r: usize, l: usize, phi: f64) -> PyResult<Self> {
        let case = match case {
            "1a" => Case::OneA,
            "1b" => Case::OneB,
            "1c" => Case::OneC { c },
            "2" => Case::Two { k },
            "3" => Case::Three,
            "4" => Case::Four { r },
            "5" => Case::Five { k, l, phi },
            other => return Err(PyValueError::new_err(format!("unknown case {other:?}"))),
        };
        let d = CaseDescriptor::new(case, n).map_err(err)?;
        case_subalgebra(&d).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn kind(&self) -> String {
        self.0.kind().to_string()
    }

    fn orbit_dim(&self, p: &Point) -> PyResult<usize> {
        orbit_dim(&self.0, &p.0, RANK_TOL).map_err(err)
    }

    /// Whether the Hopf fibre direction `i p` is tangent to the orbit.
    fn fiber_contained(&self, p: &Point) -> PyResult<bool> {
        fiber_contained(&self.0, &p.0).map_err(err)
    }

    /// Sampled cohomogeneity with the orbit dimensions seen.
    #[pyo3(signature = (samples=50, seed=0))]
    fn cohomogeneity<'py>(&self, py: Python<'py>, samples: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let rep = cohomogeneity(&self.0, samples, seed, &[]).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("cohomogeneity", rep.cohomogeneity)?;
        out.set_item("ads_dim", rep.ads_dim)?;
        out.set_item("dims", rep.dims.into_iter().collect::<Vec<_>>())?;
        out.set_item("failed_samples", rep.errors.len())?;
        Ok(out)
    }

    /// Largest bracket component leaving the span; zero for a subalgebra.
    fn closure_residual(&self) -> f64 {
        self.0.closure_residual()
    }

    fn nilpotency_degree(&self) -> PyResult<usize> {
        nilpotency_degree(&self.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("<Algebra in {} (n = {}), dim {}>", self.0.kind(), self.0.n(), self.0.dim())
    }
}

/// Restricted roots with their multiplicities, keyed by the root's name.
#[pyfunction]
fn root_multiplicities<'py>(py: Python<'py>, kind: &str, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let dec = root_decomposition(self::kind(kind)?, n).map_err(err)?;
    let out = PyDict::new(py);
    for (root, basis) in &dec.spaces {
        out.set_item(root.to_string(), basis.len())?;
    }
    Ok(out)
}

/// The leaf of a real point for one of N, A1N, AN, Q0, Q1, Q2, as
/// `(label, value)`; `value` is the orbit invariant where there is one.
#[pyfunction]
fn leaf(group: &str, p: &Point) -> PyResult<(&'static str, Option<f64>)> {
    let id = leaf_id(leaf_group(group)?, &p.0).map_err(err)?;
    Ok(match id.label {
        LeafLabel::Principal(v) => ("principal", Some(v)),
        LeafLabel::PrincipalPlus => ("principal+", None),
        LeafLabel::PrincipalMinus => ("principal-", None),
        LeafLabel::Singular(v) => ("singular", Some(v)),
        LeafLabel::SingularPlus => ("singular+", None),
        LeafLabel::SingularMinus => ("singular-", None),
        LeafLabel::All => ("all", None),
    })
}

/// Whether a real point lies where N has its lower dimensional orbits.
#[pyfunction]
fn on_singular_locus(p: &Point) -> bool {
    so2n::on_singular_locus(&p.0)
}

/// Solve `exp(X) p = q` for X in the nilradical of so(2,n); returns the
/// parameters of X and the residual of `exp(X) p` against `q`.
#[pyfunction]
fn solve_n<'py>(py: Python<'py>, p: &Point, q: &Point) -> PyResult<Bound<'py, PyDict>> {
    let sol = solve_n_element_so(&p.0, &q.0).map_err(err)?;
    let moved = p.0.transform(exp_n_closed(&sol, p.0.n()).map_err(err)?.mat()).map_err(err)?;
    let out = PyDict::new(py);
    match &sol {
        NExpKind::Singular { a, v } => {
            out.set_item("kind", "singular")?;
            out.set_item("a", a)?;
            out.set_item("v", v.iter().copied().collect::<Vec<_>>())?;
        }
        NExpKind::Principal { a, b, w } => {
            out.set_item("kind", "principal")?;
            out.set_item("a", a)?;
            out.set_item("b", b)?;
            out.set_item("w", w.iter().copied().collect::<Vec<_>>())?;
        }
    }
    out.set_item("residual", (moved.coords() - q.0.coords()).norm())?;
    Ok(out)
}

/// Kaehler angle of the `w^perp` built for `(k, l, phi)` in C^{n-1}, or
/// None when the angle is not constant.
#[pyfunction]
fn kaehler_angle(k: usize, l: usize, phi: f64, n: usize) -> PyResult<Option<f64>> {
    let d = build_w_decomposition(k, l, phi, n).map_err(err)?;
    Ok(constant_kaehler_angle(&d.w_perp, 1e-9))
}

/// `(name, description)` for every suite.
#[pyfunction]
fn list_suites() -> Vec<(&'static str, &'static str)> {
    Suite::ALL.iter().map(|s| (s.name(), s.description())).collect()
}

/// Run a suite and return its JSON report.
#[pyfunction]
#[pyo3(signature = (suite, n=None, samples=50, seed=0, tol=None))]
fn verify(
    py: Python<'_>,
    suite: &str,
    n: Option<Vec<usize>>,
    samples: usize,
    seed: u64,
    tol: Option<f64>,
) -> PyResult<String> {
    let s = Suite::from_name(suite).ok_or_else(|| PyValueError::new_err(format!("unknown suite {suite:?}")))?;
    let mut config = SuiteConfig::new(s);
    if let Some(n) = n {
        config.n = n;
    }
    config.samples = samples;
    config.seed = seed;
    config.tol = tol;
    let rep = py.detach(|| report::run_suite(&config)).map_err(err)?;
    Ok(report::to_json(&rep))
}

#[pymodule]
fn ads_orbits_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AdsOrbitsError", m.py().get_type::<AdsOrbitsError>())?;
    m.add_class::<Point>()?;
    m.add_class::<Algebra>()?;
    m.add_function(wrap_pyfunction!(root_multiplicities, m)?)?;
    m.add_function(wrap_pyfunction!(leaf, m)?)?;
    m.add_function(wrap_pyfunction!(on_singular_locus, m)?)?;
    m.add_function(wrap_pyfunction!(solve_n, m)?)?;
    m.add_function(wrap_pyfunction!(kaehler_angle, m)?)?;
    m.add_function(wrap_pyfunction!(list_suites, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
