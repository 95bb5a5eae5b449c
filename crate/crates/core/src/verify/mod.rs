//! Numerical checks behind the command-line suites. Each function samples
//! deterministically from `Settings::seed` and returns named pass/fail
//! records with the observed value, the expected value and a worst error.

mod so;
mod su;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

pub use so::{
    an_lines, killing_identity, n_action, nilpotency_so, parabolic_orbits, parabolic_structure, so_exp_forms,
    so_root_structure, so_slice_solver,
};
pub use su::{
    classification, fn_reduction, kaehler_angles, nilpotency_su, su_exp_forms, su_root_structure, su_slice_solvers,
    tubes,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One named comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub observed: Value,
    pub expected: Value,
    pub max_err: Option<f64>,
}

impl Check {
    pub fn equal<T: Serialize + PartialEq>(name: impl Into<String>, observed: T, expected: T) -> Self {
        let status = if observed == expected { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, observed: to_value(&observed), expected: to_value(&expected), max_err: None }
    }

    /// Passes when `max_err <= tol` (a NaN error fails).
    pub fn bounded(name: impl Into<String>, max_err: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            status: if max_err <= tol { Status::Pass } else { Status::Fail },
            observed: to_value(&max_err),
            expected: to_value(&tol),
            max_err: Some(max_err),
        }
    }

    pub fn holds(name: impl Into<String>, ok: bool, observed: Value, expected: Value) -> Self {
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            observed,
            expected,
            max_err: None,
        }
    }

    pub fn failed(name: impl Into<String>, err: &Error) -> Self {
        Self {
            name: name.into(),
            status: Status::Error,
            observed: Value::String(err.to_string()),
            expected: Value::Null,
            max_err: None,
        }
    }

    pub fn with_max_err(mut self, err: f64) -> Self {
        self.max_err = Some(err);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// Run `f`, turning an error into an `error` record named `name`.
pub(crate) fn guarded(name: &str, f: impl FnOnce() -> crate::Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::failed(name, &e)])
}

/// Sampling parameters shared by every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub samples: usize,
    pub seed: u64,
    /// Overrides the per-check numerical tolerance when set.
    pub tol: Option<f64>,
}

impl Settings {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples: samples.max(1), seed, tol: None }
    }

    pub fn with_tol(mut self, tol: Option<f64>) -> Self {
        self.tol = tol;
        self
    }

    pub(crate) fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// A seed distinct per `(check, n)`.
    pub(crate) fn seed_for(&self, tag: u64, n: usize) -> u64 {
        crate::indefinite::derive_seed(crate::indefinite::derive_seed(self.seed, tag), n as u64)
    }
}

/// Largest entrywise deviation scaled by `max(1, |reference|_max)`.
pub(crate) fn scaled_deviation(
    a: &nalgebra::DMatrix<crate::indefinite::C64>,
    b: &nalgebra::DMatrix<crate::indefinite::C64>,
) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}
