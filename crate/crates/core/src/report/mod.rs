//! Named verification suites and their reports.

use std::fmt::Write as _;
use std::io;
use std::ops::RangeInclusive;

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::{Error, Result};
use crate::verify::{self, Check, Settings, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    RootsSo2n,
    RootsSu1n,
    ExpClosedForms,
    Su1nClassification,
    NOrbits,
    AnLines,
    ParabolicOrbits,
    Kaehler,
    ParabolicStructure,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Self::RootsSo2n,
        Self::RootsSu1n,
        Self::ExpClosedForms,
        Self::Su1nClassification,
        Self::NOrbits,
        Self::AnLines,
        Self::ParabolicOrbits,
        Self::Kaehler,
        Self::ParabolicStructure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::RootsSo2n => "roots-so2n",
            Self::RootsSu1n => "roots-su1n",
            Self::ExpClosedForms => "exp-closed-forms",
            Self::Su1nClassification => "su1n-classification",
            Self::NOrbits => "n-orbits",
            Self::AnLines => "an-lines",
            Self::ParabolicOrbits => "parabolic-orbits",
            Self::Kaehler => "kaehler",
            Self::ParabolicStructure => "parabolic-structure",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Self::RootsSo2n => "restricted roots of so(2,n), closed-form root spaces, Killing form, 3-step nilpotency",
            Self::RootsSu1n => "restricted roots of su(1,n), closed-form root spaces, 2-step nilpotency",
            Self::ExpClosedForms => "closed-form exponentials of A, N, S in SU(1,n) and of N in SO(2,n)",
            Self::Su1nClassification => {
                "cohomogeneity one actions on AdS^{2n+1}: every case, f + n criterion and reduction, slice solvers, tubes"
            }
            Self::NOrbits => "orbits of N on AdS^{n+1}: dimensions, slices and the slice solver",
            Self::AnLines => "which R H_{a,b} + n act with cohomogeneity one",
            Self::ParabolicOrbits => "orbits of the parabolic subgroups and leaf labels",
            Self::Kaehler => "constant Kaehler angle decompositions of w",
            Self::ParabolicStructure => "Langlands decompositions q = l + n of so(2,n)",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    /// Values of `n` the suite accepts.
    pub fn supported(self) -> RangeInclusive<usize> {
        match self {
            Self::RootsSo2n | Self::NOrbits | Self::AnLines | Self::ParabolicOrbits | Self::ParabolicStructure => 3..=8,
            Self::ExpClosedForms => 2..=6,
            Self::RootsSu1n | Self::Su1nClassification => 2..=5,
            Self::Kaehler => 3..=8,
        }
    }

    pub fn default_n(self) -> Vec<usize> {
        match self {
            Self::RootsSo2n | Self::NOrbits => (3..=6).collect(),
            Self::AnLines | Self::ParabolicOrbits | Self::ParabolicStructure => vec![3, 4, 5],
            Self::RootsSu1n | Self::ExpClosedForms | Self::Su1nClassification => vec![2, 3, 4],
            Self::Kaehler => vec![3, 4, 5],
        }
    }

    pub fn run(self, n: usize, s: &Settings) -> Vec<Check> {
        let mut out = Vec::new();
        match self {
            Self::RootsSo2n => {
                out.extend(verify::so_root_structure(n, s));
                out.extend(verify::killing_identity(n, s));
                out.extend(verify::nilpotency_so(n, s));
            }
            Self::RootsSu1n => {
                out.extend(verify::su_root_structure(n, s));
                out.extend(verify::nilpotency_su(n, s));
            }
            Self::ExpClosedForms => {
                out.extend(verify::su_exp_forms(n, s));
                if n >= 3 {
                    out.extend(verify::so_exp_forms(n, s));
                }
            }
            Self::Su1nClassification => {
                out.extend(verify::classification(n, s));
                out.extend(verify::fn_reduction(n, s));
                out.extend(verify::su_slice_solvers(n, s));
                out.extend(verify::tubes(n, s));
            }
            Self::NOrbits => {
                out.extend(verify::n_action(n, s));
                out.extend(verify::so_slice_solver(n, s));
            }
            Self::AnLines => out.extend(verify::an_lines(n, s)),
            Self::ParabolicOrbits => out.extend(verify::parabolic_orbits(n, s)),
            Self::Kaehler => out.extend(verify::kaehler_angles(n, s)),
            Self::ParabolicStructure => {
                out.extend(verify::parabolic_structure(n, s));
                out.extend(verify::nilpotency_so(n, s));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub n: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        Self { suite, n: suite.default_n(), samples: 50, seed: 0, tol: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Argument("samples must be at least 1".into()));
        }
        if self.n.is_empty() {
            return Err(Error::Argument("no values of n given".into()));
        }
        let range = self.suite.supported();
        if let Some(bad) = self.n.iter().find(|n| !range.contains(n)) {
            return Err(Error::Argument(format!(
                "n = {bad} outside {}..={} for suite {}",
                range.start(),
                range.end(),
                self.suite.name()
            )));
        }
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Argument(format!("tolerance {t} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Overall {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub n: Vec<usize>,
    pub seed: u64,
    pub samples: usize,
    pub tol: Option<f64>,
    pub checks: Vec<Check>,
    pub overall: Overall,
}

impl Report {
    pub fn new(config: &SuiteConfig, checks: Vec<Check>) -> Self {
        let overall = if checks.iter().all(Check::passed) { Overall::Pass } else { Overall::Fail };
        Self {
            suite: config.suite.name().to_string(),
            n: config.n.clone(),
            seed: config.seed,
            samples: config.samples,
            tol: config.tol,
            checks,
            overall,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.overall {
            Overall::Pass => 0,
            Overall::Fail => 1,
        }
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    config.validate()?;
    let settings = Settings::new(config.samples, config.seed).with_tol(config.tol);
    let checks = config.n.iter().flat_map(|&n| config.suite.run(n, &settings)).collect();
    Ok(Report::new(config, checks))
}

/// Compact JSON with every float written to 17 significant digits.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json(report: &Report) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    report.serialize(&mut ser).expect("reports serialise");
    String::from_utf8(buf).expect("utf-8 output")
}

pub fn to_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "suite {}  n {:?}  seed {}  samples {}  tol {}",
        report.suite,
        report.n,
        report.seed,
        report.samples,
        report.tol.map_or("default".to_string(), |t| format!("{t:e}"))
    );
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let err = c.max_err.map_or(String::new(), |e| format!("  max_err {e:.3e}"));
        let _ = writeln!(out, "{status:5}  {:width$}  observed {}  expected {}{err}", c.name, c.observed, c.expected);
    }
    let passed = report.checks.iter().filter(|c| c.passed()).count();
    let _ = writeln!(
        out,
        "overall {}  ({passed}/{} checks passed)",
        match report.overall {
            Overall::Pass => "pass",
            Overall::Fail => "FAIL",
        },
        report.checks.len()
    );
    out
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Text => to_text(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty() -> Report {
        Report::new(&SuiteConfig::new(Suite::Kaehler), Vec::new())
    }

    #[test]
    fn empty_report_passes() {
        let r = empty();
        assert_eq!(r.overall, Overall::Pass);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn one_failure_fails() {
        let r = Report::new(&SuiteConfig::new(Suite::Kaehler), vec![Check::equal("x", 1, 2)]);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn json_key_order_and_floats() {
        let mut cfg = SuiteConfig::new(Suite::Kaehler);
        cfg.tol = Some(0.1);
        let r = Report::new(&cfg, vec![Check::bounded("b", 1.0 / 3.0, 1e-9)]);
        let s = to_json(&r);
        let keys = ["\"suite\"", "\"n\"", "\"seed\"", "\"samples\"", "\"tol\"", "\"checks\"", "\"overall\""];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(s.contains("3.3333333333333331e-1"));
        assert!(s.contains("\"tol\":1.0000000000000001e-1"));
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["checks"][0]["status"], "fail");
    }

    #[test]
    fn unknown_names_and_ranges() {
        assert_eq!(Suite::from_name("nope"), None);
        let mut cfg = SuiteConfig::new(Suite::NOrbits);
        cfg.n = vec![2];
        assert!(run_suite(&cfg).is_err());
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
    }
}
