//! Serializable run reports.
//!
//! Exact rationals are written as `"num/den"` strings (or `"num"` for
//! integers) next to an `f64` approximation, since JSON numbers cannot carry
//! big rationals.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::scalar::{rational_string, Rational, ToFloat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Status::Pass
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// One named result line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Exact value or summary text.
    pub exact: Option<String>,
    pub float: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, ok: bool) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::from_bool(ok),
            exact: None,
            float: None,
            detail: None,
        }
    }

    pub fn with_rational(mut self, value: &Rational) -> Self {
        self.exact = Some(rational_string(value));
        self.float = Some(value.to_float());
        self
    }

    pub fn with_exact(mut self, text: impl Into<String>) -> Self {
        self.exact = Some(text.into());
        self
    }

    pub fn with_float(mut self, value: f64) -> Self {
        self.float = Some(value);
        self
    }

    pub fn with_detail(mut self, text: impl Into<String>) -> Self {
        self.detail = Some(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status.passed()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: Vec<CheckResult>,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn input(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn push(&mut self, result: CheckResult) {
        self.results.push(result);
    }

    pub fn passed(&self) -> bool {
        self.results.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed())
    }

    /// Plain-text table, one line per result.
    pub fn to_table(&self) -> String {
        let width = self.results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.results {
            let mut line = format!("{:<4}  {:<width$}", r.status, r.name);
            if let Some(e) = &r.exact {
                line.push_str("  ");
                line.push_str(e);
            }
            if let Some(x) = r.float {
                line.push_str(&format!("  ({x:.6e})"));
            }
            if let Some(d) = &r.detail {
                line.push_str("  ");
                line.push_str(d);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{} checks, {} passed, {} failed, {} ms\n",
            self.results.len(),
            self.results.len() - failed,
            failed,
            self.elapsed_ms
        ));
        out
    }
}

/// Exact rational paired with its float approximation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactValue {
    pub exact: String,
    pub float: f64,
}

impl From<&Rational> for ExactValue {
    fn from(r: &Rational) -> Self {
        ExactValue {
            exact: rational_string(r),
            float: r.to_float(),
        }
    }
}

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    ExactValue::from(r).serialize(s)
}

pub fn ser_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    r.as_ref().map(ExactValue::from).serialize(s)
}

pub fn ser_rational_vec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational_string))
}

pub fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ser_display_vec<T: fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn exact_values_are_strings() {
        let v = ExactValue::from(&rat(-5, 3));
        assert_eq!(v.exact, "-5/3");
        assert!((v.float + 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn table_and_status() {
        let mut rep = RunReport::new("verify").input("seed", 3);
        rep.push(CheckResult::new("a", true).with_rational(&rat(1, 2)));
        rep.push(CheckResult::new("b", false).with_detail("mismatch"));
        assert!(!rep.passed());
        let t = rep.to_table();
        assert!(t.contains("PASS  a  1/2"));
        assert!(t.contains("FAIL  b  mismatch"));
        assert!(t.contains("2 checks, 1 passed, 1 failed"));
    }
}
