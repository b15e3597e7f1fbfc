//! Suite reports, rendered as JSON lines: one header object per suite
//! followed by one object per check, in check order.

use std::io::{self, Write};

use frobenius_core::geometry::VectorField;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Skip,
    Fail,
    /// The check could not be carried out on this input (for example a
    /// non-tame point); distinct from a failed identity.
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    /// Name of the identity or property being checked.
    pub anchor: String,
    pub status: Status,
    /// `"exact-zero"`, a formatted maximum absolute coefficient, or a
    /// formatted floating-point residual.
    pub residual: String,
    pub certified_degree: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(
        suite: &str,
        check: impl Into<String>,
        anchor: &str,
        status: Status,
        residual: impl Into<String>,
    ) -> Self {
        Self {
            suite: suite.to_string(),
            check: check.into(),
            anchor: anchor.to_string(),
            status,
            residual: residual.into(),
            certified_degree: None,
            detail: None,
        }
    }

    /// Exact check: passes iff the residual vanishes up to its validity.
    pub fn exact(
        suite: &str,
        check: impl Into<String>,
        anchor: &str,
        residual: &VectorField,
    ) -> Self {
        let zero = residual.vanishes();
        Self::new(
            suite,
            check,
            anchor,
            if zero { Status::Pass } else { Status::Fail },
            exact_residual(zero, residual.max_abs_coeff()),
        )
        .with_degree(residual.validity())
    }

    /// Numeric check against a tolerance.
    pub fn numeric(
        suite: &str,
        check: impl Into<String>,
        anchor: &str,
        residual: f64,
        tol: f64,
    ) -> Self {
        let status = if residual <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Self::new(suite, check, anchor, status, format_float(residual))
    }

    pub fn with_degree(mut self, degree: Option<i32>) -> Self {
        self.certified_degree = degree;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

pub fn exact_residual(zero: bool, worst: f64) -> String {
    if zero {
        "exact-zero".to_string()
    } else {
        format_float(worst)
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.6e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Header<'a> {
    suite: &'a str,
    status: Status,
    checks: usize,
    seed: u64,
    samples: usize,
    tol: f64,
    step: f64,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    notices: &'a [String],
}

/// Records of one suite plus the settings that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub step: f64,
    pub records: Vec<CheckRecord>,
    /// Human-readable notes such as skipped checks.
    pub notices: Vec<String>,
}

impl SuiteReport {
    /// Error dominates failure, failure dominates pass; a suite with only
    /// skipped checks is skipped.
    pub fn status(&self) -> Status {
        let worst = self.records.iter().map(|r| r.status).max();
        match worst {
            None => Status::Skip,
            Some(Status::Skip) if self.records.iter().all(|r| r.status == Status::Skip) => {
                Status::Skip
            }
            Some(Status::Skip) => Status::Pass,
            Some(s) => s,
        }
    }

    pub fn write_lines<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        let header = Header {
            suite: &self.suite,
            status: self.status(),
            checks: self.records.len(),
            seed: self.seed,
            samples: self.samples,
            tol: self.tol,
            step: self.step,
            notices: &self.notices,
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string(&header).expect("header serializes")
        )?;
        for r in &self.records {
            writeln!(
                out,
                "{}",
                serde_json::to_string(r).expect("record serializes")
            )?;
        }
        Ok(())
    }
}

/// Process exit code for a batch of reports: 1 if any check failed, else 2
/// if any check could not be carried out, else 0.
pub fn exit_code(reports: &[SuiteReport]) -> i32 {
    let statuses: Vec<Status> = reports
        .iter()
        .flat_map(|r| r.records.iter().map(|c| c.status))
        .collect();
    if statuses.contains(&Status::Fail) {
        1
    } else if statuses.contains(&Status::Error) {
        2
    } else {
        0
    }
}
