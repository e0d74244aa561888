use std::collections::BTreeMap;

use itframe::{Certificate, FrameBounds, IdentityResidual, ScalingCheck, Verdict};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::reconstruct::ReconstructionResult;

/// Certificates whose failure only means "not certified".
pub const SUFFICIENT_ONLY: &[&str] = &["riesz_diagonal_dominance"];

pub const SCHEMA_VERSION: &str = "itframe.report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Pass,
    Fail,
    Informational,
    Skipped,
}

/// A scalar inequality `value <= bound` evaluated by the runner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

impl Check {
    pub fn le(name: &str, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, bound, passed: value <= bound }
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Self { name: name.into(), value: if ok { 1.0 } else { 0.0 }, bound: 1.0, passed: ok }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskResult {
    pub task: String,
    pub status: TaskStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skip_reason: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub bounds: BTreeMap<String, FrameBounds>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<IdentityResidual>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scalings: Vec<ScalingCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<ReconstructionResult>,
}

impl TaskResult {
    pub fn new(task: &str) -> Self {
        Self {
            task: task.into(),
            status: TaskStatus::Informational,
            skip_reason: None,
            certificates: Vec::new(),
            bounds: BTreeMap::new(),
            residuals: Vec::new(),
            checks: Vec::new(),
            values: BTreeMap::new(),
            scalings: Vec::new(),
            notes: Vec::new(),
            reconstruction: None,
        }
    }

    pub fn skipped(task: &str, reason: String) -> Self {
        let mut t = Self::new(task);
        t.status = TaskStatus::Skipped;
        t.skip_reason = Some(reason);
        t
    }

    /// Fail if anything failed; pass if anything passed; informational otherwise.
    /// Sufficient-condition certificates report `fail` without failing the task.
    pub fn finalize(mut self) -> Self {
        if self.status == TaskStatus::Skipped {
            return self;
        }
        let failed =
            self.certificates.iter().any(|c| c.verdict == Verdict::Fail && !SUFFICIENT_ONLY.contains(&c.name.as_str()))
                || self.residuals.iter().any(|r| !r.passed())
                || self.checks.iter().any(|c| !c.passed);
        let passed = self.certificates.iter().any(|c| c.verdict == Verdict::Pass)
            || self.residuals.iter().any(|r| r.residual.is_some())
            || !self.checks.is_empty();
        self.status = if failed {
            TaskStatus::Fail
        } else if passed {
            TaskStatus::Pass
        } else {
            TaskStatus::Informational
        };
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub core_version: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reproducibility {
    pub seed: u64,
    pub grid_hash: String,
    pub grid_nodes: usize,
    pub translate_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub tool: ToolInfo,
    pub config: ExperimentConfig,
    pub reproducibility: Reproducibility,
    pub tasks: Vec<TaskResult>,
    pub status: TaskStatus,
    /// Wall-clock milliseconds per task; excluded from [`Report::body_json`].
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.status == TaskStatus::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Report without timings, for determinism comparisons.
    pub fn body_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings_ms");
        }
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn task(&self, name: &str) -> Option<&TaskResult> {
        self.tasks.iter().find(|t| t.task == name)
    }
}
