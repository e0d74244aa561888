use std::path::{Path, PathBuf};

use itframe::{BoundedSet, GeneratorKind, Tolerances, TranslateSet};
use serde::{Deserialize, Serialize};

use crate::run::RunError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub set: SetSection,
    pub grid: GridSection,
    pub generator: GeneratorKind,
    pub translates: TranslateSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub tasks: TasksSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<SignalSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSection {
    pub intervals: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub nodes_per_unit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TranslateSpec {
    Explicit {
        points: Vec<f64>,
    },
    Lattice {
        step: f64,
        count: usize,
        #[serde(default)]
        start: i64,
    },
    JitteredLattice {
        step: f64,
        count: usize,
        #[serde(default)]
        start: i64,
        jitter: f64,
        seed: Option<u64>,
    },
}

impl TranslateSpec {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::JitteredLattice { seed, .. } => *seed,
            _ => None,
        }
    }

    pub fn build(&self) -> Result<TranslateSet, RunError> {
        Ok(match self {
            Self::Explicit { points } => TranslateSet::explicit(points.clone())?,
            Self::Lattice { step, count, start } => TranslateSet::lattice(*step, *start, *count)?,
            Self::JitteredLattice { step, count, start, jitter, seed } => {
                let seed = match seed {
                    Some(s) => *s,
                    None if *jitter == 0.0 => 0,
                    None => return Err(RunError::Config("jittered_lattice with jitter > 0 needs a seed".into())),
                };
                TranslateSet::jittered_lattice(*step, *start, *count, *jitter, seed)?
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TasksSection {
    pub run: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub matrices: bool,
}

/// Signal used by the `reconstruct` task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    #[serde(flatten)]
    pub source: SignalSource,
    /// Time-domain points where `f(x)` and its reconstruction are evaluated.
    #[serde(default)]
    pub eval_points: Vec<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalSource {
    /// `f = D_φ c` with random Gaussian `c`.
    Random,
    /// `f = T_λk φ`.
    Element { index: usize },
    /// `f = D_φ c` with the given coefficients.
    Coefficients {
        re: Vec<f64>,
        #[serde(default)]
        im: Option<Vec<f64>>,
    },
    /// A random frequency-domain vector, generally off the span.
    OffSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Gram,
    Certify,
    Bounds,
    Factorize,
    Dual,
    Parseval,
    Reconstruct,
}

impl Task {
    pub const ALL: [Task; 7] =
        [Task::Gram, Task::Certify, Task::Bounds, Task::Factorize, Task::Dual, Task::Parseval, Task::Reconstruct];

    pub fn name(self) -> &'static str {
        match self {
            Task::Gram => "gram",
            Task::Certify => "certify",
            Task::Bounds => "bounds",
            Task::Factorize => "factorize",
            Task::Dual => "dual",
            Task::Parseval => "parseval",
            Task::Reconstruct => "reconstruct",
        }
    }

    /// Expand a task list in declaration order; `all` expands in place.
    pub fn parse_list(names: &[String]) -> Result<Vec<Task>, RunError> {
        if names.is_empty() {
            return Err(RunError::Config("no tasks requested".into()));
        }
        let mut out = Vec::new();
        for n in names {
            if n == "all" {
                out.extend(Task::ALL);
            } else {
                let t = Task::ALL
                    .into_iter()
                    .find(|t| t.name() == n)
                    .ok_or_else(|| RunError::Config(format!("unknown task `{n}`")))?;
                out.push(t);
            }
        }
        let mut seen = Vec::new();
        out.retain(|t| {
            let fresh = !seen.contains(t);
            seen.push(*t);
            fresh
        });
        Ok(out)
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, RunError> {
        let cfg: Self = toml::from_str(text).map_err(|e| RunError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), RunError> {
        BoundedSet::new(self.set.intervals.clone())?;
        if self.grid.nodes_per_unit == 0 {
            return Err(RunError::Config("grid.nodes_per_unit must be at least 1".into()));
        }
        self.tolerances.validate()?;
        Task::parse_list(&self.tasks.run)?;
        if let TranslateSpec::JitteredLattice { seed: None, jitter, .. } = &self.translates {
            if *jitter > 0.0 {
                return Err(RunError::Config("jittered_lattice with jitter > 0 needs a seed".into()));
            }
        }
        Ok(())
    }

    /// Seed of the single RNG behind jitter and random coefficients.
    pub fn master_seed(&self) -> u64 {
        self.translates.seed().or(self.signal.as_ref().and_then(|s| s.seed)).unwrap_or(0)
    }

    pub fn tasks(&self) -> Result<Vec<Task>, RunError> {
        Task::parse_list(&self.tasks.run)
    }
}
