//! On-disk document models: the materialized scenario, the simulation trace
//! and summary, fitted parameter files, and proposition instance files.
//!
//! JSON floats serialize with shortest round-trip decimals and field order is
//! fixed by the struct definitions, so identical runs produce identical bytes.

use serde::{Deserialize, Serialize};

use skilltask_core::efficiency::{MatchingInstance, Occupation, SchedulingInstance};
use skilltask_core::iteration::{ConvergenceTrace, PeriodRecord};
use skilltask_core::production::{MatchingMatrix, SkillVector, TaskValueVector, TaskVector};
use skilltask_core::trainer::TrainingReport;

use crate::config::ScenarioConfig;
use crate::error::{CliError, CliResult};

/// Output of `gen`: the (seed-resolved) spec plus everything it implies.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub spec: ScenarioConfig,
    pub ideal_matrix: Vec<Vec<f64>>,
    pub base_skills: Vec<f64>,
    pub base_tasks: Vec<f64>,
}

/// Summary JSON written next to the trace CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryFile {
    pub converged: bool,
    /// Periods in which parameters were recalibrated.
    pub periods: usize,
    pub final_loss_matching: f64,
    pub final_loss_value: f64,
    pub final_matrix: Vec<Vec<f64>>,
    pub final_values: Vec<f64>,
}

impl SummaryFile {
    pub fn from_trace(trace: &ConvergenceTrace) -> Self {
        let last = trace.records.last();
        Self {
            converged: trace.converged,
            periods: trace.update_periods(),
            final_loss_matching: last.map_or(0.0, |r| r.loss_matching),
            final_loss_value: last.map_or(0.0, |r| r.loss_value),
            final_matrix: trace.final_state.matrix.rows().to_vec(),
            final_values: trace.final_state.values.values().to_vec(),
        }
    }
}

/// Fixed trace CSV column set; one row per executed period.
pub const TRACE_HEADER: &str = "period,E_A,E_lambda,income_expected,income_actual,cost,\
                                profit_expected,profit_actual,gap_maxnorm";

pub fn trace_csv(records: &[PeriodRecord]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in records {
        // `{}` on f64 is the shortest representation that round-trips
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.period,
            r.loss_matching,
            r.loss_value,
            r.income_expected,
            r.income_actual,
            r.total_cost,
            r.profit_expected,
            r.profit_actual,
            r.gap.max_norm(),
        ));
    }
    out
}

/// Output of `train`: the fitted parameters plus the training report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FittedFile {
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    pub report: ReportSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSection {
    pub epochs_run: usize,
    pub final_loss: f64,
    pub converged: bool,
    pub loss_history: Vec<f64>,
}

impl From<&TrainingReport> for ReportSection {
    fn from(r: &TrainingReport) -> Self {
        Self {
            epochs_run: r.epochs_run,
            final_loss: r.final_loss,
            converged: r.converged,
            loss_history: r.loss_history.clone(),
        }
    }
}

/// Instance file for `check matching`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingInstanceFile {
    pub instances: Vec<MatchingInstanceConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchingInstanceConfig {
    /// One skill vector per candidate employee.
    pub employees: Vec<Vec<f64>>,
    pub tasks: Vec<f64>,
    pub matrix: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl MatchingInstanceConfig {
    pub fn to_instance(&self) -> CliResult<MatchingInstance> {
        let employees = self
            .employees
            .iter()
            .map(|e| SkillVector::from_labor(e.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MatchingInstance::new(
            employees,
            TaskVector::new(self.tasks.clone())?,
            MatchingMatrix::new(self.matrix.clone())?,
            TaskValueVector::new(self.values.clone())?,
        )?)
    }
}

/// Instance file for `check cycle`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchedulingInstanceFile {
    pub instances: Vec<SchedulingInstanceConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchedulingInstanceConfig {
    pub task_times: Vec<f64>,
    #[serde(default)]
    pub parallelism: f64,
    pub occupations: Vec<OccupationConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OccupationConfig {
    pub task_counts: Vec<f64>,
    pub count: u32,
}

impl SchedulingInstanceConfig {
    pub fn to_instance(&self) -> CliResult<SchedulingInstance> {
        let occupations = self
            .occupations
            .iter()
            .map(|o| Occupation { task_counts: o.task_counts.clone(), count: o.count })
            .collect();
        Ok(SchedulingInstance::new(
            occupations,
            self.task_times.clone(),
            self.parallelism,
        )?)
    }
}

/// Serialize pretty and write, mapping failures to I/O errors.
pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serializing {}: {e}", path.display())))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

pub fn write_text(path: &std::path::Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
