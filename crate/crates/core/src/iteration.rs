//! Per-period recalibration loop.
//!
//! Each period the firm plans `y`, produces `y_hat = x * A`, books the full
//! accounting record, and observes the task-level profit gap `R`. While the
//! gap is open it nudges the matching matrix and the value vector by
//! delta-rule steps scaled by the learning rates, then moves to the next
//! period. The loop stops once the max-norm of `R` falls below the tolerance
//! or the period budget runs out.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::production::{
    actual_income, cost, expected_income, profit_gap, profits, task_output, CostModel,
    MatchingMatrix, ProfitGapVector, SkillVector, TaskOutputVector, TaskValueVector, TaskVector,
};
use crate::scenario::Scenario;

/// Sign convention for the matrix step.
///
/// `Descent` subtracts the gradient of the matching loss and narrows the gap.
/// `PaperLiteral` adds the same delta instead, which widens the gap; it is
/// kept so the raw update rule stays reproducible in experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixSignMode {
    Descent,
    PaperLiteral,
}

/// Which delta drives the value-vector step.
///
/// `ExactGradient` uses the gradient of the quadratic income loss,
/// `(I_hat - I) * y_hat_j`. `PaperDelta` uses the plain output residual
/// `(y_hat_j - y_j)` with the descent sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueUpdateMode {
    ExactGradient,
    PaperDelta,
}

/// Learning rates, modes, and stopping rule for the recalibration loop.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningConfig {
    lr_matrix: f64,
    lr_value: f64,
    pub matrix_sign_mode: MatrixSignMode,
    pub value_update_mode: ValueUpdateMode,
    tol: f64,
    max_periods: usize,
}

impl LearningConfig {
    pub fn new(
        lr_matrix: f64,
        lr_value: f64,
        matrix_sign_mode: MatrixSignMode,
        value_update_mode: ValueUpdateMode,
        tol: f64,
        max_periods: usize,
    ) -> Result<Self> {
        // rates strictly inside (0, 1): how fuzzy the recalibration is
        if !(lr_matrix > 0.0 && lr_matrix < 1.0) {
            return Err(Error::InvalidValue { field: "lr_matrix", value: lr_matrix });
        }
        if !(lr_value > 0.0 && lr_value < 1.0) {
            return Err(Error::InvalidValue { field: "lr_value", value: lr_value });
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidValue { field: "tol", value: tol });
        }
        if max_periods == 0 {
            return Err(Error::InvalidValue { field: "max_periods", value: 0.0 });
        }
        Ok(Self { lr_matrix, lr_value, matrix_sign_mode, value_update_mode, tol, max_periods })
    }

    pub fn lr_matrix(&self) -> f64 {
        self.lr_matrix
    }

    pub fn lr_value(&self) -> f64 {
        self.lr_value
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_periods(&self) -> usize {
        self.max_periods
    }
}

impl Default for LearningConfig {
    fn default() -> Self {
        Self {
            lr_matrix: 0.1,
            lr_value: 0.1,
            matrix_sign_mode: MatrixSignMode::Descent,
            value_update_mode: ValueUpdateMode::ExactGradient,
            tol: 1e-8,
            max_periods: 10_000,
        }
    }
}

/// The firm's learnable parameters at the start of a period.
#[derive(Debug, Clone, PartialEq)]
pub struct FirmState {
    pub period: usize,
    pub matrix: MatchingMatrix,
    pub values: TaskValueVector,
}

impl FirmState {
    pub fn new(matrix: MatchingMatrix, values: TaskValueVector) -> Result<Self> {
        if matrix.tasks() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: matrix.tasks(),
                actual: values.len(),
            });
        }
        Ok(Self { period: 0, matrix, values })
    }
}

/// Full accounting ledger for one executed period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodRecord {
    pub period: usize,
    pub tasks: TaskVector,
    pub skills: SkillVector,
    pub output: TaskOutputVector,
    pub income_expected: f64,
    pub income_actual: f64,
    pub total_cost: f64,
    pub profit_expected: f64,
    pub profit_actual: f64,
    pub gap: ProfitGapVector,
    pub loss_matching: f64,
    pub loss_value: f64,
    /// True when the gap was already below tolerance at period start, so no
    /// recalibration happened.
    pub converged: bool,
}

/// Everything a simulation run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub records: Vec<PeriodRecord>,
    pub converged: bool,
    pub final_state: FirmState,
}

impl ConvergenceTrace {
    /// Periods in which parameters were actually recalibrated.
    pub fn update_periods(&self) -> usize {
        self.records.iter().filter(|r| !r.converged).count()
    }
}

/// Matching loss `E_A = 1/2 * sum_s (y_hat_s - y_s)^2`.
pub fn loss_matching(output: &TaskOutputVector, tasks: &TaskVector) -> Result<f64> {
    if output.len() != tasks.len() {
        return Err(Error::DimensionMismatch { expected: tasks.len(), actual: output.len() });
    }
    Ok(output
        .quantities()
        .iter()
        .zip(tasks.quantities())
        .map(|(yh, y)| {
            let d = yh - y;
            0.5 * d * d
        })
        .sum())
}

/// Value loss `E_lambda = 1/2 * (I_hat - I)^2`.
pub fn loss_value(income_actual: f64, income_expected: f64) -> f64 {
    let d = income_actual - income_expected;
    0.5 * d * d
}

/// One delta-rule step on the matching matrix.
///
/// The raw delta for entry `(u, v)` is `lr * (y_hat_v - y_v) * x_u`; descent
/// mode subtracts it, paper-literal mode adds it. Entries are clamped at zero
/// afterwards so the matrix stays nonnegative.
pub fn matrix_update(
    state: &FirmState,
    skills: &SkillVector,
    tasks: &TaskVector,
    output: &TaskOutputVector,
    cfg: &LearningConfig,
) -> Result<MatchingMatrix> {
    let a = &state.matrix;
    if skills.len() != a.skills() {
        return Err(Error::DimensionMismatch { expected: a.skills(), actual: skills.len() });
    }
    if tasks.len() != a.tasks() || output.len() != a.tasks() {
        return Err(Error::DimensionMismatch { expected: a.tasks(), actual: tasks.len() });
    }
    let sign = match cfg.matrix_sign_mode {
        MatrixSignMode::Descent => -1.0,
        MatrixSignMode::PaperLiteral => 1.0,
    };
    let rows = a
        .rows()
        .iter()
        .enumerate()
        .map(|(u, row)| {
            let x = skills.total(u);
            row.iter()
                .enumerate()
                .map(|(v, &a_uv)| {
                    let residual = output.quantities()[v] - tasks.quantities()[v];
                    let next = a_uv + sign * cfg.lr_matrix * residual * x;
                    if next < 0.0 {
                        0.0
                    } else {
                        next
                    }
                })
                .collect()
        })
        .collect();
    Ok(MatchingMatrix::from_rows_unchecked(rows))
}

/// One delta-rule step on the value vector.
pub fn value_update(
    state: &FirmState,
    tasks: &TaskVector,
    output: &TaskOutputVector,
    cfg: &LearningConfig,
) -> Result<TaskValueVector> {
    let lambda = &state.values;
    if tasks.len() != lambda.len() || output.len() != lambda.len() {
        return Err(Error::DimensionMismatch { expected: lambda.len(), actual: tasks.len() });
    }
    let next = match cfg.value_update_mode {
        ValueUpdateMode::ExactGradient => {
            let income_gap =
                actual_income(lambda, output)? - expected_income(lambda, tasks)?;
            lambda
                .values()
                .iter()
                .zip(output.quantities())
                .map(|(l, yh)| l - cfg.lr_value * income_gap * yh)
                .collect()
        }
        ValueUpdateMode::PaperDelta => lambda
            .values()
            .iter()
            .zip(output.quantities().iter().zip(tasks.quantities()))
            .map(|(l, (yh, y))| l - cfg.lr_value * (yh - y))
            .collect(),
    };
    TaskValueVector::new(next)
}

/// Run one period: produce, account, and recalibrate if the gap is open.
///
/// Both updates are computed from the same pre-update output, the matrix step
/// first. When the gap max-norm is already below tolerance the parameters are
/// returned untouched and the record is flagged converged; the period counter
/// advances either way.
pub fn iterate_period(
    state: &FirmState,
    tasks: &TaskVector,
    skills: &SkillVector,
    price: f64,
    cost_model: &CostModel,
    cfg: &LearningConfig,
) -> Result<(FirmState, PeriodRecord)> {
    if state.period >= cfg.max_periods {
        return Err(Error::PeriodOverflow { period: state.period, max: cfg.max_periods });
    }
    let output = task_output(skills, &state.matrix)?;
    let income_expected = expected_income(&state.values, tasks)?;
    let income_actual = actual_income(&state.values, &output)?;
    let total_cost = cost(cost_model, skills)?;
    // planned scalar quantity is income over price, keeping I = p * Q_expected
    let (profit_expected, profit_actual) =
        profits(price, income_expected / price, income_actual, total_cost)?;
    let gap = profit_gap(&state.values, tasks, &output)?;
    let e_matching = loss_matching(&output, tasks)?;
    let e_value = loss_value(income_actual, income_expected);

    let converged = gap.max_norm() < cfg.tol();
    let next = if converged {
        FirmState {
            period: state.period + 1,
            matrix: state.matrix.clone(),
            values: state.values.clone(),
        }
    } else {
        let matrix = matrix_update(state, skills, tasks, &output, cfg)?;
        let values = value_update(state, tasks, &output, cfg)?;
        FirmState { period: state.period + 1, matrix, values }
    };

    let record = PeriodRecord {
        period: state.period,
        tasks: tasks.clone(),
        skills: skills.clone(),
        output,
        income_expected,
        income_actual,
        total_cost,
        profit_expected,
        profit_actual,
        gap,
        loss_matching: e_matching,
        loss_value: e_value,
        converged,
    };
    Ok((next, record))
}

/// Drive `iterate_period` over the scenario until the gap closes or the
/// period budget (the config's or the scenario's horizon) is exhausted.
pub fn run_until_converged(
    initial: FirmState,
    scenario: &Scenario,
    cost_model: &CostModel,
    cfg: &LearningConfig,
) -> Result<ConvergenceTrace> {
    let mut state = initial;
    let mut records = Vec::new();
    let mut converged = false;
    while state.period < cfg.max_periods() && state.period < scenario.periods() {
        let (tasks, skills, price) = scenario.period_inputs(state.period)?;
        let (next, record) = iterate_period(&state, &tasks, &skills, price, cost_model, cfg)?;
        state = next;
        converged = record.converged;
        records.push(record);
        if converged {
            break;
        }
    }
    Ok(ConvergenceTrace { records, converged, final_state: state })
}
