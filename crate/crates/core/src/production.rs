//! Production mapping and period accounting.
//!
//! A firm plans a task vector `y`, feeds a skill vector `x` through its
//! matching matrix `A` to realize outputs `y_hat = x * A`, and values tasks
//! with a weight vector `lambda`. Expected income is `lambda . y`, actual
//! income is `lambda . y_hat`, and the per-task profit gap
//! `r_v = lambda_v * (y_v - y_hat_v)` decomposes the firm-level gap between
//! expected and actual profit.

use alloc::vec::Vec;

use crate::error::{Error, Result};

fn ensure_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

fn ensure_nonnegative(field: &'static str, values: &[f64]) -> Result<()> {
    for &v in values {
        // also rejects NaN, which fails every comparison
        if !(v >= 0.0) {
            return Err(Error::InvalidValue { field, value: v });
        }
    }
    Ok(())
}

/// Skill quantities supplied to production, split by source.
///
/// `labor[u]` and `machine[u]` are the units of skill `u` provided by workers
/// and by machines; production only sees their sum, the cost model prices
/// them separately. A zero entry means the skill is not in use, not that it
/// does not exist.
#[derive(Debug, Clone, PartialEq)]
pub struct SkillVector {
    labor: Vec<f64>,
    machine: Vec<f64>,
}

impl SkillVector {
    pub fn new(labor: Vec<f64>, machine: Vec<f64>) -> Result<Self> {
        if labor.is_empty() {
            return Err(Error::Empty { what: "skill vector" });
        }
        ensure_len(labor.len(), machine.len())?;
        ensure_nonnegative("labor", &labor)?;
        ensure_nonnegative("machine", &machine)?;
        Ok(Self { labor, machine })
    }

    /// All skill units supplied by workers, none by machines.
    pub fn from_labor(labor: Vec<f64>) -> Result<Self> {
        let machine = alloc::vec![0.0; labor.len()];
        Self::new(labor, machine)
    }

    pub fn len(&self) -> usize {
        self.labor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labor.is_empty()
    }

    pub fn labor(&self) -> &[f64] {
        &self.labor
    }

    pub fn machine(&self) -> &[f64] {
        &self.machine
    }

    /// Total units of skill `u` fed into production.
    pub fn total(&self, u: usize) -> f64 {
        self.labor[u] + self.machine[u]
    }

    pub fn totals(&self) -> Vec<f64> {
        self.labor
            .iter()
            .zip(&self.machine)
            .map(|(l, k)| l + k)
            .collect()
    }
}

/// Expected (planned) task quantities. A zero entry marks an inessential task.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskVector {
    quantities: Vec<f64>,
}

impl TaskVector {
    pub fn new(quantities: Vec<f64>) -> Result<Self> {
        if quantities.is_empty() {
            return Err(Error::Empty { what: "task vector" });
        }
        ensure_nonnegative("quantities", &quantities)?;
        Ok(Self { quantities })
    }

    pub fn len(&self) -> usize {
        self.quantities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quantities.is_empty()
    }

    pub fn quantities(&self) -> &[f64] {
        &self.quantities
    }
}

/// Realized task outputs `y_hat = x * A`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskOutputVector {
    quantities: Vec<f64>,
}

impl TaskOutputVector {
    pub fn new(quantities: Vec<f64>) -> Result<Self> {
        if quantities.is_empty() {
            return Err(Error::Empty { what: "task output vector" });
        }
        Ok(Self { quantities })
    }

    pub fn len(&self) -> usize {
        self.quantities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quantities.is_empty()
    }

    pub fn quantities(&self) -> &[f64] {
        &self.quantities
    }
}

/// Nonnegative `i x j` matrix mapping skill quantities to task outputs; the
/// firm's production technique.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingMatrix {
    // row-major: entries[u][v] couples skill u to task v
    entries: Vec<Vec<f64>>,
}

impl MatchingMatrix {
    pub fn new(entries: Vec<Vec<f64>>) -> Result<Self> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(Error::Empty { what: "matching matrix" });
        }
        let cols = entries[0].len();
        for row in &entries {
            ensure_len(cols, row.len())?;
            ensure_nonnegative("matrix entry", row)?;
        }
        Ok(Self { entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|u| (0..n).map(|v| if u == v { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { entries }
    }

    /// Entries drawn uniformly from `[lo, hi)`, row-major draw order.
    pub fn random_uniform(
        skills: usize,
        tasks: usize,
        lo: f64,
        hi: f64,
        rng: &mut crate::rng::SimRng,
    ) -> Result<Self> {
        if skills == 0 || tasks == 0 {
            return Err(Error::Empty { what: "matching matrix" });
        }
        if !(lo >= 0.0) || hi < lo {
            return Err(Error::InvalidValue { field: "matrix range", value: lo });
        }
        let entries = (0..skills)
            .map(|_| (0..tasks).map(|_| rng.uniform(lo, hi)).collect())
            .collect();
        Ok(Self { entries })
    }

    /// Number of skills (rows).
    pub fn skills(&self) -> usize {
        self.entries.len()
    }

    /// Number of tasks (columns).
    pub fn tasks(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entry(&self, skill: usize, task: usize) -> f64 {
        self.entries[skill][task]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    // updates clamp at zero before calling this, keeping the invariant
    pub(crate) fn from_rows_unchecked(entries: Vec<Vec<f64>>) -> Self {
        Self { entries }
    }
}

/// Per-task value weights; the firm's business strategy. Signs unconstrained.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskValueVector {
    values: Vec<f64>,
}

impl TaskValueVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty { what: "task value vector" });
        }
        for &v in &values {
            if v.is_nan() {
                return Err(Error::InvalidValue { field: "values", value: v });
            }
        }
        Ok(Self { values })
    }

    pub fn random_uniform(
        tasks: usize,
        lo: f64,
        hi: f64,
        rng: &mut crate::rng::SimRng,
    ) -> Result<Self> {
        if tasks == 0 {
            return Err(Error::Empty { what: "task value vector" });
        }
        Self::new((0..tasks).map(|_| rng.uniform(lo, hi)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Prices for acquiring skills plus financing terms for fixed investment.
///
/// Total cost is `d . x_machine + w . x_labor + (phi . x_machine) / ((1 + r) * delta)`,
/// with `d` the per-unit machine price, `w` the wage, and `phi` the linear
/// fixed-investment coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    machine_price: Vec<f64>,
    wage: Vec<f64>,
    fixed_coeff: Vec<f64>,
    interest_rate: f64,
    depreciation: f64,
}

impl CostModel {
    pub fn new(
        machine_price: Vec<f64>,
        wage: Vec<f64>,
        fixed_coeff: Vec<f64>,
        interest_rate: f64,
        depreciation: f64,
    ) -> Result<Self> {
        if machine_price.is_empty() {
            return Err(Error::Empty { what: "cost model" });
        }
        ensure_len(machine_price.len(), wage.len())?;
        ensure_len(machine_price.len(), fixed_coeff.len())?;
        ensure_nonnegative("machine_price", &machine_price)?;
        ensure_nonnegative("wage", &wage)?;
        ensure_nonnegative("fixed_coeff", &fixed_coeff)?;
        if !(interest_rate >= 0.0) {
            return Err(Error::InvalidValue { field: "interest_rate", value: interest_rate });
        }
        // delta in (0, 1] keeps the financing term finite
        if !(depreciation > 0.0 && depreciation <= 1.0) {
            return Err(Error::InvalidValue { field: "depreciation", value: depreciation });
        }
        Ok(Self { machine_price, wage, fixed_coeff, interest_rate, depreciation })
    }

    /// Free production: all prices zero, `r = 0`, `delta = 1`.
    pub fn zero(skills: usize) -> Result<Self> {
        Self::new(
            alloc::vec![0.0; skills],
            alloc::vec![0.0; skills],
            alloc::vec![0.0; skills],
            0.0,
            1.0,
        )
    }

    pub fn skills(&self) -> usize {
        self.machine_price.len()
    }

    pub fn machine_price(&self) -> &[f64] {
        &self.machine_price
    }

    pub fn wage(&self) -> &[f64] {
        &self.wage
    }

    pub fn fixed_coeff(&self) -> &[f64] {
        &self.fixed_coeff
    }

    pub fn interest_rate(&self) -> f64 {
        self.interest_rate
    }

    pub fn depreciation(&self) -> f64 {
        self.depreciation
    }
}

/// Per-task gap between expected and actual profit, `r_v = lambda_v * (y_v - y_hat_v)`.
///
/// A positive component means the task under-delivered on its plan; the sum
/// of all components equals expected minus actual income.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfitGapVector {
    gaps: Vec<f64>,
}

impl ProfitGapVector {
    pub fn new(gaps: Vec<f64>) -> Self {
        Self { gaps }
    }

    pub fn len(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Largest absolute component; the firm's convergence signal.
    pub fn max_norm(&self) -> f64 {
        self.gaps.iter().fold(0.0, |m, &g| {
            let a = libm::fabs(g);
            if a > m {
                a
            } else {
                m
            }
        })
    }

    pub fn sum(&self) -> f64 {
        self.gaps.iter().sum()
    }
}

/// Realized task outputs `y_hat[v] = sum_u x_u * a_uv`.
pub fn task_output(skills: &SkillVector, matrix: &MatchingMatrix) -> Result<TaskOutputVector> {
    ensure_len(matrix.skills(), skills.len())?;
    let mut out = alloc::vec![0.0; matrix.tasks()];
    for (u, row) in matrix.rows().iter().enumerate() {
        let x = skills.total(u);
        for (v, a) in row.iter().enumerate() {
            out[v] += x * a;
        }
    }
    TaskOutputVector::new(out)
}

/// Expected income `I = lambda . y`. May be negative when values are.
pub fn expected_income(values: &TaskValueVector, tasks: &TaskVector) -> Result<f64> {
    ensure_len(values.len(), tasks.len())?;
    Ok(values
        .values()
        .iter()
        .zip(tasks.quantities())
        .map(|(l, y)| l * y)
        .sum())
}

/// Actual income `I_hat = lambda . y_hat`.
pub fn actual_income(values: &TaskValueVector, output: &TaskOutputVector) -> Result<f64> {
    ensure_len(values.len(), output.len())?;
    Ok(values
        .values()
        .iter()
        .zip(output.quantities())
        .map(|(l, y)| l * y)
        .sum())
}

/// Total cost of acquiring the given skills under the model.
pub fn cost(model: &CostModel, skills: &SkillVector) -> Result<f64> {
    ensure_len(model.skills(), skills.len())?;
    let mut variable = 0.0;
    let mut fixed = 0.0;
    for u in 0..skills.len() {
        variable += model.machine_price()[u] * skills.machine()[u]
            + model.wage()[u] * skills.labor()[u];
        fixed += model.fixed_coeff()[u] * skills.machine()[u];
    }
    Ok(variable + fixed / ((1.0 + model.interest_rate()) * model.depreciation()))
}

/// Expected and actual profit for the period.
///
/// Expected profit is `price * expected_quantity - cost`; actual profit is
/// `actual income - cost`, so the profit gap equals the income gap exactly.
pub fn profits(
    price: f64,
    expected_quantity: f64,
    income_actual: f64,
    total_cost: f64,
) -> Result<(f64, f64)> {
    if !(price > 0.0) {
        return Err(Error::InvalidValue { field: "price", value: price });
    }
    let expected = price * expected_quantity - total_cost;
    let actual = income_actual - total_cost;
    Ok((expected, actual))
}

/// Task-level profit gap `r_v = lambda_v * (y_v - y_hat_v)`.
pub fn profit_gap(
    values: &TaskValueVector,
    tasks: &TaskVector,
    output: &TaskOutputVector,
) -> Result<ProfitGapVector> {
    ensure_len(values.len(), tasks.len())?;
    ensure_len(values.len(), output.len())?;
    let gaps = values
        .values()
        .iter()
        .zip(tasks.quantities().iter().zip(output.quantities()))
        .map(|(l, (y, yh))| l * (y - yh))
        .collect();
    Ok(ProfitGapVector::new(gaps))
}

/// Diagnostic for the unit normalization `x * A = [1, 1, ..., 1]`.
///
/// True iff every component of `x * A` lies within `tol` of 1. This is never
/// enforced during learning; a recalibrating firm's matrix violates it by
/// construction.
pub fn unit_matching_check(
    skills: &SkillVector,
    matrix: &MatchingMatrix,
    tol: f64,
) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidValue { field: "tol", value: tol });
    }
    let out = task_output(skills, matrix)?;
    Ok(out.quantities().iter().all(|&q| libm::fabs(q - 1.0) <= tol))
}
