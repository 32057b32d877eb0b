//! Matching-granularity and iteration-cycle efficiency checks.
//!
//! Two claims are made executable here. First, choosing the best employee
//! independently for every task always yields at least as much output value
//! as assigning one whole employee to the occupation. Second, under fully
//! serial occupation durations, decomposing occupations into their task
//! totals conserves the serial-sum bound exactly and never lengthens the
//! critical-path bound. Both come with brute-force random-trial drivers.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::production::{
    task_output, MatchingMatrix, ProfitGapVector, SkillVector, TaskValueVector, TaskVector,
};
use crate::rng::SimRng;

/// A pool of candidate employees facing one occupation's tasks.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingInstance {
    employees: Vec<SkillVector>,
    occupation_tasks: TaskVector,
    matrix: MatchingMatrix,
    values: TaskValueVector,
}

impl MatchingInstance {
    pub fn new(
        employees: Vec<SkillVector>,
        occupation_tasks: TaskVector,
        matrix: MatchingMatrix,
        values: TaskValueVector,
    ) -> Result<Self> {
        if employees.is_empty() {
            return Err(Error::Empty { what: "employee list" });
        }
        for e in &employees {
            if e.len() != matrix.skills() {
                return Err(Error::DimensionMismatch {
                    expected: matrix.skills(),
                    actual: e.len(),
                });
            }
        }
        if occupation_tasks.len() != matrix.tasks() {
            return Err(Error::DimensionMismatch {
                expected: matrix.tasks(),
                actual: occupation_tasks.len(),
            });
        }
        if values.len() != matrix.tasks() {
            return Err(Error::DimensionMismatch {
                expected: matrix.tasks(),
                actual: values.len(),
            });
        }
        Ok(Self { employees, occupation_tasks, matrix, values })
    }

    pub fn employees(&self) -> &[SkillVector] {
        &self.employees
    }

    pub fn occupation_tasks(&self) -> &TaskVector {
        &self.occupation_tasks
    }

    pub fn matrix(&self) -> &MatchingMatrix {
        &self.matrix
    }

    pub fn values(&self) -> &TaskValueVector {
        &self.values
    }

    /// Output value of task `v` when employee `l` works the occupation.
    #[cfg(test)]
    fn contribution(&self, l: usize, v: usize) -> f64 {
        let out = task_output(&self.employees[l], &self.matrix)
            .expect("dimensions validated at construction");
        self.values.values()[v] * out.quantities()[v]
    }

    /// Per-employee, per-task value table; rows are employees.
    fn contribution_table(&self) -> Vec<Vec<f64>> {
        self.employees
            .iter()
            .map(|e| {
                let out = task_output(e, &self.matrix)
                    .expect("dimensions validated at construction");
                out.quantities()
                    .iter()
                    .zip(self.values.values())
                    .map(|(yh, l)| l * yh)
                    .collect()
            })
            .collect()
    }
}

/// Zero out the over-delivery components: `max(0, r_v)` per task.
///
/// Once a worker's output already exceeds a task's requirement, the task
/// cannot contribute further; negative gaps are floored at zero. Idempotent.
pub fn clamp_gap(gap: &ProfitGapVector) -> ProfitGapVector {
    ProfitGapVector::new(gap.gaps().iter().map(|&r| if r > 0.0 { r } else { 0.0 }).collect())
}

/// Best whole-employee assignment: the value of giving the entire occupation
/// to one employee, maximized over employees. Ties go to the lowest index.
pub fn job_level_value(inst: &MatchingInstance) -> (f64, usize) {
    let mut best = f64::NEG_INFINITY;
    let mut who = 0;
    for (l, row) in inst.contribution_table().iter().enumerate() {
        let total: f64 = row.iter().sum();
        if total > best {
            best = total;
            who = l;
        }
    }
    (best, who)
}

/// Result of matching employees to tasks independently.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskLevelMatch {
    /// Sum over tasks of the best single-employee value for that task.
    pub value: f64,
    /// Chosen employee per task; ties go to the lowest index.
    pub assignment: Vec<usize>,
    /// The literal single-product reference figure: `q` times the largest
    /// `x_u * a_uv * lambda_v` over all employees, skills, and tasks. Reported
    /// for comparison only; the dominance check uses `value`.
    pub literal_reference: f64,
}

/// Best per-task assignment: each task independently picks the employee whose
/// whole-occupation output values it most.
pub fn task_level_value(inst: &MatchingInstance) -> TaskLevelMatch {
    let table = inst.contribution_table();
    let q = inst.matrix.tasks();
    let mut value = 0.0;
    let mut assignment = Vec::with_capacity(q);
    for v in 0..q {
        let mut best = f64::NEG_INFINITY;
        let mut who = 0;
        for (l, row) in table.iter().enumerate() {
            if row[v] > best {
                best = row[v];
                who = l;
            }
        }
        value += best;
        assignment.push(who);
    }

    let mut literal = f64::NEG_INFINITY;
    for e in inst.employees() {
        for (u, &x) in e.totals().iter().enumerate() {
            for v in 0..q {
                let p = x * inst.matrix.entry(u, v) * inst.values.values()[v];
                if p > literal {
                    literal = p;
                }
            }
        }
    }
    TaskLevelMatch { value, assignment, literal_reference: q as f64 * literal }
}

/// Task-level matching never does worse than whole-employee matching.
pub fn check_matching_dominance(inst: &MatchingInstance) -> bool {
    let (job, _) = job_level_value(inst);
    let task = task_level_value(inst).value;
    let scale = 1.0f64.max(libm::fabs(job)).max(libm::fabs(task));
    task >= job - 1e-12 * scale
}

/// Time interval for completing a bundle of tasks: the critical path (longest
/// single task) at the parallel end, the serial sum at the other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DurationInterval {
    lower: f64,
    upper: f64,
}

impl DurationInterval {
    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

/// Bounds for one occupation: `lower = max_m(w_m * y_m)`, `upper = sum_m(w_m * y_m)`.
pub fn occupation_duration_bounds(
    task_quantities: &[f64],
    task_times: &[f64],
) -> Result<DurationInterval> {
    if task_quantities.len() != task_times.len() {
        return Err(Error::DimensionMismatch {
            expected: task_times.len(),
            actual: task_quantities.len(),
        });
    }
    for &w in task_times {
        if !(w > 0.0) {
            return Err(Error::InvalidValue { field: "task_times", value: w });
        }
    }
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    let mut any_positive = false;
    for (&y, &w) in task_quantities.iter().zip(task_times) {
        if !(y >= 0.0) {
            return Err(Error::InvalidValue { field: "task_quantities", value: y });
        }
        if y > 0.0 {
            any_positive = true;
        }
        let p = w * y;
        if p > lower {
            lower = p;
        }
        upper += p;
    }
    if !any_positive {
        return Err(Error::Empty { what: "occupation (no positive task quantity)" });
    }
    Ok(DurationInterval { lower, upper })
}

/// A point inside the duration interval: fully serial at `rho = 0`, fully
/// parallel (critical path) at `rho = 1`.
pub fn occupation_duration(
    task_quantities: &[f64],
    task_times: &[f64],
    rho: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::InvalidValue { field: "parallelism", value: rho });
    }
    let bounds = occupation_duration_bounds(task_quantities, task_times)?;
    Ok((1.0 - rho) * bounds.upper + rho * bounds.lower)
}

/// One occupation type: its task composition over the global task list, and
/// how many positions of it the firm staffs.
#[derive(Debug, Clone, PartialEq)]
pub struct Occupation {
    pub task_counts: Vec<f64>,
    pub count: u32,
}

/// A staffing plan: occupation types over a shared task-time table, plus the
/// firm's parallel-management capability `rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulingInstance {
    occupations: Vec<Occupation>,
    task_times: Vec<f64>,
    parallelism: f64,
}

impl SchedulingInstance {
    pub fn new(
        occupations: Vec<Occupation>,
        task_times: Vec<f64>,
        parallelism: f64,
    ) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::Empty { what: "occupation list" });
        }
        if task_times.is_empty() {
            return Err(Error::Empty { what: "task time table" });
        }
        for &w in &task_times {
            if !(w > 0.0) {
                return Err(Error::InvalidValue { field: "task_times", value: w });
            }
        }
        if !(0.0..=1.0).contains(&parallelism) {
            return Err(Error::InvalidValue { field: "parallelism", value: parallelism });
        }
        for occ in &occupations {
            if occ.task_counts.len() != task_times.len() {
                return Err(Error::DimensionMismatch {
                    expected: task_times.len(),
                    actual: occ.task_counts.len(),
                });
            }
            if occ.count == 0 {
                return Err(Error::InvalidValue { field: "count", value: 0.0 });
            }
            let mut any = false;
            for &y in &occ.task_counts {
                if !(y >= 0.0) {
                    return Err(Error::InvalidValue { field: "task_counts", value: y });
                }
                if y > 0.0 {
                    any = true;
                }
            }
            if !any {
                return Err(Error::Empty { what: "occupation (no positive task count)" });
            }
        }
        Ok(Self { occupations, task_times, parallelism })
    }

    pub fn occupations(&self) -> &[Occupation] {
        &self.occupations
    }

    pub fn task_times(&self) -> &[f64] {
        &self.task_times
    }

    pub fn parallelism(&self) -> f64 {
        self.parallelism
    }

    /// Total task count `J = sum_s sum_z y_sz * D_s`; conserved by flattening.
    pub fn total_tasks(&self) -> f64 {
        self.occupations
            .iter()
            .map(|o| o.task_counts.iter().sum::<f64>() * o.count as f64)
            .sum()
    }

    /// Per-task totals across all staffed positions.
    pub fn flatten(&self) -> Vec<f64> {
        let mut totals = alloc::vec![0.0; self.task_times.len()];
        for occ in &self.occupations {
            for (v, &y) in occ.task_counts.iter().enumerate() {
                totals[v] += y * occ.count as f64;
            }
        }
        totals
    }
}

/// Cycle bounds at occupation granularity: each staffed occupation takes
/// `w_k` (its duration at the instance's `rho`) times its position count.
pub fn cycle_bounds_occupation(inst: &SchedulingInstance) -> Result<DurationInterval> {
    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    for occ in inst.occupations() {
        let w = occupation_duration(&occ.task_counts, inst.task_times(), inst.parallelism())?;
        let t = w * occ.count as f64;
        if t > lower {
            lower = t;
        }
        upper += t;
    }
    Ok(DurationInterval { lower, upper })
}

/// Cycle bounds at task granularity: occupations dissolve into global
/// per-task totals first.
pub fn cycle_bounds_task(inst: &SchedulingInstance) -> Result<DurationInterval> {
    let totals = inst.flatten();
    occupation_duration_bounds(&totals, inst.task_times())
}

/// Task-granular cycles are never longer than occupation-granular ones.
///
/// Only defined at `rho = 0`: with serial occupation durations the upper
/// bounds coincide exactly and the occupation critical path dominates the
/// task critical path. Any other `rho` is an inapplicable regime.
pub fn check_cycle_dominance(inst: &SchedulingInstance) -> Result<bool> {
    if inst.parallelism() != 0.0 {
        return Err(Error::InapplicableRegime { parallelism: inst.parallelism() });
    }
    let occupation = cycle_bounds_occupation(inst)?;
    let task = cycle_bounds_task(inst)?;
    let scale = 1.0f64.max(occupation.upper()).max(task.upper());
    let eps = 1e-12 * scale;
    Ok(occupation.upper() >= task.upper() - eps && occupation.lower() >= task.lower() - eps)
}

/// Random matching instance for dominance trials: up to the given numbers of
/// employees, tasks, and skills; nonnegative skills and matrix, mixed-sign
/// values.
pub fn random_matching_instance(
    rng: &mut SimRng,
    max_employees: usize,
    max_tasks: usize,
    max_skills: usize,
) -> MatchingInstance {
    let n = 1 + rng.index(max_employees);
    let q = 1 + rng.index(max_tasks);
    let i = 1 + rng.index(max_skills);
    let employees = (0..n)
        .map(|_| {
            SkillVector::from_labor((0..i).map(|_| rng.uniform(0.0, 2.0)).collect())
                .expect("nonnegative draws")
        })
        .collect();
    let tasks = TaskVector::new((0..q).map(|_| rng.uniform(0.0, 3.0)).collect())
        .expect("nonnegative draws");
    let matrix = MatchingMatrix::random_uniform(i, q, 0.0, 1.0, rng).expect("valid dims");
    let values = TaskValueVector::new((0..q).map(|_| rng.uniform(-1.0, 2.0)).collect())
        .expect("nonempty");
    MatchingInstance::new(employees, tasks, matrix, values).expect("consistent dims")
}

/// Random scheduling instance for cycle trials, always at `rho = 0`.
///
/// Task types are partitioned across occupations (each type belongs to one
/// occupation), matching the per-occupation reading of task completion times.
/// When a type is shared between occupations the critical-path dominance can
/// genuinely fail, so shared-support instances are left to explicit files.
pub fn random_scheduling_instance(
    rng: &mut SimRng,
    max_occupations: usize,
    max_task_types: usize,
    max_count: u32,
) -> SchedulingInstance {
    let n = 1 + rng.index(max_occupations);
    // at least one task type per occupation
    let types = n + rng.index(max_task_types.saturating_sub(n).max(1));
    let task_times: Vec<f64> = (0..types).map(|_| rng.uniform(0.1, 5.0)).collect();

    // deal every type to exactly one occupation, each occupation nonempty
    let mut owner: Vec<usize> = (0..types).map(|v| if v < n { v } else { rng.index(n) }).collect();
    // cheap shuffle so the guaranteed types are not always the first n
    for v in (1..types).rev() {
        let w = rng.index(v + 1);
        owner.swap(v, w);
    }

    let occupations = (0..n)
        .map(|k| {
            let task_counts = (0..types)
                .map(|v| if owner[v] == k { rng.uniform(0.5, 3.0) } else { 0.0 })
                .collect();
            Occupation { task_counts, count: 1 + rng.index(max_count as usize) as u32 }
        })
        .collect();
    SchedulingInstance::new(occupations, task_times, 0.0).expect("valid construction")
}
